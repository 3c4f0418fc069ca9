"""Sizes of the automaton -> expression -> automaton round trip, with agreement on random trees.

    python3 scripts/roundtrip_sizes.py --count 40 --trees 30
"""
import argparse
import time

from treelaw import generators as gen
from treelaw.automata import membership
from treelaw.regex import compile_regex, dag_size, from_automaton


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--trees", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    r = gen.rng(args.seed)
    print("states  priorities  regex-dag  compiled-states  agree  seconds")
    for _ in range(args.count):
        aut = gen.random_automaton(r)
        start = time.perf_counter()
        expr = from_automaton(aut)
        back = compile_regex(expr)
        corpus = [gen.random_regular_over(r, variables=(0,)) for _ in range(args.trees)]
        agree = sum(membership(aut, t) == membership(back, t) for t in corpus)
        print(f"{len(aut.states):>6}  {len(aut.priorities):>10}  {dag_size(expr):>9}  {len(back.states):>15}  "
              f"{agree:>3}/{len(corpus):<3} {time.perf_counter() - start:7.2f}")


if __name__ == "__main__":
    main()
