"""Command-line interface: ``treelaw laws|demo-kappa|dist|pihat|subst|auto|regex``.

Exit codes: 0 success, 1 a property was falsified or a verdict is negative,
2 bad usage or bad input.
"""
from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Callable

import click

from . import jsonio
from .automata import find_witness, membership
from .config import RunConfig, size_cap
from .core import DISCRETE, SizeCapExceeded, SortError, SortedPoset, letter, prefix_sort, pt, render, sorted_values, upclose
from .distlaw import LawReport, dist
from .regex import compile_regex, dag_size, from_automaton, pretty, tree_size
from .selection import kappa_witness, product_hat
from .substitution import apply_inside_out, apply_outside_in, render_substitution, solve_matching
from .suites import SUITES, dist_law_reports, monad_law_reports
from .trees import GraphTerm, canonicalize, parse_raw, raw_to_graph, tree_text

USAGE_ERRORS = (jsonio.InputError, SortError, SizeCapExceeded, ValueError, KeyError)


class Failed(Exception):
    """Signals exit code 1 after output has been written."""


def _run(body: Callable[[], Any]) -> None:
    try:
        body()
    except Failed:
        sys.exit(1)
    except click.ClickException:
        raise
    except USAGE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _emit(data: Any, as_json: bool, text: str | None = None, output: Path | None = None) -> None:
    out = jsonio.dumps(data) if as_json or text is None else text
    if output is not None:
        output.write_text(out + "\n")
    else:
        click.echo(out)


def _trees(values) -> list[str]:
    return [tree_text(t) for t in sorted_values(values)]


def _config(seed: int, samples: int, as_json: bool, output: Path | None = None) -> RunConfig:
    try:
        return RunConfig(seed=seed, samples=samples, size_cap=size_cap(), output=output,
                         fmt="json" if as_json else "text")
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _read_tree(arg: str) -> GraphTerm:
    """A tree from a JSON file, or the argument itself read as a term."""
    path = Path(arg)
    if path.exists():
        return jsonio.with_context(path, jsonio.tree_from_json, jsonio.load(path))
    return jsonio.with_context("<term>", jsonio.tree_from_json, arg)


json_flag = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
output_opt = click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path),
                          help="Write the result to a file.")


@click.group()
@click.version_option(package_name="treelaw")
def main() -> None:
    """Tree monads, distributive laws, substitutions and regular tree languages."""


# -- laws ---------------------------------------------------------------------

@main.command()
@click.option("--monad", type=click.Choice(["R", "T", "Tx", "U"]), help="Monad and distributive-law axioms.")
@click.option("--suite", type=click.Choice(sorted(SUITES)), help="A named identity suite instead.")
@click.option("--samples", default=200, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@json_flag
def laws(monad: str | None, suite: str | None, samples: int, seed: int, as_json: bool) -> None:
    """Check monad laws, distributive-law axioms or an identity suite on seeded samples."""
    if (monad is None) == (suite is None):
        raise click.UsageError("give exactly one of --monad or --suite")
    cfg = _config(seed, samples, as_json)

    def body():
        if monad is not None:
            reports = monad_law_reports(monad, cfg.samples, cfg.seed)
            if monad != "U":
                reports += dist_law_reports(monad, cfg.samples, cfg.seed)
        else:
            reports = SUITES[suite](cfg.samples, cfg.seed)
        _print_reports(reports, as_json)
        if not all(r.passed for r in reports):
            raise Failed

    _run(body)


def _print_reports(reports: list[LawReport], as_json: bool) -> None:
    if as_json:
        for r in reports:
            click.echo(r.to_json())
        return
    total, passed = Counter(), Counter()
    for r in reports:
        total[r.axiom] += 1
        passed[r.axiom] += r.passed
    for axiom in total:
        click.echo(f"{axiom}: {passed[axiom]}/{total[axiom]} pass")
    failures = [r for r in reports if not r.passed]
    for r in failures[:5]:
        click.echo(f"FAIL {r.axiom} #{r.sample_index}\n  left:  {render(r.left)}\n  right: {render(r.right)}")
    if len(failures) > 5:
        click.echo(f"... {len(failures) - 5} more failures")


# -- demo-kappa ---------------------------------------------------------------

@main.command("demo-kappa")
@json_flag
def demo_kappa(as_json: bool) -> None:
    """Both sides of associativity for the naive product on the two-level witness; exits 1 if they differ."""

    def body():
        left, right = kappa_witness()
        data = {"left": _trees(left.mins), "right": _trees(right.mins), "equal": left == right}
        text = (f"kappa.kappa       = {{{', '.join(data['left'])}}}  ({len(data['left'])} trees)\n"
                f"kappa.UTx(kappa)  = {{{', '.join(data['right'])}}}  ({len(data['right'])} trees)\n"
                f"equal: {str(data['equal']).lower()}")
        _emit(data, as_json, text)
        if left != right:
            raise Failed

    _run(body)


# -- dist and pihat -------------------------------------------------------------

def _dist_label(poset: SortedPoset | None):
    def label(head, nargs: int):
        sort = prefix_sort(nargs)
        if isinstance(head, list):
            names = [item.head for item in head]
            if poset is None:
                return upclose([letter(n, 0 if not sort else nargs) for n in names], DISCRETE, sort)
            return upclose([poset[n] for n in names], poset, sort)
        if poset is not None and head in poset:
            return pt(poset[head], poset)
        return pt(letter(head, nargs))

    return label


def _set_of_trees_label(head, nargs: int):
    sort = prefix_sort(nargs)
    if not isinstance(head, list):
        return upclose([canonicalize(raw_to_graph(parse_raw(head), _plain))], DISCRETE, sort)
    return upclose([canonicalize(raw_to_graph(item, _plain)) for item in head], DISCRETE, sort)


def _plain(head, nargs: int):
    if isinstance(head, list):
        raise ValueError("nested label sets are not supported here")
    return letter(head, nargs)


@main.command("dist")
@click.argument("problem", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
def dist_cmd(problem: Path, as_json: bool) -> None:
    """Distribute a tree of label sets: PROBLEM has "tree" and an optional "poset"."""

    def body():
        data = jsonio.load(problem)
        poset = jsonio.with_context(problem, jsonio.poset_from_json, data["poset"]) if "poset" in data else None
        t = jsonio.with_context(problem, lambda: raw_to_graph(parse_raw(data["tree"]), _dist_label(poset)))
        res = dist(t)
        mins = _trees(res.mins)
        _emit({"mins": mins}, as_json, "\n".join(mins) if mins else "(empty)")

    _run(body)


@main.command("pihat")
@click.argument("problem", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
def pihat_cmd(problem: Path, as_json: bool) -> None:
    """Product of a tree of sets of trees: PROBLEM has "tree", e.g. "{a(x0,x0),b(x0,x0)}({c,d})"."""

    def body():
        data = jsonio.load(problem)
        t = jsonio.with_context(problem, lambda: canonicalize(raw_to_graph(parse_raw(data["tree"]),
                                                                           _set_of_trees_label)))
        res = product_hat(t)
        trees = _trees(res.mins)
        _emit({"trees": trees}, as_json, "\n".join(trees) if trees else "(empty)")

    _run(body)


# -- substitutions ------------------------------------------------------------

@main.group()
def subst() -> None:
    """Inside-out and outside-in substitution, and the matching solver."""


def _subst_apply(mode: str, problem: Path, as_json: bool) -> None:
    def body():
        sub, trees = jsonio.with_context(problem, jsonio.substitution_problem_from_json, jsonio.load(problem))
        apply = apply_inside_out if mode == "io" else apply_outside_in
        images = [_trees(apply(sub, t).mins) for t in trees]
        result = images[0] if len(images) == 1 else images
        text = "\n\n".join("\n".join(img) if img else "(empty)" for img in images)
        _emit({"mode": mode, "images": result}, as_json, text)

    _run(body)


@subst.command("io")
@click.argument("problem", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
def subst_io(problem: Path, as_json: bool) -> None:
    """Inside-out image: one choice per vertex before duplication."""
    _subst_apply("io", problem, as_json)


@subst.command("oi")
@click.argument("problem", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
def subst_oi(problem: Path, as_json: bool) -> None:
    """Outside-in image: independent choices per copy."""
    _subst_apply("oi", problem, as_json)


@subst.command("solve")
@click.argument("problem", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
@output_opt
def subst_solve(problem: Path, as_json: bool, output: Path | None) -> None:
    """All maximal substitutions whose inside-out image of the language is accepted."""

    def body():
        L, alg, sigma, tau = jsonio.with_context(problem, jsonio.matching_problem_from_json,
                                                 jsonio.load(problem))
        sols = [render_substitution(s) for s in solve_matching(L, alg, sigma, tau)]
        text = "\n".join(json.dumps(s, ensure_ascii=False, sort_keys=True) for s in sols) or "(no solutions)"
        _emit(sols, as_json or output is not None, text, output)

    _run(body)


# -- automata ---------------------------------------------------------------

def _load_automaton(path: Path):
    return jsonio.with_context(path, jsonio.automaton_from_json, jsonio.load(path))


def _verdict(value: bool, exit_verdict: bool, as_json: bool, extra: dict | None = None) -> None:
    data = {"verdict": value, **(extra or {})}
    _emit(data, as_json, str(value).lower() if not extra else
          "\n".join([str(value).lower()] + [f"{k}: {v}" for k, v in extra.items()]))
    if exit_verdict and not value:
        raise Failed


exit_verdict_flag = click.option("--exit-verdict", is_flag=True,
                                 help="Exit with status 1 when the verdict is false.")


@main.group()
def auto() -> None:
    """Parity tree automata: membership and emptiness."""


@auto.command("member")
@click.argument("automaton", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("tree")
@exit_verdict_flag
@json_flag
def auto_member(automaton: Path, tree: str, exit_verdict: bool, as_json: bool) -> None:
    """Does AUTOMATON accept TREE (a JSON file or a term)?"""
    _run(lambda: _verdict(membership(_load_automaton(automaton), _read_tree(tree)), exit_verdict, as_json))


@auto.command("empty")
@click.argument("automaton", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@exit_verdict_flag
@json_flag
def auto_empty(automaton: Path, exit_verdict: bool, as_json: bool) -> None:
    """Is the language of AUTOMATON empty?  Prints an accepted tree otherwise."""

    def body():
        w = find_witness(_load_automaton(automaton))
        _verdict(w is None, exit_verdict, as_json, None if w is None else {"witness": tree_text(w)})

    _run(body)


# -- regular expressions --------------------------------------------------------

def _load_regex(path: Path):
    return jsonio.with_context(path, jsonio.regex_load, jsonio.load(path))


@main.group()
def regex() -> None:
    """Regular expressions for regular trees."""


@regex.command("compile")
@click.argument("expression", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@output_opt
def regex_compile(expression: Path, output: Path | None) -> None:
    """Compile EXPRESSION to a parity automaton (JSON)."""

    def body():
        aut = compile_regex(_load_regex(expression))
        _emit(jsonio.automaton_to_json(aut), True, output=output)
        click.echo(json.dumps({"size": aut.size()}), err=output is None)

    _run(body)


@regex.command("member")
@click.argument("expression", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("tree")
@exit_verdict_flag
@json_flag
def regex_member(expression: Path, tree: str, exit_verdict: bool, as_json: bool) -> None:
    """Is TREE (a JSON file or a term) in the language of EXPRESSION?"""

    def body():
        aut = compile_regex(_load_regex(expression))
        _verdict(membership(aut, _read_tree(tree)), exit_verdict, as_json)

    _run(body)


@regex.command("from-automaton")
@click.argument("automaton", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@output_opt
@click.option("--pretty", "show", is_flag=True, help="Also print the expression in operator notation.")
def regex_from_automaton(automaton: Path, output: Path | None, show: bool) -> None:
    """Translate AUTOMATON into an equivalent regular expression."""

    def body():
        r = from_automaton(_load_automaton(automaton))
        stats = {"dagNodes": dag_size(r), "treeNodes": tree_size(r),
                 "compiledStates": len(compile_regex(r).states)}
        doc = jsonio.regex_dump(r)
        if output is not None:
            output.write_text(jsonio.dumps(doc) + "\n")
            click.echo(jsonio.dumps({"output": str(output), "stats": stats}))
        else:
            click.echo(jsonio.dumps({"regex": doc, "stats": stats}))
        if show:
            click.echo(pretty(r))

    _run(body)


@regex.command("empty")
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@exit_verdict_flag
@json_flag
def regex_empty(source: Path, exit_verdict: bool, as_json: bool) -> None:
    """Is the language of SOURCE empty?  SOURCE is an expression or an automaton file."""

    def body():
        data = jsonio.load(source)
        if isinstance(data, dict) and "states" in data:
            aut = jsonio.with_context(source, jsonio.automaton_from_json, data)
        else:
            aut = compile_regex(jsonio.with_context(source, jsonio.regex_load, data))
        w = find_witness(aut)
        _verdict(w is None, exit_verdict, as_json, None if w is None else {"witness": tree_text(w)})

    _run(body)


if __name__ == "__main__":
    main()
