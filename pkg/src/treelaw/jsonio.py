"""Reading and writing the JSON file formats used by the command line."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .automata import Move, ParityAutomaton
from .core import SortedPoset, Symbol, letter, parse_var, prefix_sort, var_name
from .regex import Regex, from_json as regex_from_json, to_json as regex_to_json
from .substitution import FinitaryAlgebra, Substitution, make_substitution
from .trees import GraphTerm, canonicalize, graph_from_json, graph_to_json, parse_tree, tree_text


class InputError(ValueError):
    """Malformed input file; the message names the file and, when known, the line."""


def load(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.msg}") from exc


def dumps(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=1)


class Located(ValueError):
    """Decoder error that knows which JSON text fragment caused it."""

    def __init__(self, needle: str, message: str) -> None:
        super().__init__(message)
        self.needle = needle


def _at(needle: str, fn, *args):
    try:
        return fn(*args)
    except Located:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise Located(needle, str(exc)) from exc


def _line_of(path: str | Path, needle: str) -> int | None:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError:
        return None
    quoted = json.dumps(needle, ensure_ascii=False)
    for i, line in enumerate(lines, 1):
        if quoted in line:
            return i
    return None


def with_context(path: str | Path, fn, *args):
    """Run a decoder and attach the file name, and the line when known, to any error it raises."""
    try:
        return fn(*args)
    except InputError:
        raise
    except Located as exc:
        line = _line_of(path, exc.needle)
        where = f"{path}:{line}" if line else str(path)
        raise InputError(f"{where}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# -- alphabets and trees ----------------------------------------------------

def alphabet_from_json(data: Mapping[str, Any] | None) -> dict[str, Symbol] | None:
    """``{"a": 2, "f": ["x0", "x2"]}``: an arity or an explicit sort per letter."""
    if not data:
        return None
    out = {}
    for name, spec in data.items():
        if isinstance(spec, int):
            out[name] = letter(name, spec)
        else:
            out[name] = Symbol(name, frozenset(parse_var(x) for x in spec))
    return out


def tree_from_json(data: Any, alphabet: Mapping[str, Symbol] | None = None) -> GraphTerm:
    """A term string, ``{"term": ...}`` or a graph document with ``root`` and ``vertices``."""
    if isinstance(data, str):
        return parse_tree(data, alphabet)
    if "term" in data:
        return parse_tree(data["term"], alphabet_from_json(data.get("alphabet")) or alphabet)
    return canonicalize(graph_from_json(data))


def tree_to_json(t: GraphTerm) -> dict:
    return {"term": tree_text(t), "graph": graph_to_json(t)}


def trees_from_json(data: Any, alphabet=None) -> list[GraphTerm]:
    if isinstance(data, Mapping) and "trees" in data:
        alphabet = alphabet_from_json(data.get("alphabet")) or alphabet
        data = data["trees"]
    return [tree_from_json(d, alphabet) for d in data]


# -- posets -------------------------------------------------------------

def poset_from_json(data: Mapping) -> SortedPoset:
    """``{"elements": {"c": 0, "f": 2}, "order": [["c", "d"]]}``."""
    elems = [Symbol(name, prefix_sort(k) if isinstance(k, int) else frozenset(parse_var(x) for x in k))
             for name, k in data["elements"].items()]
    return SortedPoset(elems, [tuple(p) for p in data.get("order", [])])


# -- automata -------------------------------------------------------------

def automaton_from_json(data: Mapping) -> ParityAutomaton:
    states = tuple(data["states"])
    alphabet = alphabet_from_json(data.get("alphabet")) or {}
    moves, var_moves = [], set()
    for tr in data.get("transitions", []):
        if "var" in tr:
            var_moves.add((tr["state"], parse_var(tr["var"])))
            continue
        kids = tuple(tr.get("children", []))
        sym = alphabet.get(tr["letter"]) or letter(tr["letter"], len(kids))
        moves.append(Move(tr["state"], sym, kids))
    return ParityAutomaton(states, data["initial"], dict(data["priorities"]), tuple(moves),
                           frozenset(var_moves), frozenset(parse_var(x) for x in data.get("inputSort", [])))


def automaton_to_json(aut: ParityAutomaton) -> dict:
    trans = [{"state": str(m.state), "letter": m.letter.name, "children": [str(c) for c in m.children]}
             for m in aut.moves]
    trans += [{"state": str(q), "var": var_name(z)} for q, z in sorted(aut.var_moves, key=str)]
    out = {"states": [str(q) for q in aut.states], "initial": str(aut.initial),
           "priorities": {str(q): aut.priority[q] for q in aut.states},
           "inputSort": [var_name(z) for z in sorted(aut.input_sort)], "transitions": trans}
    odd = {m.letter for m in aut.moves if m.letter.sort != prefix_sort(len(m.letter.sort))}
    if odd:
        out["alphabet"] = {a.name: [var_name(x) for x in sorted(a.sort)] for a in odd}
    return out


# -- regexes -------------------------------------------------------------

def regex_load(data: Mapping) -> Regex:
    return regex_from_json(data)


def regex_dump(r: Regex) -> dict:
    return regex_to_json(r)


# -- substitutions and algebras ------------------------------------------------

def substitution_from_json(data: Mapping[str, Any], alphabet=None) -> Substitution:
    """``{"z1": {"sort": ["x0"], "trees": ["a(x0,x0)"]}, "z0": ["c", "d"]}``.

    A bare list means a nullary substitution letter.
    """
    values = {}
    for name, spec in data.items():
        if isinstance(spec, list):
            sort, trees = frozenset(), spec
        else:
            sort, trees = frozenset(parse_var(x) for x in spec.get("sort", [])), spec["trees"]
        sym = Symbol(name, sort)
        values[sym] = [_at(t if isinstance(t, str) else name, tree_from_json, t, alphabet) for t in trees]
        for t, tree in zip(trees, values[sym]):
            _at(t if isinstance(t, str) else name, make_substitution, {sym: [tree]})
    return make_substitution(values)


def substitution_letters(sub: Substitution) -> dict[str, Symbol]:
    return {x.name: x for x in sub}


def algebra_from_json(data: Mapping) -> FinitaryAlgebra:
    """``{"states": [...], "accepting": [...], "default": "S", "table": [["a", ["C","C"], "D"], ...]}``."""
    table = {}
    for row in data["table"]:
        name, args, target = row
        table[(name, tuple(args))] = target
    return FinitaryAlgebra(tuple(data["states"]), table, frozenset(data["accepting"]),
                           default=data.get("default"))


def substitution_problem_from_json(data: Mapping) -> tuple[Substitution, list[GraphTerm]]:
    """``{"substitution": {...}, "tree": "z1(z0)"}`` or with a ``trees`` list."""
    sub = substitution_from_json(data["substitution"])
    letters = substitution_letters(sub)
    texts = data["trees"] if "trees" in data else [data["tree"]]
    return sub, [_at(t, parse_tree, t, letters) for t in texts]


def matching_problem_from_json(data: Mapping):
    """Language, algebra, lower bound and upper bound of a matching problem."""
    tau = substitution_from_json(data["tau"])
    letters = substitution_letters(tau)
    sigma = substitution_from_json(data.get("sigma", {}))
    for x in tau:
        sigma.setdefault(x, make_substitution({x: []})[x])
    unknown = set(sigma) - set(tau)
    if unknown:
        raise ValueError(f"lower bound mentions letters without an upper bound: {sorted(x.name for x in unknown)}")
    language = [_at(t, parse_tree, t, letters) for t in data["language"]]
    return language, algebra_from_json(data["algebra"]), sigma, tau
