"""Rooted labelled graphs and the tree monads built on them.

A ``GraphTerm`` is stored in normal form: vertex 0 is the root and vertices
are numbered breadth first, visiting out-edges in variable-index order.  Two
graphs are therefore equal exactly when they are isomorphic, which is the
equality used for finite graphs and finite trees.  Regular (possibly
infinite) trees are graphs read up to unravelling; ``canonicalize`` picks the
minimal bisimulation quotient as the representative, so equality of
canonical forms is equality of unravellings.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping

from .core import SizeCapExceeded, SortError, Symbol, letter, render, render_sort, sort_of, var_name


@dataclass(frozen=True, order=True)
class Var:
    """Label of a variable vertex."""

    index: int

    @property
    def sort(self) -> frozenset:
        return frozenset()

    def __str__(self) -> str:
        return var_name(self.index)


CUT = Symbol("⊥")


class GraphTerm:
    __slots__ = ("labels", "succ", "_hash", "_sort", "_str")

    def __init__(self, labels: tuple, succ: tuple):
        # trusted constructor: callers pass normal-form data
        self.labels = labels
        self.succ = succ
        self._hash = hash((labels, succ))
        self._sort = None
        self._str = None

    # -- construction -------------------------------------------------
    @classmethod
    def build(cls, root: Hashable, labels: Mapping[Hashable, Any],
              succ: Mapping[Hashable, Mapping[int, Hashable]]) -> "GraphTerm":
        """Validate, drop unreachable vertices and normalize."""
        if isinstance(labels[root], Var):
            raise ValueError("root must not be a variable")
        order = [root]
        index = {root: 0}
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            lab = labels[v]
            out = succ.get(v, {})
            if isinstance(lab, Var):
                if out:
                    raise ValueError(f"variable vertex {v!r} has out-edges")
                continue
            if frozenset(out) != sort_of(lab):
                raise SortError(
                    f"vertex {v!r}: label {render(lab)} has sort {render_sort(sort_of(lab))} "
                    f"but edges {render_sort(out)}")
            for x in sorted(out):
                u = out[x]
                if u not in index:
                    index[u] = len(order)
                    order.append(u)
        new_labels = tuple(labels[v] for v in order)
        new_succ = tuple(
            tuple((x, index[u]) for x, u in sorted(succ.get(v, {}).items())) for v in order)
        return cls(new_labels, new_succ)

    # -- basic structure ----------------------------------------------
    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GraphTerm) and self._hash == other._hash
                and self.labels == other.labels and self.succ == other.succ)

    def __hash__(self) -> int:
        return self._hash

    @property
    def root(self) -> int:
        return 0

    @property
    def sort(self) -> frozenset:
        if self._sort is None:
            self._sort = frozenset(l.index for l in self.labels if isinstance(l, Var))
        return self._sort

    def is_var(self, v: int) -> bool:
        return isinstance(self.labels[v], Var)

    def children(self, v: int) -> dict[int, int]:
        return dict(self.succ[v])

    def child(self, v: int, x: int) -> int:
        for y, u in self.succ[v]:
            if y == x:
                return u
        raise KeyError(x)

    def element_vertices(self) -> list[int]:
        return [v for v, l in enumerate(self.labels) if not isinstance(l, Var)]

    def in_degrees(self) -> list[int]:
        deg = [0] * len(self.labels)
        for out in self.succ:
            for _, u in out:
                deg[u] += 1
        return deg

    def is_acyclic(self) -> bool:
        state = [0] * len(self.labels)
        for start in range(len(self.labels)):
            if state[start]:
                continue
            stack = [(start, iter(self.succ[start]))]
            state[start] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[v] = 2
                    stack.pop()
                    continue
                u = nxt[1]
                if state[u] == 1:
                    return False
                if state[u] == 0:
                    state[u] = 1
                    stack.append((u, iter(self.succ[u])))
        return True

    def is_tree(self) -> bool:
        deg = self.in_degrees()
        return deg[0] == 0 and all(d == 1 for d in deg[1:])

    def __str__(self) -> str:
        if self._str is None:
            self._str = to_term(self)
        return self._str

    def __repr__(self) -> str:
        return f"GraphTerm({self})"


def sing(a: Any) -> GraphTerm:
    """The one-letter tree a(x, y, ...) with one leaf per variable of its sort."""
    xs = sorted(sort_of(a))
    labels = {"r": a}
    succ = {"r": {}}
    for x in xs:
        labels[x] = Var(x)
        succ["r"][x] = x
    return GraphTerm.build("r", labels, succ)


def gmap(f: Callable[[Any], Any], g: GraphTerm) -> GraphTerm:
    """Apply a sort-preserving map to every element label."""
    labels = []
    for lab in g.labels:
        if isinstance(lab, Var):
            labels.append(lab)
            continue
        new = f(lab)
        if sort_of(new) != sort_of(lab):
            raise SortError(f"map changed sort of {render(lab)}")
        labels.append(new)
    return GraphTerm(tuple(labels), g.succ)


def relabel_vars(g: GraphTerm, rename: Mapping[int, int]) -> GraphTerm:
    """Rename variable leaves (merging allowed); the shape, hence normal form, is unchanged."""
    labels = tuple(Var(rename[l.index]) if isinstance(l, Var) else l for l in g.labels)
    return GraphTerm(labels, g.succ)


def merge_variables(g: GraphTerm) -> GraphTerm:
    """Identify all vertices carrying the same variable.

    Flattening reroutes every occurrence of a variable to one outer vertex, so
    graphs are only unit-stable once each variable labels a single vertex.
    """
    labels: dict = {}
    succ: dict = {}
    for v, lab in enumerate(g.labels):
        key = ("var", lab.index) if isinstance(lab, Var) else v
        labels[key] = lab
        if not isinstance(lab, Var):
            succ[v] = {x: (("var", g.labels[u].index) if g.is_var(u) else u) for x, u in g.succ[v]}
    return GraphTerm.build(0, labels, succ)


def flat(g: GraphTerm) -> GraphTerm:
    """Glue a graph whose labels are graphs into one graph."""

    def entry(v: int):
        return ("v", v) if g.is_var(v) else (v, 0)

    labels: dict = {}
    succ: dict = {}
    for v, h in enumerate(g.labels):
        if isinstance(h, Var):
            labels[("v", v)] = h
            continue
        if not isinstance(h, GraphTerm):
            raise TypeError(f"flat expects graph labels, got {render(h)}")
        outer = dict(g.succ[v])
        for i, lab in enumerate(h.labels):
            if isinstance(lab, Var):
                continue
            labels[(v, i)] = lab
            edges = {}
            for x, j in h.succ[i]:
                inner = h.labels[j]
                edges[x] = entry(outer[inner.index]) if isinstance(inner, Var) else (v, j)
            succ[(v, i)] = edges
    return GraphTerm.build(entry(0), labels, succ)


def canonicalize(g: GraphTerm) -> GraphTerm:
    """Minimal bisimulation quotient in normal form."""
    cls = _dag_classes(g)
    if cls is None:
        cls = _refined_classes(g)
    rep: dict = {}
    for v in range(len(g.labels)):
        rep.setdefault(cls[v], v)
    # breadth-first numbering from the root, children in variable order, as in build()
    order = [cls[0]]
    index = {cls[0]: 0}
    for c in order:
        for _, u in g.succ[rep[c]]:
            if cls[u] not in index:
                index[cls[u]] = len(order)
                order.append(cls[u])
    labels = tuple(g.labels[rep[c]] for c in order)
    succ = tuple(tuple((x, index[cls[u]]) for x, u in g.succ[rep[c]]) for c in order)
    return GraphTerm(labels, succ)


def _dag_classes(g: GraphTerm) -> list[int] | None:
    """Bisimulation classes by hash-consing in post-order; None if ``g`` has a cycle."""
    n = len(g.labels)
    cls: list = [None] * n
    on_stack = [False] * n
    ids: dict = {}
    for start in range(n):
        if cls[start] is not None:
            continue
        stack = [(start, 0)]
        on_stack[start] = True
        while stack:
            v, i = stack[-1]
            out = g.succ[v]
            if i < len(out):
                stack[-1] = (v, i + 1)
                u = out[i][1]
                if cls[u] is None:
                    if on_stack[u]:
                        return None
                    on_stack[u] = True
                    stack.append((u, 0))
                continue
            stack.pop()
            on_stack[v] = False
            cls[v] = ids.setdefault((g.labels[v], tuple(cls[u] for _, u in out)), len(ids))
    return cls


def _refined_classes(g: GraphTerm) -> list[int]:
    n = len(g.labels)
    ids: dict = {}
    cls = [ids.setdefault(lab, len(ids)) for lab in g.labels]
    count = len(ids)
    while True:
        sigs: dict = {}
        new = [sigs.setdefault((cls[v], tuple(cls[u] for _, u in g.succ[v])), len(sigs))
               for v in range(n)]
        if len(sigs) == count:
            return cls
        cls, count = new, len(sigs)


def bisimilar(g: GraphTerm, h: GraphTerm) -> bool:
    return canonicalize(g) == canonicalize(h)


def flat_times(g: GraphTerm) -> GraphTerm:
    return canonicalize(flat(g))


def sing_times(a: Any) -> GraphTerm:
    return canonicalize(sing(a))


def unravel(g: GraphTerm, cap: int | None = None) -> GraphTerm:
    """Finite unravelling of an acyclic graph as a tree."""
    if not g.is_acyclic():
        raise ValueError("cannot unravel a cyclic graph into a finite tree")
    from .config import size_cap

    limit = size_cap() if cap is None else cap
    labels: list = []
    succ: list = []

    def copy(v: int) -> int:
        me = len(labels)
        if me >= limit:
            raise SizeCapExceeded(f"unravelling exceeds {limit} vertices")
        labels.append(g.labels[v])
        succ.append(None)
        succ[me] = {x: copy(u) for x, u in g.succ[v]}
        return me

    copy(0)
    return GraphTerm.build(0, dict(enumerate(labels)), dict(enumerate(succ)))


def unravel_depth(g: GraphTerm, n: int) -> GraphTerm:
    """Depth-``n`` prefix of the unravelling; positions at depth ``n`` become ``CUT``."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    labels: list = []
    succ: list = []

    def copy(v: int, depth: int) -> int:
        me = len(labels)
        if depth == n:
            labels.append(CUT)
            succ.append({})
            return me
        labels.append(g.labels[v])
        succ.append({})
        succ[me] = {x: copy(u, depth + 1) for x, u in g.succ[v]}
        return me

    copy(0, 0)
    return GraphTerm.build(0, dict(enumerate(labels)), dict(enumerate(succ)))


def height(g: GraphTerm) -> int:
    """Number of levels of a finite graph (a single vertex has height 1)."""
    memo: dict[int, int] = {}

    def h(v: int) -> int:
        if v not in memo:
            memo[v] = 1 + max((h(u) for _, u in g.succ[v]), default=0)
        return memo[v]

    if not g.is_acyclic():
        raise ValueError("cyclic graph has no height")
    return h(0)


def same_shape(s: GraphTerm, t: GraphTerm) -> bool:
    if s.succ != t.succ or len(s) != len(t):
        return False
    return all(isinstance(a, Var) == isinstance(b, Var) and (not isinstance(a, Var) or a == b)
               for a, b in zip(s.labels, t.labels))


def lift_relation(theta: Callable[[Any, Any], bool], s: GraphTerm, t: GraphTerm) -> bool:
    return same_shape(s, t) and all(
        theta(a, b) for a, b in zip(s.labels, t.labels) if not isinstance(a, Var))


def is_linear(g: GraphTerm) -> bool:
    if not g.is_tree():
        return False
    seen = [l.index for l in g.labels if isinstance(l, Var)]
    return len(seen) == len(set(seen))


class GraphOrder:
    """Pointwise order on same-shaped graphs, lifted from a label order."""

    def __init__(self, base):
        self.base = base

    def leq(self, s: GraphTerm, t: GraphTerm) -> bool:
        return lift_relation(self.base.leq, s, t)

    def components(self, g: GraphTerm) -> tuple:
        """Labels compared pointwise between graphs of one shape."""
        return tuple(lab for lab in g.labels if not isinstance(lab, Var))

    def component_leq(self, a: Any, b: Any) -> bool:
        return self.base.leq(a, b)

    @staticmethod
    def shape_key(g: GraphTerm) -> Hashable:
        """Graphs with different keys are incomparable."""
        return (g.succ, tuple(lab if isinstance(lab, Var) else None for lab in g.labels))


class TreeOrder:
    """Pointwise order on unravellings, for regular trees kept in canonical form.

    Canonical forms merge equal subtrees, so trees with comparable
    unravellings can have different graphs; the check walks both graphs in
    lockstep instead of comparing vertex by vertex.
    """

    def __init__(self, base):
        self.base = base

    def leq(self, s: GraphTerm, t: GraphTerm) -> bool:
        seen = set()
        stack = [(0, 0)]
        while stack:
            pair = stack.pop()
            if pair in seen:
                continue
            seen.add(pair)
            v, w = pair
            a, b = s.labels[v], t.labels[w]
            if isinstance(a, Var) or isinstance(b, Var):
                if a != b:
                    return False
                continue
            if sort_of(a) != sort_of(b) or not (a == b or self.base.leq(a, b)):
                return False
            stack.extend((u, u2) for (_, u), (_, u2) in zip(s.succ[v], t.succ[w]))
        return True

    @staticmethod
    def shape_key(g: GraphTerm) -> Hashable:
        """Trees with different keys have differently shaped unravellings."""
        return canonicalize(gmap(lambda lab: Symbol("*", sort_of(lab)), g))


# -- term text ----------------------------------------------------------

def to_term(g: GraphTerm) -> str:
    """Render as a term; cycles use ``#k=`` definitions and ``#k`` references."""
    counter = [0]

    def go(v: int, stack: dict) -> str:
        lab = g.labels[v]
        if isinstance(lab, Var):
            return str(lab)
        if v in stack:
            if stack[v] is None:
                stack[v] = counter[0]
                counter[0] += 1
            return f"#{stack[v]}"
        stack[v] = None
        head = render(lab)
        if g.succ[v]:
            body = head + "(" + ",".join(go(u, stack) for _, u in g.succ[v]) + ")"
        else:
            body = head
        mark = stack.pop(v)
        return body if mark is None else f"#{mark}={body}"

    return go(0, {})


_TOKEN = re.compile(r"\s*(?:(#\d+=)|(#\d+)|([^\s(),{}#]+)|([(),{}]))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse term at {text[pos:]!r}")
        out.append(m.group(0).strip())
        pos = m.end()
    return out


@dataclass
class RawNode:
    head: Any            # str name or list of RawNode (a set label)
    args: list
    mark: int | None = None


@dataclass
class RawRef:
    mark: int


def parse_raw(text: str) -> RawNode:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'} but found {tok!r} in {text!r}")
        pos += 1
        return tok

    def term():
        tok = take()
        mark = None
        if tok.startswith("#") and tok.endswith("="):
            mark = int(tok[1:-1])
            tok = take()
        elif tok.startswith("#"):
            return RawRef(int(tok[1:]))
        if tok == "{":
            items = []
            if peek() != "}":
                items.append(term())
                while peek() == ",":
                    take(",")
                    items.append(term())
            take("}")
            head: Any = items
        elif tok in "(),}":
            raise ValueError(f"unexpected {tok!r} in {text!r}")
        else:
            head = tok
        args = []
        if peek() == "(":
            take("(")
            args.append(term())
            while peek() == ",":
                take(",")
                args.append(term())
            take(")")
        return RawNode(head, args, mark)

    node = term()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    if isinstance(node, RawRef):
        raise ValueError("a term cannot be a bare reference")
    return node


def default_label(alphabet: Mapping[str, Any] | None = None):
    def label(head: Any, nargs: int):
        if isinstance(head, list):
            raise ValueError("set labels are not allowed here")
        if alphabet is not None and head in alphabet:
            return alphabet[head]
        return letter(head, nargs)

    return label


def raw_to_graph(raw: RawNode, label_fn: Callable[[Any, int], Any]) -> GraphTerm:
    labels: dict = {}
    succ: dict = {}
    marks: dict = {}
    counter = [0]
    pending: list = []

    def fresh():
        counter[0] += 1
        return counter[0]

    def build(node) -> int:
        if isinstance(node, RawRef):
            v = fresh()
            pending.append((v, node.mark))
            return v
        v = fresh()
        if node.mark is not None:
            marks[node.mark] = v
        if isinstance(node.head, str) and not node.args and re.fullmatch(r"x\d+", node.head):
            labels[v] = Var(int(node.head[1:]))
            return v
        lab = label_fn(node.head, len(node.args))
        xs = sorted(sort_of(lab))
        if len(xs) != len(node.args):
            raise SortError(f"{render(lab)} expects {len(xs)} arguments, got {len(node.args)}")
        labels[v] = lab
        succ[v] = {x: build(a) for x, a in zip(xs, node.args)}
        return v

    root = build(raw)
    alias = {}
    for v, mark in pending:
        if mark not in marks:
            raise ValueError(f"undefined reference #{mark}")
        alias[v] = marks[mark]
    succ = {v: {x: alias.get(u, u) for x, u in out.items()} for v, out in succ.items()}
    return GraphTerm.build(root, labels, succ)


def parse_term(text: str, alphabet: Mapping[str, Any] | None = None,
               label_fn: Callable[[Any, int], Any] | None = None) -> GraphTerm:
    """Parse ``name(args)``, ``name``, ``x<k>`` and ``#k=`` / ``#k`` cycle syntax.

    Letters not found in ``alphabet`` get the initial-segment sort of their arity.
    """
    return raw_to_graph(parse_raw(text), label_fn or default_label(alphabet))


def parse_tree(text: str, alphabet: Mapping[str, Any] | None = None) -> GraphTerm:
    """Parse and canonicalize: the regular tree denoted by the text."""
    return canonicalize(parse_term(text, alphabet))


def tree_text(g: GraphTerm) -> str:
    """Render a regular tree with shared acyclic parts written out in full."""
    return to_term(g)


# -- graph JSON ---------------------------------------------------------

def graph_to_json(g: GraphTerm, encode: Callable[[Any], Any] = render) -> dict:
    vertices = []
    for v, lab in enumerate(g.labels):
        entry: dict = {"id": v}
        entry["label"] = {"var": str(lab)} if isinstance(lab, Var) else {"elem": encode(lab)}
        if g.succ[v]:
            entry["succ"] = {var_name(x): u for x, u in g.succ[v]}
        vertices.append(entry)
    return {"root": 0, "vertices": vertices}


def graph_from_json(data: Mapping, decode: Callable[[Any, frozenset], Any] | None = None) -> GraphTerm:
    labels: dict = {}
    succ: dict = {}
    for vert in data["vertices"]:
        vid = vert["id"]
        out = {int(x[1:]): u for x, u in vert.get("succ", {}).items()}
        lab = vert["label"]
        if "var" in lab:
            labels[vid] = Var(int(lab["var"][1:]))
        else:
            sort = frozenset(out)
            labels[vid] = decode(lab["elem"], sort) if decode else Symbol(lab["elem"], sort)
        succ[vid] = out
    return GraphTerm.build(data["root"], labels, succ)


def leaves_of(g: GraphTerm) -> Iterable[int]:
    return (v for v in range(len(g)) if not g.succ[v])
