"""Variables, sorts, finite sorted posets and upward-closed sets.

Variables are plain non-negative integers rendered as ``x<k>``.  A sort is a
``frozenset`` of variables.  Every labelled value in the package exposes a
``.sort`` attribute, which is how sorts are checked across modules.

Upward-closed sets are stored by their minimal antichain together with the
order they were closed under.  The order object is any value with a
``leq(a, b)`` method; a handful of orders used throughout the package live
at the bottom of this module.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Protocol

Sort = frozenset

_VAR_RE = re.compile(r"^x(\d+)$")


class SortError(ValueError):
    """Raised when values of incompatible sorts are combined."""


class SizeCapExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured size cap."""


def var_name(k: int) -> str:
    return f"x{k}"


def parse_var(name: str) -> int:
    m = _VAR_RE.match(name)
    if not m:
        raise ValueError(f"not a variable name: {name!r}")
    return int(m.group(1))


def is_var_name(name: str) -> bool:
    return bool(_VAR_RE.match(name))


def make_sort(vars_: Iterable[int | str]) -> frozenset:
    return frozenset(parse_var(v) if isinstance(v, str) else int(v) for v in vars_)


def prefix_sort(n: int) -> frozenset:
    """The sort {x0, ..., x_{n-1}}."""
    return frozenset(range(n))


def render_sort(sort: Iterable[int]) -> str:
    return "{" + ",".join(var_name(v) for v in sorted(sort)) + "}"


def sort_of(value: Any) -> frozenset:
    try:
        return value.sort
    except AttributeError as exc:
        raise SortError(f"value without a sort: {value!r}") from exc


def render(value: Any) -> str:
    """Deterministic text form used for printing and for canonical ordering."""
    if isinstance(value, str):
        return value
    return str(value)


def sorted_values(values: Iterable[Any]) -> list:
    return sorted(values, key=lambda v: (len(render(v)), render(v)))


@dataclass(frozen=True)
class Symbol:
    """A letter of an alphabet or an element of a poset carrier."""

    name: str
    sort: frozenset = frozenset()

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Symbol({self.name!r}, {render_sort(self.sort)})"


def letter(name: str, arity: int = 0) -> Symbol:
    """Letter whose sort is the initial segment {x0..x_{arity-1}}."""
    return Symbol(name, prefix_sort(arity))


class Order(Protocol):
    def leq(self, a: Any, b: Any) -> bool: ...


class _Discrete:
    def leq(self, a: Any, b: Any) -> bool:
        return a == b

    def __repr__(self) -> str:
        return "DISCRETE"


DISCRETE = _Discrete()


class SortedPoset:
    """Finite sorted poset with named elements.

    ``order`` pairs ``(a, b)`` mean a <= b; the reflexive-transitive closure
    is taken on construction and antisymmetry is checked.
    """

    def __init__(self, elements: Iterable[Symbol], order: Iterable[tuple[str, str]] = ()):
        self.elements: dict[str, Symbol] = {}
        for e in elements:
            if e.name in self.elements and self.elements[e.name] != e:
                raise ValueError(f"element {e.name!r} declared twice")
            self.elements[e.name] = e
        names = list(self.elements)
        above = {n: {n} for n in names}
        for a, b in order:
            if a not in self.elements or b not in self.elements:
                raise KeyError(f"unknown element in order pair {(a, b)}")
            if self.elements[a].sort != self.elements[b].sort:
                raise SortError(f"order pair {(a, b)} crosses sorts")
            above[a].add(b)
        changed = True
        while changed:
            changed = False
            for a in names:
                extra = set().union(*(above[b] for b in above[a])) - above[a]
                if extra:
                    above[a] |= extra
                    changed = True
        for a in names:
            for b in above[a]:
                if a != b and a in above[b]:
                    raise ValueError(f"order is not antisymmetric on {a!r}, {b!r}")
        self._above = {a: frozenset(bs) for a, bs in above.items()}

    def __getitem__(self, name: str) -> Symbol:
        return self.elements[name]

    def __contains__(self, item: Any) -> bool:
        return isinstance(item, Symbol) and self.elements.get(item.name) == item

    def leq(self, a: Symbol, b: Symbol) -> bool:
        return b.name in self._above[a.name]

    def carrier(self, sort: frozenset) -> list[Symbol]:
        return [e for e in self.elements.values() if e.sort == sort]

    def sorts(self) -> set[frozenset]:
        return {e.sort for e in self.elements.values()}

    def upsets(self, sort: frozenset) -> list["UpSet"]:
        """Every upward-closed subset of one sort (exponential; small posets only)."""
        elems = self.carrier(sort)
        out = []
        for r in range(len(elems) + 1):
            for combo in itertools.combinations(elems, r):
                if all(not self.leq(a, b) for a in combo for b in combo if a != b):
                    out.append(UpSet(frozenset(combo), sort, self))
        return out

    def up(self, a: Symbol) -> set[Symbol]:
        return {self.elements[n] for n in self._above[a.name]}

    @classmethod
    def discrete(cls, elements: Iterable[Symbol]) -> "SortedPoset":
        return cls(elements)

    def order_pairs(self) -> list[tuple[str, str]]:
        return sorted((a, b) for a, bs in self._above.items() for b in bs if a != b)


@dataclass(frozen=True)
class UpSet:
    """Upward-closed set represented by its minimal antichain.

    Equality and hashing use the antichain only.
    """

    mins: frozenset
    sort: frozenset | None = field(default=None, compare=False)
    order: Any = field(default=DISCRETE, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.sort is None and self.mins:
            object.__setattr__(self, "sort", _common_sort(self.mins))

    def contains(self, a: Any) -> bool:
        return any(self.order.leq(m, a) for m in self.mins)

    __contains__ = contains

    def __iter__(self):
        return iter(sorted_values(self.mins))

    def __len__(self) -> int:
        return len(self.mins)

    def is_empty(self) -> bool:
        return not self.mins

    def issubset(self, other: "UpSet") -> bool:
        return all(other.contains(m) for m in self.mins)

    def members(self, universe: Iterable[Any]) -> set:
        return {a for a in universe if self.contains(a)}

    def __str__(self) -> str:
        return "{" + ", ".join(render(m) for m in self) + "}"


def _common_sort(values: Iterable[Any]) -> frozenset | None:
    sorts = {sort_of(v) for v in values} - {None}
    if len(sorts) > 1:
        raise SortError(f"mixed sorts: {sorted(render_sort(s) for s in sorts)}")
    return next(iter(sorts), None)


def minimal(xs: Iterable[Any], order: Order = DISCRETE) -> frozenset:
    xs = set(xs)
    if order is DISCRETE or len(xs) < 2:
        return frozenset(xs)
    if hasattr(order, "shape_key"):
        buckets: dict = {}
        for a in xs:
            buckets.setdefault(order.shape_key(a), []).append(a)
        if not hasattr(order, "components"):
            return frozenset(a for group in buckets.values() for a in group
                             if not any(b != a and order.leq(b, a) for b in group))
        return frozenset().union(*(_pointwise_minimal(group, order) for group in buckets.values()))
    return frozenset(a for a in xs if not any(b != a and order.leq(b, a) for b in xs))


def _pointwise_minimal(group: list, order) -> frozenset:
    """Minimal elements of same-shaped values compared component by component.

    Component vectors go into a trie; a query only descends into branches
    whose component lies below the query's, which prunes almost everything
    when components are mostly incomparable.
    """
    vectors = {a: order.components(a) for a in group}
    trie: dict = {}
    for a, vec in vectors.items():
        node = trie
        for c in vec:
            node = node.setdefault(c, {})
        node[_LEAF] = a
    leq = order.component_leq

    def dominated(node: dict, vec: tuple, depth: int, a: Any) -> bool:
        if depth == len(vec):
            return node[_LEAF] is not a
        return any(c is not _LEAF and (c == vec[depth] or leq(c, vec[depth]))
                   and dominated(child, vec, depth + 1, a) for c, child in node.items())

    return frozenset(a for a, vec in vectors.items() if not dominated(trie, vec, 0, a))


_LEAF = object()


def upclose(xs: Iterable[Any], order: Order = DISCRETE, sort: frozenset | None = None) -> UpSet:
    xs = set(xs)
    s = _common_sort(xs)
    if sort is not None and s is not None and s != sort:
        raise SortError(f"expected sort {render_sort(sort)}, got {render_sort(s)}")
    return UpSet(minimal(xs, order), s if s is not None else sort, order)


def pt(a: Any, order: Order = DISCRETE) -> UpSet:
    if isinstance(order, SortedPoset) and a not in order:
        raise KeyError(f"unknown element {a!r}")
    return UpSet(frozenset([a]), sort_of(a), order)


def upset_image(f: Callable[[Any], Any], up: UpSet, order: Order = DISCRETE) -> UpSet:
    """Upward closure of the image of ``up`` under a monotone map."""
    return upclose((f(m) for m in up.mins), order, up.sort)


def union_flat(family: UpSet) -> UpSet:
    """Union of an upward-closed family of upward-closed sets."""
    members = list(family.mins)
    if not members:
        inner_sort = family.sort
        return UpSet(frozenset(), inner_sort, DISCRETE)
    order = members[0].order
    return upclose(itertools.chain.from_iterable(m.mins for m in members), order,
                   members[0].sort)


class UpSetOrder:
    """I <= J iff I contains J: the reversed inclusion order on upsets."""

    def leq(self, a: UpSet, b: UpSet) -> bool:
        return b.issubset(a)

    def __repr__(self) -> str:
        return "UPSET_ORDER"


UPSET_ORDER = UpSetOrder()
