"""Seeded law suites: corpora plus the identities checked on them.

Each ``*_reports`` function draws its samples from a fresh seeded generator
and returns one ``LawReport`` per (identity, sample).  The CLI, the
experiment scripts and the acceptance tests all call these.
"""
from __future__ import annotations

from typing import Callable

from . import generators as gen
from .core import DISCRETE, UPSET_ORDER, Symbol, prefix_sort, pt, upclose, upset_image
from .distlaw import (GRAPHS, LINEAR, TREES, UPSETS, LawReport, check_dist_law, check_monad_laws,
                      times_witness)
from .renaming import (Renamed, comp, dun, inj, re, re0, renamed, un, un_plus, xmap)
from .selection import product_hat, sel, selection_identity_sides, selection_size, un_labels
from .substitution import apply_inside_out, apply_outside_in, make_substitution, morphism_sides
from .trees import GraphTerm, canonicalize, flat_times, gmap, sing


SEL_BUDGET = 5000


def _sample_sort(r):
    return gen.random_sort(r)


# -- monad laws ---------------------------------------------------------------

def monad_law_reports(name: str, n: int = 200, seed: int = 0) -> list[LawReport]:
    r = gen.rng(seed)
    letters = gen.letters_label()
    if name == "U":
        poset = gen.random_poset(r)
        units, triples = [], []
        for _ in range(n):
            s = prefix_sort(r.randint(0, 2))
            units.append(gen.random_upset(r, poset, s))
            pool = [gen.random_upset_of_upsets(r, poset, s) for _ in range(4)]
            pick = r.sample(pool, r.randint(0, 3))
            triples.append(upclose(pick, UPSET_ORDER, s))
            if r.random() < 0.1:
                poset = gen.random_poset(r)
        return check_monad_laws(UPSETS, units, triples)
    if name == "R":
        make = lambda fn, s, d: gen.random_graph(r, fn, s, d)
        monad = GRAPHS
    elif name == "T":
        make = lambda fn, s, d: gen.random_tree(r, fn, s, d, linear=True)
        monad = LINEAR
    elif name == "Tx":
        make = lambda fn, s, d: canonicalize(gen.random_graph(r, fn, s, d))
        monad = TREES
    else:
        raise ValueError(f"unknown monad {name!r}")
    units, triples = [], []
    inner = lambda rr, s: make(letters, s, 2)
    middle = lambda rr, s: make(inner, s, 2)
    for _ in range(n):
        units.append(make(letters, _sample_sort(r), 3))
        triples.append(make(middle, _sample_sort(r), 2))
    return check_monad_laws(monad, units, triples)


# -- distributive law -----------------------------------------------------------

def dist_samples(name: str, n: int, seed: int, poset=None):
    r = gen.rng(seed)
    poset = poset or gen.random_poset(r)
    linear = name == "T"
    kind = "graph" if name == "R" else "tree"

    def make(fn, s, d):
        if kind == "graph":
            return gen.random_graph(r, fn, s, d)
        t = gen.random_tree(r, fn, s, d, linear=linear)
        return canonicalize(t) if name == "Tx" else t

    ups = gen.upset_label(poset, nonempty=r.random() < 0.8)
    inner = lambda rr, s: make(ups, s, 2)
    samples: dict[str, list] = {"mult": [], "unit": [], "union": [], "pt": []}
    for _ in range(n):
        samples["mult"].append(make(inner, _sample_sort(r), 2))
        samples["unit"].append(gen.random_upset(r, poset, prefix_sort(r.randint(0, 2))))
        samples["union"].append(make(gen.upset_of_upsets_label(poset), _sample_sort(r), 3))
        samples["pt"].append(make(gen.poset_label(poset), _sample_sort(r), 3))
    return poset, samples


def dist_law_reports(name: str, n: int = 200, seed: int = 0) -> list[LawReport]:
    if name == "Tx":
        reports = check_dist_law("Tx", {"mult": [times_witness()]})
        poset, samples = dist_samples("Tx", n, seed)
        samples["mult"] = []
        reports += check_dist_law("Tx", samples, poset)
        return reports
    r = gen.rng(seed)
    reports: list[LawReport] = []
    chunk = 20
    for start in range(0, n, chunk):
        poset, samples = dist_samples(name, min(chunk, n - start), r.getrandbits(32))
        for rep in check_dist_law(name, samples, poset):
            rep.sample_index += start
            reports.append(rep)
    return reports


# -- renaming lemmas ------------------------------------------------------------

def _report(out, name, i, left, right):
    out.append(LawReport(name, i, left == right, left, right))


def unre_reports(n: int = 200, seed: int = 0) -> list[LawReport]:
    r = gen.rng(seed)
    letters = gen.letters_label()
    out: list[LawReport] = []
    for i in range(n):
        t = gen.random_regular(r, letters, _sample_sort(r), 3, cyclic=r.random() < 0.6)
        s = un(t).payload
        _report(out, "unre.a re0.un=id", i, re0(un(t)), t)
        tau = gen.random_surjection(r, t.sort)
        _report(out, "unre.b un.re=comp.X(un)", i, un(re(renamed(tau, t))),
                comp(renamed(tau, un(t))))
        _report(out, "unre.c un.iota=in", i, un(s), inj(s))
        sigma = gen.random_surjection(r, s.sort)
        outer = gen.random_surjection(r, frozenset(sigma.values()))
        nested = renamed(outer, renamed(sigma, s))
        _report(out, "unre.d re0.comp=re.X(re0)", i, re0(comp(nested)),
                re(xmap(re0, nested)))
        labelled = gen.random_regular(r, gen.graph_label(letters, "regular", 2),
                                      _sample_sort(r), 2, cyclic=r.random() < 0.5)
        cs = un(labelled).payload
        rho = renamed(gen.random_surjection(r, cs.sort), cs)
        _report(out, "unre.e flat.re0=re.X(flat.iota)", i, flat_times(re0(rho)),
                re(xmap(flat_times, rho)))
        _report(out, "unre.f re.in=id", i, re(inj(t)), t)
        _report(out, "unre.g un.re0=id", i, un(re0(renamed(sigma, s))), renamed(sigma, s))
    return out


def dun_reports(n: int = 200, seed: int = 0) -> list[LawReport]:
    r = gen.rng(seed)
    letters = gen.letters_label()
    inner = gen.graph_label(letters, "regular", 2)
    out: list[LawReport] = []
    for i in range(n):
        t = gen.random_regular(r, inner, _sample_sort(r), 2, cyclic=r.random() < 0.5)
        d = dun(t)
        _report(out, "dun.a", i, xmap(lambda s: un(flat_times(s)), d),
                xmap(lambda s: inj(flat_times(s)), d))
        _report(out, "dun.b flat.re.dun=flat", i, flat_times(re(d)), flat_times(t))
        _report(out, "dun.c un.flat=X(flat).dun", i, un(flat_times(t)), xmap(flat_times, d))
        plain = gen.random_regular(r, letters, _sample_sort(r), 3, cyclic=r.random() < 0.5)
        _report(out, "dun.d unplus.T(in)=un", i, un_plus(gmap(inj, plain)), un(plain))
        a = gen.renamed_label()(r, _sample_sort(r))
        _report(out, "dun.e unplus.sing=X(sing)", i, un_plus(canonicalize(sing(a))), xmap(sing, a))
    return out


# -- selection -------------------------------------------------------------

def sel_reports(n: int = 100, seed: int = 0) -> list[LawReport]:
    r = gen.rng(seed)
    rn = gen.renamed_label()
    sets = gen.renamed_set_label(max_size=2, max_arity=2)
    inner = lambda rr, s: canonicalize(gen.random_tree(rr, sets, s, 2))
    out: list[LawReport] = []
    for i in range(n):
        t = gen.random_tree(r, rn, _sample_sort(r), 3)
        t = canonicalize(t)
        _report(out, "sel.b sel.T(pt)=pt.unplus", i, sel(gmap(pt, t)), pt(un_plus(t)))
        sort = _sample_sort(r)
        up = gen.random_renamed_set(r, sort)
        _report(out, "sel.c sel.sing=U.X(sing)", i, sel(canonicalize(sing(up))),
                upset_image(lambda a: xmap(sing, a), up))
        while True:
            nested = canonicalize(gen.random_tree(r, inner, _sample_sort(r), 2))
            if selection_size(flat_times(nested), SEL_BUDGET) <= SEL_BUDGET:
                break
        left, right = selection_identity_sides(nested)
        _report(out, "sel.flat", i, left, right)
    return out


def pihat_reports(n: int = 100, seed: int = 0) -> list[LawReport]:
    r = gen.rng(seed)
    letters = gen.letters_label()
    sets = gen.tree_set_label(max_size=3, depth=2)
    inner = lambda rr, s: canonicalize(gen.random_tree(rr, gen.tree_set_label(3, 2), s, 2))
    out: list[LawReport] = []
    for i in range(n):
        sort = _sample_sort(r)
        T = sets(r, prefix_sort(len(sort)))
        _report(out, "pihat.unit", i, product_hat(canonicalize(sing(T))), T)
        while True:
            t = canonicalize(gen.random_tree(r, inner, _sample_sort(r), 2))
            if selection_size(un_labels(flat_times(t)), SEL_BUDGET) <= SEL_BUDGET:
                break
        _report(out, "pihat.assoc", i, product_hat(flat_times(t)),
                product_hat(canonicalize(gmap(product_hat, t))))
        plain_inner = lambda rr, s: canonicalize(gen.random_tree(rr, letters, s, 2))
        u = canonicalize(gen.random_tree(r, plain_inner, _sample_sort(r), 2))
        _report(out, "pihat.pt", i, product_hat(canonicalize(gmap(pt, u))), pt(flat_times(u)))
    return out


# -- substitutions ---------------------------------------------------------

SUBST_LETTERS = {k: Symbol(f"z{k}", prefix_sort(k)) for k in range(3)}


def subst_morphism_reports(n: int = 100, seed: int = 0, inside_out: bool = False) -> list[LawReport]:
    """Compatibility of a substitution with flattening, on random trees of trees of substitution letters."""
    r = gen.rng(seed)
    letters = gen.letters_label()
    zlabel = lambda rr, s: SUBST_LETTERS[len(s)]
    inner = lambda rr, s: canonicalize(gen.random_tree(rr, zlabel, s, 2))
    apply = apply_inside_out if inside_out else apply_outside_in
    out: list[LawReport] = []
    for i in range(n):
        sub = make_substitution({z: [gen.random_tree(r, letters, z.sort, 2) for _ in range(r.randint(1, 2))]
                                 for z in SUBST_LETTERS.values()})
        while True:
            t = canonicalize(gen.random_tree(r, inner, _sample_sort(r), 2))
            if selection_size(un_labels(gmap(lambda s: apply(sub, s), t)), SEL_BUDGET) <= SEL_BUDGET:
                break
        left, right = morphism_sides(apply, sub, t)
        _report(out, "subst.oi" if not inside_out else "subst.io", i, left, right)
    return out


SUITES: dict[str, Callable[..., list[LawReport]]] = {
    "unre": unre_reports,
    "dun": dun_reports,
    "sel": sel_reports,
    "pihat": pihat_reports,
    "subst": subst_morphism_reports,
}
