"""Pomset constructors: singletons, guarded choice, sequential and parallel composition."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import formula as fm
from .formula import Formula
from .lpof import FORK, Label, Lpof, NodeAlloc, test
from .pomset import Pomset, as_lpof


@dataclass(frozen=True)
class Branch:
    """A maximal consistent, non-stuck test history of an LPOF.

    ``nodes`` is the set of nodes reachable under ``formula``: every node
    whose formula it entails.
    """

    formula: Formula
    nodes: frozenset


def singleton(label: Label) -> Pomset:
    return Pomset(Lpof({0: label}))


def stuck(a) -> Formula:
    alpha = as_lpof(a)
    return fm.disj(*(alpha.formulas[x] for x in sorted(alpha.bots())))


def extensible(a) -> frozenset:
    alpha = as_lpof(a)
    s = stuck(alpha)
    return frozenset(x for x in alpha.nodes if not fm.implies(alpha.formulas[x], s))


# -- branches -----------------------------------------------------------------------

def _leaves(alpha: Lpof):
    """Reachable-node sets of all relevant valuations.

    Test variables are assigned in topological order, and only when their own
    node is reachable; an unreachable test cannot influence any formula, since
    every formula mentioning it entails the formula of that test node.
    """
    variables = set()
    for f in alpha.formulas.values():
        variables |= fm.free_vars(f)
    order = [x for x in alpha.topo_order() if x in variables]
    nodes = sorted(alpha.nodes)
    formulas = alpha.formulas
    out = []
    val: dict = {}

    def holds(f):
        return fm.evaluate(f, val)

    def walk(i):
        if i == len(order):
            out.append(frozenset(x for x in nodes if holds(formulas[x])))
            return
        v = order[i]
        if holds(formulas[v]):
            for b in (True, False):
                val[v] = b
                walk(i + 1)
        else:
            val[v] = False
            walk(i + 1)
        del val[v]

    walk(0)
    return out


def _branch_formula(alpha: Lpof, nodes) -> Formula:
    views = [fm.literals(alpha.formulas[x]) for x in nodes]
    if all(v is not None for v in views):
        return fm.from_literals(frozenset().union(*views))
    tops = [x for x in sorted(nodes) if not (alpha.succ_plus(x) & nodes)]
    return fm.conj(*(alpha.formulas[x] for x in tops))


def branches(a, oracle: bool = False) -> list:
    """The branch set, ordered by the node sets that generate it.

    With ``oracle=True`` the maximal subsets are found by enumerating every
    subset of the extensible nodes instead.
    """
    alpha = as_lpof(a)
    if oracle:
        return _branches_by_subsets(alpha)
    bots = alpha.bots()
    leaves = _leaves(alpha)
    live = [r for r in leaves if not (r & bots)]
    dead = [r for r in leaves if r & bots]
    candidates = set()
    for r in live:
        # r's formula admits a stuck valuation exactly when r is inside a stuck leaf's set
        if r and not any(r <= d for d in dead):
            candidates.add(r)
    maximal = [r for r in candidates if not any(r < o for o in candidates)]
    maximal.sort(key=lambda r: sorted(r))
    return [Branch(_branch_formula(alpha, r), r) for r in maximal]


def _branches_by_subsets(alpha: Lpof) -> list:
    ext = sorted(extensible(alpha))
    not_stuck = fm.Not(stuck(alpha))
    good = []
    for k in range(len(ext), 0, -1):
        for subset in combinations(ext, k):
            s = frozenset(subset)
            if any(s < g for g in good):
                continue
            phi = fm.conj(*(alpha.formulas[x] for x in subset))
            if fm.is_sat(phi) and fm.implies(phi, not_stuck):
                good.append(s)
    out = []
    for s in sorted(good, key=sorted):
        phi = fm.conj(*(alpha.formulas[x] for x in sorted(s)))
        reach = frozenset(x for x in alpha.nodes if fm.implies(phi, alpha.formulas[x]))
        out.append(Branch(_branch_formula(alpha, s), reach))
    return out


# -- constructors -------------------------------------------------------------------

def _copy_into(beta: Lpof, alloc: NodeAlloc, labels, formulas, edges, extra: Formula = fm.TRUE):
    """Add a fresh copy of ``beta`` to the given tables; return the renaming."""
    ren = {y: alloc.fresh() for y in sorted(beta.nodes)}
    for y in beta.nodes:
        labels[ren[y]] = beta.labels[y]
        formulas[ren[y]] = fm.conj(extra, fm.rename(beta.formulas[y], ren))
    edges.extend((ren[x], ren[y]) for x, y in beta.covers)
    return ren


def guard(b, a, c) -> Pomset:
    """Test ``b`` at a fresh root; ``a`` runs when it passes, ``c`` when it fails."""
    left, right = as_lpof(a), as_lpof(c)
    alloc = NodeAlloc()
    root = alloc.fresh()
    labels = {root: b if isinstance(b, Label) else test(b)}
    formulas = {root: fm.TRUE}
    edges = []
    for side, pol in ((left, True), (right, False)):
        ren = _copy_into(side, alloc, labels, formulas, edges, fm.lit(root, pol))
        edges.append((root, ren[side.root]))
    return Pomset(Lpof(labels, formulas, edges))


def seq(a, b) -> Pomset:
    """Sequential composition: one copy of ``b`` after each branch of ``a``."""
    alpha, beta = as_lpof(a), as_lpof(b)
    brs = branches(alpha)
    if not brs:
        return a if isinstance(a, Pomset) else Pomset(alpha)
    labels = dict(alpha.labels)
    formulas = dict(alpha.formulas)
    edges = list(alpha.covers)
    alloc = NodeAlloc()
    alloc.avoid(alpha)
    broot = beta.root
    for br in brs:
        ren = _copy_into(beta, alloc, labels, formulas, edges, br.formula)
        tops = [x for x in sorted(br.nodes) if not (alpha.succ(x) & br.nodes)]
        edges.extend((x, ren[broot]) for x in tops)
    return Pomset(Lpof(labels, formulas, edges))


def par(a, b) -> Pomset:
    """Parallel composition under a fresh fork root; fork roots of the operands merge into it."""
    alloc = NodeAlloc()
    root = alloc.fresh()
    labels = {root: FORK}
    formulas = {root: fm.TRUE}
    edges = []
    for side in (as_lpof(a), as_lpof(b)):
        sroot = side.root
        ren = _copy_into(side, alloc, labels, formulas, edges)
        if side.labels[sroot].is_fork:
            new_root = ren[sroot]
            children = [ren[y] for y in side.succ(sroot)]
            del labels[new_root], formulas[new_root]
            edges = [e for e in edges if e[0] != new_root]
            edges.extend((root, y) for y in children)
        else:
            edges.append((root, ren[sroot]))
    return Pomset(Lpof(labels, formulas, edges))
