"""Computational domains: the Hoare powerset and the convex powerset of distributions.

Both are additive monads given by ``unit``, ``bind``, ``nd`` (nondeterministic
choice) and ``bottom``, together with a meaning for actions.  Convex values are
finite generator sets; the set they stand for is the convex hull of the
generators, closed upwards under moving probability mass off ⊥.  All
probabilities are exact fractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping

from . import lp
from .terms import Assign, Assume, Flip, Named, State, UninterpretedAction, UnknownVariable


class DimensionMismatch(ValueError):
    """Two domain values range over states with different variables."""


# lifted states: a State, or None for ⊥
def _point_key(p):
    return (0,) if p is None else (1, tuple(p.items()))


def _point_str(p) -> str:
    return "⊥" if p is None else str(p)


# -- distributions --------------------------------------------------------------

class Dist:
    """A finitely supported probability distribution over lifted states."""

    __slots__ = ("_items", "_hash")

    def __init__(self, weights: Mapping):
        items = []
        total = Fraction(0)
        for p, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError("negative probability %s" % w)
            if w:
                items.append((p, w))
                total += w
        if total != 1:
            raise ValueError("probabilities sum to %s, not 1" % total)
        items.sort(key=lambda pw: _point_key(pw[0]))
        self._items = tuple(items)
        self._hash = hash(self._items)

    @staticmethod
    def point(p) -> "Dist":
        return Dist({p: 1})

    def __getitem__(self, p) -> Fraction:
        for q, w in self._items:
            if q == p:
                return w
        return Fraction(0)

    def items(self):
        return self._items

    def support(self) -> list:
        return [p for p, _ in self._items]

    def proper(self):
        return [(p, w) for p, w in self._items if p is not None]

    @property
    def bottom_mass(self) -> Fraction:
        return self[None]

    def key(self) -> tuple:
        return tuple((_point_key(p), w) for p, w in self._items)

    def __eq__(self, other):
        return isinstance(other, Dist) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return "Dist{%s}" % ", ".join("%s: %s" % (_point_str(p), w) for p, w in self._items)

    def to_json(self) -> dict:
        return {_point_str(p): str(w) for p, w in self._items}


def mix(weighted: Iterable) -> Dist:
    """Convex combination of ``(weight, Dist)`` pairs."""
    acc: dict = {}
    for w, d in weighted:
        for p, q in d.items():
            acc[p] = acc.get(p, 0) + w * q
    return Dist(acc)


# -- convex sets --------------------------------------------------------------------

class ConvexSet:
    """Upward-closed convex hull of finitely many distributions."""

    __slots__ = ("gens", "_hash")

    def __init__(self, gens: Iterable[Dist]):
        self.gens = frozenset(gens)
        if not self.gens:
            raise ValueError("a convex set needs at least one generator")
        self._hash = hash(self.gens)

    def sorted_gens(self) -> list:
        return sorted(self.gens, key=Dist.key)

    def __eq__(self, other):
        return isinstance(other, ConvexSet) and self.gens == other.gens

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "ConvexSet[%s]" % ", ".join(map(repr, self.sorted_gens()))

    def to_json(self) -> dict:
        return {"generators": [g.to_json() for g in self.sorted_gens()]}


def _check_dims(points):
    dims = {tuple(p) for p in points if p is not None}
    if len(dims) > 1:
        raise DimensionMismatch("states over different variables: %s" % sorted(dims))


def in_up_hull(g: Dist, gens) -> bool:
    """Is ``g`` above some convex combination of ``gens``?

    Above means: at least as much mass on every proper state.
    """
    gens = list(gens)
    universe = set()
    for t in gens:
        universe.update(p for p, _ in t.proper())
    universe.update(p for p, _ in g.proper())
    _check_dims(universe)
    # states where some generator carries more mass than g
    tight = sorted((s for s in universe if any(t[s] > g[s] for t in gens)), key=_point_key)
    if not tight:
        return True
    if any(all(t[s] <= g[s] for s in tight) for t in gens):
        return True
    if any(min(t[s] for t in gens) > g[s] for s in tight):
        return False
    a_ub = [[t[s] for t in gens] for s in tight]
    b_ub = [g[s] for s in tight]
    return lp.feasible(a_ub, b_ub, [[Fraction(1)] * len(gens)], [Fraction(1)], nvars=len(gens))


def hull_leq(s: ConvexSet, t: ConvexSet) -> bool:
    """Every generator of ``s`` lies in the up-closed hull of ``t``."""
    tg = list(t.gens)
    return all(in_up_hull(g, tg) for g in s.gens)


def hull_equal(s: ConvexSet, t: ConvexSet) -> bool:
    if s.gens == t.gens:
        return True
    return hull_leq(s, t) and hull_leq(t, s)


def minimize(gens: Iterable[Dist]) -> frozenset:
    """Drop generators that the remaining ones already cover."""
    keep = sorted(set(gens), key=Dist.key)
    i = 0
    while i < len(keep):
        rest = keep[:i] + keep[i + 1:]
        if rest and in_up_hull(keep[i], rest):
            keep = rest
        else:
            i += 1
    return frozenset(keep)


# -- action and test meanings ----------------------------------------------------------

def interp_test(b, s: State) -> bool:
    return bool(b.eval(s))


def _assign_target(var: str, s: State):
    if var not in s:
        raise UnknownVariable(var)


# -- the domain instances ---------------------------------------------------------------

class HoareDomain:
    """Sets of reachable final states, ordered by inclusion."""

    name = "hoare"

    def __init__(self, vmax: int = 3):
        if vmax < 1:
            raise ValueError("vmax must be at least 1")
        self.vmax = vmax

    def unit(self, s: State) -> frozenset:
        return frozenset((s,))

    def bottom(self) -> frozenset:
        return frozenset()

    def bind(self, f: Callable, d: frozenset) -> frozenset:
        out = set()
        for s in sorted(d):
            out |= f(s)
        return frozenset(out)

    def nd(self, d1: frozenset, d2: frozenset) -> frozenset:
        return d1 | d2

    def leq(self, d1, d2) -> bool:
        return d1 <= d2

    def equal(self, d1, d2) -> bool:
        return d1 == d2

    def interp_action(self, a, s: State) -> frozenset:
        if isinstance(a, Assign):
            _assign_target(a.var, s)
            return frozenset((s.set(a.var, a.expr.eval(s) % (self.vmax + 1)),))
        if isinstance(a, Flip):
            _assign_target(a.var, s)
            # probabilities erased: every outcome with positive chance
            out = set()
            if a.p > 0:
                out.add(s.set(a.var, 1))
            if a.p < 1:
                out.add(s.set(a.var, 0))
            return frozenset(out)
        if isinstance(a, Assume):
            return frozenset((s,)) if interp_test(a.test, s) else frozenset()
        if isinstance(a, Named):
            raise UninterpretedAction(a.name)
        raise TypeError("not an action: %r" % (a,))

    def to_json(self, d) -> list:
        return [str(s) for s in sorted(d)]


class ConvexDomain:
    """Convex, up-closed sets of distributions over final states or ⊥.

    ``leq`` is the information order: larger values are smaller sets, so the
    bottom element (the point mass on ⊥) is below everything.
    """

    name = "convex"

    def __init__(self, vmax: int = 3, prune: bool = True):
        if vmax < 1:
            raise ValueError("vmax must be at least 1")
        self.vmax = vmax
        self.prune = prune

    def _make(self, gens) -> ConvexSet:
        return ConvexSet(minimize(gens) if self.prune else gens)

    def unit(self, s: State) -> ConvexSet:
        return ConvexSet((Dist.point(s),))

    def bottom(self) -> ConvexSet:
        return ConvexSet((Dist.point(None),))

    def nd(self, d1: ConvexSet, d2: ConvexSet) -> ConvexSet:
        return self._make(d1.gens | d2.gens)

    def bind(self, f: Callable, d: ConvexSet) -> ConvexSet:
        images: dict = {}
        out = []
        for mu in d.sorted_gens():
            # Minkowski sum of the weighted images, one proper state at a time
            partial = [((None, mu.bottom_mass),) if mu.bottom_mass else ()]
            for s, w in mu.proper():
                img = images.get(s)
                if img is None:
                    img = images[s] = f(s).sorted_gens()
                nxt = set()
                for acc in partial:
                    base = dict(acc)
                    for g in img:
                        m = dict(base)
                        for p, q in g.items():
                            m[p] = m.get(p, 0) + w * q
                        nxt.add(tuple(sorted(m.items(), key=lambda pq: _point_key(pq[0]))))
                partial = self._prune_partial(nxt)
            out.extend(Dist(dict(acc)) for acc in partial)
        return self._make(out)

    def _prune_partial(self, sums) -> list:
        sums = sorted(sums, key=lambda acc: [(_point_key(p), q) for p, q in acc])
        if not self.prune or len(sums) <= 1:
            return sums
        # every partial sum carries the same total mass, so compare them as
        # distributions after topping ⊥ up to 1
        total = sum(q for _, q in sums[0])
        lifted = []
        for acc in sums:
            m = dict(acc)
            m[None] = m.get(None, 0) + (1 - total)
            lifted.append(Dist(m))
        keep = minimize(lifted)
        return [acc for acc, d in zip(sums, lifted) if d in keep]

    def leq(self, d1: ConvexSet, d2: ConvexSet) -> bool:
        return hull_leq(d2, d1)

    def equal(self, d1: ConvexSet, d2: ConvexSet) -> bool:
        return hull_equal(d1, d2)

    def interp_action(self, a, s: State) -> ConvexSet:
        if isinstance(a, Assign):
            _assign_target(a.var, s)
            return self.unit(s.set(a.var, a.expr.eval(s) % (self.vmax + 1)))
        if isinstance(a, Flip):
            _assign_target(a.var, s)
            return ConvexSet((Dist({s.set(a.var, 1): a.p, s.set(a.var, 0): 1 - a.p}),))
        if isinstance(a, Assume):
            return self.unit(s) if interp_test(a.test, s) else self.bottom()
        if isinstance(a, Named):
            raise UninterpretedAction(a.name)
        raise TypeError("not an action: %r" % (a,))

    def to_json(self, d: ConvexSet) -> dict:
        return d.to_json()


def make_domain(name: str, vmax: int = 3):
    if name == "hoare":
        return HoareDomain(vmax)
    if name == "convex":
        return ConvexDomain(vmax)
    raise ValueError("unknown domain %r" % name)


def all_states(variables, vmax: int) -> list:
    """Every state over ``variables`` with values in ``[0, vmax]``, in a fixed order."""
    names = sorted(variables)
    return [State(zip(names, vals)) for vals in product(range(vmax + 1), repeat=len(names))]
