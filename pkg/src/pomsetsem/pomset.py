"""Pomsets: isomorphism classes of LPOFs, handled through canonical forms.

Canonical numbering uses colour refinement over the order, the labels, and
the "formula of x mentions test node v" relation, then breaks remaining ties
by individualisation, keeping the least certificate.  Automorphisms found on
the way prune the search.
"""

from __future__ import annotations

from typing import Mapping

from . import formula as fm
from .lpof import BOT, Lpof, label_le, require_valid, truncate


# -- colour refinement ----------------------------------------------------------

def _mentions(alpha: Lpof):
    """For each node, the sorted (sign, variable) pairs of its formula.

    ``sign`` is 1 when the formula forces the variable true, -1 when it
    forces it false, and 0 otherwise.
    """
    out = {}
    back = {x: [] for x in alpha.nodes}
    for x in alpha.nodes:
        f = alpha.formulas[x]
        view = fm.literals(f)
        pairs = []
        for v in fm.free_vars(f):
            if view is not None:
                sign = 1 if (v, True) in view else -1
            elif fm.implies(f, fm.Var(v)):
                sign = 1
            elif fm.implies(f, fm.Not(fm.Var(v))):
                sign = -1
            else:
                sign = 0
            pairs.append((sign, v))
            back[v].append((sign, x))
        out[x] = pairs
    return out, back


def _rank(sigs: Mapping) -> dict:
    order = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
    return {x: order[s] for x, s in sigs.items()}


class _Refiner:
    def __init__(self, alpha: Lpof):
        self.alpha = alpha
        self.nodes = sorted(alpha.nodes)
        self.fwd, self.back = _mentions(alpha)
        init = {}
        for x in self.nodes:
            f = alpha.formulas[x]
            k = len(fm.free_vars(f))
            models = 1 if k == 0 else bin(fm.truth_table(f, sorted(fm.free_vars(f)))).count("1")
            init[x] = (
                alpha.level(x),
                alpha.labels[x].key(),
                len(alpha.pred(x)),
                len(alpha.succ(x)),
                k,
                models,
                len(self.back[x]),
            )
        self.initial = self.refine(_rank(init))

    def refine(self, colour: dict) -> dict:
        a = self.alpha
        ncls = len(set(colour.values()))
        while True:
            sigs = {}
            for x in self.nodes:
                sigs[x] = (
                    colour[x],
                    tuple(sorted(colour[p] for p in a.pred(x))),
                    tuple(sorted(colour[s] for s in a.succ(x))),
                    tuple(sorted((sg, colour[v]) for sg, v in self.fwd[x])),
                    tuple(sorted((sg, colour[y]) for sg, y in self.back[x])),
                )
            new = _rank(sigs)
            n = len(set(new.values()))
            if n == ncls:
                return new
            colour, ncls = new, n

    def individualise(self, colour: dict, x) -> dict:
        return self.refine(_rank({y: (c, 0 if y == x else 1) for y, c in colour.items()}))

    def certificate(self, colour: dict) -> tuple:
        a = self.alpha
        index = colour  # discrete: colours are 0..n-1
        inv = sorted(self.nodes, key=index.__getitem__)
        labels = tuple(a.labels[x].key() for x in inv)
        covers = tuple(sorted((index[x], index[y]) for x, y in a.covers))
        forms = tuple(fm.semantic_key(a.formulas[x], index) for x in inv)
        return (len(inv), labels, covers, forms)


def _orbits(perms, domain):
    parent = {x: x for x in domain}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in perms:
        for x in domain:
            y = g.get(x, x)
            if y in parent:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
    return find


def _canonical_colouring(alpha: Lpof):
    """Return (certificate, discrete colouring) with the least certificate."""
    ref = _Refiner(alpha)
    best = [None, None]
    autos = []

    def search(colour, prefix):
        cells = {}
        for x, c in colour.items():
            cells.setdefault(c, []).append(x)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = sorted(cells[c])
                break
        if target is None:
            cert = ref.certificate(colour)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, colour
            elif cert == best[0]:
                # same certificate: the two numberings differ by an automorphism
                inv = {i: x for x, i in best[1].items()}
                autos.append({x: inv[colour[x]] for x in colour})
            return
        tried = []
        for x in target:
            stab = [g for g in autos if all(g.get(p, p) == p for p in prefix)]
            if stab and tried:
                find = _orbits(stab, target)
                if any(find(x) == find(t) for t in tried):
                    continue
            tried.append(x)
            search(ref.individualise(colour, x), prefix + (x,))

    search(ref.initial, ())
    return best[0], best[1]


def canonicalize(alpha: Lpof, check: bool = True) -> Lpof:
    """Relabel nodes to 0..n-1 deterministically, with normalised formulae."""
    if check:
        require_valid(alpha)
    return _canonical(alpha)[1]


def _canonical(alpha: Lpof):
    cert, colour = _canonical_colouring(alpha)
    labels = {colour[x]: alpha.labels[x] for x in alpha.nodes}
    formulas = {colour[x]: fm.from_key(key) for x, key in zip(sorted(alpha.nodes, key=colour.__getitem__), cert[3])}
    edges = [(colour[x], colour[y]) for x, y in alpha.covers]
    return cert, Lpof(labels, formulas, edges), colour


def certificate(alpha: Lpof) -> tuple:
    return _canonical_colouring(alpha)[0]


def isomorphic(alpha: Lpof, beta: Lpof):
    """A node bijection witnessing ``alpha ≡ beta``, or ``None``."""
    if len(alpha.nodes) != len(beta.nodes):
        return None
    ca, cola = _canonical_colouring(alpha)
    cb, colb = _canonical_colouring(beta)
    if ca != cb:
        return None
    inv_b = {i: y for y, i in colb.items()}
    return {x: inv_b[cola[x]] for x in alpha.nodes}


# -- pomsets ----------------------------------------------------------------------

class Pomset:
    """An isomorphism class, represented by any member LPOF.

    Equality and hashing go through the canonical certificate, which is
    computed on first use.
    """

    __slots__ = ("lpof", "_cert", "_canon")

    def __init__(self, lpof: Lpof):
        self.lpof = lpof
        self._cert = None
        self._canon = None

    def _ensure(self):
        if self._cert is None:
            self._cert, self._canon, _ = _canonical(self.lpof)

    @property
    def cert(self) -> tuple:
        self._ensure()
        return self._cert

    @property
    def repr(self) -> Lpof:
        """The canonical representative."""
        self._ensure()
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, Pomset):
            return NotImplemented
        if self.lpof is other.lpof:
            return True
        return self.cert == other.cert

    def __hash__(self):
        return hash(self.cert)

    def __lt__(self, other):
        return self.cert < other.cert

    def __len__(self):
        return len(self.lpof.nodes)

    def __repr__(self):
        return "Pomset(%r)" % (self.repr,)

    def to_json(self) -> dict:
        return self.repr.to_json()

    def to_dot(self, name: str = "pomset") -> str:
        return self.repr.to_dot(name)


BOTTOM = Pomset(Lpof({0: BOT}))


def as_lpof(a) -> Lpof:
    return a.lpof if isinstance(a, Pomset) else a


# -- the pomset order ---------------------------------------------------------------

def _embeddings(alpha: Lpof, beta: Lpof):
    """Yield maps f with rename(alpha, f) ⊑ beta, except the successor clause."""
    order = sorted(alpha.nodes, key=lambda x: (alpha.level(x), x))
    f: dict = {}
    used: set = set()

    def candidates(x):
        preds = alpha.pred(x)
        if not preds:
            return beta.minimal()
        want = frozenset(f[p] for p in preds)
        some = f[next(iter(preds))]
        return sorted(y for y in beta.succ(some) if beta.pred(y) == want)

    def extend(i):
        if i == len(order):
            yield dict(f)
            return
        x = order[i]
        lab = alpha.labels[x]
        phi = fm.rename(alpha.formulas[x], f)
        for y in candidates(x):
            if y in used or beta.level(y) != alpha.level(x):
                continue
            if not label_le(lab, beta.labels[y]):
                continue
            if not fm.equiv(phi, beta.formulas[y]):
                continue
            f[x] = y
            used.add(y)
            yield from extend(i + 1)
            used.discard(y)
            del f[x]

    yield from extend(0)


def le_lpof_upto_iso(alpha: Lpof, beta: Lpof):
    """An embedding witnessing some renaming of ``alpha`` below ``beta``, else ``None``."""
    if len(alpha.nodes) > len(beta.nodes):
        return None
    bots = alpha.bots()
    for f in _embeddings(alpha, beta):
        cut = beta.succ_plus_set(f[b] for b in bots)
        if all(frozenset(f[s] for s in alpha.succ(x)) == beta.succ(f[x]) - cut for x in alpha.nodes):
            return f
    return None


def le_pom(a, b) -> bool:
    return le_lpof_upto_iso(as_lpof(a), as_lpof(b)) is not None


def approximate(a, n: int) -> Pomset:
    return Pomset(truncate(as_lpof(a), n))
