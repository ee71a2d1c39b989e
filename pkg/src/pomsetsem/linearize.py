"""From pomsets to state transformers.

``lin_lpof`` schedules ready nodes one at a time, combining the alternatives
with the domain's nondeterministic choice.  ``sequential_semantics`` is the
direct compositional semantics of parallel-free programs, and
``oracle_interleave`` is an operational interpreter over thread pools that
never looks at a pomset; the three are cross-checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from . import formula as fm
from .domains import interp_test
from .formula import Formula
from .lang import Act, If, Par, Seq, Skip, While
from .lpof import Lpof, truncate
from .pomset import as_lpof


class ContainsParallel(ValueError):
    pass


# -- ready nodes -----------------------------------------------------------------

def _entails(path: frozenset, f: Formula) -> bool:
    view = fm.literals(f)
    if view is not None:
        return view <= path
    return fm.implies(fm.from_literals(path), f)


def _ready(alpha: Lpof, path: frozenset, done: frozenset) -> list:
    if not done:
        cands = alpha.minimal()
    else:
        cands = set()
        for x in done:
            cands.update(alpha.succ(x))
        cands = sorted(cands - done)
    return [
        x for x in cands
        if alpha.pred(x) <= done and _entails(path, alpha.formulas[x])
    ]


def next_nodes(a, psi: Formula, done) -> frozenset:
    """Unprocessed nodes whose predecessors are all processed and whose
    formula is entailed by the path condition ``psi``."""
    alpha = as_lpof(a)
    done = frozenset(done)
    return frozenset(
        x for x in alpha.nodes - done
        if alpha.pred_plus(x) <= done and fm.implies(psi, alpha.formulas[x])
    )


# -- linearisation ---------------------------------------------------------------

def lin_lpof(a, psi: Formula = fm.TRUE, done=frozenset(), state=None, dom=None, memo=None):
    """Linearise a finite LPOF from the frontier ``(psi, done)`` at ``state``."""
    alpha = as_lpof(a)
    path = fm.literals(psi)
    if path is None:
        raise ValueError("path condition must be a consistent conjunction of literals")
    if memo is None:
        memo = {}

    def go(path, done, s):
        key = (done, path, s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        ready = _ready(alpha, path, done)
        if not ready:
            out = dom.unit(s)
        else:
            parts = []
            for x in ready:
                lab = alpha.labels[x]
                after = done | {x}
                if lab.is_bot:
                    parts.append(dom.bottom())
                elif lab.is_action:
                    parts.append(dom.bind(lambda s2, after=after: go(path, after, s2), dom.interp_action(lab.term, s)))
                elif lab.is_test:
                    parts.append(go(path | {(x, interp_test(lab.term, s))}, after, s))
                else:
                    parts.append(go(path, after, s))
            out = reduce(dom.nd, parts)
        memo[key] = out
        return out

    return go(path, frozenset(done), state)


def lin(a, n, state, dom):
    """Linearisation of a pomset through its truncation at level ``n``.

    ``n=None`` linearises the given (finite) representative as it is, which
    is the limit of the truncations once ``n`` passes the maximal level.
    """
    alpha = as_lpof(a)
    if n is not None:
        alpha = truncate(alpha, n)
    return lin_lpof(alpha, fm.TRUE, frozenset(), state, dom)


# -- the direct sequential semantics -------------------------------------------------

def sequential_semantics(c, n: int, state, dom, memo=None):
    """Compositional semantics of a parallel-free program; loops run ``n`` iterates
    of their characteristic function from the constant-bottom function."""
    if memo is None:
        memo = {}

    def run(c, s):
        key = (c, s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(c, Skip):
            out = dom.unit(s)
        elif isinstance(c, Act):
            out = dom.interp_action(c.action, s)
        elif isinstance(c, Seq):
            out = dom.bind(lambda s2: run(c.second, s2), run(c.first, s))
        elif isinstance(c, If):
            out = run(c.then if interp_test(c.test, s) else c.orelse, s)
        elif isinstance(c, While):
            out = iterate(c, n, s)
        elif isinstance(c, Par):
            raise ContainsParallel(str(c))
        else:
            raise TypeError("not a command: %r" % (c,))
        memo[key] = out
        return out

    def iterate(c, k, s):
        key = (c, k, s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if k == 0:
            out = dom.bottom()
        elif interp_test(c.test, s):
            out = dom.bind(lambda s2: iterate(c, k - 1, s2), run(c.body, s))
        else:
            out = dom.unit(s)
        memo[key] = out
        return out

    return run(c, state)


def convex_semantics(c, n: int, state, dom=None):
    from .domains import ConvexDomain

    return sequential_semantics(c, n, state, dom or ConvexDomain())


# -- operational oracle ------------------------------------------------------------------

@dataclass(frozen=True)
class _Loop:
    test: object
    body: object
    fuel: int


@dataclass(frozen=True)
class _Then:
    first: object
    rest: object


@dataclass(frozen=True)
class _Both:
    left: object
    right: object


_DONE = None


def oracle_interleave(c, n: int, state, dom, memo=None):
    """Small-step interleaving semantics with fuel-bounded loops.

    Each entry into a loop gets ``n`` units of fuel; one unit pays for one
    evaluation of the loop test, and a loop out of fuel diverges (bottom).
    """
    if memo is None:
        memo = {}

    def norm(p):
        if p is _DONE or isinstance(p, (_Loop, Act, If)):
            return p
        if isinstance(p, Skip):
            return _DONE
        if isinstance(p, While):
            return _Loop(p.test, p.body, n)
        if isinstance(p, Seq):
            return norm(_Then(p.first, p.second))
        if isinstance(p, Par):
            return norm(_Both(p.left, p.right))
        if isinstance(p, _Then):
            first = norm(p.first)
            if first is _DONE:
                return norm(p.rest)
            return _Then(first, p.rest)
        if isinstance(p, _Both):
            left, right = norm(p.left), norm(p.right)
            if left is _DONE:
                return right
            if right is _DONE:
                return left
            return _Both(left, right)
        raise TypeError("not a process: %r" % (p,))

    def redexes(p, s):
        """Yield (kind, payload, continuation) for every enabled step."""
        if isinstance(p, Act):
            yield ("act", p.action, _DONE)
        elif isinstance(p, If):
            yield ("go", None, p.then if interp_test(p.test, s) else p.orelse)
        elif isinstance(p, _Loop):
            if p.fuel == 0:
                yield ("bot", None, None)
            elif interp_test(p.test, s):
                yield ("go", None, _Then(p.body, _Loop(p.test, p.body, p.fuel - 1)))
            else:
                yield ("go", None, _DONE)
        elif isinstance(p, _Then):
            for kind, payload, k in redexes(p.first, s):
                yield kind, payload, (None if kind == "bot" else _Then(k, p.rest))
        elif isinstance(p, _Both):
            for kind, payload, k in redexes(p.left, s):
                yield kind, payload, (None if kind == "bot" else _Both(k, p.right))
            for kind, payload, k in redexes(p.right, s):
                yield kind, payload, (None if kind == "bot" else _Both(p.left, k))
        else:
            raise TypeError("not a process: %r" % (p,))

    def run(p, s):
        key = (p, s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if p is _DONE:
            out = dom.unit(s)
        else:
            parts = []
            for kind, payload, k in redexes(p, s):
                if kind == "bot":
                    parts.append(dom.bottom())
                elif kind == "act":
                    k = norm(k)
                    parts.append(dom.bind(lambda s2, k=k: run(k, s2), dom.interp_action(payload, s)))
                else:
                    parts.append(run(norm(k), s))
            out = reduce(dom.nd, parts)
        memo[key] = out
        return out

    return run(norm(c), state)
