"""Pomset languages: sets of formula-free pomsets, one per resolution of the tests.

Includes the language semantics of programs, the translation from pomsets
with formulae, and the Hoare-domain linearisation of languages used to check
that all three routes from a program to a state transformer agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from . import formula as fm
from . import ops
from .domains import ConvexDomain, ConvexSet, Dist, HoareDomain, hull_equal
from .lang import Act, If, Par, Seq, Skip, While, denote, parse
from .lpof import FORK, Lpof, NodeAlloc, action, truncate
from .linearize import lin, lin_lpof
from .pomset import Pomset, as_lpof
from .terms import Assume, State, TNot


class PreconditionViolated(ValueError):
    pass


class NotABranch(ValueError):
    pass


def seq_flat(a, b) -> Pomset:
    """Sequential composition of a ⊥-free, formula-free pomset: a single copy
    of ``b`` placed after every maximal node of ``a``."""
    alpha, beta = as_lpof(a), as_lpof(b)
    for x in alpha.nodes:
        if alpha.labels[x].is_bot or alpha.formulas[x] != fm.TRUE:
            raise PreconditionViolated("left operand must be ⊥-free with all formulae true")
    alloc = NodeAlloc()
    alloc.avoid(alpha)
    ren = {y: alloc.fresh() for y in sorted(beta.nodes)}
    labels = dict(alpha.labels)
    formulas = dict(alpha.formulas)
    for y in beta.nodes:
        labels[ren[y]] = beta.labels[y]
        formulas[ren[y]] = fm.rename(beta.formulas[y], ren)
    edges = list(alpha.covers) + [(ren[x], ren[y]) for x, y in beta.covers]
    edges.extend((x, ren[beta.root]) for x in alpha.maximal())
    return Pomset(Lpof(labels, formulas, edges))


def _assume(b, positive: bool) -> Pomset:
    return ops.singleton(action(Assume(b if positive else TNot(b))))


def denote_powdom(c, n: int) -> frozenset:
    """Language semantics with every loop unrolled ``n`` times from the empty language."""
    memo: dict = {}
    skip = ops.singleton(FORK)

    def go(c) -> frozenset:
        hit = memo.get(c)
        if hit is not None:
            return hit
        if isinstance(c, Skip):
            out = frozenset((skip,))
        elif isinstance(c, Act):
            out = frozenset((ops.singleton(action(c.action)),))
        elif isinstance(c, Seq):
            out = frozenset(seq_flat(a, b) for a in go(c.first) for b in go(c.second))
        elif isinstance(c, Par):
            out = frozenset(ops.par(a, b) for a in go(c.left) for b in go(c.right))
        elif isinstance(c, If):
            yes, no = _assume(c.test, True), _assume(c.test, False)
            out = frozenset(seq_flat(yes, a) for a in go(c.then)) | frozenset(
                seq_flat(no, b) for b in go(c.orelse)
            )
        elif isinstance(c, While):
            out = frozenset(xi_iterates(c, go(c.body), n)[-1])
        else:
            raise TypeError("not a command: %r" % (c,))
        memo[c] = out
        return out

    return go(c)


def xi_iterates(c, body: frozenset, n: int) -> list:
    """Loop languages from the empty one, ``n + 1`` of them."""
    yes, no = _assume(c.test, True), _assume(c.test, False)
    exit_ = frozenset((seq_flat(no, ops.singleton(FORK)),))
    out = [frozenset()]
    for _ in range(n):
        prev = out[-1]
        step = frozenset(seq_flat(seq_flat(yes, a), b) for a in body for b in prev)
        out.append(step | exit_)
    return out


def tr_lpof(a, psi: fm.Formula, check: bool = True) -> Lpof:
    """The formula-free LPOF of the nodes reachable under ``psi``, with tests
    turned into assumptions of their outcome."""
    alpha = as_lpof(a)
    if check and not any(fm.equiv(psi, br.formula) for br in ops.branches(alpha)):
        raise NotABranch(str(psi))
    keep = [x for x in alpha.nodes if fm.implies(psi, alpha.formulas[x])]
    sub = alpha.restrict(keep)
    labels = {}
    for x in keep:
        lab = alpha.labels[x]
        if lab.is_test:
            if fm.implies(psi, fm.Var(x)):
                labels[x] = action(Assume(lab.term))
            elif fm.implies(psi, fm.Not(fm.Var(x))):
                labels[x] = action(Assume(TNot(lab.term)))
            else:
                raise NotABranch("%s leaves test %s unresolved" % (psi, x))
    return sub.relabel(labels=labels, formulas={x: fm.TRUE for x in keep})


def tr(a, n=None) -> frozenset:
    """Translation of (the level-``n`` truncation of) a pomset to a language."""
    alpha = as_lpof(a)
    if n is not None:
        alpha = truncate(alpha, n)
    return frozenset(Pomset(tr_lpof(alpha, br.formula, check=False)) for br in ops.branches(alpha))


def lin_powdom(lang, state, dom=None) -> frozenset:
    dom = dom or HoareDomain()
    out = set()
    for member in sort_language(lang):
        out |= lin_lpof(as_lpof(member), fm.TRUE, frozenset(), state, dom)
    return frozenset(out)


def sort_language(lang) -> list:
    return sorted(lang, key=lambda p: p.cert)


def language_to_json(lang) -> list:
    return [p.to_json() for p in sort_language(lang)]


def dumps_language(lang) -> str:
    return json.dumps(language_to_json(lang), sort_keys=True)


@dataclass
class DiagramReport:
    program: str
    depth: int
    state: object
    via_pomset: frozenset
    via_translation: frozenset
    via_language: frozenset
    languages_agree: bool
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.via_pomset == self.via_translation == self.via_language and self.languages_agree

    def to_json(self) -> dict:
        def states(d):
            return [str(s) for s in sorted(d)]

        return {
            "program": self.program,
            "depth": self.depth,
            "state": str(self.state),
            "ok": self.ok,
            "lin_of_denote": states(self.via_pomset),
            "lin_powdom_of_tr": states(self.via_translation),
            "lin_powdom_of_denote_powdom": states(self.via_language),
            "tr_equals_denote_powdom": self.languages_agree,
            "notes": self.notes,
        }


def check_diagram(c, n: int, state, vmax: int = 3, pomset=None, language=None) -> DiagramReport:
    """Compute the three routes from ``c`` to final states in the Hoare domain."""
    dom = HoareDomain(vmax)
    pom = pomset if pomset is not None else denote(c, n)
    lang = language if language is not None else denote_powdom(c, n)
    translated = tr(pom)
    a = lin(pom, None, state, dom)
    b = lin_powdom(translated, state, dom)
    c3 = lin_powdom(lang, state, dom)
    report = DiagramReport(str(c), n, state, a, b, c3, translated == lang)
    if a != b:
        report.notes.append("lin∘denote and lin_powdom∘tr differ: %s" % sorted(map(str, a ^ b)))
    if b != c3:
        report.notes.append("lin_powdom∘tr and lin_powdom∘denote_powdom differ: %s" % sorted(map(str, b ^ c3)))
    if not report.languages_agree:
        report.notes.append("tr(denote) has %d members, denote_powdom has %d" % (len(translated), len(lang)))
    return report


# -- the flip-then-race program where languages lose information ------------------

FLIP_RACE = "x ~ flip(1/2); (if x = 1 { y := 0 } else { y := 1 } || y := 2)"


def flip_race_corners(state) -> ConvexSet:
    """The four extreme schedulers: each coin outcome independently lets its
    branch assignment win (weight ½) or lose to ``y := 2``."""
    half = Fraction(1, 2)
    gens = []
    for p in (0, half):
        for q in (0, half):
            gens.append(Dist({
                state.set("x", 1).set("y", 0): p,
                state.set("x", 1).set("y", 2): half - p,
                state.set("x", 0).set("y", 1): q,
                state.set("x", 0).set("y", 2): half - q,
            }))
    return ConvexSet(gens)


@dataclass
class FlipRaceReport:
    unified: ConvexSet
    expected: ConvexSet
    translated: list
    combined: ConvexSet

    @property
    def corners_match(self) -> bool:
        return hull_equal(self.unified, self.expected)

    @property
    def half_bottom(self) -> bool:
        return len(self.translated) == 2 and all(
            g.bottom_mass == Fraction(1, 2) for d in self.translated for g in d.gens
        )

    @property
    def languages_lose(self) -> bool:
        return not hull_equal(self.combined, self.unified)

    @property
    def ok(self) -> bool:
        return self.corners_match and self.half_bottom and self.languages_lose

    def to_json(self) -> dict:
        return {
            "program": FLIP_RACE,
            "lin": self.unified.to_json(),
            "expected_corners": self.expected.to_json(),
            "lin_of_translated": [d.to_json() for d in self.translated],
            "corners_match": self.corners_match,
            "translated_half_bottom": self.half_bottom,
            "language_union_differs": self.languages_lose,
            "ok": self.ok,
        }


def flip_race(state=None, vmax: int = 3) -> FlipRaceReport:
    state = state if state is not None else State({"x": 0, "y": 0})
    dom = ConvexDomain(vmax)
    c = parse(FLIP_RACE)
    pom = denote(c, 1)
    unified = lin(pom, None, state, dom)
    translated = [lin(member, None, state, dom) for member in sort_language(tr(pom))]
    combined = reduce(dom.nd, translated) if translated else dom.bottom()
    return FlipRaceReport(unified, flip_race_corners(state), translated, combined)
