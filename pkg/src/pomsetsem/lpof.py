"""Labelled partial orders with formulae (LPOFs).

An :class:`Lpof` stores its order as the covering relation.  The strict order,
levels, and immediate neighbourhoods are derived once, at construction.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import formula as fm


class InvalidLpof(ValueError):
    pass


class UnknownNode(KeyError):
    pass


class NotAChain(ValueError):
    pass


# -- labels -------------------------------------------------------------------

_KIND_RANK = {"bot": 0, "fork": 1, "test": 2, "action": 3}


@dataclass(frozen=True)
class Label:
    kind: str
    term: object = None

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError("unknown label kind %r" % self.kind)

    @property
    def is_bot(self) -> bool:
        return self.kind == "bot"

    @property
    def is_test(self) -> bool:
        return self.kind == "test"

    @property
    def is_fork(self) -> bool:
        return self.kind == "fork"

    @property
    def is_action(self) -> bool:
        return self.kind == "action"

    def key(self) -> tuple:
        """Total order on labels used for canonical numbering."""
        return (_KIND_RANK[self.kind], type(self.term).__name__, str(self.term) if self.term is not None else "")

    def __str__(self):
        if self.kind == "bot":
            return "⊥"
        if self.kind == "fork":
            return "fork"
        if self.kind == "test":
            return "%s?" % (self.term,)
        return str(self.term)


BOT = Label("bot")
FORK = Label("fork")


def action(term) -> Label:
    return Label("action", term)


def test(term) -> Label:
    return Label("test", term)


test.__test__ = False  # keep pytest from collecting the constructor


def label_le(a: Label, b: Label) -> bool:
    """Flat order with ⊥ at the bottom; actions are ordered by identity."""
    return a.is_bot or a == b


# -- the structure ----------------------------------------------------------------

class Lpof:
    """An immutable finite LPOF.

    ``edges`` may be any relation whose transitive closure is the intended
    strict order; it is reduced to its covering pairs.  Cycles raise
    :class:`InvalidLpof`.  The well-formedness conditions are *not*
    enforced here; see :func:`validate`.
    """

    __slots__ = (
        "nodes", "labels", "formulas", "covers",
        "_succ", "_pred", "_down", "_up", "_topo", "_level", "_hash",
    )

    def __init__(self, labels: Mapping, formulas: Mapping | None = None, edges: Iterable = ()):
        self.labels = dict(labels)
        self.nodes = frozenset(self.labels)
        if formulas is None:
            formulas = {}
        extra = set(formulas) - self.nodes
        if extra:
            raise InvalidLpof("formulas given for unknown nodes %s" % sorted(extra))
        self.formulas = {x: formulas.get(x, fm.TRUE) for x in self.nodes}
        raw_succ = {x: set() for x in self.nodes}
        raw_pred = {x: set() for x in self.nodes}
        for x, y in edges:
            if x not in self.nodes or y not in self.nodes:
                raise InvalidLpof("edge (%r, %r) mentions an unknown node" % (x, y))
            if x == y:
                raise InvalidLpof("reflexive edge on %r" % (x,))
            raw_succ[x].add(y)
            raw_pred[y].add(x)
        # Kahn's algorithm, smallest id first for a deterministic order
        indeg = {x: len(raw_pred[x]) for x in self.nodes}
        ready = sorted(x for x in self.nodes if indeg[x] == 0)
        topo = []
        heapq.heapify(ready)
        while ready:
            x = heapq.heappop(ready)
            topo.append(x)
            for y in raw_succ[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    heapq.heappush(ready, y)
        if len(topo) != len(self.nodes):
            raise InvalidLpof("order relation has a cycle")
        self._topo = tuple(topo)
        down = {}
        for y in topo:
            acc = set()
            for p in raw_pred[y]:
                acc.add(p)
                acc |= down[p]
            down[y] = frozenset(acc)
        pred = {}
        for y in topo:
            ps = raw_pred[y]
            # p covers y unless p lies below another direct predecessor of y
            pred[y] = frozenset(p for p in ps if not any(p in down[q] for q in ps if q != p))
        succ = {x: set() for x in self.nodes}
        for y, ps in pred.items():
            for p in ps:
                succ[p].add(y)
        self._pred = pred
        self._succ = {x: frozenset(s) for x, s in succ.items()}
        self._down = down
        self._up = None
        self.covers = frozenset((p, y) for y, ps in pred.items() for p in ps)
        level = {}
        for y in topo:
            ps = pred[y]
            level[y] = 1 + max(level[p] for p in ps) if ps else 0
        self._level = level
        self._hash = None

    # -- neighbourhoods ---------------------------------------------------------

    def _check(self, x):
        if x not in self.nodes:
            raise UnknownNode(x)

    def pred(self, x) -> frozenset:
        self._check(x)
        return self._pred[x]

    def succ(self, x) -> frozenset:
        self._check(x)
        return self._succ[x]

    def pred_plus(self, x) -> frozenset:
        self._check(x)
        return self._down[x]

    def succ_plus(self, x) -> frozenset:
        self._check(x)
        if self._up is None:
            up = {}
            for x0 in reversed(self._topo):
                acc = set()
                for s in self._succ[x0]:
                    acc.add(s)
                    acc |= up[s]
                up[x0] = frozenset(acc)
            self._up = up
        return self._up[x]

    def succ_plus_set(self, xs: Iterable) -> frozenset:
        out = set()
        for x in xs:
            out |= self.succ_plus(x)
        return frozenset(out)

    def less(self, x, y) -> bool:
        return x in self.pred_plus(y)

    def level(self, x) -> int:
        self._check(x)
        return self._level[x]

    def topo_order(self) -> tuple:
        return self._topo

    def minimal(self) -> list:
        return sorted(x for x in self.nodes if not self._pred[x])

    def maximal(self) -> list:
        return sorted(x for x in self.nodes if not self._succ[x])

    @property
    def root(self):
        mins = self.minimal()
        if len(mins) != 1:
            raise InvalidLpof("LPOF has %d minimal nodes" % len(mins))
        return mins[0]

    def bots(self) -> frozenset:
        return frozenset(x for x in self.nodes if self.labels[x].is_bot)

    def max_level(self) -> int:
        return max(self._level.values(), default=-1)

    def __len__(self):
        return len(self.nodes)

    # -- derived structures -----------------------------------------------------

    def restrict(self, keep: Iterable) -> "Lpof":
        """Sub-LPOF on ``keep`` with the induced order."""
        keep = frozenset(keep)
        edges = [(p, y) for y in keep for p in self._down[y] if p in keep]
        return Lpof(
            {x: self.labels[x] for x in keep},
            {x: self.formulas[x] for x in keep},
            edges,
        )

    def rename(self, mapping: Mapping) -> "Lpof":
        """Apply an injective renaming of nodes to nodes and formula variables."""
        if len(set(mapping[x] for x in self.nodes)) != len(self.nodes):
            raise ValueError("renaming is not injective")
        return Lpof(
            {mapping[x]: self.labels[x] for x in self.nodes},
            {mapping[x]: fm.rename(self.formulas[x], mapping) for x in self.nodes},
            [(mapping[x], mapping[y]) for x, y in self.covers],
        )

    def relabel(self, labels: Mapping | None = None, formulas: Mapping | None = None) -> "Lpof":
        new_labels = dict(self.labels)
        new_formulas = dict(self.formulas)
        new_labels.update(labels or {})
        new_formulas.update(formulas or {})
        return Lpof(new_labels, new_formulas, self.covers)

    # -- structural identity ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Lpof):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.covers == other.covers
            and self.labels == other.labels
            and self.formulas == other.formulas
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nodes, self.covers, frozenset(self.labels.items())))
        return self._hash

    def __repr__(self):
        parts = []
        for x in self._topo:
            f = self.formulas[x]
            parts.append("%s:%s%s" % (x, self.labels[x], "" if f == fm.TRUE else "[%s]" % f))
        edges = ",".join("%s<%s" % e for e in sorted(self.covers))
        return "Lpof(%s | %s)" % (" ".join(parts), edges)

    # -- export -------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "covers": [list(e) for e in sorted(self.covers)],
            "labels": {str(x): label_to_json(self.labels[x]) for x in sorted(self.nodes)},
            "formulas": {str(x): fm.to_json(self.formulas[x]) for x in sorted(self.nodes)},
        }

    def to_dot(self, name: str = "lpof") -> str:
        lines = ["digraph %s {" % name, "  rankdir=BT;", "  node [shape=box];"]
        for x in sorted(self.nodes):
            text = "%s: %s\\nφ=%s" % (x, self.labels[x], self.formulas[x])
            lines.append('  n%s [label="%s"];' % (x, text.replace('"', '\\"')))
        for x, y in sorted(self.covers):
            attr = ""
            if self.labels[x].is_test:
                view = fm.literals(self.formulas[y])
                if view is not None and (x, True) in view:
                    attr = ' [label="T"]'
                elif view is not None and (x, False) in view:
                    attr = ' [label="F"]'
                elif fm.implies(self.formulas[y], fm.Var(x)):
                    attr = ' [label="T"]'
                elif fm.implies(self.formulas[y], fm.Not(fm.Var(x))):
                    attr = ' [label="F"]'
            lines.append("  n%s -> n%s%s;" % (x, y, attr))
        lines.append("}")
        return "\n".join(lines) + "\n"


def label_to_json(lab: Label):
    if lab.kind in ("bot", "fork"):
        return {"kind": lab.kind}
    return {"kind": lab.kind, "term": str(lab.term)}


def from_json(data: Mapping, parse_label=None) -> Lpof:
    """Rebuild an LPOF from :meth:`Lpof.to_json` output.

    Terms are strings unless ``parse_label(kind, text)`` is supplied.
    """
    labels = {}
    for key, lab in data["labels"].items():
        kind = lab["kind"]
        if kind in ("bot", "fork"):
            labels[int(key)] = Label(kind)
        elif parse_label is not None:
            labels[int(key)] = parse_label(kind, lab["term"])
        else:
            labels[int(key)] = Label(kind, lab["term"])
    formulas = {int(k): fm.from_json(v) for k, v in data["formulas"].items()}
    return Lpof(labels, formulas, [tuple(e) for e in data["covers"]])


def dumps(alpha: Lpof) -> str:
    return json.dumps(alpha.to_json(), sort_keys=True)


# -- construction helpers -----------------------------------------------------

class NodeAlloc:
    """Monotone supply of fresh node ids, owned by one construction."""

    __slots__ = ("next_id",)

    def __init__(self, start: int = 0):
        self.next_id = start

    def fresh(self) -> int:
        x = self.next_id
        self.next_id += 1
        return x

    def avoid(self, alpha: Lpof) -> None:
        if alpha.nodes:
            self.next_id = max(self.next_id, max(alpha.nodes) + 1)


def singleton(label: Label, node: int = 0) -> Lpof:
    return Lpof({node: label}, {node: fm.TRUE})


# -- validation -----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    nodes: tuple
    message: str

    def __str__(self):
        return "%s at %s: %s" % (self.condition, list(self.nodes), self.message)


# condition names, in the order they are checked
FINITELY_PRECEDED = "finitely-preceded"
FINITE_LEVELS = "finite-levels"
SINGLE_ROOT = "single-root"
BOT_MAXIMAL = "bot-maximal"
FORMULA_SOUND = "formula-sound"
FORMULA_MONOTONE = "formula-monotone"


def validate(alpha: Lpof) -> list:
    out = []
    # finiteness of the carrier makes the first two conditions automatic
    mins = alpha.minimal()
    if len(mins) != 1:
        out.append(Violation(SINGLE_ROOT, tuple(mins), "expected exactly one minimal node, found %d" % len(mins)))
    for x in sorted(alpha.nodes):
        if alpha.labels[x].is_bot and alpha.succ(x):
            out.append(Violation(BOT_MAXIMAL, (x,), "⊥ node has successors %s" % sorted(alpha.succ(x))))
    for x in sorted(alpha.nodes):
        f = alpha.formulas[x]
        if not fm.is_sat(f):
            out.append(Violation(FORMULA_SOUND, (x,), "formula %s is unsatisfiable" % f))
        stray = fm.free_vars(f) - alpha.pred_plus(x)
        if stray:
            out.append(Violation(FORMULA_SOUND, (x,), "formula mentions non-predecessors %s" % sorted(stray)))
    # implication is transitive, so checking covering pairs suffices
    for x, y in sorted(alpha.covers):
        if not fm.implies(alpha.formulas[y], alpha.formulas[x]):
            out.append(Violation(FORMULA_MONOTONE, (x, y), "formula of %s does not entail that of %s" % (y, x)))
    return out


def require_valid(alpha: Lpof) -> Lpof:
    problems = validate(alpha)
    if problems:
        raise InvalidLpof("; ".join(str(v) for v in problems))
    return alpha


# -- the approximation order ------------------------------------------------------

def le_lpof(alpha: Lpof, beta: Lpof) -> bool:
    """Node-identity comparison ``alpha ⊑ beta``."""
    if not alpha.nodes <= beta.nodes:
        return False
    for x in alpha.nodes:
        # downward closed, with the same strict order below each node
        if alpha.pred_plus(x) != beta.pred_plus(x):
            return False
    for x in alpha.nodes:
        if not label_le(alpha.labels[x], beta.labels[x]):
            return False
        if not fm.equiv(alpha.formulas[x], beta.formulas[x]):
            return False
    cut = beta.succ_plus_set(alpha.bots())
    for x in alpha.nodes:
        if alpha.succ(x) != beta.succ(x) - cut:
            return False
    return True


def truncate(alpha: Lpof, n: int) -> Lpof:
    if n < 0:
        raise ValueError("truncation depth must be non-negative")
    keep = [x for x in alpha.nodes if alpha.level(x) <= n]
    sub = alpha.restrict(keep)
    return sub.relabel(labels={x: BOT for x in keep if alpha.level(x) == n})


def sup_chain(chain) -> Lpof:
    """Componentwise union of a finite ⊑-chain."""
    chain = list(chain)
    if not chain:
        raise NotAChain("empty chain")
    for a, b in zip(chain, chain[1:]):
        if not le_lpof(a, b):
            raise NotAChain("consecutive elements are not ordered")
    labels = {}
    formulas = {}
    edges = set()
    for a in chain:
        for x in a.nodes:
            old = labels.get(x)
            # labels grow along the chain, so the last one seen is the supremum
            if old is None or label_le(old, a.labels[x]):
                labels[x] = a.labels[x]
            formulas.setdefault(x, a.formulas[x])
        edges |= a.covers
    return Lpof(labels, formulas, edges)
