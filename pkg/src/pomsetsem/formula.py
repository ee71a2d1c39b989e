"""Boolean formulae whose variables are node identifiers.

Satisfiability and entailment are decided by enumerating valuations of the
free variables (see :mod:`pomsetsem._kernels`).  Formulae that are plain
conjunctions of literals -- which is what every pomset constructor produces --
take a shortcut through their literal sets and never reach the kernel.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from . import _kernels
from ._kernels._pykernel import OP_AND, OP_FALSE, OP_NOT, OP_OR, OP_TRUE, OP_VAR


class UnboundVariable(KeyError):
    """A valuation does not assign one of the formula's free variables."""


class Formula:
    __slots__ = ("_hash", "_free", "_lits")

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Formula(%s)" % self


class Const(Formula):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = bool(value)
        self._hash = hash(("const", self.value))
        self._free = frozenset()
        self._lits = None

    def __eq__(self, other):
        return isinstance(other, Const) and other.value == self.value

    def __str__(self):
        return "tru" if self.value else "fls"


TRUE = Const(True)
FALSE = Const(False)


class Var(Formula):
    __slots__ = ("node",)

    def __init__(self, node: int):
        self.node = node
        self._hash = hash(("var", node))
        self._free = frozenset((node,))
        self._lits = None

    def __eq__(self, other):
        return isinstance(other, Var) and other.node == self.node

    def __str__(self):
        return "n%s" % (self.node,)


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash(("not", arg._hash))
        self._free = arg._free
        self._lits = None

    def __eq__(self, other):
        return isinstance(other, Not) and other._hash == self._hash and other.arg == self.arg

    def __str__(self):
        if isinstance(self.arg, (Var, Const, Not)):
            return "¬%s" % self.arg
        return "¬(%s)" % self.arg


class _Binary(Formula):
    __slots__ = ("left", "right")
    tag = ""
    symbol = ""

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._hash = hash((self.tag, left._hash, right._hash))
        self._free = left._free | right._free
        self._lits = None

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )

    def __str__(self):
        parts = []
        for side in (self.left, self.right):
            if isinstance(side, _Binary) and type(side) is not type(self):
                parts.append("(%s)" % side)
            else:
                parts.append(str(side))
        return (" %s " % self.symbol).join(parts)


class And(_Binary):
    __slots__ = ()
    tag = "and"
    symbol = "∧"


class Or(_Binary):
    __slots__ = ()
    tag = "or"
    symbol = "∨"


# -- literal view -----------------------------------------------------------

_UNSAT = "unsat"
_MIXED = "mixed"


def _literal_view(f: Formula):
    """frozenset of (node, polarity) if ``f`` is a conjunction of literals,
    ``_UNSAT`` if it is such a conjunction but contradictory, else ``_MIXED``."""
    hit = f._lits
    if hit is not None:
        return hit
    if isinstance(f, Const):
        out = frozenset() if f.value else _UNSAT
    elif isinstance(f, Var):
        out = frozenset(((f.node, True),))
    elif isinstance(f, Not):
        a = f.arg
        if isinstance(a, Var):
            out = frozenset(((a.node, False),))
        elif isinstance(a, Const):
            out = _UNSAT if a.value else frozenset()
        elif isinstance(a, Not):
            out = _literal_view(a.arg)
        else:
            out = _MIXED
    elif isinstance(f, And):
        lv, rv = _literal_view(f.left), _literal_view(f.right)
        if lv is _MIXED or rv is _MIXED:
            out = _MIXED
        elif lv is _UNSAT or rv is _UNSAT:
            out = _UNSAT
        else:
            out = lv | rv
            pos = {n for n, p in out if p}
            if any(not p and n in pos for n, p in out):
                out = _UNSAT
    else:
        out = _MIXED
    f._lits = out
    return out


def literals(f: Formula):
    """Literal set of a satisfiable conjunction of literals, else ``None``."""
    v = _literal_view(f)
    return v if isinstance(v, frozenset) else None


# -- construction helpers ---------------------------------------------------

def lit(node: int, polarity: bool = True) -> Formula:
    return Var(node) if polarity else Not(Var(node))


def from_literals(lits: Iterable) -> Formula:
    """Conjunction of literals in ascending node order; ``TRUE`` when empty."""
    out = None
    for node, pol in sorted(lits, key=lambda np: (np[0], not np[1])):
        term = lit(node, pol)
        out = term if out is None else And(out, term)
    return TRUE if out is None else out


def conj(*fs: Formula) -> Formula:
    """Conjunction that drops ``tru`` operands and flattens literal conjunctions."""
    parts = [f for f in fs if not (isinstance(f, Const) and f.value)]
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    views = [_literal_view(f) for f in parts]
    if all(isinstance(v, frozenset) for v in views):
        merged = frozenset().union(*views)
        if _literal_view(from_literals(merged)) is not _UNSAT:
            return from_literals(merged)
    out = parts[0]
    for f in parts[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    parts = [f for f in fs if not (isinstance(f, Const) and not f.value)]
    if not parts:
        return FALSE
    out = parts[0]
    for f in parts[1:]:
        out = Or(out, f)
    return out


# -- semantics --------------------------------------------------------------

def free_vars(f: Formula) -> frozenset:
    return f._free


def evaluate(f: Formula, valuation: Mapping) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        try:
            return bool(valuation[f.node])
        except KeyError:
            raise UnboundVariable(f.node) from None
    if isinstance(f, Not):
        return not evaluate(f.arg, valuation)
    if isinstance(f, And):
        # both sides evaluated so unbound variables always surface
        left = evaluate(f.left, valuation)
        return evaluate(f.right, valuation) and left
    if isinstance(f, Or):
        left = evaluate(f.left, valuation)
        return evaluate(f.right, valuation) or left
    raise TypeError("not a formula: %r" % (f,))


def restrict(f: Formula, partial: Mapping) -> Formula:
    """Substitute the assigned variables and fold constants."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Var):
        if f.node in partial:
            return TRUE if partial[f.node] else FALSE
        return f
    if isinstance(f, Not):
        a = restrict(f.arg, partial)
        if isinstance(a, Const):
            return FALSE if a.value else TRUE
        return f if a is f.arg else Not(a)
    left = restrict(f.left, partial)
    right = restrict(f.right, partial)
    absorbing = isinstance(f, Or)
    for a, b in ((left, right), (right, left)):
        if isinstance(a, Const):
            return a if a.value == absorbing else b
    if left is f.left and right is f.right:
        return f
    return type(f)(left, right)


def compile_program(f: Formula, order: Mapping) -> list:
    """Postfix program for the kernels; ``order`` maps node -> variable index."""
    prog = []
    stack = [(f, False)]
    while stack:
        g, done = stack.pop()
        if isinstance(g, Const):
            prog.append(OP_TRUE if g.value else OP_FALSE)
        elif isinstance(g, Var):
            prog.append(OP_VAR + order[g.node])
        elif isinstance(g, Not):
            if done:
                prog.append(OP_NOT)
            else:
                stack.append((g, True))
                stack.append((g.arg, False))
        else:
            if done:
                prog.append(OP_AND if isinstance(g, And) else OP_OR)
            else:
                stack.append((g, True))
                stack.append((g.right, False))
                stack.append((g.left, False))
    return prog


def truth_table(f: Formula, variables) -> int:
    """Bit ``i`` is ``f`` under the valuation giving ``variables[j]`` bit ``j`` of ``i``."""
    variables = list(variables)
    missing = f._free - set(variables)
    if missing:
        raise UnboundVariable(min(missing))
    order = {v: j for j, v in enumerate(variables)}
    return _kernels.truth_table(compile_program(f, order), len(variables))


def _kernel_sat(f: Formula) -> bool:
    variables = sorted(f._free)
    order = {v: j for j, v in enumerate(variables)}
    return _kernels.is_sat(compile_program(f, order), len(variables))


def is_sat(f: Formula) -> bool:
    view = _literal_view(f)
    if view is _UNSAT:
        return False
    if view is not _MIXED:
        return True
    return _kernel_sat(f)


def implies(f: Formula, g: Formula) -> bool:
    fv = _literal_view(f)
    if fv is _UNSAT:
        return True
    gv = _literal_view(g)
    if fv is not _MIXED:
        if gv is not _MIXED and gv is not _UNSAT:
            return gv <= fv
        # every model of f extends its literal set
        residual = restrict(g, dict(fv))
        if isinstance(residual, Const):
            return residual.value
        return not is_sat(Not(residual))
    if gv is not _MIXED and gv is not _UNSAT and not gv:
        return True
    return not is_sat(And(f, Not(g)))


def equiv(f: Formula, g: Formula) -> bool:
    if f == g:
        return True
    return implies(f, g) and implies(g, f)


# -- renaming, keys, canonical forms ------------------------------------------

def rename(f: Formula, mapping: Mapping) -> Formula:
    """Syntactic substitution of node ids; unmapped variables are kept."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Var):
        return Var(mapping.get(f.node, f.node))
    if isinstance(f, Not):
        return Not(rename(f.arg, mapping))
    return type(f)(rename(f.left, mapping), rename(f.right, mapping))


def semantic_key(f: Formula, mapping: Mapping | None = None) -> tuple:
    """Renaming-aware key equal for two formulae iff they are equivalent.

    The key is ``(essential variables, truth table over them)`` with the
    variables renamed through ``mapping`` and sorted.
    """
    view = _literal_view(f)
    if view is _UNSAT:
        return ((), 0)
    if view is not _MIXED:
        lits = sorted((mapping[n] if mapping else n, p) for n, p in view)
        idx = 0
        for j, (_, p) in enumerate(lits):
            if p:
                idx |= 1 << j
        return (tuple(n for n, _ in lits), 1 << idx)
    g = rename(f, mapping) if mapping else f
    variables = sorted(g._free)
    table = truth_table(g, variables)
    # drop variables the table does not depend on
    j = 0
    while j < len(variables):
        half = 1 << j
        width = 1 << len(variables)
        if any(
            ((table >> i) & 1) != ((table >> (i | half)) & 1)
            for i in range(width)
            if not i & half
        ):
            j += 1
            continue
        projected = 0
        for i in range(width):
            if not i & half and (table >> i) & 1:
                projected |= 1 << ((i & (half - 1)) | ((i >> (j + 1)) << j))
        del variables[j]
        table = projected
    return (tuple(variables), table)


def from_key(key: tuple) -> Formula:
    """Deterministic formula for a semantic key: a literal conjunction when the
    models form a single minterm, otherwise a disjunction of minterms."""
    variables, table = key
    if table == 0:
        return FALSE
    minterms = [i for i in range(1 << len(variables)) if (table >> i) & 1]
    terms = [
        from_literals((v, bool((i >> j) & 1)) for j, v in enumerate(variables))
        for i in minterms
    ]
    if len(terms) == 1:
        return terms[0]
    if len(terms) == 1 << len(variables):
        return TRUE
    return disj(*terms)


def size(f: Formula) -> int:
    if isinstance(f, (Const, Var)):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.arg)
    return 1 + size(f.left) + size(f.right)


def sort_key(f: Formula):
    """Fixed structural order used to pick representatives of equivalence classes."""
    return (size(f), str(f))


def dedup_equiv(fs: Iterable[Formula]) -> list:
    """One representative (the least under :func:`sort_key`) per equivalence class."""
    reps: list = []
    for f in sorted(fs, key=sort_key):
        if not any(equiv(f, r) for r in reps):
            reps.append(f)
    return reps


# -- JSON -------------------------------------------------------------------

def to_json(f: Formula):
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return ["var", f.node]
    if isinstance(f, Not):
        return ["not", to_json(f.arg)]
    return [f.tag, to_json(f.left), to_json(f.right)]


def from_json(data) -> Formula:
    if data is True:
        return TRUE
    if data is False:
        return FALSE
    if not isinstance(data, list) or not data:
        raise ValueError("bad formula JSON: %r" % (data,))
    tag = data[0]
    if tag == "var" and len(data) == 2:
        return Var(data[1])
    if tag == "not" and len(data) == 2:
        return Not(from_json(data[1]))
    if tag in ("and", "or") and len(data) == 3:
        cls = And if tag == "and" else Or
        return cls(from_json(data[1]), from_json(data[2]))
    raise ValueError("bad formula JSON: %r" % (data,))
