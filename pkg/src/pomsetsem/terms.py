"""Arithmetic expressions, tests and actions of the imperative language.

States are immutable mappings from variable names to integers.  Arithmetic is
evaluated over the integers; only assignment wraps the result into the value
range ``[0, vmax]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union


class UnknownVariable(KeyError):
    pass


class UninterpretedAction(ValueError):
    """A named action has no state-transformer meaning."""


def _lookup(state: Mapping, name: str) -> int:
    try:
        return state[name]
    except KeyError:
        raise UnknownVariable(name) from None


# -- arithmetic ---------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int

    def eval(self, state: Mapping) -> int:
        return self.value

    def vars(self) -> frozenset:
        return frozenset()

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Ref:
    name: str

    def eval(self, state: Mapping) -> int:
        return _lookup(state, self.name)

    def vars(self) -> frozenset:
        return frozenset((self.name,))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Add:
    left: "Aexp"
    right: "Aexp"

    def eval(self, state: Mapping) -> int:
        return self.left.eval(state) + self.right.eval(state)

    def vars(self) -> frozenset:
        return self.left.vars() | self.right.vars()

    def __str__(self):
        return "%s + %s" % (self.left, self.right)


Aexp = Union[Num, Ref, Add]


# -- tests ----------------------------------------------------------------------

_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
}


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Aexp
    right: Aexp

    def __post_init__(self):
        if self.op not in _CMP:
            raise ValueError("unknown comparison %r" % self.op)

    def eval(self, state: Mapping) -> bool:
        return _CMP[self.op](self.left.eval(state), self.right.eval(state))

    def vars(self) -> frozenset:
        return self.left.vars() | self.right.vars()

    def __str__(self):
        return "%s %s %s" % (self.left, self.op, self.right)


@dataclass(frozen=True)
class TConst:
    value: bool

    def eval(self, state: Mapping) -> bool:
        return self.value

    def vars(self) -> frozenset:
        return frozenset()

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class TVar:
    """A variable read as a Boolean: true iff it is non-zero."""

    name: str

    def eval(self, state: Mapping) -> bool:
        return _lookup(state, self.name) != 0

    def vars(self) -> frozenset:
        return frozenset((self.name,))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TNot:
    arg: "Test"

    def eval(self, state: Mapping) -> bool:
        return not self.arg.eval(state)

    def vars(self) -> frozenset:
        return self.arg.vars()

    def __str__(self):
        if isinstance(self.arg, (TVar, TConst)):
            return "!%s" % self.arg
        return "!(%s)" % self.arg


@dataclass(frozen=True)
class TAnd:
    left: "Test"
    right: "Test"

    def eval(self, state: Mapping) -> bool:
        return self.left.eval(state) and self.right.eval(state)

    def vars(self) -> frozenset:
        return self.left.vars() | self.right.vars()

    def __str__(self):
        return "%s & %s" % (_paren(self.left, TOr), _paren(self.right, TOr))


@dataclass(frozen=True)
class TOr:
    left: "Test"
    right: "Test"

    def eval(self, state: Mapping) -> bool:
        return self.left.eval(state) or self.right.eval(state)

    def vars(self) -> frozenset:
        return self.left.vars() | self.right.vars()

    def __str__(self):
        return "%s | %s" % (_paren(self.left, TAnd), _paren(self.right, TAnd))


def _paren(t, loose):
    return "(%s)" % t if isinstance(t, loose) else str(t)


Test = Union[Cmp, TConst, TVar, TNot, TAnd, TOr]


# -- actions ----------------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    var: str
    expr: Aexp

    def vars(self) -> frozenset:
        return frozenset((self.var,)) | self.expr.vars()

    def __str__(self):
        return "%s := %s" % (self.var, self.expr)


@dataclass(frozen=True)
class Flip:
    var: str
    p: Fraction

    def __post_init__(self):
        p = Fraction(self.p)
        if not 0 <= p <= 1:
            raise ValueError("flip bias must lie in [0, 1], got %s" % p)
        object.__setattr__(self, "p", p)

    def vars(self) -> frozenset:
        return frozenset((self.var,))

    def __str__(self):
        return "%s ~ flip(%s)" % (self.var, self.p)


@dataclass(frozen=True)
class Assume:
    test: Test

    def vars(self) -> frozenset:
        return self.test.vars()

    def __str__(self):
        return "assume(%s)" % self.test


@dataclass(frozen=True)
class Named:
    """An uninterpreted action, useful for drawing shapes."""

    name: str

    def vars(self) -> frozenset:
        return frozenset()

    def __str__(self):
        return self.name


Action = Union[Assign, Flip, Assume, Named]


# -- states -------------------------------------------------------------------

class State(Mapping):
    """Immutable, hashable assignment of integers to variable names."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items=()):
        if isinstance(items, Mapping):
            items = items.items()
        self._items = tuple(sorted(dict(items).items()))
        self._hash = hash(self._items)

    def __getitem__(self, name):
        for k, v in self._items:
            if k == name:
                return v
        raise KeyError(name)

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, State):
            return self._items == other._items
        return NotImplemented

    def __lt__(self, other):
        return self._items < other._items

    def set(self, name: str, value: int) -> "State":
        d = dict(self._items)
        d[name] = value
        return State(d)

    def __repr__(self):
        return "State(%s)" % self

    def __str__(self):
        return ",".join("%s=%s" % kv for kv in self._items)


def parse_state(text: str) -> State:
    """``"x=0,y=1"`` -> State; the empty string gives the empty state."""
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, value = part.partition("=")
        if not _ or not name.strip():
            raise ValueError("bad state assignment %r" % part)
        out[name.strip()] = int(value)
    return State(out)
