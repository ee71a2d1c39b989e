"""The imperative language: syntax tree, concrete parser, and pomset denotation.

Concrete syntax::

    cmd  ::= seq ["||" cmd]
    seq  ::= atom [";" seq]
    atom ::= "skip" | var ":=" aexp | var "~" "flip" "(" rat ")"
           | "if" bexp "{" cmd "}" "else" "{" cmd "}"
           | "while" bexp "{" cmd "}" | "(" cmd ")" | name
    bexp ::= conjunctions with "&", disjunctions with "|", negation "!",
             comparisons "=", "!=", "<", "<=", ">", ">=", "true", "false",
             or a bare variable (true when non-zero)
    aexp ::= sums of variables and natural numbers

A bare ``name`` in command position is an uninterpreted action; it can be
drawn but not executed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import formula as fm
from . import ops
from .lpof import FORK, action
from .pomset import BOTTOM, Pomset, as_lpof
from .terms import (
    Add, Assign, Cmp, Flip, Named, Num, Ref, TAnd, TConst, TNot, TOr, TVar,
)


# -- syntax tree ------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    def __str__(self):
        return "skip"


@dataclass(frozen=True)
class Seq:
    first: "Cmd"
    second: "Cmd"

    def __str__(self):
        first = "(%s)" % self.first if isinstance(self.first, (Seq, Par)) else str(self.first)
        second = "(%s)" % self.second if isinstance(self.second, Par) else str(self.second)
        return "%s; %s" % (first, second)


@dataclass(frozen=True)
class Par:
    left: "Cmd"
    right: "Cmd"

    def __str__(self):
        left = "(%s)" % self.left if isinstance(self.left, Par) else str(self.left)
        return "%s || %s" % (left, self.right)


@dataclass(frozen=True)
class If:
    test: object
    then: "Cmd"
    orelse: "Cmd"

    def __str__(self):
        return "if %s { %s } else { %s }" % (self.test, self.then, self.orelse)


@dataclass(frozen=True)
class While:
    test: object
    body: "Cmd"

    def __str__(self):
        return "while %s { %s }" % (self.test, self.body)


@dataclass(frozen=True)
class Act:
    action: object

    def __str__(self):
        return str(self.action)


Cmd = Union[Skip, Seq, Par, If, While, Act]


def program_vars(c) -> frozenset:
    if isinstance(c, Skip):
        return frozenset()
    if isinstance(c, Act):
        return c.action.vars()
    if isinstance(c, (Seq, Par)):
        a, b = (c.first, c.second) if isinstance(c, Seq) else (c.left, c.right)
        return program_vars(a) | program_vars(b)
    if isinstance(c, If):
        return c.test.vars() | program_vars(c.then) | program_vars(c.orelse)
    if isinstance(c, While):
        return c.test.vars() | program_vars(c.body)
    raise TypeError(c)


def has_par(c) -> bool:
    if isinstance(c, Par):
        return True
    if isinstance(c, Seq):
        return has_par(c.first) or has_par(c.second)
    if isinstance(c, If):
        return has_par(c.then) or has_par(c.orelse)
    if isinstance(c, While):
        return has_par(c.body)
    return False


def has_flip(c) -> bool:
    if isinstance(c, Act):
        return isinstance(c.action, Flip)
    if isinstance(c, (Seq, Par)):
        a, b = (c.first, c.second) if isinstance(c, Seq) else (c.left, c.right)
        return has_flip(a) or has_flip(b)
    if isinstance(c, If):
        return has_flip(c.then) or has_flip(c.orelse)
    if isinstance(c, While):
        return has_flip(c.body)
    return False


def has_loop(c) -> bool:
    if isinstance(c, While):
        return True
    if isinstance(c, (Seq, Par)):
        a, b = (c.first, c.second) if isinstance(c, Seq) else (c.left, c.right)
        return has_loop(a) or has_loop(b)
    if isinstance(c, If):
        return has_loop(c.then) or has_loop(c.orelse)
    return False


def size(c) -> int:
    if isinstance(c, (Seq, Par)):
        a, b = (c.first, c.second) if isinstance(c, Seq) else (c.left, c.right)
        return 1 + size(a) + size(b)
    if isinstance(c, If):
        return 1 + size(c.then) + size(c.orelse)
    if isinstance(c, While):
        return 1 + size(c.body)
    return 1


# -- parser -----------------------------------------------------------------------

class ProgramSyntaxError(SyntaxError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__("%s at line %d, column %d" % (message, line, column))
        self.line = self.lineno = line
        self.column = self.offset = column

    def __str__(self) -> str:
        return self.msg


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>:=|\|\||<=|>=|!=|==|[~|&!=<>+(){};/])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"skip", "if", "else", "while", "flip", "true", "false"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ProgramSyntaxError("unexpected character %r" % text[pos], line, col)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "ident" and s in _KEYWORDS:
                kind = "kw"
            out.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(_Tok("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ProgramSyntaxError("%s, found %s" % (msg, found), tok.line, tok.col)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def eat(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.eat(text):
            self.error("expected %r" % text)

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.error("expected a variable name")
        self.i += 1
        return t.text

    # commands
    def cmd(self):
        left = self.seq()
        if self.eat("||"):
            return Par(left, self.cmd())
        return left

    def seq(self):
        first = self.atom()
        if self.eat(";"):
            return Seq(first, self.seq())
        return first

    def block(self):
        self.expect("{")
        body = self.cmd()
        self.expect("}")
        return body

    def atom(self):
        t = self.tok
        if self.eat("skip"):
            return Skip()
        if self.eat("if"):
            b = self.bexp()
            then = self.block()
            self.expect("else")
            return If(b, then, self.block())
        if self.eat("while"):
            b = self.bexp()
            return While(b, self.block())
        if self.eat("("):
            c = self.cmd()
            self.expect(")")
            return c
        if t.kind == "ident":
            self.i += 1
            if self.eat(":="):
                return Act(Assign(t.text, self.aexp()))
            if self.eat("~"):
                self.expect("flip")
                self.expect("(")
                p = self.rational()
                self.expect(")")
                return Act(Flip(t.text, p))
            return Act(Named(t.text))
        self.error("expected a command")

    def rational(self) -> Fraction:
        t = self.tok
        if t.kind != "num":
            self.error("expected a probability")
        self.i += 1
        num = int(t.text)
        den = 1
        if self.eat("/"):
            d = self.tok
            if d.kind != "num":
                self.error("expected a denominator")
            self.i += 1
            den = int(d.text)
            if den == 0:
                self.error("zero denominator", d)
        p = Fraction(num, den)
        if p > 1:
            self.error("probability exceeds 1", t)
        return p

    # arithmetic
    def aexp(self):
        e = self.aterm()
        while self.eat("+"):
            e = Add(e, self.aterm())
        return e

    def aterm(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "ident":
            self.i += 1
            return Ref(t.text)
        if self.eat("("):
            e = self.aexp()
            self.expect(")")
            return e
        self.error("expected an arithmetic expression")

    # tests
    def bexp(self):
        b = self.band()
        while self.eat("|"):
            b = TOr(b, self.band())
        return b

    def band(self):
        b = self.bnot()
        while self.eat("&"):
            b = TAnd(b, self.bnot())
        return b

    def bnot(self):
        if self.eat("!"):
            return TNot(self.bnot())
        return self.batom()

    _CMPS = {"=": "=", "==": "=", "!=": "!=", "<": "<", "<=": "<="}

    def batom(self):
        if self.eat("true"):
            return TConst(True)
        if self.eat("false"):
            return TConst(False)
        if self.at("("):
            save = self.i
            try:
                self.i += 1
                b = self.bexp()
                self.expect(")")
                if not self._at_cmp() and not self.at("+"):
                    return b
            except ProgramSyntaxError:
                pass
            self.i = save
        left = self.aexp()
        if not self._at_cmp():
            if isinstance(left, Ref):
                return TVar(left.name)
            self.error("expected a comparison")
        op = self.tok.text
        self.i += 1
        right = self.aexp()
        if op == ">":
            return Cmp("<", right, left)
        if op == ">=":
            return Cmp("<=", right, left)
        return Cmp(self._CMPS[op], left, right)

    def _at_cmp(self) -> bool:
        t = self.tok
        return t.kind == "op" and t.text in ("=", "==", "!=", "<", "<=", ">", ">=")


def parse(text: str):
    p = _Parser(text)
    c = p.cmd()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return c


# -- denotation ---------------------------------------------------------------------

def skip_pomset() -> Pomset:
    return ops.singleton(FORK)


def loop_step(b, body: Pomset, approx: Pomset) -> Pomset:
    """One unrolling of a loop: test, then body followed by the approximant, or skip."""
    return ops.guard(b, ops.seq(body, approx), skip_pomset())


def loop_iterates(b, body: Pomset, depth: int) -> list:
    """The iterates starting from the bottom pomset, ``depth + 1`` of them."""
    out = [BOTTOM]
    for _ in range(depth):
        out.append(loop_step(b, body, out[-1]))
    return out


def denote(c, depth: int) -> Pomset:
    """Pomset of ``c`` with every loop unrolled ``depth`` times above ⊥."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    memo: dict = {}

    def go(c):
        hit = memo.get(c)
        if hit is not None:
            return hit
        if isinstance(c, Skip):
            out = skip_pomset()
        elif isinstance(c, Act):
            out = ops.singleton(action(c.action))
        elif isinstance(c, Seq):
            out = ops.seq(go(c.first), go(c.second))
        elif isinstance(c, Par):
            out = ops.par(go(c.left), go(c.right))
        elif isinstance(c, If):
            out = ops.guard(c.test, go(c.then), go(c.orelse))
        elif isinstance(c, While):
            out = loop_iterates(c.test, go(c.body), depth)[-1]
        else:
            raise TypeError("not a command: %r" % (c,))
        memo[c] = out
        return out

    return go(c)


def check_binary_branching(a) -> bool:
    alpha = as_lpof(a)
    test_children = set()
    for x in alpha.nodes:
        if not alpha.labels[x].is_test:
            continue
        kids = alpha.succ(x)
        if len(kids) != 2:
            return False
        phi = alpha.formulas[x]
        want_t = fm.conj(phi, fm.Var(x))
        want_f = fm.conj(phi, fm.Not(fm.Var(x)))
        y1, y2 = sorted(kids)
        if not (fm.equiv(alpha.formulas[y1], want_t) and fm.equiv(alpha.formulas[y2], want_f)):
            if not (fm.equiv(alpha.formulas[y2], want_t) and fm.equiv(alpha.formulas[y1], want_f)):
                return False
        if alpha.pred(y1) != {x} or alpha.pred(y2) != {x}:
            return False
        test_children.update(kids)
    for x in alpha.nodes:
        if x in test_children:
            continue
        both = fm.conj(*(alpha.formulas[p] for p in sorted(alpha.pred(x))))
        if not fm.equiv(alpha.formulas[x], both):
            return False
    return True
