"""Seeded random programs for the property and theorem checks.

Programs use the variables ``x`` and ``y``, have at most ``max_size`` syntax
nodes and at most two nested loops.  Every family is a filter over the same
generator, so a seed determines the corpus.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .lang import Act, If, Par, Seq, Skip, While, has_flip, has_loop, has_par, size
from .terms import Add, Assign, Cmp, Flip, Num, Ref, TNot

VARIABLES = ("x", "y")
FAMILIES = ("any", "flip-free", "parallel-free", "loop-free-seq", "if", "par")


def loop_nesting(c) -> int:
    if isinstance(c, While):
        return 1 + loop_nesting(c.body)
    if isinstance(c, (Seq, Par)):
        a, b = (c.first, c.second) if isinstance(c, Seq) else (c.left, c.right)
        return max(loop_nesting(a), loop_nesting(b))
    if isinstance(c, If):
        return max(loop_nesting(c.then), loop_nesting(c.orelse))
    return 0


def loop_count(c) -> int:
    if isinstance(c, While):
        return 1 + loop_count(c.body)
    if isinstance(c, (Seq, Par)):
        a, b = (c.first, c.second) if isinstance(c, Seq) else (c.left, c.right)
        return loop_count(a) + loop_count(b)
    if isinstance(c, If):
        return loop_count(c.then) + loop_count(c.orelse)
    return 0


class Generator:
    def __init__(self, rng: random.Random, vmax: int = 2, flips: bool = True,
                 par: bool = True, loops: bool = True, max_size: int = 12):
        self.rng = rng
        self.vmax = vmax
        self.flips = flips
        self.par = par
        self.loops = loops
        self.max_size = max_size

    def var(self) -> str:
        return self.rng.choice(VARIABLES)

    def test(self):
        r = self.rng
        op = r.choice(("=", "=", "<", "<=", "!="))
        left = Ref(self.var())
        right = Num(r.randint(0, self.vmax)) if r.random() < 0.7 else Ref(self.var())
        t = Cmp(op, left, right)
        return TNot(t) if r.random() < 0.15 else t

    def action(self):
        r = self.rng
        v = self.var()
        roll = r.random()
        if self.flips and roll < 0.25:
            return Flip(v, r.choice((Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))))
        if roll < 0.6:
            return Assign(v, Num(r.randint(0, self.vmax)))
        return Assign(v, Add(Ref(self.var()), Num(1)))

    def cmd(self, budget: int, loop_depth: int = 0):
        """A command with at most ``budget`` syntax nodes."""
        r = self.rng
        choices = [("act", 6), ("skip", 1)]
        if budget >= 3:
            choices += [("seq", 5), ("if", 3)]
            if self.par:
                choices.append(("par", 3))
        if budget >= 2 and self.loops and loop_depth < 2:
            choices.append(("while", 2))
        kinds, weights = zip(*choices)
        kind = r.choices(kinds, weights)[0]
        if kind == "act":
            return Act(self.action())
        if kind == "skip":
            return Skip()
        if kind == "while":
            return While(self.test(), self.cmd(min(budget - 1, 4), loop_depth + 1))
        left_budget = r.randint(1, budget - 2)
        left = self.cmd(left_budget, loop_depth)
        right = self.cmd(budget - 1 - size(left), loop_depth)
        if kind == "seq":
            return Seq(left, right)
        if kind == "par":
            return Par(left, right)
        return If(self.test(), left, right)


def _wanted(family: str, c, max_loops) -> bool:
    if max_loops is not None and loop_count(c) > max_loops:
        return False
    if family == "any":
        return True
    if family == "flip-free":
        return not has_flip(c)
    if family == "parallel-free":
        return not has_par(c)
    if family == "loop-free-seq":
        return isinstance(c, Seq) and not has_loop(c)
    if family == "if":
        return isinstance(c, If)
    if family == "par":
        return has_par(c)
    raise ValueError("unknown family %r" % family)


def generate(seed: int, count: int, family: str = "any", vmax: int = 2,
             max_size: int = 12, max_loops: int | None = None) -> list:
    """``count`` distinct programs of ``family``, deterministic in ``seed``."""
    if family not in FAMILIES:
        raise ValueError("unknown family %r" % family)
    rng = random.Random("%s/%s" % (seed, family))
    gen = Generator(
        rng, vmax,
        flips=family != "flip-free",
        par=family != "parallel-free",
        loops=family != "loop-free-seq",
        max_size=max_size,
    )
    out, seen = [], set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise RuntimeError("could not find %d %s programs" % (count, family))
        c = gen.cmd(max_size)
        if family == "par" and not has_par(c):
            c = Par(c, gen.cmd(max(1, max_size - 1 - size(c))))
        if size(c) > max_size or loop_nesting(c) > 2 or not _wanted(family, c, max_loops):
            continue
        key = str(c)
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
    return out
