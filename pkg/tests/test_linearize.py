import random
from fractions import Fraction

import pytest

import builders as b
from pomsetsem import formula as fm
from pomsetsem.corpus import generate
from pomsetsem.domains import ConvexDomain, ConvexSet, Dist, HoareDomain, all_states
from pomsetsem.lang import denote, parse
from pomsetsem.linearize import (
    ContainsParallel, convex_semantics, lin, next_nodes, oracle_interleave, sequential_semantics,
)
from pomsetsem.lpof import FORK, Lpof
from pomsetsem.terms import State

HALF = Fraction(1, 2)
CONVEX, HOARE = ConvexDomain(), HoareDomain()


def xs(**kw):
    return State(kw)


def test_next_nodes_on_nested_conditional():
    alpha = b.nested_conditional()
    x, y1, y2, z1, z2 = range(5)
    assert next_nodes(alpha, fm.TRUE, ()) == {x}
    assert next_nodes(alpha, fm.TRUE, {x}) == frozenset()
    assert next_nodes(alpha, b.v(x), {x}) == {y1}
    assert next_nodes(alpha, b.n(x), {x}) == {y2}
    assert next_nodes(alpha, fm.conj(b.n(x), b.v(y2)), {x, y2}) == {z1}
    assert next_nodes(alpha, fm.conj(b.n(x), b.n(y2)), {x, y2}) == {z2}


def test_next_nodes_of_fork_are_both_children():
    alpha = Lpof({0: FORK, 1: b.act("l"), 2: b.act("r")}, None, [(0, 1), (0, 2)])
    assert next_nodes(alpha, fm.TRUE, {0}) == {1, 2}


def test_lin_of_assignment_and_flip():
    s = xs(x=0)
    assert lin(denote(parse("x := 2"), 0), None, s, CONVEX) == CONVEX.unit(xs(x=2))
    got = lin(denote(parse("x ~ flip(1/2)"), 0), None, s, CONVEX)
    assert got == ConvexSet([Dist({xs(x=0): HALF, xs(x=1): HALF})])
    assert lin(denote(parse("x ~ flip(1/2)"), 0), None, s, HOARE) == {xs(x=0), xs(x=1)}


def test_lin_of_race():
    a = denote(parse("x := 1 || x := 2"), 0)
    assert lin(a, None, xs(x=0), HOARE) == {xs(x=1), xs(x=2)}
    got = lin(a, None, xs(x=0), CONVEX)
    assert got == ConvexSet([Dist.point(xs(x=1)), Dist.point(xs(x=2))])


def test_lin_truncation_gives_bottom():
    a = denote(parse("x := 1; x := 2"), 0)
    assert lin(a, 0, xs(x=0), CONVEX) == CONVEX.bottom()
    assert lin(a, 1, xs(x=0), CONVEX) == CONVEX.bottom()
    assert lin(a, 2, xs(x=0), CONVEX) == CONVEX.unit(xs(x=2))
    assert lin(a, 0, xs(x=0), HOARE) == frozenset()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_geometric_loop_leaves_halving_bottom(n):
    # each extra iterate gives one more coin a chance to land on 1
    c = parse("while x = 0 { x ~ flip(1/2) }")
    want = ConvexSet([Dist({None: HALF ** (n - 1), xs(x=1): 1 - HALF ** (n - 1)})])
    assert lin(denote(c, n), None, xs(x=0), CONVEX) == want
    assert convex_semantics(c, n, xs(x=0)) == want
    assert oracle_interleave(c, n, xs(x=0), CONVEX) == want


def test_oracle_on_small_programs():
    s = xs(x=0, y=0)
    c = parse("x := 1; y := x + 1 || y := 3")
    got = oracle_interleave(c, 1, s, HOARE)
    assert got == {xs(x=1, y=2), xs(x=1, y=3)}
    assert lin(denote(c, 1), None, s, HOARE) == got


def test_sequential_semantics_rejects_parallel():
    with pytest.raises(ContainsParallel):
        sequential_semantics(parse("skip || skip"), 1, xs(x=0), CONVEX)


def test_nd_order_does_not_matter():
    rng = random.Random(0)
    progs = generate(4, 12, "par", vmax=1)
    for c, d, e in zip(progs, progs[1:], progs[2:]):
        s = xs(x=rng.randint(0, 1), y=rng.randint(0, 1))
        for dom in (CONVEX, HOARE):
            u, v, w = (lin(denote(p, 2), None, s, dom) for p in (c, d, e))
            assert dom.equal(dom.nd(u, v), dom.nd(v, u))
            assert dom.equal(dom.nd(dom.nd(u, v), w), dom.nd(u, dom.nd(v, w)))
            assert dom.equal(dom.nd(u, u), u)


@pytest.mark.parametrize("left, right", [
    ("x := 1", "x ~ flip(1/2)"),
    ("x := 1; y := x", "y := 2"),
    ("if x = 0 { y := 1 } else { skip }", "x := 1"),
    ("while x = 0 { x ~ flip(1/2) }", "y := x"),
])
def test_swapping_race_sides(left, right):
    s = xs(x=0, y=0)
    for dom in (CONVEX, HOARE):
        a = lin(denote(parse("(%s) || (%s)" % (left, right)), 2), None, s, dom)
        c = lin(denote(parse("(%s) || (%s)" % (right, left)), 2), None, s, dom)
        assert dom.equal(a, c)


def test_lin_is_monotone_in_depth():
    for c in generate(5, 15, "any", max_loops=1):
        for s in all_states(("x", "y"), 2)[:3]:
            prev_c = prev_h = None
            for n in range(0, 4):
                cur_c = lin(denote(c, n), None, s, CONVEX)
                cur_h = lin(denote(c, n), None, s, HOARE)
                if prev_c is not None:
                    assert CONVEX.leq(prev_c, cur_c)
                    assert HOARE.leq(prev_h, cur_h)
                prev_c, prev_h = cur_c, cur_h


def test_truncations_are_monotone():
    c = parse("x := 1; (y := 1 || x ~ flip(1/2)); y := x")
    a = denote(c, 0)
    s = xs(x=0, y=0)
    levels = [lin(a, k, s, CONVEX) for k in range(a.lpof.max_level() + 2)]
    for d, e in zip(levels, levels[1:]):
        assert CONVEX.leq(d, e)
    assert levels[-1] == lin(a, None, s, CONVEX)
