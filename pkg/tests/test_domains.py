import random
from fractions import Fraction

import pytest

from pomsetsem.domains import (
    ConvexDomain, ConvexSet, DimensionMismatch, Dist, HoareDomain, all_states, hull_equal, hull_leq,
    in_up_hull, make_domain, minimize, mix,
)
from pomsetsem.terms import Assign, Assume, Cmp, Flip, Named, Num, Ref, State, UninterpretedAction, UnknownVariable

HALF = Fraction(1, 2)
S0, S1, S2 = (State({"x": k}) for k in range(3))


def rand_dist(rng, states):
    pts = [None] + states
    ws = [rng.randint(0, 3) for _ in pts]
    if not any(ws):
        ws[0] = 1
    total = sum(ws)
    return Dist({p: Fraction(w, total) for p, w in zip(pts, ws)})


def rand_set(rng, states, size=3):
    return ConvexSet(rand_dist(rng, states) for _ in range(rng.randint(1, size)))


def test_dist_validation_and_access():
    d = Dist({S0: HALF, S1: HALF, S2: 0})
    assert d[S0] == HALF and d[S2] == 0
    assert d.support() == [S0, S1]
    with pytest.raises(ValueError):
        Dist({S0: HALF})
    with pytest.raises(ValueError):
        Dist({S0: Fraction(3, 2), S1: -HALF})


def test_mix():
    got = mix([(HALF, Dist.point(S0)), (HALF, Dist.point(None))])
    assert got == Dist({S0: HALF, None: HALF})
    assert got.bottom_mass == HALF


def test_hull_membership():
    a, c = Dist.point(S0), Dist.point(S1)
    assert in_up_hull(Dist({S0: HALF, S1: HALF}), [a, c])
    assert not in_up_hull(Dist.point(S2), [a, c])
    # moving mass off ⊥ goes up
    assert in_up_hull(a, [Dist({S0: HALF, None: HALF})])
    assert not in_up_hull(Dist({S0: HALF, None: HALF}), [a])


def test_minimize_drops_interior_and_lower_points():
    a, c = Dist.point(S0), Dist.point(S1)
    mid = Dist({S0: HALF, S1: HALF})
    low = Dist({S0: HALF, None: HALF})
    assert minimize([a, c, mid]) == {a, c}
    assert minimize([a, low]) == {low}


def test_dimension_mismatch():
    other = State({"y": 0})
    with pytest.raises(DimensionMismatch):
        hull_leq(ConvexSet([Dist.point(S0)]), ConvexSet([Dist.point(other)]))


def test_hull_order_reflexive_and_transitive():
    rng = random.Random(0)
    states = [S0, S1, S2]
    for _ in range(100):
        s, t, u = (rand_set(rng, states) for _ in range(3))
        assert hull_leq(s, s)
        if hull_leq(s, t) and hull_leq(t, u):
            assert hull_leq(s, u)
        assert hull_equal(s, ConvexSet(minimize(s.gens)))


def test_convex_bottom_is_least():
    dom = ConvexDomain()
    rng = random.Random(1)
    for _ in range(50):
        d = rand_set(rng, [S0, S1, S2])
        assert dom.leq(dom.bottom(), d)
        assert dom.leq(dom.nd(d, d), d) and dom.leq(d, dom.nd(d, d))


def test_convex_flip_and_assignment():
    dom = ConvexDomain(vmax=2)
    got = dom.interp_action(Flip("x", Fraction(1, 3)), S2)
    assert got == ConvexSet([Dist({S1: Fraction(1, 3), S0: Fraction(2, 3)})])
    # values wrap at vmax + 1
    assert dom.interp_action(Assign("x", Num(3)), S0) == dom.unit(S0)
    assert dom.interp_action(Assign("x", Ref("x")), S1) == dom.unit(S1)


def test_hoare_flip_is_support():
    dom = HoareDomain()
    assert dom.interp_action(Flip("x", HALF), S2) == {S0, S1}
    assert dom.interp_action(Flip("x", Fraction(1)), S2) == {S1}
    assert dom.interp_action(Flip("x", Fraction(0)), S2) == {S0}


def test_assume():
    t = Cmp("=", Ref("x"), Num(1))
    for dom in (HoareDomain(), ConvexDomain()):
        assert dom.interp_action(Assume(t), S1) == dom.unit(S1)
        assert dom.interp_action(Assume(t), S0) == dom.bottom()


def test_errors():
    for dom in (HoareDomain(), ConvexDomain()):
        with pytest.raises(UnknownVariable):
            dom.interp_action(Assign("z", Num(0)), S0)
        with pytest.raises(UninterpretedAction):
            dom.interp_action(Named("a"), S0)
    with pytest.raises(ValueError):
        make_domain("angelic")
    with pytest.raises(ValueError):
        HoareDomain(vmax=0)


def test_convex_bind_of_flip_twice():
    dom = ConvexDomain()
    flip = lambda s: dom.interp_action(Flip("x", HALF), s)
    # the second flip forgets the first
    assert dom.bind(flip, flip(S0)) == flip(S0)
    # a choice after a flip multiplies out
    choose = lambda s: dom.nd(dom.unit(s), dom.unit(S2))
    got = dom.bind(choose, flip(S0))
    want = ConvexSet([
        Dist({S0: HALF, S1: HALF}), Dist({S2: 1}),
        Dist({S0: HALF, S2: HALF}), Dist({S1: HALF, S2: HALF}),
    ])
    assert dom.equal(got, want)


def test_pruned_bind_agrees_with_unpruned():
    rng = random.Random(2)
    states = [S0, S1, S2]
    pruned, raw = ConvexDomain(), ConvexDomain(prune=False)
    for _ in range(60):
        start = rand_set(rng, states)
        images = {s: rand_set(rng, states, 2) for s in states}
        a = pruned.bind(images.__getitem__, start)
        c = raw.bind(images.__getitem__, start)
        assert hull_equal(a, c)


def test_all_states_order():
    got = all_states({"y", "x"}, 1)
    assert [dict(s) for s in got] == [
        {"x": 0, "y": 0}, {"x": 0, "y": 1}, {"x": 1, "y": 0}, {"x": 1, "y": 1},
    ]
