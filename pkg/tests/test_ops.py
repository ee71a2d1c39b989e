import random

import builders as b
from pomsetsem import formula as fm
from pomsetsem import ops
from pomsetsem.lang import check_binary_branching
from pomsetsem.lpof import BOT, FORK, Lpof, le_lpof, validate
from pomsetsem.pomset import BOTTOM, Pomset, le_pom
from pomsetsem.terms import TVar

W = ops.singleton(b.act("w"))


def branch_formulas(alpha):
    return [br.formula for br in ops.branches(alpha)]


def same_formula_sets(got, want):
    return len(got) == len(want) and all(any(fm.equiv(g, w) for g in got) for w in want)


# -- stuck, extensible, branches ----------------------------------------------------------

def test_stuck_formulas():
    assert fm.equiv(ops.stuck(b.both_left_stuck()), fm.TRUE)
    assert fm.equiv(ops.stuck(b.one_stuck()), b.v(b.Y1))
    assert fm.equiv(ops.stuck(b.none_stuck()), fm.FALSE)


def test_extensible_nodes():
    assert ops.extensible(b.both_left_stuck()) == frozenset()
    assert ops.extensible(b.one_stuck()) == b.one_stuck().nodes - {b.Z1}
    assert ops.extensible(b.none_stuck()) == b.none_stuck().nodes


def test_branches_of_two_tests():
    y1, y2 = b.Y1, b.Y2
    assert ops.branches(b.both_left_stuck()) == []
    assert same_formula_sets(
        branch_formulas(b.one_stuck()),
        [fm.conj(b.n(y1), b.v(y2)), fm.conj(b.n(y1), b.n(y2))],
    )
    assert same_formula_sets(
        branch_formulas(b.none_stuck()),
        [fm.conj(p, q) for p in (b.v(y1), b.n(y1)) for q in (b.v(y2), b.n(y2))],
    )


def test_branch_invariants():
    rng = random.Random(0)
    for _ in range(60):
        alpha = b.random_pomset(rng).lpof
        brs = ops.branches(alpha)
        not_stuck = fm.Not(ops.stuck(alpha))
        for i, br in enumerate(brs):
            assert fm.is_sat(br.formula)
            assert fm.implies(br.formula, not_stuck)
            assert br.nodes == {x for x in alpha.nodes if fm.implies(br.formula, alpha.formulas[x])}
            for other in brs[i + 1:]:
                assert not fm.is_sat(fm.conj(br.formula, other.formula))


def test_branches_match_subset_enumeration():
    rng = random.Random(1)
    for _ in range(60):
        alpha = b.random_pomset(rng, max_size=7).lpof
        if len(ops.extensible(alpha)) > 14:
            continue
        fast = ops.branches(alpha)
        slow = ops.branches(alpha, oracle=True)
        assert same_formula_sets([x.formula for x in fast], [x.formula for x in slow])
        assert sorted(map(sorted, (x.nodes for x in fast))) == sorted(map(sorted, (x.nodes for x in slow)))


def test_branches_shrink_with_the_order():
    rng = random.Random(2)
    for _ in range(60):
        alpha, beta = b.random_ordered_pair(rng)
        not_stuck = fm.Not(ops.stuck(alpha))
        want = [f for f in branch_formulas(beta) if fm.implies(f, not_stuck)]
        assert same_formula_sets(branch_formulas(alpha), want)


# -- constructors ---------------------------------------------------------------------------

def test_singletons():
    assert ops.singleton(BOT) == BOTTOM
    skip = ops.singleton(FORK)
    assert skip.lpof.labels[0] == FORK and skip.lpof.formulas[0] == fm.TRUE


def test_guard_builds_nested_conditional():
    got = ops.guard(TVar("b1"), ops.singleton(b.act("a1")),
                    ops.guard(TVar("b2"), ops.singleton(b.act("a2")), ops.singleton(b.act("a3"))))
    assert got == Pomset(b.nested_conditional())
    assert check_binary_branching(got)


def test_guard_of_bottoms():
    g = ops.guard(TVar("b"), BOTTOM, BOTTOM).lpof
    assert g.labels[g.root].is_test
    assert sorted(g.labels[x].kind for x in g.succ(g.root)) == ["bot", "bot"]


def test_seq_without_branches_is_identity():
    alpha = b.both_left_stuck()
    assert ops.seq(Pomset(alpha), W) == Pomset(alpha)


def test_seq_copies_one_per_branch():
    y1, y2 = b.Y1, b.Y2
    got = ops.seq(Pomset(b.one_stuck()), W)
    want = b.two_tests_then_w([
        (fm.conj(b.n(y1), b.v(y2)), [b.Z2, b.Z3]),
        (fm.conj(b.n(y1), b.n(y2)), [b.Z2, b.Z4]),
    ])
    assert got == Pomset(want)
    got = ops.seq(Pomset(b.none_stuck()), W)
    want = b.two_tests_then_w([
        (fm.conj(b.v(y1), b.v(y2)), [b.Z1, b.Z3]),
        (fm.conj(b.v(y1), b.n(y2)), [b.Z1, b.Z4]),
        (fm.conj(b.n(y1), b.v(y2)), [b.Z2, b.Z3]),
        (fm.conj(b.n(y1), b.n(y2)), [b.Z2, b.Z4]),
    ])
    assert got == Pomset(want)


def test_seq_order_is_full_product_on_each_branch():
    rng = random.Random(3)
    for _ in range(40):
        a, c = b.random_pomset(rng), b.random_pomset(rng)
        alpha = a.lpof
        brs = ops.branches(alpha)
        out = ops.seq(a, c).lpof
        new = out.nodes - alpha.nodes
        assert len(new) == len(brs) * len(c.lpof.nodes)
        for x in new:
            phi = out.formulas[x]
            below = {y for y in alpha.nodes if out.less(y, x)}
            # nodes of alpha below a copy are exactly those its branch reaches
            br = [r for r in brs if fm.implies(phi, r.formula)]
            assert len(br) == 1
            assert below == br[0].nodes


def test_par_flattens_fork_roots():
    def fork_over(*names):
        labels = {0: FORK}
        labels.update({i + 1: b.act(nm) for i, nm in enumerate(names)})
        return Pomset(Lpof(labels, None, [(0, i + 1) for i in range(len(names))]))

    out = ops.par(fork_over("y1", "y2"), fork_over("z1", "z2", "z3")).lpof
    assert out.labels[out.root] == FORK
    assert len(out.succ(out.root)) == 5
    assert len(out.nodes) == 6


def test_par_keeps_non_fork_roots():
    out = ops.par(BOTTOM, ops.singleton(b.act("l"))).lpof
    assert out.labels[out.root] == FORK
    assert sorted(out.labels[x].kind for x in out.succ(out.root)) == ["action", "bot"]


def test_par_is_not_monotone():
    a = BOTTOM
    fork = Pomset(Lpof({0: FORK, 1: b.act("l1"), 2: b.act("l2")}, None, [(0, 1), (0, 2)]))
    other = ops.singleton(b.act("l"))
    assert le_pom(a, fork)
    assert not le_pom(ops.par(a, other), ops.par(fork, other))


def test_algebraic_laws_and_validity():
    rng = random.Random(4)
    for _ in range(40):
        a, c, d = (b.random_pomset(rng, max_size=5) for _ in range(3))
        assert ops.par(a, c) == ops.par(c, a)
        assert ops.par(ops.par(a, c), d) == ops.par(a, ops.par(c, d))
        assert ops.seq(ops.seq(a, c), d) == ops.seq(a, ops.seq(c, d))
        for out in (ops.seq(a, c), ops.par(a, c), ops.guard(TVar("t"), a, c)):
            assert validate(out.lpof) == []
            assert check_binary_branching(out)


def test_guard_and_seq_monotone():
    rng = random.Random(5)
    for _ in range(40):
        alpha, beta = b.random_ordered_pair(rng)
        other = b.random_pomset(rng, max_size=5)
        pa, pb = Pomset(alpha), Pomset(beta)
        assert le_pom(ops.guard(TVar("t"), pa, other), ops.guard(TVar("t"), pb, other))
        assert le_pom(ops.guard(TVar("t"), other, pa), ops.guard(TVar("t"), other, pb))
        assert le_pom(ops.seq(pa, other), ops.seq(pb, other))
        assert le_pom(ops.seq(other, pa), ops.seq(other, pb))


def test_node_ids_leave_inputs_untouched():
    alpha = b.one_stuck()
    before = (alpha.nodes, alpha.covers, dict(alpha.labels))
    ops.seq(Pomset(alpha), W)
    assert (alpha.nodes, alpha.covers, dict(alpha.labels)) == before
    assert le_lpof(alpha, alpha)
