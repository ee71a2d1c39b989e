import random
from fractions import Fraction

import pytest

import builders as b
from pomsetsem import ops
from pomsetsem.corpus import generate
from pomsetsem.lang import (
    Act, If, Par, ProgramSyntaxError, Seq, Skip, While, check_binary_branching, denote, loop_iterates,
    loop_step, parse, program_vars, size,
)
from pomsetsem.lpof import BOT, FORK, Lpof
from pomsetsem.pomset import BOTTOM, Pomset, le_pom
from pomsetsem.terms import Add, Assign, Cmp, Flip, Named, Num, Ref, TNot, TVar


def test_parse_skip_and_actions():
    assert parse("skip") == Skip()
    assert parse("x := y + 1") == Act(Assign("x", Add(Ref("y"), Num(1))))
    assert parse("x ~ flip(1/3)") == Act(Flip("x", Fraction(1, 3)))
    assert parse("a") == Act(Named("a"))


def test_parse_flip_race_program():
    c = parse("x ~ flip(1/2); (if x=1 { y:=0 } else { y:=1 } || y:=2)")
    want = Seq(
        Act(Flip("x", Fraction(1, 2))),
        Par(
            If(Cmp("=", Ref("x"), Num(1)), Act(Assign("y", Num(0))), Act(Assign("y", Num(1)))),
            Act(Assign("y", Num(2))),
        ),
    )
    assert c == want


def test_parse_loop_then_action():
    assert parse("while b { a }; a2") == Seq(While(TVar("b"), Act(Named("a"))), Act(Named("a2")))


def test_precedence_and_associativity():
    # ';' binds tighter than '||', and both nest to the right
    assert parse("a; b || c") == Par(Seq(Act(Named("a")), Act(Named("b"))), Act(Named("c")))
    assert parse("a; b; c") == Seq(Act(Named("a")), Seq(Act(Named("b")), Act(Named("c"))))
    assert parse("a || b || c") == Par(Act(Named("a")), Par(Act(Named("b")), Act(Named("c"))))


def test_test_syntax():
    c = parse("if !(x = 1) & (y < 2 | x >= 1) { skip } else { skip }")
    assert isinstance(c.test.left, TNot)
    assert parse("if x > 1 { skip } else { skip }").test == Cmp("<", Num(1), Ref("x"))


def test_comments_and_whitespace():
    assert parse("# set x\n  x :=\n 1  # done\n") == Act(Assign("x", Num(1)))


@pytest.mark.parametrize("text, line, col", [
    ("x := ", 1, 6),
    ("skip;\nif x { skip }", 2, 14),
    ("x ~ flip(3/2)", 1, 10),
    ("while { skip }", 1, 7),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(ProgramSyntaxError) as info:
        parse(text)
    assert info.value.lineno == line
    assert info.value.offset == col


def test_printing_round_trips():
    for c in generate(0, 40, "any"):
        assert parse(str(c)) == c


def test_program_vars_and_size():
    c = parse("x := y + 1; while x < 2 { z ~ flip(1/2) }")
    assert program_vars(c) == {"x", "y", "z"}
    assert size(c) == 4


# -- denotation -------------------------------------------------------------------------

def test_denote_skip_and_action():
    assert denote(Skip(), 3) == ops.singleton(FORK)
    assert denote(parse("a"), 0) == ops.singleton(b.act("a"))


def test_denote_loop_iterates():
    loop = parse("while b { a }")
    assert denote(loop, 0) == BOTTOM
    one = denote(loop, 1).lpof
    # test at the root, ⊥ after the body on the true side, fork on the false side
    assert len(one.nodes) == 4
    assert one.labels[one.root].is_test
    kinds = sorted(one.labels[x].kind for x in one.nodes)
    assert kinds == ["action", "bot", "fork", "test"]
    assert le_pom(denote(loop, 1), denote(loop, 2))


def test_denote_flip_race_shape():
    alpha = denote(parse("x ~ flip(1/2); (if x = 1 { y := 0 } else { y := 1 } || y := 2)"), 1).lpof
    root = alpha.root
    assert alpha.labels[root].is_action
    (fork,) = alpha.succ(root)
    assert alpha.labels[fork] == FORK
    kids = sorted(alpha.labels[x].kind for x in alpha.succ(fork))
    assert kids == ["action", "test"]
    assert len(alpha.nodes) == 6


def test_loop_with_continuation_has_one_copy_per_exit():
    for n in range(1, 5):
        alpha = denote(parse("while b { a }; a2"), n).lpof
        copies = [x for x in alpha.nodes if alpha.labels[x] == b.act("a2")]
        assert len(copies) == n


def test_denotations_grow_with_depth_and_stay_binary():
    for c in generate(2, 25, "any", max_loops=2):
        prev = None
        for n in range(0, 4):
            cur = denote(c, n)
            assert check_binary_branching(cur)
            if prev is not None:
                assert le_pom(prev, cur)
            prev = cur


def test_loop_free_programs_ignore_depth():
    for c in generate(3, 10, "loop-free-seq"):
        assert denote(c, 0) == denote(c, 3)


def test_loop_step_is_monotone():
    rng = random.Random(0)
    body = denote(parse("x := x + 1"), 0)
    for _ in range(20):
        alpha, beta = b.random_ordered_pair(rng)
        assert le_pom(loop_step(TVar("t"), body, Pomset(alpha)), loop_step(TVar("t"), body, Pomset(beta)))


def test_binary_branching_rejects_lonely_test():
    bad = Lpof({0: b.tst("b"), 1: b.act("a")}, {1: b.v(0)}, [(0, 1)])
    assert not check_binary_branching(bad)
    assert check_binary_branching(ops.singleton(FORK))
    assert check_binary_branching(loop_iterates(TVar("b"), ops.singleton(BOT), 2)[-1])
