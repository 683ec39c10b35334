import random

from mdsforge.gf2 import ring
from mdsforge.sympoly import (
    SP_ONE,
    SP_ZERO,
    MinorTracker,
    SymMatrix,
    mds_precheck,
    sp_add,
    sp_eval,
    sp_mul,
    sp_mul_param,
    sp_param,
    sp_text,
    sym_det,
)
from mdsforge.blockmat import MinorTracker as RingTracker


def test_characteristic_two_cancellation():
    p = sp_add(sp_param(1), sp_param(2))
    assert sp_add(p, p) == SP_ZERO


def test_freshman_dream():
    a, b = sp_param(1), sp_param(2)
    s = sp_add(a, b)
    sq = sp_mul(s, s)
    assert sq == sp_add(sp_mul(a, a), sp_mul(b, b))


def test_commutativity():
    a, b = sp_param(1), sp_param(2)
    assert sp_add(sp_mul(a, b), sp_mul(b, a)) == SP_ZERO


def test_exponents_not_reduced():
    a = sp_param(1)
    assert sp_mul(a, a) != a


def test_det_2x2():
    a, b, c, d = (sp_param(i) for i in range(1, 5))
    m = SymMatrix([[a, b], [c, d]])
    assert sym_det(m) == sp_add(sp_mul(a, d), sp_mul(b, c))


def test_det_equal_rows_is_zero():
    a, b = sp_param(1), sp_param(2)
    m = SymMatrix([[a, b], [a, b]])
    assert sym_det(m) == SP_ZERO


def test_generic_chain_row_minors_nonzero():
    # t1 = a1 x1 + a2 x2; t2 = a3 t1 + a4 x3; y1 = a5 t2 + a6 x4
    a = {i: sp_param(i) for i in range(1, 7)}
    row = (
        sp_mul(a[1], sp_mul(a[3], a[5])),
        sp_mul(a[2], sp_mul(a[3], a[5])),
        sp_mul(a[4], a[5]),
        a[6],
    )
    assert mds_precheck(SymMatrix([row]))


def test_structurally_missing_input_fails():
    row = (sp_param(1), sp_param(2), SP_ZERO, sp_param(3))
    assert not mds_precheck(SymMatrix([row]))


def test_second_row_from_both_children_fails():
    # y1 = a1 u + a2 v, y2 = a3 u + a4 v with u spanning two inputs:
    # the 2x2 minor on u's columns cancels mod 2.
    b1, b2 = sp_param(11), sp_param(12)
    u = (b1, b2, SP_ZERO)
    v = (SP_ZERO, SP_ZERO, SP_ONE)
    def comb(c1, c2):
        return tuple(sp_add(sp_mul_param(x, c1), sp_mul_param(y, c2))
                     for x, y in zip(u, v))
    y1 = comb(1, 2)
    y2 = comb(3, 4)
    assert mds_precheck(SymMatrix([y1]))
    assert not mds_precheck(SymMatrix([y1, y2]))


def test_precheck_invariant_under_permutation():
    a = {i: sp_param(i) for i in range(1, 9)}
    rows = [
        (a[1], a[2], a[3]),
        (a[4], a[5], sp_add(a[1], a[6])),
        (a[7], sp_mul(a[1], a[2]), a[8]),
    ]
    base = mds_precheck(SymMatrix(rows))
    assert mds_precheck(SymMatrix(rows[::-1])) == base
    flipped = [r[::-1] for r in rows]
    assert mds_precheck(SymMatrix(flipped)) == base


def test_eval_homomorphism_against_ring_det():
    rng = random.Random(3)
    r = ring("x^4+x+1")
    for _ in range(60):
        rows = [[sp_param(rng.randrange(1, 7)) for _ in range(2)] for _ in range(2)]
        values = {i: rng.randrange(1, 16) for i in range(1, 7)}
        symbolic = sym_det(SymMatrix(rows))
        concrete = sp_eval(symbolic, r, values)
        a = sp_eval(rows[0][0], r, values)
        b = sp_eval(rows[0][1], r, values)
        c = sp_eval(rows[1][0], r, values)
        d = sp_eval(rows[1][1], r, values)
        assert concrete == r.mul(a, d) ^ r.mul(b, c)


def test_tracker_matches_full_precheck():
    rng = random.Random(5)
    for _ in range(40):
        rows = [
            tuple(sp_param(rng.randrange(1, 5)) if rng.random() < 0.8 else SP_ZERO
                  for _ in range(3))
            for _ in range(2)
        ]
        tracker = MinorTracker(3)
        incremental = all(tracker.add_row(row) for row in rows)
        assert incremental == mds_precheck(SymMatrix(rows))


def test_text_rendering():
    a1 = sp_param(1)
    assert sp_text(SP_ZERO) == "0"
    assert sp_text(SP_ONE) == "1"
    assert sp_text(sp_mul(a1, a1)) == "a1^2"
    assert sp_text(sp_add(sp_mul(sp_param(3), sp_param(7)), SP_ONE)) == "1 + a3*a7"
