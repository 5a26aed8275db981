import random

from conftest import polys, ring, spec

from koszuldual.complexes import (
    ChainComplex,
    ChainMap,
    homology_ranks,
    homotopy_defect,
    minimize,
    null_homotopy_lift,
    verify_complex,
)
from koszuldual.exact_linalg import Poly
from koszuldual.resolutions import koszul_complex, taylor_resolution


def test_koszul_on_two_squares_verifies_minimal():
    R = ring("x y")
    cx, _ = koszul_complex(R, polys(R, "x^2", "y^2"))
    rep = verify_complex(cx)
    assert rep.ok and rep.minimal


def test_taylor_of_xy_yz_verifies_minimal():
    R = ring("x y z")
    cx, _, cert = taylor_resolution(R, polys(R, "x*y", "y*z"))
    rep = verify_complex(cx)
    assert rep.ok and rep.minimal and cert["dominant"]


def test_dsquared_violation_is_reported_with_location():
    R = ring("x")
    cx = ChainComplex(R)
    cx.add_gen(0, "a", 0)
    cx.add_gen(1, "b", 1)
    cx.add_gen(2, "c", 1)
    cx.set_column(1, 0, {0: R.variable("x")})
    cx.set_column(2, 0, {0: R.one()})
    rep = verify_complex(cx)
    assert not rep.ok
    assert rep.violation[0] == 2


def test_homology_of_koszul_on_regular_sequence():
    R = ring("x y")
    cx, _ = koszul_complex(R, polys(R, "x^2", "y^2"))
    h = homology_ranks(cx, 6)
    assert all(i == 0 for (i, _) in h)
    h0 = [h.get((0, j), 0) for j in range(4)]
    assert h0 == [1, 2, 1, 0]


def test_homology_with_zero_differentials_is_module_ranks():
    R = ring("x")
    cx = ChainComplex(R)
    for i in range(3):
        cx.add_gen(i, f"a{i}", 0)
    h = homology_ranks(cx, 0)
    assert h == {(0, 0): 1, (1, 0): 1, (2, 0): 1}


def test_homology_of_taylor_complex_h0_hilbert():
    R = ring("x y z")
    cx, _, _ = taylor_resolution(R, polys(R, "x*y", "y*z"))
    h = homology_ranks(cx, 4)
    assert [h.get((0, j), 0) for j in range(5)] == [1, 3, 4, 5, 6]
    assert all(i == 0 for (i, j) in h)


def test_minimize_leaves_minimal_complex_unchanged():
    R = ring("x y")
    cx, _ = koszul_complex(R, polys(R, "x^2", "y^2"))
    m = minimize(cx)
    assert m.total_ranks() == cx.total_ranks()
    assert m.diff == cx.diff


def test_minimize_taylor_of_three_quadrics():
    R = ring("x y")
    cx, _, _ = taylor_resolution(R, polys(R, "x^2", "x*y", "y^2"))
    assert cx.total_ranks() == [1, 3, 3, 1]
    m = minimize(cx)
    assert m.total_ranks() == [1, 3, 2]
    rep = verify_complex(m)
    assert rep.ok and rep.minimal
    assert homology_ranks(m, 5) == homology_ranks(cx, 5)


def test_minimize_cancels_adjoined_cone_of_identity():
    R = ring("x")
    cx, _ = koszul_complex(R, polys(R, "x^2"))
    # direct sum with cone(id: Q -> Q) in degrees 1 -> 0
    u = cx.add_gen(1, "u", 0)
    v = cx.add_gen(0, "v", 0)
    cx.set_column(1, u, {v: R.one()})
    m = minimize(cx)
    assert m.total_ranks() == [1, 1]
    assert verify_complex(m).minimal


def test_null_homotopy_of_zero_is_zero():
    R = ring("x")
    cx, _ = koszul_complex(R, polys(R, "x^2"))
    f = ChainMap(cx, cx, 0)
    h = null_homotopy_lift(f)
    assert all(not v for cols in h.cols.values() for v in cols.values())


def test_null_homotopy_of_multiplication_by_fsquare():
    # X = A = K^Q = Koszul complex on x over k[x]; f = x^2 * id has
    # nullhomotopy s with s(1) = x e, since d(x e) = x * x.
    R = ring("x")
    cx, _ = koszul_complex(R, polys(R, "x"))
    x2 = polys(R, "x^2")[0]
    f = ChainMap(cx, cx, 0, jshift=2)
    for i in (0, 1):
        f.set(i, 0, {0: x2})
    h = null_homotopy_lift(f)
    assert not homotopy_defect(f, h)
    assert h.value(0, 0) == {0: R.variable("x")}


def test_null_homotopy_failure_reports_bidegree():
    import pytest

    from koszuldual.complexes import LiftFailure

    R = ring("x")
    cx, _ = koszul_complex(R, polys(R, "x^2"))
    x = R.variable("x")
    f = ChainMap(cx, cx, 0, jshift=1)
    for i in (0, 1):
        f.set(i, 0, {0: x})
    with pytest.raises(LiftFailure) as err:
        null_homotopy_lift(f)
    assert err.value.bidegree[0] in (0, 1)


def test_null_homotopy_on_random_boundaries():
    # 50 randomized cycles of the form dh0 +- h0 d admit lifts with zero defect
    rng = random.Random(5)
    R = ring("x y")
    cx, _ = koszul_complex(R, polys(R, "x^2", "y^2"))
    for _ in range(50):
        d = rng.choice([0, 1])
        h0 = ChainMap(cx, cx, d + 1)
        for i in cx.degrees_present():
            for s in range(cx.rank(i)):
                ti = i + d + 1
                if cx.rank(ti) == 0:
                    continue
                val = {}
                for t in range(cx.rank(ti)):
                    jdiff = cx.gens[i][s].degree - cx.gens[ti][t].degree
                    if jdiff < 0 or rng.random() < 0.4:
                        continue
                    terms = {
                        m: R.field.of(rng.randint(1, 5))
                        for m in R.monomials_of_degree(jdiff)
                        if rng.random() < 0.7
                    }
                    if terms:
                        val[t] = Poly(R, terms)
                h0.set(i, s, val)
        # f = d h0 - (-1)^{|h0|} h0 d is a chain map of degree d that lifts
        sgn = 1 if (d + 1) % 2 == 0 else -1
        f = ChainMap(cx, cx, d)
        for i in cx.degrees_present():
            for s in range(cx.rank(i)):
                lhs = cx.apply_diff(i + d + 1, h0.value(i, s))
                bd = cx.apply_diff(i, {s: R.one()})
                rhs = h0.apply(i - 1, bd)
                val = dict(lhs)
                for t, p in rhs.items():
                    q = val.get(t, R.zero()) - p.scale(sgn)
                    val[t] = q
                    # lhs - sgn * h0(d x)
                val = {t: p for t, p in val.items() if not p.is_zero()}
                f.set(i, s, val)
        h = null_homotopy_lift(f)
        assert not homotopy_defect(f, h)
