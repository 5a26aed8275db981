import random

from conftest import polys, random_monomial_ideal, ring, spec

from koszuldual.complexes import homology_ranks, minimize, verify_complex
from koszuldual.resolutions import (
    BettiTable,
    dominant_test,
    koszul_complex,
    minimal_free_resolution,
    resolve_over_quotient,
    taylor_resolution,
)


def test_koszul_complex_shape_and_signs():
    R = ring("x y")
    cx, _ = koszul_complex(R, polys(R, "x^2", "y^2"))
    assert cx.total_ranks() == [1, 2, 1]
    # d(e12) = x^2 e2 - y^2 e1   (index 0 is e1, index 1 is e2)
    x2, y2 = polys(R, "x^2", "y^2")
    assert cx.diff[2][0] == {0: -y2, 1: x2}


def test_koszul_complex_empty_sequence_is_the_ring():
    R = ring("x")
    cx, _ = koszul_complex(R, [])
    assert cx.total_ranks() == [1]
    assert verify_complex(cx).ok


def test_koszul_three_squares_acyclic():
    R = ring("x y z")
    cx, _ = koszul_complex(R, polys(R, "x^2", "y^2", "z^2"))
    assert cx.total_ranks() == [1, 3, 3, 1]
    h = homology_ranks(cx, 8)
    assert all(i == 0 for (i, _) in h)


def test_koszul_product_leibniz_and_commutativity():
    R = ring("x y z")
    cx, prod = koszul_complex(R, polys(R, "x^2", "y^3", "z^2"))
    _check_dg_product(cx, prod)


def test_taylor_shape_signs_and_dominance():
    R = ring("x y z")
    cx, _, cert = taylor_resolution(R, polys(R, "x*y", "y*z"))
    assert cx.total_ranks() == [1, 2, 1]
    # d(e12) = z e1 - x e2
    z, x = polys(R, "z", "x")
    assert cx.diff[2][0] == {0: z, 1: -x}
    assert cert["dominant"]


def test_taylor_dominant_example_from_six_variables():
    R = ring("a b c d e f")
    gens = polys(R, "a*b*c", "c*d", "a*e", "a*c*f")
    cx, _, cert = taylor_resolution(R, gens)
    assert cert["dominant"]
    assert cx.total_ranks() == [1, 4, 6, 4, 1]
    assert verify_complex(cx).minimal


def test_taylor_triangle_not_dominant():
    R = ring("x y z")
    ok, info = dominant_test(R, polys(R, "x*y", "y*z", "z*x"))
    assert not ok and "failing_generator" in info


def test_dominance_witnesses_for_x2_xy():
    R = ring("x y")
    ok, info = dominant_test(R, polys(R, "x^2", "x*y"))
    assert ok
    assert info["witnesses"] == [("x", 2), ("y", 1)]


def _check_dg_product(cx, prod, rng=None):
    R = cx.ring
    # graded commutativity and Leibniz on all generator pairs
    for i in cx.degrees_present():
        for a in range(cx.rank(i)):
            for j in cx.degrees_present():
                for b in range(cx.rank(j)):
                    ab = prod.value((i, a), (j, b))
                    ba = prod.value((j, b), (i, a))
                    sgn = -1 if (i * j) % 2 else 1
                    flipped = {t: p.scale(sgn) for t, p in ba.items()}
                    assert ab == flipped, f"commutativity fails at {(i, a, j, b)}"
                    # Leibniz: d(ab) = (da)b + (-1)^i a(db)
                    dab = cx.apply_diff(i + j, ab)
                    da = cx.apply_diff(i, {a: R.one()})
                    db = cx.apply_diff(j, {b: R.one()})
                    lhs = prod.mul(i - 1, da, j, {b: R.one()})
                    rhs = prod.mul(i, {a: R.one()}, j - 1, db)
                    total = dict(lhs)
                    for t, p in rhs.items():
                        q = total.get(t, R.zero()) + p.scale(-1 if i % 2 else 1)
                        total[t] = q
                    total = {t: p for t, p in total.items() if not p.is_zero()}
                    assert dab == total, f"Leibniz fails at {(i, a, j, b)}"


def test_taylor_dg_product_on_random_monomial_ideals(rng):
    for _ in range(8):
        rs = random_monomial_ideal(rng, nvars=3, max_gens=4, max_deg=3)
        if not rs.ideal:
            continue
        cx, prod, _ = taylor_resolution(rs.ring, rs.ideal)
        assert verify_complex(cx).ok
        _check_dg_product(cx, prod)


def test_mfr_burke_gorenstein_ranks(burke):
    cx = minimal_free_resolution(burke, hdeg_bound=5, internal_bound=8)
    assert cx.total_ranks() == [1, 5, 5, 1]
    rep = verify_complex(cx)
    assert rep.ok and rep.minimal


def test_mfr_x2_xy_matches_taylor():
    rs = spec("x y", ["x^2", "x*y"])
    cx = minimal_free_resolution(rs, hdeg_bound=4)
    assert cx.total_ranks() == [1, 2, 1]
    assert verify_complex(cx).minimal


def test_mfr_h0_hilbert_matches_monomial_count(rng):
    for _ in range(6):
        rs = random_monomial_ideal(rng, nvars=3, max_gens=4, max_deg=3)
        if not rs.ideal:
            continue
        cx = minimal_free_resolution(rs, hdeg_bound=5, internal_bound=9)
        rep = verify_complex(cx)
        assert rep.ok and rep.minimal
        h = homology_ranks(cx, 6)
        hf = rs.quotient().hilbert(6)
        assert [h.get((0, j), 0) for j in range(7)] == hf
        assert all(i == 0 for (i, _) in h)


def test_mfr_agrees_with_taylor_then_minimize(rng):
    for _ in range(6):
        rs = random_monomial_ideal(rng, nvars=3, max_gens=5, max_deg=3)
        if not rs.ideal:
            continue
        cx = minimal_free_resolution(rs, hdeg_bound=6, internal_bound=12)
        tay, _, _ = taylor_resolution(rs.ring, rs.ideal)
        m = minimize(tay)
        assert BettiTable.of_complex(cx).totals() == [r for r in m.total_ranks() if True]


def test_taylor_dominance_implies_already_minimal(rng):
    found = 0
    for _ in range(20):
        rs = random_monomial_ideal(rng, nvars=3, max_gens=4, max_deg=3)
        if not rs.ideal:
            continue
        cx, _, cert = taylor_resolution(rs.ring, rs.ideal)
        if cert["dominant"]:
            found += 1
            m = minimize(cx)
            assert m.total_ranks() == cx.total_ranks()
    assert found >= 3


def test_resolve_k_over_hypersurface():
    rs = spec("x", ["x^2"])
    cx, betti = resolve_over_quotient(rs, hdeg_bound=6)
    assert betti.totals() == [1, 1, 1, 1, 1, 1, 1]


def test_resolve_k_over_golod_example_is_fibonacci():
    rs = spec("x y", ["x^2", "x*y"])
    _, betti = resolve_over_quotient(rs, hdeg_bound=5)
    assert betti.totals() == [1, 2, 3, 5, 8, 13]


def test_resolve_k_over_ci_is_arithmetic():
    rs = spec("x y", ["x^2", "y^2"])
    _, betti = resolve_over_quotient(rs, hdeg_bound=5)
    assert betti.totals() == [1, 2, 3, 4, 5, 6]


def test_resolution_over_quotient_is_complex_and_minimal():
    rs = spec("x y", ["x^2", "x*y"])
    cx, _ = resolve_over_quotient(rs, hdeg_bound=4)
    rep = verify_complex(cx)
    assert rep.ok and rep.minimal


def test_betti_table_symmetry_for_burke(burke):
    cx = minimal_free_resolution(burke, hdeg_bound=5, internal_bound=8)
    bt = BettiTable.of_complex(cx)
    assert bt.gorenstein_symmetric()
    assert bt.csv().splitlines()[0].startswith("internal")
