import random
from fractions import Fraction

import pytest

from koszuldual.exact_linalg import (
    PolyRing,
    Poly,
    PrimeField,
    QQ,
    RingMismatch,
    expand_in_degree,
    kernel_rows,
    kernel_slice,
    poly_arith,
    rref,
    solve_rows,
    solve_slice,
)


def ring_qq(*names):
    return PolyRing(names, characteristic=0)


def test_difference_of_squares_over_qq():
    R = ring_qq("x", "y")
    x, y = R.variable("x"), R.variable("y")
    assert poly_arith(x + y, x - y, "mul") == x * x - y * y


def test_multiplication_by_zero_gives_empty_term_map():
    R = ring_qq("x")
    x = R.variable("x")
    z = poly_arith(x, R.zero(), "mul")
    assert z.is_zero() and z.terms == {}


def test_freshman_dream_in_characteristic_two():
    R = PolyRing(["x", "y"], characteristic=2)
    x, y = R.variable("x"), R.variable("y")
    assert (x + y) * (x + y) == x * x + y * y


def test_mixed_ring_descriptors_raise():
    a = ring_qq("x").variable("x")
    b = ring_qq("y").variable("y")
    with pytest.raises(RingMismatch):
        poly_arith(a, b, "add")


def test_rationals_lowest_terms_positive_denominator():
    R = ring_qq("x")
    p = R.constant(Fraction(4, -6))
    (c,) = p.terms.values()
    assert c == Fraction(-2, 3) and c.denominator == 3


def test_homogeneous_degree_and_weights():
    R = PolyRing(["x", "y"], characteristic=0, weights=(1, 2))
    x, y = R.variable("x"), R.variable("y")
    assert (x * x).degree() == 2
    assert y.degree() == 2
    assert (x * x + y).degree() == 2


# -- expand_in_degree ---------------------------------------------------------


def test_slice_of_multiplication_by_x():
    R = ring_qq("x")
    x = R.variable("x")
    # source generator of internal degree 1, target of degree 0, entry x
    sl = expand_in_degree(R, [1], [0], [{0: x}], 3)
    assert sl.col_basis == [((2,), 0)]
    assert sl.row_basis == [((3,), 0)]
    assert sl.entries == {(0, 0): Fraction(1)}


def test_slice_of_zero_map_has_forced_shape():
    R = ring_qq("x", "y")
    sl = expand_in_degree(R, [1], [0], [{}], 2)
    assert sl.ncols == 2 and sl.nrows == 3 and sl.entries == {}


def test_koszul_d1_slice_in_degree_two():
    R = ring_qq("x", "y")
    x, y = R.variable("x"), R.variable("y")
    # d1 = (x^2, y^2): two degree-2 generators onto Q
    sl = expand_in_degree(R, [2, 2], [0], [{0: x * x}, {0: y * y}], 2)
    assert sl.ncols == 2 and sl.nrows == 3
    rows = {tuple(m): i for (m, _), i in zip(sl.row_basis, range(sl.nrows))}
    cols = {gi: ci for ci, (_, gi) in enumerate(sl.col_basis)}
    assert sl.entries == {
        (rows[(2, 0)], cols[0]): Fraction(1),
        (rows[(0, 2)], cols[1]): Fraction(1),
    }


def test_non_homogeneous_entry_rejected():
    from koszuldual.exact_linalg import NotHomogeneous

    R = ring_qq("x")
    x = R.variable("x")
    with pytest.raises(NotHomogeneous):
        expand_in_degree(R, [0], [0], [{0: x + R.one()}], 2)


# -- solving and kernels --------------------------------------------------------


def test_solve_identity():
    sol = solve_rows([{0: Fraction(1)}, {1: Fraction(1)}], {0: Fraction(1)}, QQ)
    assert sol == {0: Fraction(1)}


def test_solve_underdetermined_uses_zero_free_variables():
    sol = solve_rows([{0: Fraction(1), 1: Fraction(1)}], {0: Fraction(1)}, QQ)
    assert sol == {0: Fraction(1)}  # (1, 0)


def test_solve_inconsistent_returns_none():
    assert solve_rows([{}], {0: Fraction(1)}, QQ) is None


def test_kernel_of_identity_is_empty():
    assert kernel_rows([{0: Fraction(1)}, {1: Fraction(1)}], 2, QQ) == []


def test_kernel_of_zero_matrix_is_standard_basis():
    ker = kernel_rows([], 3, QQ)
    assert ker == [{0: Fraction(1)}, {1: Fraction(1)}, {2: Fraction(1)}]


def test_kernel_of_one_one_matrix():
    ker = kernel_rows([{0: Fraction(1), 1: Fraction(1)}], 2, QQ)
    assert ker == [{0: Fraction(1), 1: Fraction(-1)}]


def test_solve_back_multiplication_always_checks():
    rng = random.Random(7)
    F = PrimeField(101)
    for _ in range(40):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
        rows = [
            {c: F.of(rng.randint(0, 100)) for c in range(ncols) if rng.random() < 0.6}
            for _ in range(nrows)
        ]
        x = {c: F.of(rng.randint(0, 100)) for c in range(ncols)}
        rhs = {}
        for i, row in enumerate(rows):
            s = 0
            for c, v in row.items():
                s = F.add(s, F.mul(v, x.get(c, 0)))
            if not F.is_zero(s):
                rhs[i] = s
        sol = solve_rows(rows, rhs, F)
        assert sol is not None
        for i, row in enumerate(rows):
            s = 0
            for c, v in row.items():
                s = F.add(s, F.mul(v, sol.get(c, 0)))
            assert s == rhs.get(i, 0)


def test_kernel_vectors_satisfy_matrix_times_v_zero_and_count():
    rng = random.Random(11)
    F = PrimeField(32003)
    for _ in range(30):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        rows = [
            {c: F.of(rng.randint(0, 9)) for c in range(ncols) if rng.random() < 0.5}
            for _ in range(nrows)
        ]
        rows = [{c: v for c, v in r.items() if v} for r in rows]
        ker = kernel_rows(rows, ncols, F)
        rank = len(rref([dict(r) for r in rows], F))
        assert len(ker) == ncols - rank
        for v in ker:
            for row in rows:
                s = 0
                for c, val in row.items():
                    s = F.add(s, F.mul(val, v.get(c, 0)))
                assert F.is_zero(s)


# -- functoriality of slices ---------------------------------------------------


def random_homogeneous_matrix(rng, ring, src_degrees, tgt_degrees):
    cols = []
    for sd in src_degrees:
        col = {}
        for ti, td in enumerate(tgt_degrees):
            if sd - td < 0 or rng.random() < 0.3:
                continue
            terms = {}
            for m in ring.monomials_of_degree(sd - td):
                c = rng.randint(0, 4)
                if c:
                    terms[m] = ring.field.of(c)
            if terms:
                col[ti] = Poly(ring, terms)
        cols.append(col)
    return cols


def compose_columns(ring, outer_cols, inner_cols):
    out = []
    for col in inner_cols:
        acc: dict = {}
        for mid, p in col.items():
            for t, q in outer_cols[mid].items():
                r = acc.get(t, ring.zero()) + q * p
                acc[t] = r
        out.append({t: p for t, p in acc.items() if not p.is_zero()})
    return out


def slice_matmul(field, a, b):
    # prod[r,c] = sum_k a[r,k] b[k,c]
    a_by_col = a.cols_as_dicts()
    out = {}
    for c, bc in enumerate(b.cols_as_dicts()):
        acc: dict = {}
        for k, bv in bc.items():
            for r, av in a_by_col[k].items():
                acc[r] = field.add(acc.get(r, field.zero), field.mul(av, bv))
        for r, v in acc.items():
            if not field.is_zero(v):
                out[(r, c)] = v
    return out


def test_slice_functoriality_on_random_composites():
    rng = random.Random(3)
    ring = PolyRing(["x", "y", "z"], characteristic=32003)
    for _ in range(15):
        a_deg = [rng.randint(0, 2) for _ in range(rng.randint(1, 3))]
        b_deg = [d + rng.randint(0, 2) for d in [rng.choice(a_deg)] * rng.randint(1, 3)]
        c_deg = [d + rng.randint(0, 2) for d in [rng.choice(b_deg)] * rng.randint(1, 2)]
        n = random_homogeneous_matrix(rng, ring, c_deg, b_deg)  # inner: C -> B
        m = random_homogeneous_matrix(rng, ring, b_deg, a_deg)  # outer: B -> A
        mn = compose_columns(ring, m, n)
        for d in range(0, 5):
            s_m = expand_in_degree(ring, b_deg, a_deg, m, d)
            s_n = expand_in_degree(ring, c_deg, b_deg, n, d)
            s_mn = expand_in_degree(ring, c_deg, a_deg, mn, d)
            assert s_mn.entries == slice_matmul(ring.field, s_m, s_n)


def test_determinism_bit_identical_reruns():
    ring = PolyRing(["x", "y"], characteristic=32003)
    x, y = ring.variable("x"), ring.variable("y")
    cols = [{0: x * x + y * y}, {0: x * y}]

    def run():
        sl = expand_in_degree(ring, [2, 2], [0], cols, 4)
        ker = kernel_slice(sl)
        sol = solve_slice(sl, {0: ring.field.one})
        return (sl.row_basis, sl.col_basis, sorted(sl.entries.items()), ker, sol)

    assert run() == run()
