from fractions import Fraction

from conftest import polys, ring, spec

from koszuldual.ainfinity import (
    cyclic_transfer,
    transfer_ainf_algebra,
)
from koszuldual.coalgebras import (
    bar_construction,
    check_strict_presentation,
    coalgebra_is_minimal,
    detect_presentation,
    priddy_coalgebra,
    quadratic_dual,
    quotient_algebra_dims,
    verify_curved_identities,
    word_hdeg,
    QuadraticPresentation,
    _ci_presentation,
    _golod_presentation,
)
from koszuldual.complexes import ChainComplex
from koszuldual.exact_linalg import kernel_rows
from koszuldual.resolutions import koszul_complex, minimal_free_resolution


def koszul_structure(names, gens, char=32003, arity=4, internal=12):
    rs = spec(names, gens, char=char)
    cx, prod = koszul_complex(rs.ring, rs.ideal)
    struct = transfer_ainf_algebra(cx, arity_bound=arity, internal_bound=internal, seed_product=prod)
    return rs, struct


def test_bar_of_single_koszul_generator():
    rs, struct = koszul_structure("x", ["x^2"])
    C = bar_construction(struct, weight_bound=3, internal_bound=8)
    # B^n spanned by [e|...|e] in homological degree 2n
    for n in range(1, 4):
        assert len(C.basis[n]) == 1
        (vec,) = C.basis[n]
        assert vec.hdeg == 2 * n
        word = next(iter(vec.combo))
        assert not C.coderivation_word(word)
    # curvature h([e]) = x^2
    (vec,) = C.basis[1]
    assert C.curvature_combo(vec.combo) == polys(rs.ring, "x^2")[0]


def test_bar_of_trivial_structure_is_tensor_coalgebra():
    R = ring("x")
    cx = ChainComplex(R)
    cx.add_gen(0, "1", 0)
    cx.add_gen(1, "a", 1)
    from koszuldual.ainfinity import AinfStructure

    struct = AinfStructure(cx, 3, 6)
    C = bar_construction(struct, weight_bound=3)
    ok, _ = verify_curved_identities(C)
    assert ok
    for _, vec in C.vectors():
        assert not C.coderivation_combo(vec.combo)
        assert C.curvature_combo(vec.combo).is_zero()


def test_bar_curved_identities_on_golod_example():
    rs = spec("x y", ["x^2", "x*y"])
    cx = minimal_free_resolution(rs, hdeg_bound=4)
    struct = transfer_ainf_algebra(cx, arity_bound=4, internal_bound=10)
    C = bar_construction(struct, weight_bound=4, internal_bound=10)
    ok, witness = verify_curved_identities(C)
    assert ok, witness


def test_priddy_of_two_squares_is_symmetric_tensors():
    rs, struct = koszul_structure("x y", ["x^2", "y^2"], char=0)
    pres = _ci_presentation(struct)
    assert pres.summand_certificate()
    C = priddy_coalgebra(pres, weight_bound=4, internal_bound=16)
    for n in range(2, 5):
        vecs = C.basis[n]
        assert len(vecs) == n + 1  # rank of Sym^n on two letters
        assert all(v.hdeg == 2 * n for v in vecs)
    ok, witness = verify_curved_identities(C)
    assert ok, witness
    assert coalgebra_is_minimal(C)


def test_priddy_of_golod_presentation_is_bar():
    rs = spec("x y", ["x^2", "x*y"])
    cx = minimal_free_resolution(rs, hdeg_bound=4)
    struct = transfer_ainf_algebra(cx, arity_bound=3, internal_bound=9)
    pres = _golod_presentation(struct)
    C = priddy_coalgebra(pres, weight_bound=3, internal_bound=9)
    B = bar_construction(struct, weight_bound=3, internal_bound=9)
    for n in range(0, 4):
        assert len(C.basis.get(n, [])) == len(B.basis.get(n, []))
    assert coalgebra_is_minimal(C)


def test_priddy_of_burke_matches_series(burke):
    cx = minimal_free_resolution(burke, hdeg_bound=4, internal_bound=8)
    struct, pairing = cyclic_transfer(cx, arity_bound=4, internal_bound=10)
    from koszuldual.coalgebras import _gorenstein_presentation

    pres = _gorenstein_presentation(struct, pairing)
    rep = check_strict_presentation(struct, pres)
    assert rep.ok, rep
    C = priddy_coalgebra(pres, weight_bound=3, internal_bound=9)
    # homological Hilbert series of 1/(1 - 5t^2 - 5t^3 + t^5)
    assert C.rank_by_hdeg(6) == [1, 0, 5, 5, 25, 49, 150]
    assert coalgebra_is_minimal(C)
    ok, witness = verify_curved_identities(C)
    assert ok, witness


def _dual_series_check(pres, C, weight_bound):
    """Ranks of C per weight equal dims of T(V*)/(W-perp) per weight."""
    struct = pres.struct
    field = struct.cx.ring.field
    dual = quadratic_dual(pres)
    perp = dual["perp"]
    pairs = dual["pairs"]
    vkeys = sorted(pres.V)
    from koszuldual.coalgebras import _v_words, _v_tuples
    from koszuldual.exact_linalg import echelon_insert

    jbound = weight_bound * max(struct.jdeg(k) for k in vkeys)
    for n in range(2, weight_bound + 1):
        words = _v_words(struct, vkeys, n, jbound)
        index = {w: i for i, w in enumerate(words)}
        pivots = []
        for i in range(n - 1):
            for prefix in _v_tuples(struct, vkeys, i, jbound):
                for suffix in _v_tuples(struct, vkeys, n - 2 - i, jbound):
                    for kv in perp:
                        vec = {}
                        for pi, c in kv.items():
                            a, b = pairs[pi]
                            word = prefix + (a, b) + suffix
                            if word in index:
                                vec[index[word]] = c
                        if vec:
                            echelon_insert(pivots, vec, field)
        dual_dim = len(words) - len(pivots)
        assert dual_dim == len(C.basis.get(n, [])), n


def test_hilbert_series_duality_ci():
    rs, struct = koszul_structure("x y", ["x^2", "y^2"], char=0)
    pres = _ci_presentation(struct)
    C = priddy_coalgebra(pres, weight_bound=3, internal_bound=12)
    _dual_series_check(pres, C, 3)
    # dual of CI is the polynomial algebra: commutators span W-perp
    dual = quadratic_dual(pres)
    assert len(dual["perp"]) == 1  # c=2: one commutator


def test_hilbert_series_duality_gorenstein(burke):
    cx = minimal_free_resolution(burke, hdeg_bound=4, internal_bound=8)
    struct, pairing = cyclic_transfer(cx, arity_bound=3, internal_bound=9)
    from koszuldual.coalgebras import _gorenstein_presentation

    pres = _gorenstein_presentation(struct, pairing)
    dual = quadratic_dual(pres)
    # noncommutative hypersurface: a single dual relation
    assert len(dual["perp"]) == 1
    C = priddy_coalgebra(pres, weight_bound=3, internal_bound=9)
    _dual_series_check(pres, C, 3)


def test_strictness_ci_golod_and_broken_w():
    rs, struct = koszul_structure("x y z", ["x^2", "y^2", "z^2"], char=0)
    pres = _ci_presentation(struct)
    assert check_strict_presentation(struct, pres).ok
    # deliberately wrong W: drop one spanning tensor
    broken = QuadraticPresentation(
        struct, pres.V, pres.W[:-1], pres.complement, pres.expected_product, "broken"
    )
    assert not check_strict_presentation(struct, broken).ok


def test_detect_presentation_per_class(burke):
    rs, struct = koszul_structure("x y z", ["x^2", "y^2", "z^2"], char=0)
    pres, failed = detect_presentation(struct, {"regular_sequence": True}, "auto")
    assert pres is not None and pres.label == "CI"

    rsg = spec("x y", ["x^2", "x*y"])
    cxg = minimal_free_resolution(rsg, hdeg_bound=4)
    structg = transfer_ainf_algebra(cxg, arity_bound=3, internal_bound=9)
    presg, _ = detect_presentation(structg, {"golod": True}, "auto")
    assert presg is not None and presg.label == "Golod"

    cxb = minimal_free_resolution(burke, hdeg_bound=4, internal_bound=8)
    structb, pairingb = cyclic_transfer(cxb, arity_bound=3, internal_bound=9)
    presb, failures = detect_presentation(
        structb, {"gorenstein": True}, "auto", pairing=pairingb
    )
    assert presb is not None and presb.label == "Gorenstein", failures

    none_pres, reports = detect_presentation(structg, {}, "auto")
    assert none_pres is None and len(reports) >= 2


def test_rank_bookkeeping_of_presentations(burke):
    rs, struct = koszul_structure("x y z", ["x^2", "y^2", "z^2"], char=0)
    pres = _ci_presentation(struct)
    assert pres.rank_check()
    cxb = minimal_free_resolution(burke, hdeg_bound=4, internal_bound=8)
    structb, pairingb = cyclic_transfer(cxb, arity_bound=3, internal_bound=9)
    from koszuldual.coalgebras import _gorenstein_presentation

    presb = _gorenstein_presentation(structb, pairingb)
    assert presb.rank_check()
