"""Numeric certificates for the hypotheses behind the presentation recipes:
regular sequences (Koszul acyclicity), Golod (Serre equality), Gorenstein
(Betti-table duality).  Every certificate is bounded and says so.
"""

from __future__ import annotations

from .complexes import homology_ranks
from .resolutions import (
    BettiTable,
    RingSpec,
    koszul_complex,
    minimal_free_resolution,
    resolve_over_quotient,
)
from .series import TruncSeries, binomial_series, serre_bound_series


def certify_regular_sequence(rs: RingSpec, internal_bound=None) -> bool:
    """Koszul complex acyclic in positive degrees up to the bound."""
    if len(rs.ideal) > rs.ring.nvars:
        return False
    if internal_bound is None:
        internal_bound = 2 * sum(g.degree() for g in rs.ideal)
    cx, _ = koszul_complex(rs.ring, rs.ideal)
    h = homology_ranks(cx, internal_bound)
    return all(i == 0 for (i, _) in h)


def poincare_of_k_over_r(rs: RingSpec, hdeg_bound: int) -> TruncSeries:
    """Ground truth P^R_k(t) from the minimal R-free resolution of k."""
    _, betti = resolve_over_quotient(rs, hdeg_bound=hdeg_bound)
    return TruncSeries(betti.poincare_coefficients(hdeg_bound), hdeg_bound)


def poincare_of_r_over_q(rs: RingSpec, internal_bound=None) -> TruncSeries:
    cx = minimal_free_resolution(
        rs, hdeg_bound=rs.ring.nvars + 1, internal_bound=internal_bound
    )
    bound = rs.ring.nvars + 2
    return TruncSeries(BettiTable.of_complex(cx).poincare_coefficients(bound), bound)


class GolodReport:
    def __init__(self, golod, bound, first_failure=None, actual=None, expected=None):
        self.golod = golod
        self.bound = bound
        self.first_failure = first_failure
        self.actual = actual
        self.expected = expected

    def __bool__(self):
        return self.golod

    def __repr__(self):
        if self.golod:
            return f"golod-through-{self.bound}"
        return f"not-golod (first failure at homological degree {self.first_failure})"


def golod_test(rs: RingSpec, bound: int = 8) -> GolodReport:
    """Serre-bound equality for the residue field, coefficientwise through
    the bound."""
    actual = poincare_of_k_over_r(rs, bound)
    pq_k = binomial_series(rs.embedding_dimension, bound)
    pq_r = poincare_of_r_over_q(rs).truncate(bound)
    expected = serre_bound_series(pq_k, pq_r, bound)
    diff = actual.first_difference(expected, bound)
    if diff is None:
        return GolodReport(True, bound, actual=actual, expected=expected)
    return GolodReport(False, bound, diff, actual, expected)


def certify_gorenstein(rs: RingSpec, internal_bound=None) -> bool:
    """Palindromic Betti table with rank-one top (self-dual resolution)."""
    cx = minimal_free_resolution(
        rs, hdeg_bound=rs.ring.nvars + 1, internal_bound=internal_bound
    )
    if cx.notes:
        return False
    return BettiTable.of_complex(cx).gorenstein_symmetric()
