"""Truncated power series with exact rational coefficients.

Used for Poincare-series arithmetic: every comparison is coefficientwise
through a stated bound, and every report records that bound.
"""

from __future__ import annotations

from fractions import Fraction


class TruncSeries:
    """Coefficients c_0..c_bound as exact rationals."""

    def __init__(self, coeffs, bound=None):
        coeffs = [Fraction(c) for c in coeffs]
        if bound is not None:
            coeffs = coeffs[: bound + 1] + [Fraction(0)] * (bound + 1 - len(coeffs))
        self.coeffs = coeffs

    @property
    def bound(self):
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, bound):
        return cls([0] * (bound + 1))

    @classmethod
    def one(cls, bound):
        return cls([1] + [0] * bound)

    @classmethod
    def t_power(cls, k, bound):
        c = [0] * (bound + 1)
        if k <= bound:
            c[k] = 1
        return cls(c)

    @classmethod
    def from_dict(cls, d, bound):
        c = [Fraction(0)] * (bound + 1)
        for k, v in d.items():
            if 0 <= k <= bound:
                c[k] += v
        return cls(c)

    def __add__(self, other):
        b = min(self.bound, other.bound)
        return TruncSeries([self.coeffs[i] + other.coeffs[i] for i in range(b + 1)])

    def __sub__(self, other):
        b = min(self.bound, other.bound)
        return TruncSeries([self.coeffs[i] - other.coeffs[i] for i in range(b + 1)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries([c * other for c in self.coeffs])
        b = min(self.bound, other.bound)
        out = [Fraction(0)] * (b + 1)
        for i, a in enumerate(self.coeffs[: b + 1]):
            if a == 0:
                continue
            for j in range(0, b + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return TruncSeries(out)

    def __truediv__(self, other):
        """Division by a series with invertible constant term."""
        b = min(self.bound, other.bound)
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("series division needs a unit constant term")
        inv0 = Fraction(1) / other.coeffs[0]
        out = [Fraction(0)] * (b + 1)
        for n in range(b + 1):
            s = self.coeffs[n]
            for k in range(1, n + 1):
                s -= other.coeffs[k] * out[n - k]
            out[n] = s * inv0
        return TruncSeries(out)

    def truncate(self, bound):
        return TruncSeries(self.coeffs, bound)

    def eq_through(self, other, bound) -> bool:
        b = min(self.bound, other.bound, bound)
        return self.coeffs[: b + 1] == other.coeffs[: b + 1]

    def leq_through(self, other, bound):
        """Coefficientwise <=; returns (holds, first failing degree or None)."""
        b = min(self.bound, other.bound, bound)
        for i in range(b + 1):
            if self.coeffs[i] > other.coeffs[i]:
                return False, i
        return True, None

    def first_difference(self, other, bound):
        b = min(self.bound, other.bound, bound)
        for i in range(b + 1):
            if self.coeffs[i] != other.coeffs[i]:
                return i
        return None

    def ints(self):
        return [int(c) if c.denominator == 1 else c for c in self.coeffs]

    def __repr__(self):
        return f"TruncSeries({self.ints()})"


def binomial_series(e: int, bound: int) -> TruncSeries:
    """(1+t)^e truncated."""
    out = TruncSeries.one(bound)
    one_plus_t = TruncSeries([1, 1], bound)
    for _ in range(e):
        out = out * one_plus_t
    return out


def serre_bound_series(pq_M: TruncSeries, pq_R: TruncSeries, bound: int) -> TruncSeries:
    """P^Q_M / (1 - t (P^Q_R - 1)) truncated."""
    pq_M = pq_M.truncate(bound)
    shifted = TruncSeries([0] + [c for c in (pq_R.coeffs[1:])], bound)
    denom = TruncSeries.one(bound) - shifted
    return pq_M / denom


def poly_identity(lhs_coeffs: dict, rhs_coeffs: dict) -> bool:
    """Exact equality of polynomials given as {degree: coefficient}."""
    a = {k: Fraction(v) for k, v in lhs_coeffs.items() if v}
    b = {k: Fraction(v) for k, v in rhs_coeffs.items() if v}
    return a == b


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, Fraction(0)) + Fraction(x) * Fraction(y)
    return {k: v for k, v in out.items() if v}
