"""Exact scalars, sparse multivariate polynomials, and degreewise linear algebra.

Everything downstream (complexes, resolutions, transfer) reduces to the three
primitives at the bottom of this file: expanding a homogeneous polynomial
matrix into a scalar matrix in a single internal degree, solving such a
system, and computing its kernel.  All arithmetic is exact: coefficients live
in a prime field F_p (default p = 32003) or in Q via fractions.Fraction.

Determinism is part of the contract: monomials are ordered by (degree, then
lexicographic on exponent vectors), generator indices break ties, pivoting is
leftmost-first, and free variables in solves are always set to zero.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


# ---------------------------------------------------------------------------
# coefficient fields


class PrimeField:
    """Arithmetic in F_p for a prime p, elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, min(p, 1000)) if q * q <= p):
            raise ValueError(f"characteristic must be prime, got {p}")
        self.char = p

    def of(self, n) -> int:
        if isinstance(n, Fraction):
            return (n.numerator * self.inv(n.denominator % self.char)) % self.char
        return int(n) % self.char

    def add(self, a, b):
        return (a + b) % self.char

    def sub(self, a, b):
        return (a - b) % self.char

    def mul(self, a, b):
        return (a * b) % self.char

    def neg(self, a):
        return (-a) % self.char

    def inv(self, a):
        if a % self.char == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.char - 2, self.char)

    def div(self, a, b):
        return (a * self.inv(b)) % self.char

    zero = 0
    one = 1

    def is_zero(self, a) -> bool:
        return a % self.char == 0

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.char == self.char

    def __hash__(self):
        return hash(("F", self.char))

    def __repr__(self):
        return f"F{self.char}"


class Rationals:
    """Exact rational arithmetic; values are Fraction (lowest terms, den > 0)."""

    char = 0

    def of(self, n) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return Fraction(1) / a

    def div(self, a, b):
        return Fraction(a) / b

    zero = Fraction(0)
    one = Fraction(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = Rationals()
DEFAULT_CHAR = 32003


def field_of_characteristic(p: int):
    return QQ if p == 0 else PrimeField(p)


# ---------------------------------------------------------------------------
# polynomial rings and sparse polynomials
#
# A monomial is a tuple of exponents, one per ring variable.  Internal degree
# is the weighted exponent sum.  Term order: (degree, exponent tuple).


class PolyRing:
    """Descriptor of Q = k[x_1..x_n] with positive integer weights."""

    def __init__(self, names, characteristic: int = DEFAULT_CHAR, weights=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.names)
        self.weights = tuple(weights) if weights is not None else (1,) * self.nvars
        if len(self.weights) != self.nvars or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        self.field = field_of_characteristic(characteristic)
        self.characteristic = characteristic

    def mono_degree(self, mono) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))

    def mono_mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def mono_divides(self, a, b) -> bool:
        """a | b as monomials."""
        return all(x <= y for x, y in zip(a, b))

    def mono_div(self, a, b):
        """a / b as monomials; caller guarantees divisibility."""
        return tuple(x - y for x, y in zip(a, b))

    def mono_key(self, mono):
        return (self.mono_degree(mono), mono)

    def one_mono(self):
        return (0,) * self.nvars

    def var_mono(self, i: int):
        return tuple(1 if j == i else 0 for j in range(self.nvars))

    def monomials_of_degree(self, d: int):
        """All monomials of weighted degree d, in canonical order."""
        return _monomials_of_degree(self.weights, d)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self.one_mono(): self.field.one})

    def variable(self, name: str) -> "Poly":
        i = self.names.index(name)
        return Poly(self, {self.var_mono(i): self.field.one})

    def monomial(self, mono, coeff=1) -> "Poly":
        c = self.field.of(coeff)
        return Poly(self, {tuple(mono): c} if not self.field.is_zero(c) else {})

    def constant(self, c) -> "Poly":
        return self.monomial(self.one_mono(), c)

    def same_as(self, other: "PolyRing") -> bool:
        return (
            self.names == other.names
            and self.weights == other.weights
            and self.field == other.field
        )

    def __repr__(self):
        k = "QQ" if self.characteristic == 0 else f"F{self.characteristic}"
        return f"{k}[{','.join(self.names)}]"


@lru_cache(maxsize=None)
def _monomials_of_degree(weights, d):
    if d < 0:
        return ()
    n = len(weights)

    def rec(i, rem):
        if i == n:
            return [()] if rem == 0 else []
        out = []
        e = 0
        while e * weights[i] <= rem:
            for tail in rec(i + 1, rem - e * weights[i]):
                out.append((e,) + tail)
            e += 1
        return out

    monos = rec(0, d)
    monos.sort()
    return tuple(monos)


class Poly:
    """Sparse polynomial: dict mapping exponent tuple -> nonzero scalar."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ring.same_as(other.ring)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        self._check(other)
        f = self.ring.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(terms.get(m, f.zero), c)
            if f.is_zero(s):
                terms.pop(m, None)
            else:
                terms[m] = s
        return Poly(self.ring, terms)

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        f = self.ring.field
        terms: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = self.ring.mono_mul(ma, mb)
                s = f.add(terms.get(m, f.zero), f.mul(ca, cb))
                if f.is_zero(s):
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.of(c)
        if f.is_zero(c):
            return Poly(self.ring, {})
        return Poly(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def mono_shift(self, mono) -> "Poly":
        """Multiply by a single monomial."""
        return Poly(
            self.ring,
            {self.ring.mono_mul(m, mono): c for m, c in self.terms.items()},
        )

    def _check(self, other):
        if not self.ring.same_as(other.ring):
            raise RingMismatch(f"mixed ring descriptors: {self.ring} vs {other.ring}")

    def coeff(self, mono):
        return self.terms.get(tuple(mono), self.ring.field.zero)

    def constant_term(self):
        return self.terms.get(self.ring.one_mono(), self.ring.field.zero)

    def degree(self):
        """Internal degree if homogeneous, else raise."""
        if not self.terms:
            return None
        degs = {self.ring.mono_degree(m) for m in self.terms}
        if len(degs) > 1:
            raise NotHomogeneous(f"non-homogeneous polynomial {self}")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        try:
            self.degree()
            return True
        except NotHomogeneous:
            return False

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.mono_key(t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == self.ring.field.one:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return "+".join(parts).replace("+-", "-")

    __repr__ = __str__


class RingMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Spec surface for polynomial arithmetic: op in {add, mul, scale}."""
    if op == "scale":
        return a.scale(b)
    if not a.ring.same_as(b.ring):
        raise RingMismatch("mixed ring descriptors")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def parse_poly(ring: PolyRing, text: str) -> Poly:
    """Parse sums of integer-coefficient monomials, e.g. 'x*y+z^2' or '-3*x^2'."""
    from .inputs import parse_polynomial  # local import: cli-level parser

    return parse_polynomial(ring, text)


# ---------------------------------------------------------------------------
# graded slices
#
# A GradedSlice is the scalar matrix obtained from a homogeneous polynomial
# matrix in one internal degree.  Rows and columns are labelled by
# (monomial, generator index) pairs in canonical order: term order on the
# monomial first, then generator index.


class GradedSlice:
    __slots__ = ("degree", "row_basis", "col_basis", "entries", "field")

    def __init__(self, degree, row_basis, col_basis, entries, field):
        self.degree = degree
        self.row_basis = row_basis  # list of (mono, gen_index)
        self.col_basis = col_basis
        self.entries = entries  # dict (r, c) -> scalar
        self.field = field

    @property
    def nrows(self):
        return len(self.row_basis)

    @property
    def ncols(self):
        return len(self.col_basis)

    def column(self, c) -> dict:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def rows_as_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def cols_as_dicts(self):
        cols = [dict() for _ in range(self.ncols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def apply(self, vec: dict) -> dict:
        """Matrix-vector product, vec sparse over columns."""
        f = self.field
        out: dict = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x is None:
                continue
            s = f.add(out.get(r, f.zero), f.mul(v, x))
            if f.is_zero(s):
                out.pop(r, None)
            else:
                out[r] = s
        return out


def slice_basis(ring: PolyRing, gens, degree):
    """Basis of (free module on gens)_degree: (monomial, gen index) pairs.

    ``gens`` is a list of internal degrees (int) or multidegrees (tuple);
    ``degree`` matches in kind.  Tuple degrees index slices of multigraded
    modules, in which case each generator contributes at most one pair.
    """
    basis = []
    if isinstance(degree, tuple):
        for gi, gdeg in enumerate(gens):
            mono = tuple(d - g for d, g in zip(degree, gdeg))
            if all(e >= 0 for e in mono):
                basis.append((mono, gi))
        basis.sort(key=lambda p: (ring.mono_key(p[0]), p[1]))
        return basis
    for gi, gdeg in enumerate(gens):
        for mono in ring.monomials_of_degree(degree - gdeg):
            basis.append((mono, gi))
    basis.sort(key=lambda p: (ring.mono_key(p[0]), p[1]))
    return basis


def expand_in_degree(ring, src_degrees, tgt_degrees, columns, degree) -> GradedSlice:
    """Realize a homogeneous polynomial matrix in a single internal degree.

    ``columns[j]`` is a sparse dict {target gen index: Poly} giving the image
    of source generator j.  Every entry must be homogeneous of the degree
    forced by the generator degrees.  Multigraded when degrees are tuples.
    """
    multi = isinstance(degree, tuple)
    col_basis = slice_basis(ring, src_degrees, degree)
    row_basis = slice_basis(ring, tgt_degrees, degree)
    row_index = {pair: i for i, pair in enumerate(row_basis)}
    entries = {}
    for ci, (mono, gi) in enumerate(col_basis):
        col = columns[gi] if gi < len(columns) else None
        if not col:
            continue
        for ti, entry in col.items():
            if entry.is_zero():
                continue
            want = tgt_degrees[ti]
            have = src_degrees[gi]
            if not multi and entry.degree() != have - want:
                raise NotHomogeneous(
                    f"entry of degree {entry.degree()} where {have - want} forced"
                )
            shifted = entry.mono_shift(mono)
            for m, c in shifted.terms.items():
                ri = row_index.get((m, ti))
                if ri is None:
                    raise NotHomogeneous(
                        "entry not multihomogeneous of the forced multidegree"
                    )
                entries[(ri, ci)] = c
    return GradedSlice(degree, row_basis, col_basis, entries, ring.field)


# ---------------------------------------------------------------------------
# exact sparse Gaussian elimination
#
# rref keeps rows as sparse dicts.  Pivot selection is the leftmost column of
# each incoming row after reduction; back-substitution keeps the form fully
# reduced, which is what makes solve/kernel deterministic.


def rref(rows, field):
    """Reduced row echelon form. Returns list of (pivot_col, rowdict), sorted."""
    pivots: list = []  # kept sorted by pivot column

    def reduce_row(row):
        for pc, prow in pivots:
            c = row.get(pc)
            if c is None:
                continue
            for j, v in prow.items():
                s = field.sub(row.get(j, field.zero), field.mul(c, v))
                if field.is_zero(s):
                    row.pop(j, None)
                else:
                    row[j] = s
        return row

    for row in rows:
        row = reduce_row(
            {j: v for j, v in row.items() if not field.is_zero(v)}
        )
        if not row:
            continue
        pc = min(row)
        inv = field.inv(row[pc])
        row = {j: field.mul(v, inv) for j, v in row.items()}
        # back-substitute into existing pivot rows
        for i, (qc, qrow) in enumerate(pivots):
            c = qrow.get(pc)
            if c is None:
                continue
            new = dict(qrow)
            for j, v in row.items():
                s = field.sub(new.get(j, field.zero), field.mul(c, v))
                if field.is_zero(s):
                    new.pop(j, None)
                else:
                    new[j] = s
            pivots[i] = (qc, new)
        pivots.append((pc, row))
        pivots.sort(key=lambda p: p[0])
    return pivots


AUG = -1  # augmented column marker; sorts before all real columns


def solve_rows(rows, rhs, field):
    """Solve M x = rhs where M is given by dense-indexed sparse rows.

    Returns the reduced-echelon solution with all free variables set to
    zero, or None if the system is inconsistent.
    """
    aug = []
    for i, row in enumerate(rows):
        r = {j + 1: v for j, v in row.items()}  # shift so AUG can sit at 0
        b = rhs.get(i) if isinstance(rhs, dict) else (rhs[i] if i < len(rhs) else None)
        if b is not None and not field.is_zero(b):
            r[0] = b
        if r:
            aug.append(r)
    # eliminate with real columns preferred over the augmented one: use
    # column order where augmented column is LAST, i.e. key shift
    shifted = [{(j if j > 0 else 10**9): v for j, v in r.items()} for r in aug]
    piv = rref(shifted, field)
    sol: dict = {}
    for pc, row in piv:
        if pc == 10**9:
            return None  # row (0 ... 0 | b): inconsistent
        b = row.get(10**9, field.zero)
        if not field.is_zero(b):
            sol[pc - 1] = b
    return sol


def solve_slice(sl: GradedSlice, rhs):
    """graded_solve: rhs sparse dict over rows -> sparse dict over cols or None."""
    return solve_rows(sl.rows_as_dicts(), rhs, sl.field)


def kernel_rows(rows, ncols, field):
    """Kernel basis of M x = 0, echelon form, leading coefficient one.

    One vector per free column, ordered by free column; each vector is
    normalized so its first nonzero coordinate equals 1.
    """
    piv = rref(rows, field)
    pivot_cols = {pc: row for pc, row in piv}
    basis = []
    for j in range(ncols):
        if j in pivot_cols:
            continue
        vec = {j: field.one}
        for pc, row in piv:
            v = row.get(j)
            if v is not None and not field.is_zero(v):
                vec[pc] = field.neg(v)
        lead = min(vec)
        inv = field.inv(vec[lead])
        basis.append({c: field.mul(v, inv) for c, v in vec.items()})
    return basis


def kernel_slice(sl: GradedSlice):
    """kernel_in_degree: basis of the null space of the slice."""
    return kernel_rows(sl.rows_as_dicts(), sl.ncols, sl.field)


def rank_rows(rows, field) -> int:
    return len(rref(rows, field))


def span_reduce(vectors, field):
    """RREF basis of the span of sparse vectors (deterministic)."""
    return [row for _, row in rref(vectors, field)]


def in_span(pivots, vec, field) -> bool:
    """Membership test against an echelon pivot list (sorted by pivot column)."""
    return _echelon_reduce(pivots, vec, field) is None


def _echelon_reduce(pivots, vec, field):
    row = {j: v for j, v in vec.items() if not field.is_zero(v)}
    for pc, prow in pivots:
        c = row.get(pc)
        if c is None:
            continue
        for j, v in prow.items():
            s = field.sub(row.get(j, field.zero), field.mul(c, v))
            if field.is_zero(s):
                row.pop(j, None)
            else:
                row[j] = s
    return row or None


def echelon_insert(pivots, vec, field) -> bool:
    """Reduce vec against the pivot list; insert the residue if nonzero.

    Returns True when vec enlarged the span.  The list stays sorted by
    pivot column (echelon, not fully reduced), which is all membership
    testing needs.
    """
    row = _echelon_reduce(pivots, vec, field)
    if row is None:
        return False
    pc = min(row)
    inv = field.inv(row[pc])
    pivots.append((pc, {j: field.mul(v, inv) for j, v in row.items()}))
    pivots.sort(key=lambda p: p[0])
    return True
