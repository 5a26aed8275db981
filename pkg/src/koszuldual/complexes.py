"""Bigraded free modules, polynomial chain complexes, homology, minimization.

A complex stores, per homological degree i, an ordered list of generators
(label, internal degree) and the differential as sparse columns of
homogeneous polynomials.  Complexes over R = Q/I carry a QuotientRing and
reduce every computation through its normal form.

Sign conventions: Koszul rule (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y),
suspension differential = -d.
"""

from __future__ import annotations

from collections import namedtuple

from .exact_linalg import (
    GradedSlice,
    Poly,
    expand_in_degree,
    kernel_slice,
    rank_rows,
    slice_basis,
    solve_slice,
)
from .quotient import QuotientRing

Gen = namedtuple("Gen", "label degree")


class ChainComplex:
    """Non-negatively graded complex of free modules with matrix differentials."""

    def __init__(self, ring, quotient: QuotientRing | None = None):
        self.ring = ring
        self.quotient = quotient
        self.gens: dict = {}  # i -> list[Gen]
        self.diff: dict = {}  # i -> list of columns {target index: Poly}
        self.bounds = None    # (hdeg bound, internal bound) when truncated
        self.notes: list = []

    # -- construction ---------------------------------------------------------

    def add_gen(self, i: int, label: str, degree) -> int:
        self.gens.setdefault(i, [])
        self.diff.setdefault(i, [])
        self.gens[i].append(Gen(label, degree))
        self.diff[i].append({})
        return len(self.gens[i]) - 1

    def set_column(self, i: int, col: int, entries: dict):
        self.diff[i][col] = {t: p for t, p in entries.items() if p and not p.is_zero()}

    # -- shape ----------------------------------------------------------------

    def degrees_present(self):
        return sorted(i for i in self.gens if self.gens[i])

    def top(self) -> int:
        ds = self.degrees_present()
        return ds[-1] if ds else -1

    def rank(self, i: int) -> int:
        return len(self.gens.get(i, []))

    def total_ranks(self):
        return [self.rank(i) for i in range(self.top() + 1)]

    def gen_degrees(self, i: int):
        return [g.degree for g in self.gens.get(i, [])]

    def betti_entries(self):
        """(homological degree, internal degree) -> generator count."""
        out: dict = {}
        for i, gens in self.gens.items():
            for g in gens:
                out[(i, g.degree)] = out.get((i, g.degree), 0) + 1
        return out

    # -- differential as an operator -------------------------------------------

    def reduce(self, p: Poly) -> Poly:
        return self.quotient.nf(p) if self.quotient is not None else p

    def apply_diff(self, i: int, elem: dict) -> dict:
        """Apply d_i to an element {gen index: Poly} of F_i."""
        cols = self.diff.get(i, [])
        out: dict = {}
        for c, p in elem.items():
            if p.is_zero() or c >= len(cols):
                continue
            for t, entry in cols[c].items():
                q = out.get(t)
                prod = entry * p
                out[t] = prod if q is None else q + prod
        reduced = ((t, self.reduce(p)) for t, p in out.items())
        return {t: p for t, p in reduced if not p.is_zero()}

    def entry(self, i: int, col: int, row: int) -> Poly:
        return self.diff[i][col].get(row, self.ring.zero())

    # -- degreewise slices ------------------------------------------------------

    def slice(self, i: int, d) -> GradedSlice:
        """Scalar matrix of d_i in internal degree d (empty if no gens)."""
        src = self.gen_degrees(i)
        tgt = self.gen_degrees(i - 1)
        if self.quotient is None:
            return expand_in_degree(self.ring, src, tgt, self.diff.get(i, []), d)
        return quotient_slice(self.quotient, src, tgt, self.diff.get(i, []), d)

    def module_slice_basis(self, i: int, d):
        if self.quotient is None:
            return slice_basis(self.ring, self.gen_degrees(i), d)
        return quotient_slice_basis(self.quotient, self.gen_degrees(i), d)

    def elem_coords(self, i: int, elem: dict, d) -> dict:
        basis = self.module_slice_basis(i, d)
        index = {pair: k for k, pair in enumerate(basis)}
        out = {}
        for t, p in elem.items():
            p = self.reduce(p)
            for m, c in p.terms.items():
                out[index[(m, t)]] = c
        return out

    def coords_elem(self, i: int, d, coords: dict) -> dict:
        basis = self.module_slice_basis(i, d)
        out: dict = {}
        for k, c in coords.items():
            m, t = basis[k]
            mono = Poly(self.ring, {m: c})
            out[t] = out.get(t, self.ring.zero()) + mono
        return {t: p for t, p in out.items() if not p.is_zero()}

    def copy(self) -> "ChainComplex":
        c = ChainComplex(self.ring, self.quotient)
        c.gens = {i: list(gs) for i, gs in self.gens.items()}
        c.diff = {i: [dict(col) for col in cols] for i, cols in self.diff.items()}
        c.bounds = self.bounds
        c.notes = list(self.notes)
        return c


def quotient_slice_basis(qr: QuotientRing, degrees, d):
    basis = []
    for gi, gdeg in enumerate(degrees):
        for mono in qr.basis(d - gdeg):
            basis.append((mono, gi))
    basis.sort(key=lambda p: (qr.ring.mono_key(p[0]), p[1]))
    return basis


def quotient_slice(qr: QuotientRing, src_degrees, tgt_degrees, columns, d):
    """Degree-d slice of an R-linear map given by normal-form representatives."""
    col_basis = quotient_slice_basis(qr, src_degrees, d)
    row_basis = quotient_slice_basis(qr, tgt_degrees, d)
    row_index = {pair: i for i, pair in enumerate(row_basis)}
    entries = {}
    for ci, (mono, gi) in enumerate(col_basis):
        col = columns[gi] if gi < len(columns) else None
        if not col:
            continue
        for ti, entry in col.items():
            img = qr.nf(entry.mono_shift(mono))
            for m, c in img.terms.items():
                entries[(row_index[(m, ti)], ci)] = c
    return GradedSlice(d, row_basis, col_basis, entries, qr.ring.field)


# ---------------------------------------------------------------------------
# verification


class ComplexReport(namedtuple("ComplexReport", "ok minimal violation")):
    def __bool__(self):
        return self.ok


def verify_complex(c: ChainComplex) -> ComplexReport:
    """Check d o d = 0 symbolically; report minimality (entries in the ideal)."""
    minimal = True
    for i in sorted(c.diff):
        for col, column in enumerate(c.diff[i]):
            for row, entry in column.items():
                entry = c.reduce(entry)
                if not c.ring.field.is_zero(entry.constant_term()):
                    minimal = False
            if i - 1 in c.diff and c.gens.get(i - 1):
                dd = c.apply_diff(i - 1, c.apply_diff(i, {col: c.ring.one()}))
                if dd:
                    return ComplexReport(False, minimal, (i, col, dd))
    return ComplexReport(True, minimal, None)


# ---------------------------------------------------------------------------
# homology ranks


def homology_ranks(c: ChainComplex, internal_bound: int, hdeg_bound=None) -> dict:
    """rank H_i(c)_j for j <= internal_bound, via degreewise slice ranks."""
    top = c.top() if hdeg_bound is None else min(hdeg_bound, c.top())
    table: dict = {}
    degrees = list(range(internal_bound + 1))
    for i in range(top + 1):
        for j in degrees:
            sl = c.slice(i, j) if c.rank(i) else None
            ncols = sl.ncols if sl else 0
            if ncols == 0:
                continue
            rk_in = rank_rows(sl.rows_as_dicts(), c.ring.field) if c.rank(i - 1) else 0
            nullity = ncols - rk_in
            if c.rank(i + 1):
                sl_up = c.slice(i + 1, j)
                rk_up = rank_rows(sl_up.rows_as_dicts(), c.ring.field)
            else:
                rk_up = 0
            h = nullity - rk_up
            if h:
                table[(i, j)] = h
    return table


# ---------------------------------------------------------------------------
# minimization by unit cancellation


def minimize(c: ChainComplex) -> ChainComplex:
    """Cancel unit entries (Gaussian elimination on degree-0 pivots).

    Homotopy-equivalent output; iterates until no unit entries remain.
    Works for multigraded complexes as well since a unit entry forces equal
    generator (multi)degrees.
    """
    c = c.copy()
    field = c.ring.field
    while True:
        pivot = None
        for i in sorted(c.diff):
            for col, column in enumerate(c.diff[i]):
                for row, entry in column.items():
                    entry = c.reduce(entry)
                    u = entry.constant_term()
                    if not field.is_zero(u) and len(entry.terms) >= 1:
                        if _is_constant(entry):
                            pivot = (i, col, row, u)
                            break
                if pivot:
                    break
            if pivot:
                break
        if pivot is None:
            return c
        _cancel(c, *pivot)


def _is_constant(p: Poly) -> bool:
    return len(p.terms) == 1 and next(iter(p.terms)) == p.ring.one_mono()


def _cancel(c: ChainComplex, i: int, col: int, row: int, unit):
    field = c.ring.field
    uinv = field.inv(unit)
    columns = c.diff[i]
    pivot_col = columns[col]
    # column updates: kill row-entry of every other column
    for cj, column in enumerate(columns):
        if cj == col:
            continue
        lam = column.get(row)
        if lam is None:
            continue
        factor = c.reduce(lam.scale(field.neg(uinv)))
        for t, entry in pivot_col.items():
            if t == row:
                continue
            new = column.get(t, c.ring.zero()) + c.reduce(factor * entry)
            new = c.reduce(new)
            if new.is_zero():
                column.pop(t, None)
            else:
                column[t] = new
        column.pop(row, None)
    # delete generator col from F_i and row from F_{i-1}
    _drop_gen(c, i, col, as_source=True)
    _drop_gen(c, i - 1, row, as_source=False, upper=i)


def _drop_gen(c: ChainComplex, i: int, idx: int, as_source: bool, upper=None):
    if as_source:
        # remove a generator of F_i: drop its column in d_i and its row in d_{i+1}
        c.gens[i].pop(idx)
        c.diff[i].pop(idx)
        for column in c.diff.get(i + 1, []):
            column.pop(idx, None)
            for t in sorted(k for k in column if k > idx):
                column[t - 1] = column.pop(t)
    else:
        # remove a generator of F_{i-1} (target side): reindex rows of d_i, and
        # drop its column in d_{i-1}
        c.gens[i].pop(idx)
        c.diff[i].pop(idx)
        for column in c.diff.get(upper, []):
            column.pop(idx, None)
            for t in sorted(k for k in column if k > idx):
                column[t - 1] = column.pop(t)


# ---------------------------------------------------------------------------
# chain maps and nullhomotopies


class ChainMap:
    """Map of complexes X -> A of homological degree ``shift``.

    cols[i][src index] = {target index in A_{i+shift}: Poly}.
    """

    def __init__(self, source: ChainComplex, target: ChainComplex, shift: int, jshift: int = 0):
        self.source = source
        self.target = target
        self.shift = shift
        self.jshift = jshift  # internal-degree shift of the map
        self.cols: dict = {}

    def set(self, i: int, src: int, value: dict):
        self.cols.setdefault(i, {})
        self.cols[i][src] = {t: p for t, p in value.items() if not p.is_zero()}

    def value(self, i: int, src: int) -> dict:
        return self.cols.get(i, {}).get(src, {})

    def apply(self, i: int, elem: dict) -> dict:
        out: dict = {}
        for s, p in elem.items():
            for t, q in self.value(i, s).items():
                acc = out.get(t)
                prod = q * p
                out[t] = prod if acc is None else acc + prod
        return {t: p for t, p in out.items() if not p.is_zero()}

    def is_chain_map(self) -> bool:
        sgn = -1 if self.shift % 2 else 1
        for i in sorted(self.cols):
            for s in self.cols[i]:
                lhs = self.target.apply_diff(i + self.shift, self.value(i, s))
                rhs = self.apply(i - 1, self.source.apply_diff(i, {s: self.source.ring.one()}))
                rhs = {t: p.scale(sgn) for t, p in rhs.items()}
                if _elem_sub(lhs, rhs):
                    return False
        return True


def _elem_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for t, p in b.items():
        out[t] = out.get(t, p.ring.zero()) - p
    return {t: p for t, p in out.items() if not p.is_zero()}


def _elem_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for t, p in b.items():
        q = out.get(t)
        out[t] = p if q is None else q + p
    return {t: p for t, p in out.items() if not p.is_zero()}


def _elem_scale(a: dict, c) -> dict:
    return {t: p.scale(c) for t, p in a.items() if not p.scale(c).is_zero()}


class LiftFailure(Exception):
    def __init__(self, hdeg, internal, message="no solution"):
        super().__init__(f"lift failed at bidegree ({hdeg}, {internal}): {message}")
        self.bidegree = (hdeg, internal)


def null_homotopy_lift(f: ChainMap) -> ChainMap:
    """Solve d_A h - (-1)^{|h|} h d_X = f generator by generator.

    f must be a chain map of degree d >= 0 from a bounded-below free complex
    into a complex that is acyclic in positive degrees; h has degree d+1 and
    is built by graded solves in increasing (homological, internal) order,
    with the zero-free-variable convention.
    """
    X, A, d = f.source, f.target, f.shift
    h = ChainMap(X, A, d + 1, jshift=f.jshift)
    sgn = 1 if (d + 1) % 2 == 0 else -1
    order = []
    for i in X.degrees_present():
        for s, g in enumerate(X.gens[i]):
            order.append((i, g.degree, s))
    order.sort(key=lambda t: (t[0], t[1]))
    for i, gdeg, s in order:
        jdeg = gdeg + f.jshift
        rhs = dict(f.value(i, s))
        bd = X.apply_diff(i, {s: X.ring.one()})
        rhs = _elem_add(rhs, _elem_scale(h.apply(i - 1, bd), sgn))
        target_h = i + d + 1
        if not rhs:
            h.set(i, s, {})
            continue
        if A.rank(target_h) == 0:
            raise LiftFailure(i, jdeg, "nonzero obstruction above target length")
        sl = A.slice(target_h, jdeg)
        coords = A.elem_coords(i + d, rhs, jdeg)
        sol = solve_slice(sl, coords)
        if sol is None:
            raise LiftFailure(i, jdeg)
        h.set(i, s, A.coords_elem(target_h, jdeg, sol))
    return h


def homotopy_defect(f: ChainMap, h: ChainMap) -> dict:
    """Nonzero entries of d h - (-1)^{|h|} h d - f, for verification."""
    X, A = f.source, f.target
    sgn = 1 if h.shift % 2 == 0 else -1
    bad = {}
    for i in X.degrees_present():
        for s in range(X.rank(i)):
            lhs = A.apply_diff(i + h.shift, h.value(i, s))
            bd = X.apply_diff(i, {s: X.ring.one()})
            lhs = _elem_sub(lhs, _elem_scale(h.apply(i - 1, bd), sgn))
            diffr = _elem_sub(lhs, f.value(i, s))
            if diffr:
                bad[(i, s)] = diffr
    return bad


# ---------------------------------------------------------------------------
# table export


def table_to_csv(table: dict, ranks_by=None) -> str:
    """CSV with rows = internal degree, columns = homological degree."""
    if not table:
        return "internal\\homological\n"
    hdegs = sorted({i for (i, _) in table})
    jdegs = sorted({j for (_, j) in table})
    lines = ["internal\\homological," + ",".join(str(i) for i in hdegs)]
    for j in jdegs:
        row = [str(j)]
        for i in hdegs:
            row.append(str(table.get((i, j), 0)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
