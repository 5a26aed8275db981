"""Concrete resolutions: Koszul complexes, Taylor complexes with the Gemeda
product, minimal graded free resolutions by degreewise syzygies, and minimal
resolutions of modules over the quotient ring R = Q/I.

Sign conventions are pinned by the worked examples in the test suite:
Koszul  d(e_S) = sum_i (-1)^{pos(i)-1} f_i e_{S-i}            (pos 1-based)
Taylor  d(e_I) = sum_i (-1)^{pos(i)}  (m_I/m_{I-i}) e_{I-i}
and both carry the shuffle-sign product e_S e_T = +- e_{S u T}.
"""

from __future__ import annotations

from itertools import combinations

from .complexes import ChainComplex, Gen, quotient_slice
from .exact_linalg import (
    PolyRing,
    echelon_insert,
    expand_in_degree,
    in_span,
    kernel_slice,
)
from .quotient import QuotientRing


class RingSpec:
    """Presentation data for R = Q/I: the ring descriptor plus ideal generators."""

    def __init__(self, ring: PolyRing, ideal, regular_sequence: bool | None = None):
        self.ring = ring
        self.ideal = list(ideal)
        for g in self.ideal:
            if g.is_zero() or not g.is_homogeneous():
                raise ValueError("ideal generators must be nonzero homogeneous")
        self.monomial = all(g.is_monomial() for g in self.ideal)
        self.regular_sequence = regular_sequence
        self._quotient = None

    @property
    def embedding_dimension(self) -> int:
        return self.ring.nvars

    def max_gen_degree(self) -> int:
        return max((g.degree() for g in self.ideal), default=1)

    def quotient(self) -> QuotientRing:
        if self._quotient is None:
            self._quotient = QuotientRing(self.ring, self.ideal)
        return self._quotient

    def default_bounds(self, hdeg=None, internal=None):
        n = 6 if hdeg is None else hdeg
        d = internal if internal is not None else (n + 1) * self.max_gen_degree()
        return n, d

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.ideal)
        return f"{self.ring}/({gens})"


# ---------------------------------------------------------------------------
# dg products on subset-indexed complexes


class DgProduct:
    """Multiplication table on the generators of a complex.

    table[(a, b)] with a = (hdeg, index) holds the product as an element
    {target index: Poly} of F_{|a|+|b|}.  The degree-0 generator 0 acts as
    the unit; unrecorded pairs multiply to zero.
    """

    def __init__(self, cx: ChainComplex):
        self.cx = cx
        self.table: dict = {}

    def set(self, a, b, value: dict):
        value = {t: p for t, p in value.items() if not p.is_zero()}
        if value:
            self.table[(a, b)] = value

    def value(self, a, b) -> dict:
        if a == (0, 0):
            return {b[1]: self.cx.ring.one()}
        if b == (0, 0):
            return {a[1]: self.cx.ring.one()}
        return self.table.get((a, b), {})

    def mul(self, i: int, x: dict, j: int, y: dict) -> dict:
        """Bilinear extension; x in F_i, y in F_j, result in F_{i+j}."""
        out: dict = {}
        for a, p in x.items():
            for b, q in y.items():
                for t, r in self.value((i, a), (j, b)).items():
                    acc = out.get(t)
                    prod = r * p * q
                    out[t] = prod if acc is None else acc + prod
        return {t: p for t, p in out.items() if not p.is_zero()}


def _shuffle_sign(S, T) -> int:
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


def _subset_basis(cx: ChainComplex, count: int, degree_of):
    index: dict = {}
    for i in range(count + 1):
        for S in combinations(range(count), i):
            label = "1" if not S else "e" + "".join(f"[{k + 1}]" for k in S)
            idx = cx.add_gen(i, label, degree_of(S))
            index[S] = (i, idx)
    return index


def koszul_complex(ring: PolyRing, elements):
    """Exterior algebra complex on f_1..f_c; returns (complex, product).

    Acyclic exactly when the f_i form a regular sequence.
    """
    elements = list(elements)
    degs = [f.degree() for f in elements]
    cx = ChainComplex(ring)
    index = _subset_basis(cx, len(elements), lambda S: sum(degs[k] for k in S))
    for S, (i, idx) in index.items():
        if i == 0:
            continue
        col: dict = {}
        for pos, k in enumerate(S, start=1):
            rest = tuple(x for x in S if x != k)
            sign = -1 if (pos - 1) % 2 else 1
            _, ridx = index[rest]
            col[ridx] = col.get(ridx, ring.zero()) + elements[k].scale(sign)
        cx.set_column(i, idx, col)
    prod = DgProduct(cx)
    for S, (i, a) in index.items():
        for T, (j, b) in index.items():
            if i == 0 or j == 0 or (set(S) & set(T)):
                continue
            _, u = index[tuple(sorted(S + T))]
            prod.set((i, a), (j, b), {u: ring.constant(_shuffle_sign(S, T))})
    return cx, prod


def koszul_complex_on_variables(ring: PolyRing):
    """K^Q, the Koszul complex on the variables: minimal resolution of k."""
    return koszul_complex(ring, [ring.variable(n) for n in ring.names])


def taylor_resolution(ring: PolyRing, monomials):
    """Taylor complex of a minimal monomial generating set, with the Gemeda
    product and the dominance certificate."""
    monomials = list(monomials)
    for m in monomials:
        if not m.is_monomial():
            raise ValueError("taylor_resolution requires monomial generators")
    monos = [next(iter(m.terms)) for m in monomials]
    for a, b in combinations(range(len(monos)), 2):
        if ring.mono_divides(monos[a], monos[b]) or ring.mono_divides(
            monos[b], monos[a]
        ):
            raise ValueError("generating set is not minimal (one divides another)")

    def lcm(S):
        if not S:
            return ring.one_mono()
        return tuple(max(monos[k][v] for k in S) for v in range(ring.nvars))

    cx = ChainComplex(ring)
    index = _subset_basis(cx, len(monomials), lambda S: ring.mono_degree(lcm(S)))
    for S, (i, idx) in index.items():
        if i == 0:
            continue
        col: dict = {}
        mI = lcm(S)
        for pos, k in enumerate(S, start=1):
            rest = tuple(x for x in S if x != k)
            quot = ring.mono_div(mI, lcm(rest))
            sign = -1 if pos % 2 else 1
            _, ridx = index[rest]
            col[ridx] = col.get(ridx, ring.zero()) + ring.monomial(quot, sign)
        cx.set_column(i, idx, col)
    prod = DgProduct(cx)
    for S, (i, a) in index.items():
        for T, (j, b) in index.items():
            if i == 0 or j == 0 or (set(S) & set(T)):
                continue
            U = tuple(sorted(S + T))
            _, u = index[U]
            coeff = ring.mono_div(ring.mono_mul(lcm(S), lcm(T)), lcm(U))
            prod.set((i, a), (j, b), {u: ring.monomial(coeff, _shuffle_sign(S, T))})
    dominant, witness = dominant_test(ring, monomials)
    return cx, prod, {"dominant": dominant, **witness}


def dominant_test(ring: PolyRing, monomials):
    """Per-generator private pure power witness, or the failing generator."""
    monos = [next(iter(m.terms)) for m in monomials]
    witnesses = []
    for k, m in enumerate(monos):
        found = None
        for v in range(ring.nvars):
            a = m[v]
            if a == 0:
                continue
            if all(other[v] < a for i, other in enumerate(monos) if i != k):
                found = (ring.names[v], a)
                break
        if found is None:
            return False, {"failing_generator": str(monomials[k])}
        witnesses.append(found)
    return True, {"witnesses": witnesses}


# ---------------------------------------------------------------------------
# minimal free resolutions by degreewise syzygies
#
# One step adjoins a basis of ker(d_{step-1})_d modulo the span of columns
# already adjoined, for d ascending.  By minimality of the previous step the
# kernel sits inside m.F, so the output is minimal by construction.  For
# monomial ideals the degrees d run over the lcm lattice (multidegrees),
# which is where all syzygy generators live.


def minimalize_generators(ring: PolyRing, gens):
    """Drop generators lying in the span of the others times monomials."""
    gens = sorted(gens, key=lambda g: (g.degree(), sorted(g.terms)))
    kept: list = []
    for g in gens:
        d = g.degree()
        monos = {m: i for i, m in enumerate(ring.monomials_of_degree(d))}
        pivots: list = []
        for h in kept:
            for m in ring.monomials_of_degree(d - h.degree()):
                shifted = h.mono_shift(m)
                echelon_insert(
                    pivots, {monos[mm]: c for mm, c in shifted.terms.items()}, ring.field
                )
        vec = {monos[m]: c for m, c in g.terms.items()}
        if not in_span(pivots, vec, ring.field):
            kept.append(g)
    return kept


def _image_pivots(cx: ChainComplex, step: int, d):
    """Echelon pivots of the degree-d span of the columns adjoined so far."""
    if cx.rank(step) == 0:
        return []
    if cx.quotient is not None:
        sl = quotient_slice(
            cx.quotient, cx.gen_degrees(step), cx.gen_degrees(step - 1), cx.diff[step], d
        )
    else:
        sl = expand_in_degree(
            cx.ring, cx.gen_degrees(step), cx.gen_degrees(step - 1), cx.diff[step], d
        )
    pivots: list = []
    for col in sl.cols_as_dicts():
        echelon_insert(pivots, col, cx.ring.field)
    return pivots


def _syzygy_step(cx: ChainComplex, step: int, degree_list, label: str) -> bool:
    """Adjoin minimal generators of ker(d_{step-1}) as F_step; True if any."""
    prev = step - 1
    if cx.rank(prev) == 0:
        return False
    field = cx.ring.field
    found = False
    for d in degree_list:
        sl = cx.slice(prev, d)
        if sl.ncols == 0:
            continue
        ker = kernel_slice(sl)
        if not ker:
            continue
        pivots = _image_pivots(cx, step, d)
        for vec in ker:
            if not echelon_insert(pivots, vec, field):
                continue
            idx = cx.add_gen(step, f"{label}{step}_{cx.rank(step)}", d)
            cx.set_column(step, idx, cx.coords_elem(prev, d, vec))
            found = True
    return found


def _lcm_lattice(ring: PolyRing, lead, d_bound):
    """All joins of the generator multidegrees within the degree bound."""
    lattice = set()
    frontier = {m for m in lead if ring.mono_degree(m) <= d_bound}
    while frontier:
        lattice |= frontier
        new = set()
        for m in lead:
            for x in frontier:
                j = tuple(max(a, b) for a, b in zip(m, x))
                if j not in lattice and ring.mono_degree(j) <= d_bound:
                    new.add(j)
        frontier = new - lattice
    return sorted(lattice, key=ring.mono_key)


def minimal_free_resolution(rs: RingSpec, hdeg_bound=None, internal_bound=None):
    """Minimal Q-free resolution of Q/I; minimal by construction.

    Monomial ideals run multigraded over the lcm lattice and the generator
    degrees are totalized afterwards; general homogeneous ideals run per
    internal degree up to the bound.
    """
    n_bound, d_bound = rs.default_bounds(hdeg_bound, internal_bound)
    ring = rs.ring
    gens = minimalize_generators(ring, rs.ideal)
    cx = ChainComplex(ring)
    if rs.monomial:
        lead = [next(iter(g.terms)) for g in gens]
        cx.add_gen(0, "1", ring.one_mono())
        for k, m in enumerate(lead):
            idx = cx.add_gen(1, f"g1_{k}", m)
            cx.set_column(1, idx, {0: ring.monomial(m)})
        lattice = _lcm_lattice(ring, lead, d_bound)
        degree_lists = lambda step: lattice  # noqa: E731
    else:
        cx.add_gen(0, "1", 0)
        for k, g in enumerate(gens):
            idx = cx.add_gen(1, f"g1_{k}", g.degree())
            cx.set_column(1, idx, {0: g})
        degree_lists = lambda step: range(  # noqa: E731
            min(cx.gen_degrees(step - 1)) + 1, d_bound + 1
        )

    for step in range(2, n_bound + 1):
        if not _syzygy_step(cx, step, degree_lists(step), "g"):
            break
    if cx.rank(n_bound) > 0:
        cx.notes.append(f"truncated at homological bound {n_bound}")
    if rs.monomial:
        _totalize_degrees(cx)
    cx.bounds = (n_bound, d_bound)
    return cx


def _totalize_degrees(cx: ChainComplex):
    for i, gens in cx.gens.items():
        cx.gens[i] = [Gen(g.label, cx.ring.mono_degree(g.degree)) for g in gens]


# ---------------------------------------------------------------------------
# Betti tables


class BettiTable:
    """Generator counts of a minimal resolution per (homological, internal)."""

    def __init__(self, entries: dict, bounds=None):
        self.entries = dict(entries)
        self.bounds = bounds

    @classmethod
    def of_complex(cls, cx: ChainComplex):
        return cls(cx.betti_entries(), cx.bounds)

    def total(self, i: int) -> int:
        return sum(v for (h, _), v in self.entries.items() if h == i)

    def totals(self):
        top = max((i for (i, _) in self.entries), default=-1)
        return [self.total(i) for i in range(top + 1)]

    def poincare_coefficients(self, hdeg_bound: int):
        return [self.total(i) for i in range(hdeg_bound + 1)]

    def gorenstein_symmetric(self) -> bool:
        """Self-duality of the table: b_{i,j} = b_{d-i,J-j}, socle rank one."""
        if not self.entries:
            return False
        d = max(i for (i, _) in self.entries)
        J = max(j for (_, j) in self.entries)
        return self.total(d) == 1 and all(
            self.entries.get((d - i, J - j), 0) == v
            for (i, j), v in self.entries.items()
        )

    def csv(self) -> str:
        from .complexes import table_to_csv

        return table_to_csv(self.entries)


# ---------------------------------------------------------------------------
# resolutions over R = Q/I


def presentation_of_residue_field(rs: RingSpec):
    """k presented over R: one generator, the variables as relations."""
    ring = rs.ring
    rows = [("u", 0)]
    cols = [{0: ring.variable(n)} for n in ring.names]
    return rows, cols


def resolve_over_quotient(rs: RingSpec, presentation=None, hdeg_bound=None, internal_bound=None):
    """Minimal R-free resolution of a presented R-module (default k).

    Degreewise syzygies in the standard-monomial coordinates of R; returns
    (complex over R, BettiTable).  Requires the quotient to be degreewise
    finite within the internal bound.
    """
    n_bound, d_bound = rs.default_bounds(hdeg_bound, internal_bound)
    qr = rs.quotient()
    ring = rs.ring
    rows, cols = (
        presentation if presentation is not None else presentation_of_residue_field(rs)
    )
    cx = ChainComplex(ring, quotient=qr)
    for label, deg in rows:
        cx.add_gen(0, label, deg)
    top = qr.top_degree(cap=d_bound)
    _adjoin_relations(cx, qr, cols)
    for step in range(2, n_bound + 1):
        dmin = min(cx.gen_degrees(step - 1)) + 1
        dmax = d_bound if top is None else min(d_bound, max(cx.gen_degrees(step - 1)) + top)
        if not _syzygy_step(cx, step, range(dmin, dmax + 1), "s"):
            break
    if cx.rank(n_bound) > 0:
        cx.notes.append(f"truncated at homological bound {n_bound}")
    cx.bounds = (n_bound, d_bound)
    return cx, BettiTable.of_complex(cx)


def _adjoin_relations(cx: ChainComplex, qr: QuotientRing, cols):
    """Adjoin presentation columns as F_1, minimally and by ascending degree."""
    ring = cx.ring
    reduced = []
    for col in cols:
        rcol = {t: qr.nf(p) for t, p in col.items()}
        rcol = {t: p for t, p in rcol.items() if not p.is_zero()}
        if not rcol:
            continue
        degs = {p.degree() + cx.gens[0][t].degree for t, p in rcol.items()}
        if len(degs) != 1:
            raise ValueError("presentation columns must be homogeneous")
        reduced.append((degs.pop(), rcol))
    reduced.sort(key=lambda t: t[0])
    for d, rcol in reduced:
        pivots = _image_pivots(cx, 1, d)
        vec = cx.elem_coords(0, rcol, d)
        if not echelon_insert(pivots, vec, ring.field):
            continue
        idx = cx.add_gen(1, f"s1_{cx.rank(1)}", d)
        cx.set_column(1, idx, rcol)


def hilbert_function(rs: RingSpec, bound: int):
    return rs.quotient().hilbert(bound)


def minimal_module_resolution(ring: PolyRing, rows, cols, hdeg_bound=6, internal_bound=None):
    """Minimal Q-free resolution of the cokernel of a presentation matrix
    over Q (rows = generators with degrees, cols = relation columns)."""
    if internal_bound is None:
        degs = [d for _, d in rows]
        reldegs = [
            p.degree() + rows[t][1] for col in cols for t, p in col.items() if p
        ]
        top = max(degs + reldegs, default=1)
        internal_bound = top + hdeg_bound * max(1, top)
    cx = ChainComplex(ring)
    for label, deg in rows:
        cx.add_gen(0, label, deg)
    # adjoin relation columns minimally, ascending degree
    bydeg = []
    for col in cols:
        col = {t: p for t, p in col.items() if p and not p.is_zero()}
        if not col:
            continue
        degs = {p.degree() + rows[t][1] for t, p in col.items()}
        if len(degs) != 1:
            raise ValueError("presentation columns must be homogeneous")
        bydeg.append((degs.pop(), col))
    bydeg.sort(key=lambda t: t[0])
    for d, col in bydeg:
        pivots = _image_pivots(cx, 1, d)
        vec = cx.elem_coords(0, col, d)
        if not echelon_insert(pivots, vec, ring.field):
            continue
        idx = cx.add_gen(1, f"m1_{cx.rank(1)}", d)
        cx.set_column(1, idx, col)
    for step in range(2, hdeg_bound + 1):
        if cx.rank(step - 1) == 0:
            break
        dmin = min(cx.gen_degrees(step - 1)) + 1
        if not _syzygy_step(cx, step, range(dmin, internal_bound + 1), "m"):
            break
    if cx.rank(hdeg_bound) > 0:
        cx.notes.append(f"truncated at homological bound {hdeg_bound}")
    cx.bounds = (hdeg_bound, internal_bound)
    return cx


def q_presentation_of_r_module(rs: RingSpec, rows, cols):
    """Lift an R-module presentation to a Q-presentation by adjoining the
    ideal multiples of each generator."""
    ring = rs.ring
    full_cols = [dict(col) for col in cols]
    for t in range(len(rows)):
        for f in rs.ideal:
            full_cols.append({t: f})
    return rows, full_cols
