"""Degreewise normal forms modulo a homogeneous ideal, without Groebner bases.

For a monomial ideal the normal form just discards monomials divisible by a
generator.  Otherwise we compute, once per internal degree, a reduced echelon
basis of the degree-d slice of the ideal inside the monomial basis of Q_d;
the non-pivot monomials are the standard monomials and every pivot monomial
rewrites as a combination of them.  Both routes are cached per degree.
"""

from __future__ import annotations

from .exact_linalg import Poly, PolyRing, rref


class QuotientRing:
    """R = Q/I with degreewise coordinates on standard monomials."""

    def __init__(self, ring: PolyRing, ideal_gens):
        self.ring = ring
        self.gens = list(ideal_gens)
        for g in self.gens:
            if g.is_zero() or g.degree() is None:
                raise ValueError("ideal generators must be nonzero homogeneous")
        self.monomial = all(g.is_monomial() for g in self.gens)
        self._std: dict = {}       # d -> list of standard monomials
        self._rewrite: dict = {}   # d -> {pivot mono: {std mono: coeff}}

    # -- degreewise tables ---------------------------------------------------

    def _prepare(self, d: int):
        if d in self._std:
            return
        ring, field = self.ring, self.ring.field
        monos = ring.monomials_of_degree(d)
        if self.monomial:
            lead = [next(iter(g.terms)) for g in self.gens]
            std = [m for m in monos if not any(ring.mono_divides(l, m) for l in lead)]
            self._std[d] = std
            self._rewrite[d] = {}
            return
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for g in self.gens:
            gd = g.degree()
            if gd > d:
                continue
            for m in ring.monomials_of_degree(d - gd):
                shifted = g.mono_shift(m)
                rows.append({index[mm]: c for mm, c in shifted.terms.items()})
        piv = rref(rows, field)
        pivot_cols = {pc for pc, _ in piv}
        std = [m for i, m in enumerate(monos) if i not in pivot_cols]
        rewrite = {}
        for pc, row in piv:
            rewrite[monos[pc]] = {
                monos[j]: field.neg(v) for j, v in row.items() if j != pc
            }
        self._std[d] = std
        self._rewrite[d] = rewrite

    def basis(self, d: int):
        if d < 0:
            return []
        self._prepare(d)
        return self._std[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def hilbert(self, bound: int):
        return [self.dim(d) for d in range(bound + 1)]

    def top_degree(self, cap: int = 200):
        """Largest d with R_d != 0, or None if R is not artinian below cap."""
        d = 0
        while d <= cap:
            if self.dim(d) == 0:
                return d - 1
            d += 1
        return None

    # -- normal forms ----------------------------------------------------------

    def nf(self, p: Poly) -> Poly:
        """Canonical representative of p + I supported on standard monomials."""
        ring, field = self.ring, self.ring.field
        if self.monomial:
            lead = [next(iter(g.terms)) for g in self.gens]
            terms = {
                m: c
                for m, c in p.terms.items()
                if not any(ring.mono_divides(l, m) for l in lead)
            }
            return Poly(ring, terms)
        out: dict = {}
        for m, c in p.terms.items():
            d = ring.mono_degree(m)
            self._prepare(d)
            rw = self._rewrite[d].get(m)
            if rw is None:
                s = field.add(out.get(m, field.zero), c)
                if field.is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
            else:
                for mm, v in rw.items():
                    s = field.add(out.get(mm, field.zero), field.mul(c, v))
                    if field.is_zero(s):
                        out.pop(mm, None)
                    else:
                        out[mm] = s
        return Poly(ring, out)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.nf(a * b)

    def is_zero(self, p: Poly) -> bool:
        return self.nf(p).is_zero()

    def coords(self, p: Poly, d: int) -> dict:
        """Coordinates of nf(p) in the standard monomial basis of R_d."""
        q = self.nf(p)
        basis = {m: i for i, m in enumerate(self.basis(d))}
        out = {}
        for m, c in q.terms.items():
            if self.ring.mono_degree(m) != d:
                raise ValueError("coords of non-homogeneous element")
            out[basis[m]] = c
        return out

    def from_coords(self, d: int, coords: dict) -> Poly:
        basis = self.basis(d)
        return Poly(self.ring, {basis[i]: c for i, c in coords.items() if c})

    # -- socle -----------------------------------------------------------------

    def socle(self, cap: int = 200):
        """Homogeneous basis of ann(m_R), for artinian R (raises otherwise)."""
        top = self.top_degree(cap)
        if top is None:
            raise ValueError("socle requires an artinian quotient")
        from .exact_linalg import kernel_rows

        ring, field = self.ring, self.ring.field
        out = []
        for d in range(top + 1):
            n = self.dim(d)
            if n == 0:
                continue
            # kernel of the stacked multiplication maps R_d -> R_{d+w_v}
            equations: dict = {}
            offset = 0
            for v in range(ring.nvars):
                dd = d + ring.weights[v]
                for i, m in enumerate(self.basis(d)):
                    img = self.coords(
                        Poly(ring, {ring.mono_mul(m, ring.var_mono(v)): field.one}), dd
                    )
                    for j, c in img.items():
                        equations.setdefault(offset + j, {})[i] = c
                offset += self.dim(dd)
            ker = kernel_rows([equations[k] for k in sorted(equations)], n, field)
            for vec in ker:
                out.append(self.from_coords(d, vec))
        return out
