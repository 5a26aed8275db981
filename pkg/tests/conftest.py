import random

import pytest

from koszuldual.exact_linalg import PolyRing
from koszuldual.inputs import parse_polynomial
from koszuldual.resolutions import RingSpec


def ring(names, char=32003, weights=None):
    return PolyRing(names.split(), characteristic=char, weights=weights)


def spec(names, gens, char=32003, **kw):
    R = ring(names, char=char)
    return RingSpec(R, [parse_polynomial(R, g) for g in gens], **kw)


def polys(R, *texts):
    return [parse_polynomial(R, t) for t in texts]


@pytest.fixture
def burke():
    """Burke's codimension-3 Gorenstein example, rational coefficients."""
    return spec("x y z", ["x^2", "y*z", "x*y+z^2", "x*z", "y^2"], char=0)


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_monomial_ideal(rng, nvars=3, max_gens=4, max_deg=3, char=32003):
    names = "x y z w".split()[:nvars]
    R = PolyRing(names, characteristic=char)
    seen = set()
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        d = rng.randint(1, max_deg)
        monos = R.monomials_of_degree(d)
        m = monos[rng.randrange(len(monos))]
        seen.add(m)
    # minimalize: drop divisible monomials
    for m in sorted(seen, key=R.mono_key):
        if not any(R.mono_divides(o, m) for o in seen if o != m):
            gens.append(R.monomial(m))
    return RingSpec(R, gens)
