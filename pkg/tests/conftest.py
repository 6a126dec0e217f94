import random
from fractions import Fraction
from pathlib import Path

import pytest

from pix.arith import Place, is_square_local, sqrt_unit_padic, val
from pix.kernels import available_backends

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def rng():
    return random.Random(20240601)


def naive_count(coeffs, p):
    """Double loop over F_p x F_p; the reference for point counting."""
    total = smooth = 0
    d = [i * c for i, c in enumerate(coeffs)][1:]
    for z in range(p):
        fz = sum(c * pow(z, i, p) for i, c in enumerate(coeffs)) % p
        dz = sum(c * pow(z, i, p) for i, c in enumerate(d)) % p
        for y in range(p):
            if (y * y - fz) % p == 0:
                total += 1
                if (2 * y) % p or dz:
                    smooth += 1
    return total, smooth


def local_points(E, p: int, count: int, rng, k: int = 3):
    """Points of E(Q_p) with x = p^j u, found by testing rhs(x) for squareness and lifting y."""
    out = []
    while len(out) < count:
        j = rng.randint(-3, 3)
        u = rng.randrange(1, p**k)
        if u % p == 0:
            continue
        x = Fraction(p) ** j * u
        r = E.rhs(x)
        if r == 0 or not is_square_local(r, Place(p)):
            continue
        e = val(r, p)
        unit = r / Fraction(p) ** e
        un = unit.numerator * pow(unit.denominator, -1, p**k) % p**k
        y0 = sqrt_unit_padic(un, p, k)
        assert y0 is not None and (y0 * y0 - un) % p**k == 0
        out.append((x, y0, e // 2))
    return out
