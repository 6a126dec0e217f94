"""Divisors of functions y^m g(z)/h(z) on degree-6 hyperelliptic models over tower fields.

Orders of vanishing follow the structural rules for this function class: a root
r of g with f(r) != 0 gives the two points (r, +-y_r), a root with f(r) = 0 gives
the Weierstrass point (r, 0) with doubled multiplicity, and every linear factor
in z has polar divisor K = inf+ + inf- on a degree-6 model.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import poly
from .curves import HyperellipticModel, poly_str
from .tower import TowerElement, TowerField, conjugate, express_root

AFFINE = "affine"
INF_PLUS = "infinity_plus"
INF_MINUS = "infinity_minus"


class RootsNotInTower(ValueError):
    def __init__(self, factor: Sequence, field: TowerField, why: str = "no root in the tower"):
        super().__init__(f"factor {poly_str(list(factor))} over {field!r}: {why}")
        self.factor = list(factor)


@dataclass(frozen=True)
class CurvePoint:
    kind: str
    z: TowerElement | None = None
    y: TowerElement | None = None

    @classmethod
    def affine(cls, z: TowerElement, y: TowerElement) -> CurvePoint:
        return cls(AFFINE, z, y)

    def sort_key(self) -> tuple:
        if self.kind != AFFINE:
            return (1, self.kind, (), ())
        return (0, "", self.z.coords, self.y.coords)

    def to_json(self) -> dict:
        if self.kind != AFFINE:
            return {"kind": self.kind}
        return {"kind": AFFINE, "z": self.z.to_json(), "y": self.y.to_json()}

    def __repr__(self) -> str:
        return self.kind if self.kind != AFFINE else f"({self.z}, {self.y})"


INFINITY_PLUS = CurvePoint(INF_PLUS)
INFINITY_MINUS = CurvePoint(INF_MINUS)


class Divisor:
    """Finite formal sum of curve points with nonzero integer multiplicities."""

    __slots__ = ("support",)

    def __init__(self, terms: dict[CurvePoint, int] | Iterable[tuple[CurvePoint, int]] = ()):
        c: Counter = Counter()
        for pt, n in (terms.items() if isinstance(terms, dict) else terms):
            c[pt] += n
        self.support = {pt: n for pt, n in c.items() if n}

    @classmethod
    def point(cls, pt: CurvePoint, n: int = 1) -> Divisor:
        return cls({pt: n})

    @property
    def degree(self) -> int:
        return sum(self.support.values())

    def __add__(self, other: Divisor) -> Divisor:
        return Divisor(list(self.support.items()) + list(other.support.items()))

    def __neg__(self) -> Divisor:
        return Divisor({pt: -n for pt, n in self.support.items()})

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __rmul__(self, k: int) -> Divisor:
        return Divisor({pt: k * n for pt, n in self.support.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.support == other.support

    def __hash__(self) -> int:
        return hash(frozenset(self.support.items()))

    def __repr__(self) -> str:
        if not self.support:
            return "0"
        parts = [f"{n}*{pt!r}" for pt, n in self.items()]
        return " + ".join(parts)

    def items(self) -> list[tuple[CurvePoint, int]]:
        return sorted(self.support.items(), key=lambda kv: kv[0].sort_key())

    def to_json(self) -> list:
        return [{"point": pt.to_json(), "multiplicity": n} for pt, n in self.items()]


def canonical_at_infinity() -> Divisor:
    return Divisor({INFINITY_PLUS: 1, INFINITY_MINUS: 1})


# -- root finding over the tower --------------------------------------------


def _roots_squarefree(h: list, F: TowerField) -> list:
    h = poly.trim(h)
    n = len(h) - 1
    if n <= 0:
        return []
    if n == 1:
        return [-h[0] / h[1]]
    if n == 2:
        a, b, c = h[2], h[1], h[0]
        disc = b * b - 4 * a * c
        s = express_root(F, disc)
        if s is None:
            raise RootsNotInTower(h, F)
        return [(-b + s) / (2 * a), (-b - s) / (2 * a)]
    if all(h[i] == 0 for i in range(1, len(h), 2)):
        out = []
        for u in _roots_squarefree(h[0::2], F):
            if u == 0:
                out.append(F(0))
                continue
            s = express_root(F, u)
            if s is None:
                raise RootsNotInTower([-u, 0, 1], F)
            out += [s, -s]
        return out
    if all(F(c).is_rational() for c in h):
        return _roots_via_rational_factors([F(c).rational() for c in h], F)
    raise RootsNotInTower(h, F, "root finding for this factor shape is not supported")


def _roots_via_rational_factors(h: list[Fraction], F: TowerField) -> list:
    import sympy

    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z**i for i, c in enumerate(h))
    _, facs = sympy.factor_list(expr, z)
    out = []
    for fac, _mult in facs:
        coeffs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                  for c in reversed(sympy.Poly(fac, z).all_coeffs())]
        d = len(coeffs) - 1
        if d in (1, 2) or all(coeffs[i] == 0 for i in range(1, len(coeffs), 2)):
            out += _roots_squarefree([F(c) for c in coeffs], F)
        elif d % 2:
            # an irreducible odd-degree factor has no root in a field of 2-power degree
            raise RootsNotInTower(coeffs, F, "irreducible of odd degree over Q")
        else:
            raise RootsNotInTower(coeffs, F, "root finding for this factor shape is not supported")
    return out


def tower_roots(g: Sequence, F: TowerField) -> dict:
    """Roots of g in F with multiplicities; raises if some root lies outside F."""
    g = poly.trim([F(c) for c in g])
    if not g:
        raise ValueError("roots of the zero polynomial")
    if len(g) == 1:
        return {}
    sf = poly.divmod_poly(g, poly.gcd(g, poly.deriv(g)))[0]
    roots = _roots_squarefree(sf, F)
    out = {}
    for r in roots:
        e, rest = 0, g
        while poly.evaluate(rest, r) == 0:
            rest = poly.divmod_poly(rest, [-r, F(1)])[0]
            e += 1
        out[r] = e
    if sum(out.values()) != len(g) - 1:
        raise RootsNotInTower(g, F, "not all roots found")
    return out


class ZPoly:
    """A polynomial in z over the tower, optionally given as a product of factors."""

    def __init__(self, factors: Sequence[Sequence], field: TowerField):
        self.field = field
        self.factors = [poly.trim([field(c) for c in f]) for f in factors]
        if any(not f for f in self.factors):
            raise ValueError("zero factor")

    @classmethod
    def of_roots(cls, roots: Sequence, field: TowerField, lead=1) -> ZPoly:
        return cls([[field(lead)]] + [[-field(r), field(1)] for r in roots], field)

    @property
    def degree(self) -> int:
        return sum(len(f) - 1 for f in self.factors)

    def expand(self) -> list:
        out = [self.field(1)]
        for f in self.factors:
            out = poly.mul(out, f)
        return out

    def roots(self) -> dict:
        c: Counter = Counter()
        for f in self.factors:
            for r, e in tower_roots(f, self.field).items():
                c[r] += e
        return dict(c)


def _as_zpoly(g, H: HyperellipticModel) -> ZPoly:
    if isinstance(g, ZPoly):
        if g.field != H.field:
            raise ValueError("polynomial and model live over different towers")
        return g
    return ZPoly([g], H.field)


def _require_sextic(H: HyperellipticModel) -> None:
    if H.degree != 6:
        raise ValueError("divisor engine supports degree-6 models only")


def sqrt_leading(H: HyperellipticModel) -> TowerElement | None:
    """The distinguished square root of the leading coefficient, when it lies in the tower."""
    return express_root(H.field, H.leading)


def divisor_of_zpoly(g, H: HyperellipticModel) -> Divisor:
    _require_sextic(H)
    g = _as_zpoly(g, H)
    F = H.field
    df = poly.deriv(list(H.coeffs))
    terms: list[tuple[CurvePoint, int]] = []
    for r, e in g.roots().items():
        fr = H.f(r)
        if fr != 0:
            yr = express_root(F, fr)
            if yr is None:
                raise RootsNotInTower([-fr, 0, 1], F, f"y-coordinate over z = {r} is not in the tower")
            terms += [(CurvePoint.affine(r, yr), e), (CurvePoint.affine(r, -yr), e)]
        else:
            if poly.evaluate(df, r) == 0:
                raise ValueError(f"singular model: f has a repeated root at {r}")
            terms.append((CurvePoint.affine(r, F(0)), 2 * e))
    return Divisor(terms) - g.degree * canonical_at_infinity()


def divisor_of_y(H: HyperellipticModel) -> Divisor:
    _require_sextic(H)
    F = H.field
    if H.factors is not None:
        roots: Counter = Counter()
        for fac in H.factors:
            for r, e in tower_roots(fac, F).items():
                roots[r] += e
    else:
        roots = Counter(tower_roots(H.coeffs, F))
    if any(e != 1 for e in roots.values()) or sum(roots.values()) != 6:
        raise ValueError("f must be squarefree of degree 6 with all roots in the tower")
    return Divisor([(CurvePoint.affine(r, F(0)), 1) for r in roots]) - 3 * canonical_at_infinity()


def divisor_of_function(m: int, g, h, H: HyperellipticModel) -> Divisor:
    """Divisor of y^m g(z) / h(z)."""
    D = m * divisor_of_y(H) + divisor_of_zpoly(g, H) - divisor_of_zpoly(h, H)
    if D.degree != 0:
        raise AssertionError(f"principal divisor of nonzero degree {D.degree}")
    return D


def conjugate_divisor(D: Divisor, generator: str, H: HyperellipticModel) -> Divisor:
    s = sqrt_leading(H)
    swap = s is not None and conjugate(s, generator) != s
    out = []
    for pt, n in D.support.items():
        if pt.kind == AFFINE:
            out.append((CurvePoint.affine(conjugate(pt.z, generator), conjugate(pt.y, generator)), n))
        elif swap:
            out.append((INFINITY_MINUS if pt.kind == INF_PLUS else INFINITY_PLUS, n))
        else:
            out.append((pt, n))
    return Divisor(out)


def hyperelliptic_involution(D: Divisor) -> Divisor:
    out = []
    for pt, n in D.support.items():
        if pt.kind == AFFINE:
            out.append((CurvePoint.affine(pt.z, -pt.y), n))
        else:
            out.append((INFINITY_MINUS if pt.kind == INF_PLUS else INFINITY_PLUS, n))
    return Divisor(out)


@dataclass
class Case3Certificate:
    D: Divisor
    sigma_D: Divisor
    lhs: Divisor
    rhs: Divisor
    holds: bool
    generator: str
    function: str

    def __bool__(self) -> bool:
        return self.holds

    @property
    def degree_D(self) -> int:
        return self.D.degree

    def to_json(self) -> dict:
        return {
            "function": self.function,
            "generator": self.generator,
            "D": self.D.to_json(),
            "sigma_D": self.sigma_D.to_json(),
            "div_function": self.lhs.to_json(),
            "sigma_D_minus_D": self.rhs.to_json(),
            "holds": self.holds,
            "degree_D": self.D.degree,
            "canonical_degree": 2,
            "period_bound": gcd(self.D.degree, 2),
        }


def verify_case3_identity(
    H: HyperellipticModel,
    roots: Sequence[TowerElement],
    generator: str,
    h: ZPoly | None = None,
    m: int = 1,
) -> Case3Certificate:
    """Check div(y^m / h) == sigma(D) - D for D = sum of (r, 0) over ``roots``.

    With the defaults h = prod(z - r) and m = 1 this is the identity showing
    D and its conjugate are linearly equivalent.
    """
    F = H.field
    D = Divisor([(CurvePoint.affine(F(r), F(0)), 1) for r in roots])
    if h is None:
        h = ZPoly.of_roots(roots, F)
    lhs = divisor_of_function(m, [F(1)], h, H)
    sigma_D = conjugate_divisor(D, generator, H)
    rhs = sigma_D - D
    fn = f"y^{m} / ({' * '.join('(' + poly_str(f) + ')' for f in h.factors)})"
    return Case3Certificate(D, sigma_D, lhs, rhs, lhs == rhs, generator, fn)
