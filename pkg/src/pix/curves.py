"""Elliptic models y^2 = x(x-b)(x-c) and hyperelliptic models y^2 = f(z)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import poly
from .arith import (
    Rational,
    as_fraction,
    format_rational,
    parse_rational,
    rational_square_class,
    val,
)
from .tower import TowerElement, TowerField, element_from_json

QQ = TowerField.rationals()


class SingularModel(ValueError):
    def __init__(self, repeated_factor: list):
        super().__init__(f"singular model: repeated factor {poly_str(repeated_factor)}")
        self.repeated_factor = repeated_factor


class PairingUndefined(ValueError):
    pass


@dataclass(frozen=True)
class AffinePoint:
    """Affine point; ``x`` is the z-coordinate when the point lies on a hyperelliptic model."""

    x: object
    y: object


@dataclass(frozen=True)
class EllipticModel:
    b: int
    c: int

    def __post_init__(self):
        if not isinstance(self.b, int) or not isinstance(self.c, int):
            raise TypeError("b and c must be integers")
        if self.b == 0 or self.c == 0 or self.b == self.c:
            raise ValueError(f"0, b={self.b}, c={self.c} must be pairwise distinct")

    def rhs(self, x):
        return x * (x - self.b) * (x - self.c)

    def contains(self, P: AffinePoint | None) -> bool:
        return P is None or P.y * P.y == self.rhs(P.x)

    def point(self, x: Rational, y: Rational) -> AffinePoint:
        P = AffinePoint(as_fraction(x), as_fraction(y))
        if not self.contains(P):
            raise ValueError(f"({x}, {y}) is not on y^2 = x(x-{self.b})(x-{self.c})")
        return P

    def neg(self, P: AffinePoint | None) -> AffinePoint | None:
        return None if P is None else AffinePoint(P.x, -P.y)

    def add(self, P: AffinePoint | None, Q: AffinePoint | None) -> AffinePoint | None:
        """Chord-tangent addition on the Weierstrass form y^2 = x^3 + a2 x^2 + a4 x (None is O)."""
        if P is None:
            return Q
        if Q is None:
            return P
        a2 = -(self.b + self.c)
        a4 = self.b * self.c
        if P.x == Q.x:
            if P.y + Q.y == 0:
                return None
            lam = (3 * P.x * P.x + 2 * a2 * P.x + a4) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - a2 - P.x - Q.x
        y3 = -(P.y + lam * (x3 - P.x))
        return AffinePoint(x3, y3)

    def to_json(self) -> dict:
        return {"b": str(self.b), "c": str(self.c)}


def elliptic_discriminant(E: EllipticModel) -> int:
    return 16 * E.b**2 * E.c**2 * (E.b - E.c) ** 2


def descent_pairing_value(E: EllipticModel, P: AffinePoint) -> int:
    """Square class of x(P): the signed squarefree integer it reduces to."""
    if not E.contains(P):
        raise ValueError("point is not on the curve")
    if P.x == 0:
        raise PairingUndefined(
            "pairing undefined at kernel points; use the standard substitute value"
            " (not implemented: only P outside {O, T} is supported)"
        )
    return rational_square_class(P.x)


def local_square_class(x: Rational, p: int) -> tuple[int, int]:
    """Class of x in Q_p*/Q_p*^2 as (valuation parity, unit class).

    The unit class is the Legendre symbol for odd p and the unit mod 8 for p = 2.
    """
    from .arith import legendre, unit_part

    x = as_fraction(x)
    v = val(x, p)
    u = unit_part(x, p)
    if p == 2:
        return v % 2, u.numerator * u.denominator % 8
    return v % 2, legendre(u.numerator * u.denominator, p)


class HyperellipticModel:
    """y^2 = f(z) over Q or a tower field.

    ``factors`` optionally records a factorization f = lead * prod(factors) used
    for root finding; it is checked against the coefficients.
    """

    __slots__ = ("field", "coeffs", "lead", "factors", "label")

    def __init__(
        self,
        coeffs: Sequence,
        field: TowerField = QQ,
        factors: Sequence[Sequence] | None = None,
        lead=None,
        label: str = "",
    ):
        self.field = field
        self.coeffs = tuple(_coerce(c, field) for c in poly.trim(coeffs))
        if not self.coeffs:
            raise ValueError("f must be nonzero")
        self.label = label
        if factors is not None:
            fs = tuple(tuple(_coerce(c, field) for c in fac) for fac in factors)
            ld = _coerce(lead if lead is not None else 1, field)
            prod = [ld]
            for fac in fs:
                prod = poly.mul(prod, list(fac))
            if tuple(prod) != self.coeffs:
                raise ValueError("recorded factorization does not match the coefficients")
            self.factors, self.lead = fs, ld
        else:
            self.factors, self.lead = None, None

    @classmethod
    def from_factors(cls, lead, factors: Sequence[Sequence], field: TowerField = QQ, label: str = ""):
        prod = [_coerce(lead, field)]
        for fac in factors:
            prod = poly.mul(prod, [_coerce(c, field) for c in fac])
        return cls(prod, field, factors, lead, label)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    def f(self, z):
        return poly.evaluate(self.coeffs, z)

    def contains(self, P: AffinePoint) -> bool:
        return P.y * P.y == self.f(P.x)

    def base_change(self, F: TowerField) -> HyperellipticModel:
        conv = lambda seq: [F(c) for c in seq]  # noqa: E731
        if self.factors is None:
            return HyperellipticModel(conv(self.coeffs), F, label=self.label)
        return HyperellipticModel(conv(self.coeffs), F, [conv(f) for f in self.factors], F(self.lead), self.label)

    def is_rational(self) -> bool:
        return self.field.depth == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, HyperellipticModel) and (self.field, self.coeffs) == (other.field, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        return f"y^2 = {poly_str(list(self.coeffs))}"

    def to_json(self) -> dict:
        out: dict = {"field": self.field.to_json(), "coefficients": [_cjson(c) for c in self.coeffs]}
        if self.factors is not None:
            out["lead"] = _cjson(self.lead)
            out["factors"] = [[_cjson(c) for c in f] for f in self.factors]
        return out

    @classmethod
    def from_json(cls, data: dict) -> HyperellipticModel:
        F = TowerField.from_json(data["field"])
        load = lambda c: parse_rational(c) if isinstance(c, str) else element_from_json(F, c)  # noqa: E731
        coeffs = [load(c) for c in data["coefficients"]]
        if "factors" in data:
            return cls(coeffs, F, [[load(c) for c in f] for f in data["factors"]], load(data["lead"]))
        return cls(coeffs, F)


def _coerce(c, field: TowerField):
    if field.depth == 0:
        if isinstance(c, TowerElement):
            return c.rational()
        return as_fraction(c)
    return field(c)


def _cjson(c):
    return c.to_json() if isinstance(c, TowerElement) else format_rational(c)


def poly_str(f: Sequence, var: str = "z") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        cs = format_rational(c) if not isinstance(c, TowerElement) else f"({c})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and cs == "1":
            terms.append(mono)
        elif mono and cs == "-1":
            terms.append("-" + mono)
        else:
            terms.append(cs + ("*" + mono if mono else ""))
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def genus_of_model(H: HyperellipticModel) -> int:
    f = list(H.coeffs)
    if len(f) < 2:
        raise ValueError("constant f does not define a curve of positive degree")
    g = poly.gcd(f, poly.deriv(f))
    if len(g) > 1:
        raise SingularModel(g)
    return (H.degree - 1) // 2


class Reduction(NamedTuple):
    coeffs: tuple[int, ...]
    reduced: bool
    scale_k: int


def reduce_mod_p(H: HyperellipticModel, p: int, scale_k: int | None = None) -> Reduction:
    """Reduce a rational model mod p after the substitution y -> y / p^k (f -> p^(2k) f).

    With ``scale_k=None`` the least k >= 0 making the model p-integral is used.
    """
    if not H.is_rational():
        raise ValueError("reduction mod p is for models over Q")
    vmin = min(val(c, p) for c in H.coeffs if c != 0)
    if scale_k is None:
        scale_k = max(0, (1 - vmin) // 2)
    if vmin + 2 * scale_k < 0:
        raise ValueError(f"model is not {p}-integral after scaling by {p}^{2 * scale_k}")
    s = Fraction(p) ** (2 * scale_k)
    out = []
    for c in H.coeffs:
        c = c * s
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    red = tuple(poly.trim(out))
    return Reduction(red, bool(red), scale_k)


def integral_model(H: HyperellipticModel) -> list[int]:
    """Integer coefficients of d^2 f for the least d clearing denominators (y -> d y)."""
    from math import lcm

    d = 1
    for c in H.coeffs:
        d = lcm(d, c.denominator)
    # d^2 * c is integral whenever d * c is
    return [int(c * d * d) for c in H.coeffs]
