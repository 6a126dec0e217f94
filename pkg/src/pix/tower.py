"""Exact arithmetic in towers of quadratic extensions of Q.

An element of a depth-k tower is stored as 2**k rational coordinates in the
multilinear basis of the generators: bit j of a coordinate's index marks the
presence of generator j. Splitting the coordinate tuple in half gives the
representation ``lo + hi * g_top`` over the previous level, which is what all
the recursive routines use.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .arith import Rational, as_fraction, format_rational, parse_rational, sqrt_rational

MAX_DEPTH = 3

Coords = tuple  # tuple[Fraction, ...]


class DegenerateExtension(ValueError):
    """Raised when asked to adjoin the square root of an element that is already a square."""

    def __init__(self, radicand: TowerElement, witness: TowerElement):
        super().__init__(f"{radicand} is already a square in the field: ({witness})^2")
        self.radicand = radicand
        self.witness = witness


class TowerField:
    """Q(sqrt(d_1), sqrt(d_2), ...) with each d_i taken from the previous level."""

    __slots__ = ("names", "squares")

    def __init__(self, names: Sequence[str] = (), squares: Sequence[Coords] = ()):
        if len(names) != len(squares) or len(names) > MAX_DEPTH:
            raise ValueError("bad tower description")
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for i, sq in enumerate(squares):
            if len(sq) != 1 << i:
                raise ValueError(f"square of generator {i} must live at level {i}")
        self.names = tuple(names)
        self.squares = tuple(tuple(as_fraction(c) for c in sq) for sq in squares)

    @classmethod
    def rationals(cls) -> TowerField:
        return cls()

    @property
    def depth(self) -> int:
        return len(self.names)

    @property
    def degree(self) -> int:
        return 1 << self.depth

    def __eq__(self, other) -> bool:
        return isinstance(other, TowerField) and (self.names, self.squares) == (other.names, other.squares)

    def __hash__(self) -> int:
        return hash((self.names, self.squares))

    def __repr__(self) -> str:
        if not self.names:
            return "Q"
        parts = [f"{n}^2={_fmt(sq, self.names[:i])}" for i, (n, sq) in enumerate(zip(self.names, self.squares))]
        return "Q(" + ", ".join(parts) + ")"

    def level(self, k: int) -> TowerField:
        return TowerField(self.names[:k], self.squares[:k])

    def __call__(self, x) -> TowerElement:
        """Coerce a rational or an element of a subfield of this tower."""
        if isinstance(x, TowerElement):
            if x.field == self:
                return x
            sub = self.level(x.field.depth)
            if sub != x.field:
                raise ValueError(f"{x.field!r} is not a subfield of {self!r}")
            return TowerElement(self, x.coords + (Fraction(0),) * (self.degree - x.field.degree))
        return TowerElement(self, (as_fraction(x),) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> TowerElement:
        return self(0)

    def one(self) -> TowerElement:
        return self(1)

    def gen(self, name: str) -> TowerElement:
        j = self.index_of(name)
        c = [Fraction(0)] * self.degree
        c[1 << j] = Fraction(1)
        return TowerElement(self, tuple(c))

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def element(self, coords: Sequence[Rational]) -> TowerElement:
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates")
        return TowerElement(self, tuple(as_fraction(c) for c in coords))

    def square_of(self, j: int) -> TowerElement:
        return self(TowerElement(self.level(j), self.squares[j]))

    def to_json(self) -> list:
        return [{"name": n, "square": [format_rational(c) for c in sq]} for n, sq in zip(self.names, self.squares)]

    @classmethod
    def from_json(cls, data: list) -> TowerField:
        return cls([d["name"] for d in data], [tuple(parse_rational(c) for c in d["square"]) for d in data])


class TowerElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: TowerField, coords: Coords):
        self.field = field
        self.coords = coords

    # -- coercion helpers
    def _other(self, other) -> TowerElement | None:
        if isinstance(other, TowerElement):
            if other.field == self.field:
                return other
            if other.field.depth < self.field.depth:
                return self.field(other)
            if other.field.depth > self.field.depth:
                return None
            raise ValueError("elements of different towers")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented if not isinstance(other, TowerElement) else other.field(self) + other
        return TowerElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented if not isinstance(other, TowerElement) else other.field(self) * other
        return TowerElement(self.field, _mul(self.coords, o.coords, self.field.squares))

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        if self == 0:
            raise ZeroDivisionError("inverse of zero in tower field")
        return TowerElement(self.field, _inv(self.coords, self.field.squares))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented if not isinstance(other, TowerElement) else other.field(self) / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is None:
            if isinstance(other, TowerElement):
                return other.field(self) == other
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self) -> int:
        # elements lying in Q hash like the rational so mixed dict keys behave
        if all(c == 0 for c in self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __repr__(self) -> str:
        return _fmt(self.coords, self.field.names)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coords]


# -- recursive kernels on coordinate tuples ----------------------------------


def _split(c: Coords) -> tuple[Coords, Coords]:
    h = len(c) // 2
    return c[:h], c[h:]


def _add(a: Coords, b: Coords) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Coords, b: Coords) -> Coords:
    return tuple(x - y for x, y in zip(a, b))


def _mul(a: Coords, b: Coords, squares) -> Coords:
    if len(a) == 1:
        return (a[0] * b[0],)
    k = len(a).bit_length() - 2
    low = squares[:k]
    s = squares[k]
    a0, a1 = _split(a)
    b0, b1 = _split(b)
    x = _add(_mul(a0, b0, low), _mul(_mul(a1, b1, low), s, low))
    y = _add(_mul(a0, b1, low), _mul(a1, b0, low))
    return x + y


def _inv(a: Coords, squares) -> Coords:
    if len(a) == 1:
        return (1 / a[0],)
    k = len(a).bit_length() - 2
    low = squares[:k]
    s = squares[k]
    a0, a1 = _split(a)
    norm = _sub(_mul(a0, a0, low), _mul(_mul(a1, a1, low), s, low))
    ninv = _inv(norm, low)
    return _mul(a0, ninv, low) + tuple(-c for c in _mul(a1, ninv, low))


def _is_zero(a: Coords) -> bool:
    return not any(a)


def _sqrt(a: Coords, squares) -> Coords | None:
    """A square root of ``a`` at its level, or None."""
    if len(a) == 1:
        r = sqrt_rational(a[0])
        return None if r is None else (r,)
    k = len(a).bit_length() - 2
    low = squares[:k]
    s = squares[k]
    zero = (Fraction(0),) * len(s)
    a0, a1 = _split(a)
    if _is_zero(a1):
        c = _sqrt(a0, low)
        if c is not None:
            return c + zero
        d = _sqrt(_mul(a0, _inv(s, low), low), low)
        if d is not None:
            return zero + d
        return None
    # (c + d g)^2 = a0 + a1 g  =>  c^2 + d^2 s = a0, 2cd = a1 and norm(a) = norm(c + d g)^2
    norm = _sub(_mul(a0, a0, low), _mul(_mul(a1, a1, low), s, low))
    n = _sqrt(norm, low)
    if n is None:
        return None
    half = Fraction(1, 2)
    for cand in (_add(a0, n), _sub(a0, n)):
        c = _sqrt(tuple(half * x for x in cand), low)
        if c is None or _is_zero(c):
            continue
        d = _mul(a1, _inv(tuple(2 * x for x in c), low), low)
        y = c + d
        if _mul(y, y, squares[: k + 1]) == a:
            return y
    return None


def _fmt(c: Coords, names: Sequence[str]) -> str:
    terms = []
    for i, x in enumerate(c):
        if x == 0:
            continue
        mono = "*".join(n for j, n in enumerate(names) if i >> j & 1)
        coef = format_rational(x)
        if not mono:
            terms.append(coef)
        elif x == 1:
            terms.append(mono)
        elif x == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"({coef})*{mono}" if "/" in coef else f"{coef}*{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# -- public operations -------------------------------------------------------


def express_root(F: TowerField, target) -> TowerElement | None:
    """An element y of F with y**2 == target, or None when target is a nonsquare in F."""
    t = F(target)
    if t == 0:
        return F(0)
    r = _sqrt(t.coords, F.squares)
    return None if r is None else TowerElement(F, r)


def tower_extend(F: TowerField, d, name: str | None = None) -> TowerField:
    """F(sqrt(d)); refuses when d is zero or already a square in F."""
    if F.depth >= MAX_DEPTH:
        raise ValueError(f"tower depth is capped at {MAX_DEPTH}")
    d = F(d)
    if d == 0:
        raise ValueError("cannot adjoin sqrt(0)")
    w = express_root(F, d)
    if w is not None:
        raise DegenerateExtension(d, w)
    name = name or f"g{F.depth}"
    return TowerField(F.names + (name,), F.squares + (d.coords,))


def _check_automorphism(F: TowerField, j: int) -> None:
    # g_j -> -g_j extends to an automorphism fixing later generators only if it fixes their squares
    for i in range(j + 1, F.depth):
        sq = F.squares[i]
        flipped = tuple(-x if idx >> j & 1 else x for idx, x in enumerate(sq))
        if flipped != sq:
            raise ValueError(
                f"negating {F.names[j]} does not fix {F.names[i]}^2; no such automorphism"
            )


def conjugate(x: TowerElement, g: str) -> TowerElement:
    """Apply the automorphism negating generator ``g`` and fixing the others."""
    F = x.field
    j = F.index_of(g)
    _check_automorphism(F, j)
    return TowerElement(F, tuple(-c if idx >> j & 1 else c for idx, c in enumerate(x.coords)))


def element_from_json(F: TowerField, data: Sequence[str]) -> TowerElement:
    return F.element([parse_rational(s) for s in data])
