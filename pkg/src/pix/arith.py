"""Exact integer/rational arithmetic over Q.

Valuations, Legendre symbols, local square tests, deterministic primality and
prime search in arithmetic progressions. Rationals are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]

# Strong-pseudoprime test with the first 13 prime bases is deterministic below this.
MR_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

CEILING_ENV = "PIX_SEARCH_CEILING"


class SearchCeilingExceeded(RuntimeError):
    pass


def as_fraction(x: Rational | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"17"``, ``"-3/4"`` into an exact rational. Decimal points are refused."""
    s = text.strip()
    if not s or "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not an exact rational: {text!r}") from None
    if d == 0:
        raise ValueError("zero denominator")
    return Fraction(n, d)


def format_rational(x: Rational) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- places and moduli ------------------------------------------------------


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``Place(p)`` for the p-adic place, ``Place(None)`` for the real one."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def real(cls) -> Place:
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> Place:
        return cls(p)

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "real" if self.p is None else f"finite({self.p})"

    def to_json(self) -> str:
        return "real" if self.p is None else str(self.p)

    @classmethod
    def from_json(cls, s: str) -> Place:
        return cls(None) if s == "real" else cls(int(s))


@dataclass(frozen=True)
class Modulus:
    """Modulus over Q: a positive integer M with its factorization, plus an optional sign condition."""

    factors: tuple[tuple[int, int], ...]
    real_sign_condition: bool = True
    M: int = field(init=False)

    def __post_init__(self):
        m = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                raise ValueError(f"bad modulus factorization {self.factors}")
            last = p
            m *= p**e
        object.__setattr__(self, "M", m)

    @classmethod
    def from_dict(cls, factors: dict[int, int], real_sign_condition: bool = True) -> Modulus:
        return cls(tuple(sorted(factors.items())), real_sign_condition)

    @classmethod
    def of(cls, M: int, real_sign_condition: bool = True) -> Modulus:
        if M < 1:
            raise ValueError("modulus must be >= 1")
        return cls.from_dict(factorize(M), real_sign_condition)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def multiplicity(self, p: int) -> int:
        return dict(self.factors).get(p, 0)


# -- valuations and residues ------------------------------------------------


def val(x: Rational, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero rational ``x``."""
    x = as_fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    return _ival(x.numerator, p) - _ival(x.denominator, p)


def _ival(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(x: Rational, p: int) -> Fraction:
    x = as_fraction(x)
    return x / Fraction(p) ** val(x, p)


def legendre(a: int, p: int) -> int:
    if p == 2 or p < 2 or not is_prime(p):
        raise ValueError(f"legendre symbol needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _residue_of_unit(u: Fraction, p: int) -> int:
    return u.numerator * pow(u.denominator, -1, p) % p


def is_square_local(x: Rational, v: Place) -> bool:
    """True iff the nonzero rational ``x`` is a square in the completion of Q at ``v``."""
    x = as_fraction(x)
    if x == 0:
        raise ValueError("square test of zero")
    if v.is_real:
        return x > 0
    p = v.p
    if val(x, p) % 2:
        return False
    u = unit_part(x, p)
    if p == 2:
        return u.numerator * u.denominator % 8 == 1
    return legendre(_residue_of_unit(u, p), p) == 1


def squarefree_part(n: int) -> int:
    """Signed squarefree integer in the square class of the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("squarefree part of zero")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorize(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def rational_square_class(x: Rational) -> int:
    x = as_fraction(x)
    return squarefree_part(x.numerator * x.denominator)


def sqrt_rational(x: Rational) -> Fraction | None:
    x = as_fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of ``a`` modulo the prime ``p`` (Tonelli-Shanks), or None."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


def sqrt_unit_padic(u: int, p: int, k: int) -> int | None:
    """A root of y^2 = u modulo p^k for an integer unit u, or None if u is not a p-adic square.

    For p = 2 the result is correct modulo 2^k when u = 1 mod 8.
    """
    if u % p == 0:
        raise ValueError("not a unit")
    if p == 2:
        if u % 8 != 1:
            return None
        y, prec = 1, 3
        mod = 1 << (k + 1)
        while prec < k + 1:
            # (y + t)^2 = u with t = (u - y^2) / (2y); the error valuation grows from n to 2n-2.
            t = (u - y * y) // 2 * pow(y, -1, mod) % mod
            y = (y + t) % mod
            prec = 2 * prec - 2
        return y % (1 << k)
    y = sqrt_mod_prime(u, p)
    if y is None:
        return None
    mod, prec = p, 1
    while prec < k:
        prec = min(2 * prec, k)
        mod = p**prec
        y = (y - (y * y - u) * pow(2 * y, -1, mod)) % mod
    return y % p**k


# -- primality and factoring ------------------------------------------------


def is_prime(n: int) -> bool:
    """Deterministic primality for n below ``MR_BOUND``; larger inputs are refused."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= MR_BOUND:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, n + 1, i)))
    return [i for i, ok in enumerate(sieve) if ok]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    from sympy import factorint

    return {int(p): int(e) for p, e in sorted(factorint(n).items())}


# -- prime search -----------------------------------------------------------


def default_ceiling(M: int) -> int:
    env = os.environ.get(CEILING_ENV)
    if env:
        return int(env)
    return 10**9 * M


def prime_in_progression(
    r: int,
    m: Modulus,
    exclusions: Iterable[int] = (),
    ceiling: int | None = None,
) -> int:
    """Least positive prime congruent to ``r`` mod ``m.M`` that is not excluded.

    Over Q a prime lies in the trivial ray class mod (M, real) exactly when it is
    positive and congruent to 1 mod M, so the search is a plain progression scan.
    """
    M = m.M
    if math.gcd(r, M) != 1:
        raise ValueError(f"gcd({r}, {M}) != 1")
    excluded = set(exclusions)
    limit = default_ceiling(M) if ceiling is None else ceiling
    n = r % M
    while n < 2:
        n += M
    while n <= limit:
        if n not in excluded and is_prime(n):
            return n
        n += M
    raise SearchCeilingExceeded(
        f"no prime = {r} mod {M} below {limit}; raise {CEILING_ENV} to search further"
    )
