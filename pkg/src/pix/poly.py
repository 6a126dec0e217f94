"""Dense univariate polynomials as coefficient lists, lowest degree first.

Generic routines work over any field whose elements support ``+ - * /`` and
compare equal to ``0`` (``Fraction``, :class:`pix.tower.TowerElement`). The
``*_mod`` routines work over the prime field with plain ints.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Sequence

Poly = list


def trim(f: Sequence) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence) -> int:
    return len(trim(f)) - 1


def add(f: Sequence, g: Sequence) -> list:
    n = max(len(f), len(g))
    zero = _zero_like(f, g)
    return trim([(f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) for i in range(n)])


def sub(f: Sequence, g: Sequence) -> list:
    return add(f, [-c for c in g])


def mul(f: Sequence, g: Sequence) -> list:
    if not f or not g:
        return []
    out: list[Any] = [None] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return trim(out)


def scale(f: Sequence, c) -> list:
    return trim([c * a for a in f])


def deriv(f: Sequence) -> list:
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f: Sequence, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def divmod_poly(f: Sequence, g: Sequence) -> tuple[list, list]:
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(f)
    q: list[Any] = [0] * max(len(r) - len(g) + 1, 0)
    lead = g[-1]
    while len(r) >= len(g):
        c = _div(r[-1], lead)
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] = r[i + k] - c * b
        r = trim(r[:-1]) if r[-1] == 0 else trim(r)
    return trim(q), r


def monic(f: Sequence) -> list:
    f = trim(f)
    return [_div(c, f[-1]) for c in f]


def gcd(f: Sequence, g: Sequence) -> list:
    """Monic gcd (empty list when both are zero)."""
    a, b = trim(f), trim(g)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a) if a else []


def reverse(f: Sequence, n: int) -> list:
    """``w**n * f(1/w)`` for ``deg f <= n``."""
    f = list(f) + [0] * (n + 1 - len(f))
    return trim(f[::-1])


def taylor_shift(f: Sequence[int], a: int, scale_: int) -> list[int]:
    """Coefficients of ``f(a + scale_ * t)`` in ``t`` (exact integers)."""
    c = list(f)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += a * c[j + 1]
    return [x * scale_**i for i, x in enumerate(c)]


# -- arithmetic over F_p ----------------------------------------------------


def trim_mod(f: Sequence[int], p: int) -> list[int]:
    return trim([c % p for c in f])


def mul_mod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def divmod_mod(f: Sequence[int], g: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    g = trim_mod(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    r = trim_mod(f, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        c = r[-1] * inv % p
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] = (r[i + k] - c * b) % p
        r = trim(r)
    return trim(q), r


def gcd_mod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    a, b = trim_mod(f, p), trim_mod(g, p)
    while b:
        a, b = b, divmod_mod(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def powmod_poly(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = divmod_mod(base, mod, p)[1]
    while e:
        if e & 1:
            result = divmod_mod(mul_mod(result, b, p), mod, p)[1]
        b = divmod_mod(mul_mod(b, b, p), mod, p)[1]
        e >>= 1
    return result


def roots_mod(f: Sequence[int], p: int) -> list[int]:
    """Distinct roots in F_p of a nonzero polynomial, sorted.

    Splits ``gcd(f, z^p - z)`` by Cantor-Zassenhaus with a fixed-seed generator.
    """
    f = trim_mod(f, p)
    if not f:
        raise ValueError("roots of the zero polynomial")
    if len(f) == 1:
        return []
    if p < 64:
        return [z for z in range(p) if evaluate(f, z) % p == 0]
    xp = powmod_poly([0, 1], p, f, p)
    split = gcd_mod(f, trim_mod(_sub_x(xp), p), p)
    rng = random.Random(p)
    found: list[int] = []
    stack = [split] if len(split) > 1 else []
    while stack:
        g = stack.pop()
        if len(g) == 2:
            found.append(-g[0] * pow(g[1], -1, p) % p)
            continue
        while True:
            d = rng.randrange(p)
            h = powmod_poly([d, 1], (p - 1) // 2, g, p)
            h = h + [0] * (1 - len(h)) if h else [0]
            h[0] = (h[0] - 1) % p
            c = gcd_mod(g, trim(h), p)
            if 1 < len(c) < len(g):
                stack.append(c)
                stack.append(divmod_mod(g, c, p)[0])
                break
    return sorted(found)


def _sub_x(f: list[int]) -> list[int]:
    f = list(f) + [0] * (2 - len(f))
    f[1] -= 1
    return f


def _zero_like(f: Sequence, g: Sequence):
    for seq in (f, g):
        if seq:
            return seq[0] * 0
    return 0
