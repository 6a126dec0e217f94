"""Pure-Python versions of the mod-p scanning loops in ``_kernels.pyx``."""
from __future__ import annotations

from functools import lru_cache


def _horner(c, z, p):
    acc = 0
    for a in reversed(c):
        acc = (acc * z + a) % p
    return acc


def _deriv(c, p):
    return [i * c[i] % p for i in range(1, len(c))]


@lru_cache(maxsize=64)
def _squares(p: int) -> frozenset[int]:
    return frozenset(x * x % p for x in range(1, (p - 1) // 2 + 1))


def _chi(v: int, p: int) -> int:
    if v == 0:
        return 0
    if p <= 1 << 16:
        return 1 if v in _squares(p) else -1
    return 1 if pow(v, (p - 1) // 2, p) == 1 else -1


def count_points(coeffs, p):
    c = [int(a) % p for a in coeffs]
    d = _deriv(c, p)
    total = singular = 0
    for z in range(p):
        v = _horner(c, z, p)
        if p == 2:
            total += 1
            singular += _horner(d, z, p) == 0
            continue
        total += 1 + _chi(v, p)
        if v == 0 and _horner(d, z, p) == 0:
            singular += 1
    return total, total - singular


def first_smooth_z(coeffs, p):
    c = [int(a) % p for a in coeffs]
    d = _deriv(c, p)
    for z in range(p):
        if p == 2:
            if _horner(d, z, p):
                return z
            continue
        v = _horner(c, z, p)
        if v == 0:
            if _horner(d, z, p):
                return z
        elif _chi(v, p) == 1:
            return z
    return -1


def first_square_value(coeffs, p, start=0):
    c = [int(a) % p for a in coeffs]
    for j in range(start, p):
        v = _horner(c, j, p)
        if v and _chi(v, p) == 1:
            return j
    return -1


def roots(coeffs, p):
    c = [int(a) % p for a in coeffs]
    return [z for z in range(p) if _horner(c, z, p) == 0]
