# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p scanning loops. Semantics match ``pix._kernels_py`` exactly."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef unsigned long long u64

cdef u64 TABLE_LIMIT = 1 << 22


cdef inline u64 horner(u64* c, int n, u64 z, u64 p) nogil:
    cdef u64 acc = 0
    cdef int i
    for i in range(n - 1, -1, -1):
        acc = (acc * z + c[i]) % p
    return acc


cdef int jacobi(u64 a, u64 n) nogil:
    cdef int t = 1
    cdef u64 r, tmp
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                t = -t
        tmp = a
        a = n
        n = tmp
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


cdef class _Poly:
    cdef u64* c
    cdef u64* d
    cdef int n
    cdef int nd
    cdef u64 p
    cdef unsigned char* sq

    def __cinit__(self, coeffs, u64 p, bint table=True):
        cdef int i
        cdef u64 x
        if p < 2 or p >= (1ULL << 32):
            raise ValueError("modulus out of kernel range")
        self.p = p
        self.n = len(coeffs)
        self.nd = self.n - 1 if self.n > 1 else 0
        self.c = <u64*> malloc(max(self.n, 1) * sizeof(u64))
        self.d = <u64*> malloc(max(self.nd, 1) * sizeof(u64))
        for i in range(self.n):
            self.c[i] = int(coeffs[i]) % p
        for i in range(self.nd):
            self.d[i] = ((i + 1) % p) * self.c[i + 1] % p
        self.sq = NULL
        if table and p <= TABLE_LIMIT and p > 2:
            self.sq = <unsigned char*> malloc(p)
            memset(self.sq, 0, p)
            for x in range(1, (p - 1) // 2 + 1):
                self.sq[x * x % p] = 1

    def __dealloc__(self):
        free(self.c)
        free(self.d)
        if self.sq != NULL:
            free(self.sq)

    cdef inline int chi(self, u64 v) nogil:
        # 0, 1 or -1: quadratic character (p odd)
        if v == 0:
            return 0
        if self.sq != NULL:
            return 1 if self.sq[v] else -1
        return jacobi(v, self.p)


def count_points(coeffs, p):
    """(total, smooth) affine points of y^2 = f(z) over F_p."""
    cdef _Poly f = _Poly(coeffs, p)
    cdef u64 z, v, dv
    cdef long long total = 0, singular = 0
    cdef int ch
    with nogil:
        for z in range(f.p):
            v = horner(f.c, f.n, z, f.p)
            if f.p == 2:
                total += 1
                if horner(f.d, f.nd, z, f.p) == 0:
                    singular += 1
                continue
            ch = f.chi(v)
            total += 1 + ch
            if v == 0 and horner(f.d, f.nd, z, f.p) == 0:
                singular += 1
    return int(total), int(total - singular)


def first_smooth_z(coeffs, p):
    """Least z admitting a smooth point (z, y) over F_p, or -1."""
    cdef _Poly f = _Poly(coeffs, p, False)
    cdef u64 z, v
    cdef long long found = -1
    with nogil:
        for z in range(f.p):
            if f.p == 2:
                if horner(f.d, f.nd, z, f.p) != 0:
                    found = z
                    break
                continue
            v = horner(f.c, f.n, z, f.p)
            if v == 0:
                if horner(f.d, f.nd, z, f.p) != 0:
                    found = z
                    break
            elif jacobi(v, f.p) == 1:
                found = z
                break
    return int(found)


def first_square_value(coeffs, p, start=0):
    """Least j >= start with f(j) a nonzero square mod odd p, or -1."""
    cdef _Poly f = _Poly(coeffs, p, False)
    cdef u64 j, v
    cdef u64 s = start
    cdef long long found = -1
    with nogil:
        for j in range(s, f.p):
            v = horner(f.c, f.n, j, f.p)
            if v != 0 and jacobi(v, f.p) == 1:
                found = j
                break
    return int(found)


def roots(coeffs, p):
    """All roots of f in F_p by exhaustive evaluation."""
    cdef _Poly f = _Poly(coeffs, p, False)
    cdef u64 z
    out = []
    for z in range(f.p):
        if horner(f.c, f.n, z, f.p) == 0:
            out.append(int(z))
    return out
