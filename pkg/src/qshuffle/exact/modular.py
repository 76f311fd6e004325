"""Rank of an exact matrix after specializing q to a point of a prime field F_p.

Specialization is a ring map, so the rank mod p is a lower bound for the exact rank.  The
homology code uses this to certify vanishing cheaply: if dim C_n - rk_p(d_n) - rk_p(d_{n+1})
is 0 then, since rk(d_n) + rk(d_{n+1}) <= dim C_n always holds, the exact homology is 0 too.

The elimination kernel has a numba implementation and a pure numpy one.  numba is used when
it imports and ``QSHUFFLE_NO_NUMBA`` is unset (or "0"); ``set_backend`` switches at runtime.
"""
from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from .field import CyclotomicField, Field, SpecializationError
from .linalg import SparseMatrix

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

# largest primes below 2**31 keep every product of two residues inside int64
DEFAULT_PRIME = 2147483629


def _rank_mod_p_numpy(a: np.ndarray, p: int):
    a = a.copy()
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        sel = r + nz[0]
        if sel != r:
            a[[r, sel]] = a[[sel, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = a[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(a[r + 1 :, c])
        if below.size:
            f = a[below, c]
            a[below, c:] = (a[below, c:] - np.outer(f, a[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _powmod(b, e, p):
        result = 1
        b = b % p
        while e > 0:
            if e & 1:
                result = result * b % p
            b = b * b % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rank_mod_p_numba(a, p):
        a = a.copy()
        m, n = a.shape
        r = 0
        pivots = np.empty(min(m, n), dtype=np.int64)
        for c in range(n):
            if r == m:
                break
            sel = -1
            for i in range(r, m):
                if a[i, c] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != r:
                for j in range(n):
                    t = a[r, j]
                    a[r, j] = a[sel, j]
                    a[sel, j] = t
            inv = _powmod(a[r, c], p - 2, p)
            for j in range(c, n):
                a[r, j] = a[r, j] * inv % p
            for i in range(r + 1, m):
                f = a[i, c]
                if f != 0:
                    for j in range(c, n):
                        a[i, j] = (a[i, j] + p - f * a[r, j] % p) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r]


def _default_backend() -> str:
    if HAVE_NUMBA and os.environ.get("QSHUFFLE_NO_NUMBA", "0") in ("", "0"):
        return "numba"
    return "numpy"


_backend = _default_backend()


def set_backend(name: str):
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    _backend = name


def get_backend() -> str:
    return _backend


def rank_mod_p_dense(a: np.ndarray, p: int = DEFAULT_PRIME, backend: str | None = None):
    """Rank and pivot columns of an int64 matrix with entries in [0, p)."""
    backend = backend or _backend
    if a.size == 0:
        return 0, np.zeros(0, dtype=np.int64)
    if backend == "numba":
        r, piv = _rank_mod_p_numba(np.ascontiguousarray(a, dtype=np.int64), p)
        return int(r), piv
    return _rank_mod_p_numpy(np.asarray(a, dtype=np.int64), p)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % d == 0:
            return n == d
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


@lru_cache(maxsize=None)
def specialization_points(field: Field, count: int = 4) -> tuple:
    """Deterministic list of (p, q0) specialization points for a field.

    Generic: p = DEFAULT_PRIME with fixed pseudo-random q0.  Root of unity of order l: the
    largest primes p < 2^31 with p = 1 mod l, and q0 an element of exact order l.
    """
    pts = []
    if isinstance(field, CyclotomicField):
        l = field.l
        p = (2**31 - 1) // l * l + 1
        while len(pts) < count:
            p -= l
            if p < 3 or not _is_prime(p):
                continue
            for g in range(2, 200):
                z = pow(g, (p - 1) // l, p)
                if z != 1 and all(pow(z, l // f, p) != 1 for f in _prime_factors(l)):
                    pts.append((p, z))
                    break
        return tuple(pts)
    seeds = (1234567, 7654321, 1928374, 5647382, 91827364, 11223344)
    for i in range(count):
        pts.append((DEFAULT_PRIME, seeds[i % len(seeds)] + 1000 * (i // len(seeds))))
    return tuple(pts)


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def specialize(M: SparseMatrix, p: int, q0: int, cache: dict | None = None) -> np.ndarray:
    """Dense int64 image of M under q -> q0 in F_p."""
    a = np.zeros((M.nrows, M.ncols), dtype=np.int64)
    cache = {} if cache is None else cache
    for i, row in M.rows.items():
        for j, v in row.items():
            x = cache.get(v)
            if x is None:
                x = v.mod_p(p, q0)
                cache[v] = x
            a[i, j] = x
    return a


def modular_rank(M: SparseMatrix, point: int = 0, backend: str | None = None) -> int:
    """Rank of M at the ``point``-th specialization; falls through to later points on poles."""
    pts = specialization_points(M.field, max(4, point + 4))
    for p, q0 in pts[point:]:
        try:
            a = specialize(M, p, q0)
        except SpecializationError:
            continue
        return rank_mod_p_dense(a, p, backend)[0]
    raise SpecializationError("every specialization point hit a pole")
