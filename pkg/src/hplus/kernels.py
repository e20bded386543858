"""Dense integer kernels with optional numba acceleration.

Howell elimination over Z/l^k and cyclic 2-variable convolution dominate the
runtime of ideal stabilization at conductor scale.  When numba is installed
(and HPLUS_NO_NUMBA is unset) the scalar kernels are jit-compiled; otherwise
vectorized numpy fallbacks run the same algorithms.  Moduli that do not fit
the int64 overflow budget (products must stay below 2^63) are routed through
an object-dtype path with Python integers.

All three paths produce bit-identical canonical output; the test suite and
bench/benchmark_kernels.py compare them directly.
"""

import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

try:
    if os.environ.get("HPLUS_NO_NUMBA"):
        raise ImportError("numba disabled by HPLUS_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    logger.info("numba unavailable; using numpy fallback kernels")

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

    HAVE_NUMBA = False

# largest modulus for which a*b with a, b < modulus fits in int64
INT64_SAFE_MOD = 1 << 31


@njit(cache=True)
def _modinv64(a, m):
    """Inverse of a mod m for gcd(a, m) = 1, by extended Euclid."""
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_s % m


@njit(cache=True)
def _howell_scalar(work, nact, ncols, modulus, ell, kpow):
    """In-place Howell elimination; returns the number of basis rows.

    work must have at least nact + ncols rows: one annihilator row
    l^(k-v) * pivot_row may be appended per pivot of valuation v > 0.
    """
    r = 0
    for c in range(ncols):
        best = -1
        bestv = kpow + 1
        for i in range(r, nact):
            a = work[i, c]
            if a != 0:
                v = 0
                while a % ell == 0:
                    a //= ell
                    v += 1
                if v < bestv:
                    bestv = v
                    best = i
                    if v == 0:
                        break
        if best < 0:
            continue
        if best != r:
            for j in range(ncols):
                tmp = work[best, j]
                work[best, j] = work[r, j]
                work[r, j] = tmp
        pv = 1
        for _ in range(bestv):
            pv *= ell
        u = work[r, c] // pv
        if u != 1:
            uinv = _modinv64(u, modulus)
            for j in range(ncols):
                work[r, j] = work[r, j] * uinv % modulus
        for i in range(r + 1, nact):
            a = work[i, c]
            if a != 0:
                f = a // pv
                for j in range(ncols):
                    work[i, j] = (work[i, j] - f * work[r, j]) % modulus
        if bestv > 0:
            lann = modulus // pv
            nz = False
            for j in range(ncols):
                val = work[r, j] * lann % modulus
                work[nact, j] = val
                if val != 0:
                    nz = True
            if nz:
                nact += 1
        r += 1
    # canonical pass: sweep pivots in ascending column order, reducing the
    # entries above each pivot into [0, pivot)
    for t in range(r):
        c = 0
        while work[t, c] == 0:
            c += 1
        pv = work[t, c]
        for s in range(t):
            q = work[s, c] // pv
            if q != 0:
                for j in range(ncols):
                    work[s, j] = (work[s, j] - q * work[t, j]) % modulus
    return r


def _howell_vec(work, nact, ncols, modulus, ell, kpow):
    """Vectorized Howell elimination; same contract as _howell_scalar.

    Works for both int64 and object dtype (Python integers)."""
    r = 0
    for c in range(ncols):
        col = work[r:nact, c]
        nz = col != 0
        if not nz.any():
            continue
        val = np.full(nact - r, kpow + 1, dtype=np.int64)
        tmp = col.copy()
        val[nz] = 0
        while True:
            m2 = nz & (val < kpow + 1) & (tmp % ell == 0) & (tmp != 0)
            if not m2.any():
                break
            tmp[m2] //= ell
            val[m2] += 1
        best = int(np.argmin(val)) + r
        bestv = int(val[best - r])
        if best != r:
            work[[best, r]] = work[[r, best]]
        pv = ell**bestv
        u = int(work[r, c]) // pv
        if u != 1:
            uinv = pow(u, -1, modulus)
            work[r] = work[r] * uinv % modulus
        below = work[r + 1 : nact, c]
        if below.any():
            f = below // pv
            work[r + 1 : nact] = (work[r + 1 : nact] - np.outer(f, work[r])) % modulus
        if bestv > 0:
            ann = work[r] * (modulus // pv) % modulus
            if ann.any():
                work[nact] = ann
                nact += 1
        r += 1
    for t in range(r):
        c = int(np.nonzero(work[t])[0][0])
        pv = int(work[t, c])
        if t > 0:
            q = work[:t, c] // pv
            if q.any():
                work[:t] = (work[:t] - np.outer(q, work[t])) % modulus
    return r


def howell(rows, modulus, ell, kpow):
    """Canonical Howell form of the Z/modulus row span of `rows`.

    Returns a (nbasis, ncols) array sorted by ascending pivot column, with
    each pivot a power of ell, entries below pivots zero and entries above
    reduced modulo the pivot.  The form is unique for the span, so equality
    of spans is equality of arrays.
    """
    rows = np.asarray(rows)
    if rows.ndim != 2:
        raise ValueError("expected a 2-d array of rows")
    nact, ncols = rows.shape
    if nact == 0:
        return np.zeros((0, ncols), np.int64)
    cap = nact + ncols
    if modulus <= INT64_SAFE_MOD and rows.dtype != object:
        work = np.zeros((cap, ncols), np.int64)
        work[:nact] = rows % modulus
        if HAVE_NUMBA:
            r = _howell_scalar(work, nact, ncols, modulus, ell, kpow)
        else:
            r = _howell_vec(work, nact, ncols, modulus, ell, kpow)
    else:
        work = np.zeros((cap, ncols), object)
        work[:nact] = [[int(x) % modulus for x in row] for row in rows]
        r = _howell_vec(work, nact, ncols, modulus, ell, kpow)
    return work[:r].copy()


@njit(cache=True)
def _reduce_scalar(vec, basis, pivcol, pivval, modulus):
    for t in range(basis.shape[0]):
        c = pivcol[t]
        a = vec[c]
        if a != 0:
            q = a // pivval[t]
            if q != 0:
                for j in range(vec.shape[0]):
                    vec[j] = (vec[j] - q * basis[t, j]) % modulus


def reduce_against(vec, basis, modulus):
    """Reduce vec modulo a canonical Howell basis; returns the residual.

    The residual is zero iff vec lies in the span of basis.
    """
    vec = np.array(vec)
    if basis.shape[0] == 0:
        return vec % modulus
    pivcol = np.empty(basis.shape[0], np.int64)
    pivval = np.empty(basis.shape[0], object if basis.dtype == object else np.int64)
    for t in range(basis.shape[0]):
        c = int(np.nonzero(basis[t])[0][0])
        pivcol[t] = c
        pivval[t] = basis[t, c]
    if HAVE_NUMBA and basis.dtype != object and vec.dtype != object:
        vec = vec.astype(np.int64) % modulus
        _reduce_scalar(vec, basis, pivcol, pivval.astype(np.int64), modulus)
        return vec
    vec = vec % modulus
    for t in range(basis.shape[0]):
        c = pivcol[t]
        q = int(vec[c]) // int(pivval[t])
        if q != 0:
            vec = (vec - q * basis[t]) % modulus
    return vec


@njit(cache=True)
def _cyclic_mul_scalar(a, b, modulus):
    d1, d2 = a.shape
    out = np.zeros((d1, d2), np.int64)
    for i1 in range(d1):
        for j1 in range(d2):
            c = a[i1, j1]
            if c != 0:
                for i2 in range(d1):
                    k1 = i1 + i2
                    if k1 >= d1:
                        k1 -= d1
                    for j2 in range(d2):
                        d = b[i2, j2]
                        if d != 0:
                            k2 = j1 + j2
                            if k2 >= d2:
                                k2 -= d2
                            out[k1, k2] = (out[k1, k2] + c * d) % modulus
    return out


def cyclic_mul(a, b, modulus):
    """Product of dense exponent grids modulo (x^D1 - 1, y^D2 - 1, modulus)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("grid shapes differ")
    big = modulus > INT64_SAFE_MOD or a.dtype == object or b.dtype == object
    if HAVE_NUMBA and not big:
        return _cyclic_mul_scalar(
            a.astype(np.int64) % modulus, b.astype(np.int64) % modulus, modulus
        )
    out = np.zeros(a.shape, object if big else np.int64)
    for i1, j1 in zip(*np.nonzero(a)):
        c = a[i1, j1]
        out = (out + c * np.roll(np.roll(b, i1, 0), j1, 1)) % modulus
    return out
