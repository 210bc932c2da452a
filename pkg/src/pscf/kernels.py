"""int64 PQa kernels for sqrt(D) with D < 2**62.

In this range every PQa quantity (P <= a0, Q <= 2*a0, a*Q <= 2*a0) fits in a
signed 64-bit word, so the period walk runs without big integers. Callers
needing larger D go through the arbitrary-precision path in :mod:`pscf.cf`.
"""

import math

import numpy as np

from ._accel import jit

INT64_LIMIT = 1 << 62


@jit
def isqrt64(d):
    s = np.int64(math.sqrt(float(d)))
    while s * s > d:
        s -= 1
    while (s + 1) * (s + 1) <= d:
        s += 1
    return s


@jit
def period_length64(d, max_steps):
    """Period length of sqrt(d); 0 for perfect squares, -1 if max_steps ran out."""
    a0 = isqrt64(d)
    if a0 * a0 == d:
        return 0
    p = np.int64(0)
    q = np.int64(1)
    n = 0
    while n < max_steps:
        a = (a0 + p) // q
        p = a * q - p
        q = (d - p * p) // q
        n += 1
        if q == 1:
            return n
    return -1


@jit
def period_fill64(d, out):
    """Write the period quotients of sqrt(d) into ``out`` (sized by period_length64)."""
    a0 = isqrt64(d)
    p = np.int64(0)
    q = np.int64(1)
    a = (a0 + p) // q
    p = a * q - p
    q = (d - p * p) // q
    for i in range(out.shape[0]):
        a = (a0 + p) // q
        out[i] = a
        p = a * q - p
        q = (d - p * p) // q
    return out


@jit
def period_lengths64(ds, max_steps):
    out = np.empty(ds.shape[0], dtype=np.int64)
    for i in range(ds.shape[0]):
        out[i] = period_length64(ds[i], max_steps)
    return out


def sqrt_period64(d: int, max_steps: int):
    """(a0, period array) for nonsquare d < 2**62, or None if max_steps ran out."""
    r = period_length64(np.int64(d), max_steps)
    if r <= 0:
        return None
    out = period_fill64(np.int64(d), np.empty(r, dtype=np.int64))
    return int(isqrt64(np.int64(d))), out
