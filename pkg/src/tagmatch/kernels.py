"""Vectorized batch kernels for tag values packed into uint64 arrays.

These mirror the scalar functions in metrics.py bit for bit; tests
pin the equivalence. Only widths up to 64 fit the packed layout.
Scalar code stays the readable reference, these exist so bulk
analyses and the evolutionary loop stay in numpy.
"""

from __future__ import annotations

import numpy as np

from .metrics import MetricKind


def width_mask(width: int) -> np.uint64:
    if not 1 <= width <= 64:
        raise ValueError(f"packed kernels support widths 1..64, got {width}")
    if width == 64:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << width) - 1)


def uniform_tag_values(gen: np.random.Generator, shape, width: int) -> np.ndarray:
    """Uniform tag values of the given shape as uint64."""
    width_mask(width)  # range check
    if width == 64:
        return gen.integers(0, 2**64 - 1, size=shape, dtype=np.uint64, endpoint=True)
    return gen.integers(0, 1 << width, size=shape, dtype=np.uint64)


def popcount(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values)


def longest_one_run(values: np.ndarray) -> np.ndarray:
    """Per-element length of the longest run of set bits."""
    x = values.copy()
    runs = np.zeros(x.shape, dtype=np.int64)
    one = np.uint64(1)
    # Each pass shortens every run by one; lanes drop out as they hit 0.
    while True:
        alive = x != 0
        if not alive.any():
            return runs
        runs[alive] += 1
        x &= x << one


def _rotl32(x: np.ndarray, s: int) -> np.ndarray:
    return (x << np.uint32(s)) | (x >> np.uint32(32 - s))


def sha1_pair_values(t: np.ndarray, u: np.ndarray, width: int) -> np.ndarray:
    """First 8 big-endian digest bytes of SHA-1(pack(t) + pack(u)), as uint64.

    The message is 2 * ceil(width/8) <= 16 bytes, so padding always
    fits a single 64-byte block and the whole batch runs through one
    vectorized compression pass.
    """
    width_mask(width)
    t = np.ascontiguousarray(t, dtype=np.uint64).ravel()
    u = np.ascontiguousarray(u, dtype=np.uint64).ravel()
    n = t.shape[0]
    nbytes = (width + 7) // 8

    block = np.zeros((n, 64), dtype=np.uint8)
    for j in range(nbytes):
        shift = np.uint64(8 * j)
        block[:, j] = (t >> shift).astype(np.uint8)
        block[:, nbytes + j] = (u >> shift).astype(np.uint8)
    block[:, 2 * nbytes] = 0x80
    block[:, 63] = 16 * nbytes  # message bit length; < 256 for width <= 64

    w = block.view(">u4").astype(np.uint32)  # (n, 16) schedule seed
    sched = [w[:, i].copy() for i in range(16)]

    a = np.full(n, 0x67452301, dtype=np.uint32)
    b = np.full(n, 0xEFCDAB89, dtype=np.uint32)
    c = np.full(n, 0x98BADCFE, dtype=np.uint32)
    d = np.full(n, 0x10325476, dtype=np.uint32)
    e = np.full(n, 0xC3D2E1F0, dtype=np.uint32)
    h = (a.copy(), b.copy(), c.copy(), d.copy(), e.copy())

    for i in range(80):
        if i < 16:
            wi = sched[i]
        else:
            wi = _rotl32(
                sched[(i - 3) & 15]
                ^ sched[(i - 8) & 15]
                ^ sched[(i - 14) & 15]
                ^ sched[(i - 16) & 15],
                1,
            )
            sched[i & 15] = wi
        if i < 20:
            f = (b & c) | (~b & d)
            k = np.uint32(0x5A827999)
        elif i < 40:
            f = b ^ c ^ d
            k = np.uint32(0x6ED9EBA1)
        elif i < 60:
            f = (b & c) | (b & d) | (c & d)
            k = np.uint32(0x8F1BBCDC)
        else:
            f = b ^ c ^ d
            k = np.uint32(0xCA62C1D6)
        temp = _rotl32(a, 5) + f + e + k + wi
        e = d
        d = c
        c = _rotl32(b, 30)
        b = a
        a = temp

    h0 = h[0] + a
    h1 = h[1] + b
    return (h0.astype(np.uint64) << np.uint64(32)) | h1.astype(np.uint64)


def raw_distance_batch(
    kind: MetricKind, t: np.ndarray, u: np.ndarray, width: int
) -> np.ndarray:
    """Batch twin of metrics.raw_distance over uint64 tag values.

    Accepts arrays of any matching shape; returns float64 of the same
    shape. (query, operand) order is (t, u), as in the scalar path.
    """
    kind = MetricKind(kind)
    t = np.asarray(t, dtype=np.uint64)
    u = np.asarray(u, dtype=np.uint64)
    if t.shape != u.shape:
        raise ValueError(f"shape mismatch: {t.shape} vs {u.shape}")
    mask = width_mask(width)
    shape = t.shape

    if kind is MetricKind.HAMMING:
        return popcount(t ^ u).astype(np.float64) / width

    if kind is MetricKind.INTEGER:
        diff = (u - t) & mask
        return diff.astype(np.float64) * 2.0**-width

    if kind is MetricKind.INTEGER_BI:
        fwd = (u - t) & mask
        rev = (t - u) & mask
        return np.minimum(fwd, rev).astype(np.float64) * 2.0**-width

    if kind is MetricKind.STREAK:
        x = t ^ u
        s_mis = longest_one_run(x)
        s_mat = longest_one_run(~x & mask)
        # ldexp keeps the power-of-two scaling exact, matching the
        # scalar integer division bit for bit.
        p_mat = (width - s_mat + 1).astype(np.float64) * np.ldexp(1.0, -s_mat)
        p_mis = (width - s_mis + 1).astype(np.float64) * np.ldexp(1.0, -s_mis)
        return np.clip(p_mat / (p_mat + p_mis), 0.0, 1.0)

    k = sha1_pair_values(t.ravel(), u.ravel(), width)
    return (k.astype(np.float64) * 2.0**-64).reshape(shape)
