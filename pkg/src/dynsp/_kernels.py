"""Vectorized modular arithmetic on numpy uint64 arrays.

Everything in this file operates on arrays whose entries are already
reduced modulo a prime p.  Two primes are supported:

* the default Mersenne prime 2^61 - 1, where products are reduced with
  shift/mask folding (2^61 = 1 mod p), and
* any prime below 2^31, where a 64-bit product cannot overflow and a
  plain ``%`` suffices.

Matrix products additionally go through a 21-bit limb decomposition so
the heavy lifting happens in float64 BLAS matmuls: each partial product
is bounded by K * 2^42 for contraction length K, which stays below the
2^53 exact-integer range of float64 as long as K <= 2048.  Longer
contractions are chunked.

Polynomials in F_p[u]/<u^(D+1)> are stored as dense coefficient vectors
along the LAST axis of an array; leading axes broadcast.
"""
from __future__ import annotations

import numpy as np

MERSENNE61 = (1 << 61) - 1

_LIMB_BITS = 21
_LIMB_MASK = (1 << _LIMB_BITS) - 1
_CHUNK = 2048  # max contraction length for exact float64 limb products


def supported_prime(p: int) -> bool:
    return p == MERSENNE61 or 1 < p < (1 << 31)


def add_mod(a, b, p):
    s = np.add(np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64))
    return np.where(s >= p, s - np.uint64(p), s)


def sub_mod(a, b, p):
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    return np.where(a >= b, a - b, a + np.uint64(p) - b)


def neg_mod(a, p):
    a = np.asarray(a, dtype=np.uint64)
    return np.where(a == 0, a, np.uint64(p) - a)


def _mul_mod_m61(a, b):
    p = np.uint64(MERSENNE61)
    ah = a >> np.uint64(32)
    al = a & np.uint64(0xFFFFFFFF)
    bh = b >> np.uint64(32)
    bl = b & np.uint64(0xFFFFFFFF)
    # a*b = ah*bh*2^64 + (ah*bl + al*bh)*2^32 + al*bl, with 2^64 = 8 mod p
    hi = ah * bh
    mid = ah * bl + al * bh            # < 2^62, no overflow
    lo = al * bl
    acc = hi * np.uint64(8)
    acc += mid >> np.uint64(29)        # mid = mh*2^29 + ml; mh*2^61 = mh
    acc += (mid & np.uint64((1 << 29) - 1)) << np.uint64(32)
    acc += (lo & p) + (lo >> np.uint64(61))
    acc = (acc & p) + (acc >> np.uint64(61))
    acc = (acc & p) + (acc >> np.uint64(61))
    return np.where(acc >= p, acc - p, acc)


def mul_mod(a, b, p):
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if p == MERSENNE61:
        return _mul_mod_m61(a, b)
    if p < (1 << 31):
        return (a * b) % np.uint64(p)
    raise ValueError(f"unsupported modulus {p}")


def _limbs_f64(a):
    """Split uint64 entries (< 2^63) into three 21-bit limbs as float64."""
    l0 = (a & np.uint64(_LIMB_MASK)).astype(np.float64)
    l1 = ((a >> np.uint64(_LIMB_BITS)) & np.uint64(_LIMB_MASK)).astype(np.float64)
    l2 = (a >> np.uint64(2 * _LIMB_BITS)).astype(np.float64)
    return np.stack([l0, l1, l2])


def _mat_mul_limbs(a, b, p):
    af = _limbs_f64(a)                      # (3, n, K)
    bf = _limbs_f64(b)                      # (3, K, m)
    prod = np.matmul(af[:, None], bf[None, :])   # (3, 3, n, m), exact ints
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    for i in range(3):
        for j in range(3):
            part = prod[i, j].astype(np.uint64) % np.uint64(p)
            shift = np.uint64(pow(2, _LIMB_BITS * (i + j), p))
            out = add_mod(out, mul_mod(part, shift, p), p)
    return out


def mat_mul_mod(a, b, p):
    """Exact (a @ b) mod p for 2-D uint64 arrays with entries < p."""
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    if k <= _CHUNK:
        return _mat_mul_limbs(a, b, p)
    out = None
    for lo in range(0, k, _CHUNK):
        hi = min(lo + _CHUNK, k)
        part = _mat_mul_limbs(a[:, lo:hi], b[lo:hi], p)
        out = part if out is None else add_mod(out, part, p)
    return out


def conv_trunc(a, b, p):
    """Truncated convolution along the last axis (broadcasting leads)."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    dp1 = a.shape[-1]
    if b.shape[-1] != dp1:
        raise ValueError("degree bounds differ")
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (dp1,)
    out = np.zeros(shape, dtype=np.uint64)
    for t in range(dp1):
        at = a[..., t : t + 1]
        if not at.any():
            continue
        out[..., t:] = add_mod(out[..., t:], mul_mod(at, b[..., : dp1 - t], p), p)
    return out


def poly_mat_mul(a, b, p):
    """Truncated-polynomial matrix product.

    a: (n, K, D+1), b: (K, m, D+1) -> (n, m, D+1).  For each output
    degree d the coefficient matrix is sum_t A_t @ B_(d-t), computed as
    one stacked modular matmul.
    """
    n, k, dp1 = a.shape
    m = b.shape[1]
    if b.shape[0] != k or b.shape[2] != dp1:
        raise ValueError("shape mismatch")
    out = np.zeros((n, m, dp1), dtype=np.uint64)
    if k == 0:
        return out
    at = np.ascontiguousarray(a.transpose(0, 2, 1)).reshape(n, dp1 * k)
    bt = b.transpose(2, 0, 1)  # (D+1, K, m)
    for d in range(dp1):
        bstack = np.ascontiguousarray(bt[d::-1]).reshape((d + 1) * k, m)
        out[:, :, d] = mat_mul_mod(at[:, : (d + 1) * k], bstack, p)
    return out


def min_degree_arr(a):
    """Least nonzero coefficient index along the last axis; D+1 if zero."""
    a = np.asarray(a)
    nz = a != 0
    first = np.argmax(nz, axis=-1).astype(np.int64)
    return np.where(nz.any(axis=-1), first, a.shape[-1])


# ---- deterministic seed splitting -----------------------------------------

_SM64_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _SM64_MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _SM64_MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _SM64_MASK
    return x ^ (x >> 31)


def derive_seed(seed: int, *indices: int) -> int:
    """Counter-based seed splitting: fold indices into a 64-bit stream key."""
    x = seed & _SM64_MASK
    for idx in indices:
        x = splitmix64(x ^ (idx & _SM64_MASK))
    return x


def rand_unit(p: int, seed: int, *indices: int) -> int:
    """Deterministic nonzero field element keyed by (seed, indices)."""
    x = derive_seed(seed, *indices)
    # rejection-free enough: bias from the modulo is negligible for our p,
    # but re-hash until nonzero so edge coefficients never vanish
    while True:
        v = x % p
        if v != 0:
            return v
        x = splitmix64(x)
