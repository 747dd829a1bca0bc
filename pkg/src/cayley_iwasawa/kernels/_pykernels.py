"""Pure Python / numpy implementations of the hot kernels.

Semantics are identical to the compiled versions in ``_ckernels.pyx``; the
compiled module falls back to these for moduli too large for 64-bit
products.
"""

from __future__ import annotations

import numpy as np

# products of two residues must fit in a signed 64-bit integer
SMALL_MODULUS = 1 << 31


def _modinv_vec(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse modulo the prime p (Fermat), a != 0."""
    out = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def det_mod_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants modulo a prime p < 2^31 of a stack of square matrices.

    mats has shape (B, n, n); the result has shape (B,) with entries in [0, p).
    """
    if p >= SMALL_MODULUS:
        raise ValueError("det_mod_batch needs p < 2^31")
    A = np.array(mats, dtype=np.int64) % p
    B, n, _ = A.shape
    det = np.ones(B, dtype=np.int64)
    idx = np.arange(B)
    for k in range(n):
        col = A[:, k:, k] != 0
        alive = col.any(axis=1)
        piv = np.argmax(col, axis=1) + k
        swap = piv != k
        if swap.any():
            rk = A[idx, k].copy()
            A[idx, k] = A[idx, piv]
            A[idx, piv] = rk
            det[swap] = (p - det[swap]) % p
        d = np.where(alive, A[:, k, k], 0)
        det = det * d % p
        if k == n - 1:
            break
        pivots = np.where(alive, A[:, k, k], 1)
        inv = _modinv_vec(pivots, p)
        factors = A[:, k + 1:, k] * inv[:, None] % p
        A[:, k + 1:, k:] = (A[:, k + 1:, k:] - factors[:, :, None] * A[:, None, k, k:] % p) % p
    return det


def det_mod(mat, p: int) -> int:
    return int(det_mod_batch(np.asarray(mat, dtype=np.int64)[None], p)[0])


def _val(a: int, ell: int) -> int:
    v = 0
    while a % ell == 0:
        a //= ell
        v += 1
    return v


def local_smith(mat, ell: int, N: int) -> list[int] | None:
    """l-adic valuations of the invariant factors of a square integer matrix.

    Works modulo M = ell^N.  Returns the sorted list of valuations, or None
    when some invariant factor vanishes modulo M (precision saturated).
    """
    M = ell ** N
    dtype = np.int64 if M < SMALL_MODULUS else object
    A = np.array(mat, dtype=object) % M
    A = A.astype(dtype)
    n = A.shape[0]
    vals = []
    for k in range(n):
        sub = A[k:, k:]
        units = np.nonzero(sub % ell != 0)
        if len(units[0]):
            bi, bj, v = int(units[0][0]) + k, int(units[1][0]) + k, 0
        else:
            nz = np.nonzero(sub != 0)
            if not len(nz[0]):
                return None
            best = None
            for i, j in zip(*nz):
                v_ij = _val(int(sub[i, j]), ell)
                if best is None or v_ij < best[0]:
                    best = (v_ij, int(i) + k, int(j) + k)
                    if v_ij == 1:
                        break
            v, bi, bj = best
        if bi != k:
            A[[k, bi]] = A[[bi, k]]
        if bj != k:
            A[:, [k, bj]] = A[:, [bj, k]]
        vals.append(v)
        if k == n - 1:
            break
        lv = ell ** v
        u = int(A[k, k]) // lv
        uinv = pow(u, -1, M)
        c = (A[k + 1:, k] // lv) * uinv % M
        if not c.any():
            continue
        A[k + 1:, k:] = (A[k + 1:, k:] - (c[:, None] * A[k, k:]) % M) % M
    return sorted(vals)
