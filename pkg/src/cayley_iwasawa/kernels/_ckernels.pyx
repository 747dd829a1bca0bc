# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batched determinants over F_p and local Smith form mod l^N."""

import numpy as np
cimport numpy as cnp

from . import _pykernels

ctypedef long long i64

cdef i64 SMALL_MODULUS = 1LL << 31


cdef inline i64 _inv(i64 a, i64 p) nogil:
    cdef i64 t = 0, nt = 1, r = p, nr = a % p, q, tmp
    if nr < 0:
        nr += p
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef i64 _det_one(i64[:, :] A, i64 p) nogil:
    cdef Py_ssize_t n = A.shape[0], i, j, k, piv
    cdef i64 det = 1, inv, f, tmp
    for k in range(n):
        piv = -1
        for i in range(k, n):
            if A[i, k] != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != k:
            for j in range(k, n):
                tmp = A[k, j]
                A[k, j] = A[piv, j]
                A[piv, j] = tmp
            det = p - det
        det = det * A[k, k] % p
        inv = _inv(A[k, k], p)
        for i in range(k + 1, n):
            if A[i, k] == 0:
                continue
            f = A[i, k] * inv % p
            for j in range(k, n):
                A[i, j] = (A[i, j] - f * A[k, j] % p + p) % p
    return det % p


def det_mod_batch(mats, i64 p):
    if p >= SMALL_MODULUS:
        raise ValueError("det_mod_batch needs p < 2^31")
    cdef cnp.ndarray[i64, ndim=3] A = np.ascontiguousarray(np.asarray(mats, dtype=np.int64) % p)
    cdef i64[:, :, :] view = A
    cdef Py_ssize_t b, B = A.shape[0]
    out = np.empty(B, dtype=np.int64)
    cdef i64[:] o = out
    with nogil:
        for b in range(B):
            o[b] = _det_one(view[b], p)
    return out


def det_mod(mat, i64 p):
    return int(det_mod_batch(np.asarray(mat, dtype=np.int64)[None], p)[0])


cdef inline int _val(i64 a, i64 ell) nogil:
    cdef int v = 0
    while a % ell == 0:
        a //= ell
        v += 1
    return v


def local_smith(mat, ell, N):
    M_py = ell ** N
    if M_py >= SMALL_MODULUS:
        return _pykernels.local_smith(mat, ell, N)
    cdef i64 M = M_py, l = ell
    cdef cnp.ndarray[i64, ndim=2] arr = np.ascontiguousarray(np.array(mat, dtype=object) % M_py).astype(np.int64)
    cdef i64[:, :] A = arr
    cdef Py_ssize_t n = arr.shape[0], i, j, k, bi, bj
    cdef int v, best, vij
    cdef i64 lv, u, uinv, c, tmp
    vals = []
    for k in range(n):
        best = 1 << 30
        bi = -1
        bj = -1
        with nogil:
            for i in range(k, n):
                for j in range(k, n):
                    if A[i, j] != 0:
                        vij = _val(A[i, j], l)
                        if vij < best:
                            best = vij
                            bi = i
                            bj = j
                            if vij == 0:
                                break
                if best == 0:
                    break
        if bi < 0:
            return None
        v = best
        with nogil:
            if bi != k:
                for j in range(n):
                    tmp = A[k, j]
                    A[k, j] = A[bi, j]
                    A[bi, j] = tmp
            if bj != k:
                for i in range(n):
                    tmp = A[i, k]
                    A[i, k] = A[i, bj]
                    A[i, bj] = tmp
            lv = 1
            for i in range(v):
                lv *= l
            u = A[k, k] // lv
            uinv = _inv(u, M)
            for i in range(k + 1, n):
                if A[i, k] == 0:
                    continue
                c = (A[i, k] // lv) * uinv % M
                for j in range(k, n):
                    A[i, j] = (A[i, j] - c * A[k, j] % M + M) % M
        vals.append(v)
    return sorted(vals)
