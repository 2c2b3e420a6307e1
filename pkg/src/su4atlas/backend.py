"""Kernel backends for the hot loops.

Two interchangeable implementations: numba @njit kernels (default) and a
vectorized pure-numpy path.  Select with the environment variable
SU4ATLAS_BACKEND=numba|numpy; the numpy path is also the automatic
fallback when numba is unavailable.  `benchmarks/bench_backends.py`
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

from .packed import canonicalize

_requested = os.environ.get("SU4ATLAS_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError("SU4ATLAS_BACKEND must be 'numba' or 'numpy'")

if _requested in ("", "numba"):
    try:
        from numba import njit
        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        BACKEND = "numpy"
else:
    BACKEND = "numpy"


# ---------------------------------------------------------------------------
# numpy reference kernels


def _np_conv_tensor(A, B, pairs):
    """Full convolution product; A (n,m,m,d), B (m,m,d) or (n,m,m,d)."""
    n, m, _, d = A.shape
    full = np.zeros((n, m, m, 2 * d - 1), dtype=np.int64)
    if pairs:
        for a in range(d):
            full[..., a:a + d] += np.einsum("qij,qjkb->qikb", A[..., a], B)
    else:
        for a in range(d):
            full[..., a:a + d] += np.einsum("qij,jkb->qikb", A[..., a], B)
    return full


def _np_matmul(A, dA, B, dB, convred, pairs):
    d = A.shape[-1]
    full = _np_conv_tensor(A, B, pairs)
    C = full[..., :d].copy()
    if d > 1:
        C += np.tensordot(full[..., d:], convred[d:], axes=([-1], [0]))
    return C, dA * dB


def _np_matvec(M, dM, V, dV, convred):
    """One matrix applied to many vectors; M (m,m,d), V (n,m,d)."""
    n, m, d = V.shape
    full = np.zeros((n, m, 2 * d - 1), dtype=np.int64)
    for a in range(d):
        full[..., a:a + d] += np.einsum("ij,qjb->qib", M[..., a], V)
    C = full[..., :d].copy()
    if d > 1:
        C += np.tensordot(full[..., d:], convred[d:], axes=([-1], [0]))
    return C, dV * dM


def _np_value_mul(U, V, convred):
    """Elementwise value products, denominators ignored; U, V (n, d)."""
    n, d = U.shape
    full = np.zeros((n, 2 * d - 1), dtype=np.int64)
    for a in range(d):
        full[:, a:a + d] += U[:, a:a + 1] * V
    C = full[:, :d].copy()
    if d > 1:
        C += full[:, d:] @ convred[d:]
    return C


def _np_table_close(table, gens, seed, cap):
    q = table.shape[0]
    members = np.zeros(q, dtype=bool)
    members[seed] = True
    frontier = np.unique(seed)
    count = len(frontier)
    while frontier.size:
        prods = table[np.ix_(frontier, gens)].ravel()
        prods = np.unique(prods)
        new = prods[~members[prods]]
        members[new] = True
        count += new.size
        if count > cap:
            return None
        frontier = new
    return np.flatnonzero(members).astype(np.int32)


# ---------------------------------------------------------------------------
# numba kernels

if BACKEND == "numba":

    @njit(cache=True)
    def _nb_matmul_core(A, B, convred, pairs):  # pragma: no cover - jitted
        n, m, _, d = A.shape
        t2 = 2 * d - 1
        out = np.zeros((n, m, m, d), dtype=np.int64)
        full = np.zeros(t2, dtype=np.int64)
        for q in range(n):
            bq = B[q] if pairs else B[0]
            for i in range(m):
                for k in range(m):
                    for t in range(t2):
                        full[t] = 0
                    for j in range(m):
                        for a in range(d):
                            ca = A[q, i, j, a]
                            if ca != 0:
                                for b in range(d):
                                    cb = bq[j, k, b]
                                    if cb != 0:
                                        full[a + b] += ca * cb
                    for c in range(d):
                        out[q, i, k, c] = full[c]
                    for t in range(d, t2):
                        ct = full[t]
                        if ct != 0:
                            for c in range(d):
                                out[q, i, k, c] += ct * convred[t, c]
        return out

    @njit(cache=True)
    def _nb_matvec_core(M, V, convred):  # pragma: no cover - jitted
        n, m, d = V.shape
        t2 = 2 * d - 1
        out = np.zeros((n, m, d), dtype=np.int64)
        full = np.zeros(t2, dtype=np.int64)
        for q in range(n):
            for i in range(m):
                for t in range(t2):
                    full[t] = 0
                for j in range(m):
                    for a in range(d):
                        ca = M[i, j, a]
                        if ca != 0:
                            for b in range(d):
                                cb = V[q, j, b]
                                if cb != 0:
                                    full[a + b] += ca * cb
                for c in range(d):
                    out[q, i, c] = full[c]
                for t in range(d, t2):
                    ct = full[t]
                    if ct != 0:
                        for c in range(d):
                            out[q, i, c] += ct * convred[t, c]
        return out

    @njit(cache=True)
    def _nb_value_mul(U, V, convred):  # pragma: no cover - jitted
        n, d = U.shape
        t2 = 2 * d - 1
        out = np.zeros((n, d), dtype=np.int64)
        full = np.zeros(t2, dtype=np.int64)
        for q in range(n):
            for t in range(t2):
                full[t] = 0
            for a in range(d):
                ca = U[q, a]
                if ca != 0:
                    for b in range(d):
                        cb = V[q, b]
                        if cb != 0:
                            full[a + b] += ca * cb
            for c in range(d):
                out[q, c] = full[c]
            for t in range(d, t2):
                ct = full[t]
                if ct != 0:
                    for c in range(d):
                        out[q, c] += ct * convred[t, c]
        return out

    @njit(cache=True)
    def _nb_table_close(table, gens, seed, cap):  # pragma: no cover - jitted
        q = table.shape[0]
        flags = np.zeros(q, dtype=np.uint8)
        out = np.empty(q, dtype=np.int32)
        cnt = 0
        for s in seed:
            if flags[s] == 0:
                flags[s] = 1
                out[cnt] = s
                cnt += 1
        head = 0
        while head < cnt:
            x = out[head]
            head += 1
            for gi in range(gens.size):
                y = table[x, gens[gi]]
                if flags[y] == 0:
                    flags[y] = 1
                    if cnt >= cap:
                        return out[:0]
                    out[cnt] = y
                    cnt += 1
        res = np.sort(out[:cnt])
        return res


# ---------------------------------------------------------------------------
# public API


def matmul(A, dA, B, dB, fld, pairs=False):
    """Canonical packed product; B broadcasts when pairs=False."""
    if BACKEND == "numba":
        Bq = B if pairs else B.reshape((1,) + B.shape)
        C = _nb_matmul_core(A, Bq, fld.convred, pairs)
        dC = dA * dB
    else:
        C, dC = _np_matmul(A, dA, B, dB, fld.convred, pairs)
    return canonicalize(C, dC)


def matvec(M, dM, V, dV, fld):
    if BACKEND == "numba":
        C = _nb_matvec_core(M, V, fld.convred)
        dC = dV * dM
    else:
        C, dC = _np_matvec(M, dM, V, dV, fld.convred)
    return canonicalize(C, dC)


def value_mul(U, V, fld):
    """Numerator-only value products (for rank/minor tests)."""
    if BACKEND == "numba":
        return _nb_value_mul(U, V, fld.convred)
    return _np_value_mul(U, V, fld.convred)


def table_close(table, gens, seed, cap=1 << 30):
    """Subgroup of a multiplication-table group generated from seed by gens.

    Returns sorted member indices, or None if the cap is exceeded.
    """
    gens = np.asarray(gens, dtype=np.int32)
    seed = np.asarray(seed, dtype=np.int32)
    if BACKEND == "numba":
        res = _nb_table_close(table, gens, seed, cap)
        if res.size == 0 and seed.size:
            return None
        return res
    return _np_table_close(table, gens, seed, cap)


def adjoint(A, dA, fld):
    """Conjugate transpose of packed matrices."""
    At = np.swapaxes(A, 1, 2)
    C = np.tensordot(At, fld.conjmat, axes=([-1], [0]))
    return canonicalize(np.ascontiguousarray(C), dA.copy())


def conj_values(U, fld):
    return np.tensordot(U, fld.conjmat, axes=([-1], [0]))
