"""Finite-field bulk kernels: grid corank scans and line enumeration.

These are the only numeric hot loops in the package: scanning all points
of F_p^n for degenerate fibers, and enumerating all 2-dimensional
subspaces of F_p^4 against a fixed quadric.  Both run as numba @njit
kernels when numba is available; setting QUADRICLAB_NO_NUMBA=1 (or a
failed numba import) selects a vectorized numpy fallback.  The two paths
produce identical outputs in identical order.
"""

from __future__ import annotations

import os

import numpy as np


class KernelUnavailable(RuntimeError):
    pass


def _numba_enabled() -> bool:
    if os.environ.get("QUADRICLAB_NO_NUMBA"):
        return False
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


_BACKEND = None


def backend() -> str:
    global _BACKEND
    if _BACKEND is None:
        _BACKEND = "numba" if _numba_enabled() else "numpy"
    return _BACKEND


def _get_njit():
    from numba import njit
    return njit


# --- family encoding -------------------------------------------------------


def encode_family_mod_p(fam):
    """Flatten the 16 polynomial entries of A(y) into term arrays mod p.

    Returns (coeffs, exps, offsets, p, nvars): entry (i, j) owns the term
    range offsets[4*i+j] : offsets[4*i+j+1].
    """
    p = fam.field.characteristic
    if not p:
        raise KernelUnavailable("finite-field kernels need an F_p family")
    nvars = fam.base_dim
    coeffs = []
    exps = []
    offsets = [0]
    for i in range(4):
        for j in range(4):
            poly = fam.matrix.rows[i][j]
            for exp in sorted(poly.terms, key=lambda e: (sum(e), e)):
                coeffs.append(int(poly.terms[exp]) % p)
                exps.append(list(exp))
            offsets.append(len(coeffs))
    coeffs = np.asarray(coeffs, dtype=np.int64)
    exps = np.asarray(exps, dtype=np.int64).reshape(len(coeffs), nvars)
    offsets = np.asarray(offsets, dtype=np.int64)
    return coeffs, exps, offsets, p, nvars


# --- numba path -------------------------------------------------------------

_NUMBA_CACHE = {}


def _numba_kernels():
    if "grid" in _NUMBA_CACHE:
        return _NUMBA_CACHE
    njit = _get_njit()

    @njit(cache=True)
    def grid_coranks_nb(pts, coeffs, exps, offsets, p):
        npts = pts.shape[0]
        nvars = pts.shape[1]
        out = np.empty(npts, dtype=np.int64)
        mat = np.empty((4, 4), dtype=np.int64)
        for n in range(npts):
            for i in range(4):
                for j in range(4):
                    e = 4 * i + j
                    acc = 0
                    for t in range(offsets[e], offsets[e + 1]):
                        v = coeffs[t]
                        for k in range(nvars):
                            for _ in range(exps[t, k]):
                                v = (v * pts[n, k]) % p
                        acc = (acc + v) % p
                    mat[i, j] = acc
            # fraction-free elimination mod p on the 4x4 matrix
            rank = 0
            for col in range(4):
                piv = -1
                for r in range(rank, 4):
                    if mat[r, col] % p != 0:
                        piv = r
                        break
                if piv < 0:
                    continue
                if piv != rank:
                    for c in range(4):
                        tmp = mat[rank, c]
                        mat[rank, c] = mat[piv, c]
                        mat[piv, c] = tmp
                pv = mat[rank, col] % p
                for r in range(4):
                    if r == rank:
                        continue
                    f = mat[r, col] % p
                    if f != 0:
                        for c in range(4):
                            mat[r, c] = (pv * mat[r, c] - f * mat[rank, c]) % p
                rank += 1
            out[n] = 4 - rank
        return out

    @njit(cache=True)
    def isotropic_mask_nb(reps, amat, p):
        nreps = reps.shape[0]
        mask = np.zeros(nreps, dtype=np.bool_)
        for n in range(nreps):
            ok = True
            for a in range(2):
                if not ok:
                    break
                for b in range(a, 2):
                    acc = 0
                    for i in range(4):
                        ri = reps[n, a, i]
                        if ri == 0:
                            continue
                        for j in range(4):
                            acc = (acc + ri * amat[i, j] % p * reps[n, b, j]) % p
                    if acc % p != 0:
                        ok = False
                        break
            mask[n] = ok
        return mask

    _NUMBA_CACHE["grid"] = grid_coranks_nb
    _NUMBA_CACHE["mask"] = isotropic_mask_nb
    return _NUMBA_CACHE


# --- numpy fallback ----------------------------------------------------------


def _grid_coranks_np(pts, coeffs, exps, offsets, p):
    npts, nvars = pts.shape
    maxexp = int(exps.max()) if exps.size else 0
    # powers[k][e] = pts[:, k]^e mod p
    powers = np.ones((nvars, maxexp + 1, npts), dtype=np.int64)
    for k in range(nvars):
        for e in range(1, maxexp + 1):
            powers[k, e] = powers[k, e - 1] * pts[:, k] % p
    mats = np.zeros((npts, 4, 4), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            e = 4 * i + j
            acc = np.zeros(npts, dtype=np.int64)
            for t in range(offsets[e], offsets[e + 1]):
                v = np.full(npts, coeffs[t], dtype=np.int64)
                for k in range(nvars):
                    if exps[t, k]:
                        v = v * powers[k, exps[t, k]] % p
                acc = (acc + v) % p
            mats[:, i, j] = acc
    return 4 - _batched_rank_mod_p(mats, p)


def _batched_rank_mod_p(mats, p):
    """Rank of each 4x4 matrix mod p, vectorized fraction-free elimination."""
    m = mats % p
    npts = m.shape[0]
    rank = np.zeros(npts, dtype=np.int64)
    rows = np.arange(4)
    for col in range(4):
        cand = (rows[None, :] >= rank[:, None]) & (m[:, :, col] != 0)
        has = cand.any(axis=1)
        idx = np.nonzero(has)[0]
        if idx.size == 0:
            continue
        piv = cand[idx].argmax(axis=1)
        r0 = rank[idx]
        # swap the pivot row into position r0
        tmp = m[idx, r0, :].copy()
        m[idx, r0, :] = m[idx, piv, :]
        m[idx, piv, :] = tmp
        pivval = m[idx, r0, col]
        pivrow = m[idx, r0, :].copy()
        factor = m[idx, :, col].copy()
        m[idx] = (pivval[:, None, None] * m[idx] - factor[:, :, None] * pivrow[:, None, :]) % p
        m[idx, r0, :] = pivrow
        rank[idx] += 1
    return rank


def _isotropic_mask_np(reps, amat, p):
    t1 = np.einsum("nij,jk->nik", reps, amat) % p
    s = np.einsum("nik,nlk->nil", t1, reps) % p
    return (s[:, 0, 0] == 0) & (s[:, 0, 1] == 0) & (s[:, 1, 1] == 0)


# --- public entry points ------------------------------------------------------


def grid_coranks(fam, points):
    """Corank of A(y) at every point, as int64 array in input order."""
    coeffs, exps, offsets, p, nvars = encode_family_mod_p(fam)
    pts = np.asarray([[int(c) % p for c in pt] for pt in points], dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != nvars:
        raise KernelUnavailable("bad point array shape")
    if backend() == "numba":
        return _numba_kernels()["grid"](pts, coeffs, exps, offsets, p)
    return _grid_coranks_np(pts, coeffs, exps, offsets, p)


def line_representatives(p: int) -> np.ndarray:
    """Canonical reduced-echelon bases of all 2-subspaces of F_p^4.

    Shape (N, 2, 4) with N = (p^2+1)(p^2+p+1); pivot pairs in lexicographic
    order, free entries in C order, so the enumeration is deterministic.
    """
    blocks = []
    for i in range(4):
        for j in range(i + 1, 4):
            free0 = [k for k in range(4) if k > i and k != j]
            free1 = [k for k in range(4) if k > j]
            nfree = len(free0) + len(free1)
            count = p ** nfree
            reps = np.zeros((count, 2, 4), dtype=np.int64)
            reps[:, 0, i] = 1
            reps[:, 1, j] = 1
            if nfree:
                grid = np.indices((p,) * nfree).reshape(nfree, -1).T
                for t, k in enumerate(free0):
                    reps[:, 0, k] = grid[:, t]
                for t, k in enumerate(free1):
                    reps[:, 1, k] = grid[:, len(free0) + t]
            blocks.append(reps)
    return np.concatenate(blocks, axis=0)


def isotropic_plane_mask(reps: np.ndarray, amat: np.ndarray, p: int) -> np.ndarray:
    if backend() == "numba":
        return _numba_kernels()["mask"](reps.astype(np.int64), amat.astype(np.int64), p)
    return _isotropic_mask_np(reps, amat, p)
