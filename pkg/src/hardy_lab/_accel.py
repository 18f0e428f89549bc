"""Statevector kernels, with numba and pure-numpy implementations.

Set ``HARDY_LAB_DISABLE_NUMBA=1`` (or leave numba uninstalled) to force the
numpy path. Both paths share the amplitude layout: site 1 is the most
significant bit of the flat index, so ``format(i, f"0{m}b")`` prints site 1
leftmost.
"""
import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover
    nb = None

USE_NUMBA = nb is not None and os.environ.get("HARDY_LAB_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")


# ---------------------------------------------------------------- numpy path

def apply_1q_numpy(state, num_sites, site, gate):
    left = 1 << (site - 1)
    right = 1 << (num_sites - site)
    psi = state.reshape(left, 2, right)
    return np.einsum("ab,ibj->iaj", gate, psi).reshape(-1)


def mcx_numpy(state, num_sites, controls, target):
    out = state.copy()
    psi = out.reshape((2,) * num_sites)
    idx0 = [slice(None)] * num_sites
    for c in controls:
        idx0[c - 1] = 1
    idx1 = list(idx0)
    idx0[target - 1] = 0
    idx1[target - 1] = 1
    idx0, idx1 = tuple(idx0), tuple(idx1)
    tmp = psi[idx0].copy()
    psi[idx0] = psi[idx1]
    psi[idx1] = tmp
    return out


def popcount_numpy(num_sites):
    idx = np.arange(1 << num_sites, dtype=np.int64)
    counts = np.zeros(idx.shape, dtype=np.int64)
    for b in range(num_sites):
        counts += (idx >> b) & 1
    return counts


# ---------------------------------------------------------------- numba path

if nb is not None:

    @nb.njit(cache=True)
    def _apply_1q_nb(state, num_sites, site, g00, g01, g10, g11):
        out = state.copy()
        stride = 1 << (num_sites - site)
        dim = state.shape[0]
        for i in range(dim):
            if i & stride:
                continue
            j = i | stride
            a0 = state[i]
            a1 = state[j]
            out[i] = g00 * a0 + g01 * a1
            out[j] = g10 * a0 + g11 * a1
        return out

    @nb.njit(cache=True)
    def _mcx_nb(state, cmask, tbit):
        out = state.copy()
        free = (state.shape[0] - 1) & ~(cmask | tbit)
        # walk the submasks of the free bits only: 2**(m - |controls| - 1) swaps
        s = 0
        while True:
            i = s | cmask
            j = i | tbit
            out[i] = state[j]
            out[j] = state[i]
            if s == free:
                break
            s = (s - free) & free
        return out

    @nb.njit(cache=True)
    def _popcount_nb(num_sites):
        dim = 1 << num_sites
        out = np.empty(dim, dtype=np.int64)
        for i in range(dim):
            c = 0
            v = i
            while v:
                c += v & 1
                v >>= 1
            out[i] = c
        return out


def apply_1q_numba(state, num_sites, site, gate):
    g = np.asarray(gate, dtype=np.complex128)
    return _apply_1q_nb(state, num_sites, site, g[0, 0], g[0, 1], g[1, 0], g[1, 1])


def mcx_numba(state, num_sites, controls, target):
    cmask = 0
    for c in controls:
        cmask |= 1 << (num_sites - c)
    return _mcx_nb(state, cmask, 1 << (num_sites - target))


def popcount_numba(num_sites):
    return _popcount_nb(num_sites)


if USE_NUMBA:
    apply_1q, mcx, popcount = apply_1q_numba, mcx_numba, popcount_numba
else:
    apply_1q, mcx, popcount = apply_1q_numpy, mcx_numpy, popcount_numpy
