"""Dense statevector algebra: gates, Schmidt spectra, negativity.

States are flat complex128 arrays of length 2**m. Site k (1-based) is the
k-th character of the printed bitstring, i.e. bit ``m - k`` of the index.
Every function returns a fresh array; inputs are never modified.
"""
from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from . import _accel

UNITARY_TOL = 1e-12
# SVD noise on numerically-zero Schmidt values sits near 1e-32 in probability
CLIP_EPS = 1e-30
MAX_SITES = 24


def num_sites(state: np.ndarray) -> int:
    dim = state.shape[0]
    m = dim.bit_length() - 1
    if state.ndim != 1 or m < 1 or dim != 1 << m:
        raise ValueError(f"statevector length {dim} is not a power of two >= 2")
    if m > MAX_SITES:
        raise ValueError(f"{m} sites exceeds the supported maximum of {MAX_SITES}")
    return m


def basis_state(bits: str) -> np.ndarray:
    """Computational basis state for a bitstring such as ``"110"``."""
    psi = np.zeros(1 << len(bits), dtype=np.complex128)
    psi[int(bits, 2)] = 1.0
    return psi


def bitstrings(m: int) -> list[str]:
    return [format(i, f"0{m}b") for i in range(1 << m)]


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def check_unitary(gate: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    g = np.asarray(gate, dtype=np.complex128)
    if g.shape != (2, 2):
        raise ValueError(f"gate must be 2x2, got shape {g.shape}")
    if not np.isfinite(g).all():
        raise ValueError("gate has non-finite entries")
    err = np.abs(g.conj().T @ g - np.eye(2)).max()
    if err > tol:
        raise ValueError(f"gate is not unitary (deviation {err:.3g})")
    return g


def _check_site(site: int, m: int) -> None:
    if not 1 <= site <= m:
        raise IndexError(f"site {site} out of range 1..{m}")


def _as_state(state) -> np.ndarray:
    psi = np.ascontiguousarray(state, dtype=np.complex128)
    if not np.isfinite(psi).all():
        raise ValueError("statevector has non-finite amplitudes")
    return psi


def apply_single_qubit_gate(state, site: int, gate) -> np.ndarray:
    psi = _as_state(state)
    m = num_sites(psi)
    _check_site(site, m)
    g = check_unitary(gate)
    return _accel.apply_1q(psi, m, site, g)


def apply_multi_controlled_x(state, controls: Iterable[int], target: int) -> np.ndarray:
    psi = _as_state(state)
    m = num_sites(psi)
    controls = sorted(set(controls))
    for s in (*controls, target):
        _check_site(s, m)
    if target in controls:
        raise ValueError(f"target {target} is also a control")
    return _accel.mcx(psi, m, controls, target)


def _split(state, left_sites: Iterable[int]) -> tuple[np.ndarray, int]:
    """Reshape into a (2**|left|, 2**|rest|) matrix with the left sites first."""
    psi = _as_state(state)
    m = num_sites(psi)
    left = sorted(set(left_sites))
    for s in left:
        _check_site(s, m)
    if not left or len(left) == m:
        raise ValueError("left_sites must be a proper nonempty subset of the sites")
    rest = [s for s in range(1, m + 1) if s not in left]
    t = psi.reshape((2,) * m).transpose([s - 1 for s in left + rest])
    return t.reshape(1 << len(left), 1 << len(rest)), len(left)


def schmidt_coefficients(state, left_sites: Iterable[int]) -> np.ndarray:
    mat, _ = _split(state, left_sites)
    return np.linalg.svd(mat, compute_uv=False)


def schmidt_spectrum(state, left_sites: Iterable[int]) -> np.ndarray:
    """Descending eigenvalues of the reduced density matrix on ``left_sites``.

    Obtained as squared singular values of the reshaped amplitude matrix, so
    no 2**n x 2**n matrix is ever formed. The spectrum is padded with zeros
    to the full left dimension, clipped to [0, 1] and checked to sum to one.
    """
    mat, k = _split(state, left_sites)
    sv = np.linalg.svd(mat, compute_uv=False)
    lam = np.zeros(1 << k)
    lam[: sv.size] = sv**2
    total = lam.sum()
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"state is not normalized (reduced trace {total:.12g})")
    lam[lam < CLIP_EPS] = 0.0
    return np.clip(lam, 0.0, 1.0)


def von_neumann_entropy(spectrum: np.ndarray) -> float:
    """Entropy in bits of a probability spectrum, renormalized to unit sum.

    The dominant eigenvalue enters as 1 - (sum of the others) through log1p,
    which keeps entropies down to ~1e-28 accurate for nearly pure states.
    """
    lam = np.sort(np.asarray(spectrum, dtype=float))[::-1]
    lam = lam[lam > CLIP_EPS]
    if lam.size <= 1:
        return 0.0
    rest = lam[1:] / lam.sum()
    r = rest.sum()
    s = -(rest * np.log2(rest)).sum() - (1.0 - r) * np.log1p(-r) / np.log(2.0)
    return float(s)


def negativity(state, left_sites: Iterable[int]) -> float:
    """Pure-state negativity ((sum of Schmidt coefficients)**2 - 1) / 2."""
    lam = schmidt_spectrum(state, left_sites)
    s = np.sqrt(lam / lam.sum())
    # expanded as sum_{i<j} s_i s_j to avoid cancellation near product states
    tail = s[1:].sum()
    return float(s[0] * tail + (tail * tail - (s[1:] ** 2).sum()) / 2.0)


def reduced_density_matrix(state, left_sites: Iterable[int]) -> np.ndarray:
    mat, _ = _split(state, left_sites)
    return mat @ mat.conj().T


def partial_transpose(rho: np.ndarray, m: int, sites: Iterable[int]) -> np.ndarray:
    """Partial transpose of a dense 2**m x 2**m matrix on ``sites``. Small m only."""
    t = rho.reshape((2,) * (2 * m))
    perm = list(range(2 * m))
    for s in sites:
        perm[s - 1], perm[m + s - 1] = perm[m + s - 1], perm[s - 1]
    return t.transpose(perm).reshape(1 << m, 1 << m)
