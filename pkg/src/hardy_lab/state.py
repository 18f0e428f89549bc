"""The generalized n-particle Hardy state in its three measurement frames.

Computational-basis labels per frame:

* ``UV``       bit 1 = |u_k>, bit 0 = |v_k> on every site
* ``CD``       bit 0 = |c_k>, bit 1 = |d_k> on every site
* ``MIXED(k)`` site k in the c/d labelling, every other site in u/v

The state is |c_1...c_n> - A_1...A_n |u_1...u_n>, normalized. All
amplitudes below are built directly from the basis relations rather than
by simulating a circuit; ``hardy_lab.circuit`` is the independent route.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations

import numpy as np

from . import linalg

NORM_TOL = 1e-12


@dataclass(frozen=True)
class TransformCoefficients:
    """Per-site coefficients (A_k, B_k) of the u/v <-> c/d basis change."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = np.atleast_1d(np.asarray(self.A, dtype=np.complex128)).copy()
        B = np.atleast_1d(np.asarray(self.B, dtype=np.complex128)).copy()
        if A.shape != B.shape or A.ndim != 1:
            raise ValueError("A and B must be 1-D arrays of equal length")
        if A.size < 2:
            raise ValueError("need at least two sites")
        if not (np.isfinite(A).all() and np.isfinite(B).all()):
            raise ValueError("coefficients must be finite")
        err = np.abs(np.abs(A) ** 2 + np.abs(B) ** 2 - 1.0).max()
        if err > NORM_TOL:
            raise ValueError(f"|A_k|^2 + |B_k|^2 != 1 (deviation {err:.3g})")
        A.flags.writeable = False
        B.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @classmethod
    def from_A(cls, A) -> TransformCoefficients:
        """Real positive B_k = sqrt(1 - |A_k|^2) for the given A_k."""
        A = np.atleast_1d(np.asarray(A, dtype=np.complex128))
        return cls(A, np.sqrt(np.clip(1.0 - np.abs(A) ** 2, 0.0, 1.0)))

    @classmethod
    def equal(cls, n: int, A: float) -> TransformCoefficients:
        return cls.from_A(np.full(n, A))

    @property
    def n(self) -> int:
        return self.A.size

    @property
    def a_omega(self) -> complex:
        return complex(np.prod(self.A))

    def a_prod(self, sites) -> complex:
        return complex(np.prod([self.A[k - 1] for k in sites]))

    def b_prod(self, sites) -> complex:
        return complex(np.prod([self.B[k - 1] for k in sites]))

    @property
    def is_degenerate(self) -> bool:
        a = np.abs(self.A)
        return bool(np.any((a == 0.0) | (a == 1.0)))

    def require_paradox(self) -> None:
        if self.is_degenerate:
            raise DegenerateTransformError(
                "every |A_k| must lie strictly inside (0, 1) for the paradox construction")

    @property
    def normalization(self) -> float:
        self.require_paradox()
        return float((1.0 - abs(self.a_omega) ** 2) ** -0.5)


class DegenerateTransformError(ValueError):
    pass


@dataclass(frozen=True)
class HardyState:
    coeffs: TransformCoefficients
    frame: str  # "UV", "CD" or "MIXED"
    vector: np.ndarray = field(repr=False)
    mixed_site: int | None = None

    @property
    def n(self) -> int:
        return self.coeffs.n

    @property
    def normalization(self) -> float:
        return self.coeffs.normalization

    def probabilities(self) -> np.ndarray:
        return np.abs(self.vector) ** 2

    def amplitude(self, bits: str) -> complex:
        return complex(self.vector[int(bits, 2)])

    def probability(self, bits: str) -> float:
        return abs(self.amplitude(bits)) ** 2


def transform_matrices(coeffs: TransformCoefficients, k: int) -> tuple[np.ndarray, np.ndarray]:
    """(cd->uv, uv->cd) change-of-basis matrices for site k.

    Column 0 of the first matrix is |c_k> = A|u> + B|v> written in the UV
    labelling (row 0 = v, row 1 = u); column 1 is |d_k> = -B*|u> + A*|v>.
    For real A = sin(t/2) this equals ry(t) @ diag(1, -1).
    """
    if not 1 <= k <= coeffs.n:
        raise IndexError(f"site {k} out of range 1..{coeffs.n}")
    a, b = coeffs.A[k - 1], coeffs.B[k - 1]
    to_uv = np.array([[b, np.conj(a)], [a, -np.conj(b)]], dtype=np.complex128)
    return to_uv, to_uv.conj().T


def _kron_all(vectors) -> np.ndarray:
    return reduce(np.kron, vectors)


def uv_amplitudes(coeffs: TransformCoefficients) -> HardyState:
    N = coeffs.normalization
    psi = N * _kron_all([np.array([b, a]) for a, b in zip(coeffs.A, coeffs.B)])
    psi[-1] = 0.0  # |u...u> is quenched exactly
    return HardyState(coeffs, "UV", psi)


def mixed_amplitudes(coeffs: TransformCoefficients, k: int) -> HardyState:
    N = coeffs.normalization
    if not 1 <= k <= coeffs.n:
        raise IndexError(f"site {k} out of range 1..{coeffs.n}")
    c_part, u_part = [], []
    for j, (a, b) in enumerate(zip(coeffs.A, coeffs.B), start=1):
        if j == k:
            c_part.append(np.array([1.0, 0.0]))
            u_part.append(np.array([np.conj(a), -b]))
        else:
            c_part.append(np.array([b, a]))
            u_part.append(np.array([0.0, 1.0]))
    # d_k only arises from the all-u term, so d_k with v elsewhere is exactly 0
    psi = N * (_kron_all(c_part) - coeffs.a_omega * _kron_all(u_part))
    return HardyState(coeffs, "MIXED", psi, mixed_site=k)


def cd_amplitudes(coeffs: TransformCoefficients) -> HardyState:
    N = coeffs.normalization
    psi = -coeffs.a_omega * _kron_all([np.array([np.conj(a), -b]) for a, b in zip(coeffs.A, coeffs.B)])
    psi[0] += 1.0
    psi *= N
    return HardyState(coeffs, "CD", psi)


def product_state(coeffs: TransformCoefficients) -> np.ndarray:
    """|c_1...c_n> in the UV labelling; valid for degenerate coefficients too."""
    return _kron_all([np.array([b, a], dtype=np.complex128) for a, b in zip(coeffs.A, coeffs.B)])


def change_frame(vector: np.ndarray, coeffs: TransformCoefficients, sites, to: str) -> np.ndarray:
    """Apply the per-site basis change on ``sites``; ``to`` is "UV" or "CD"."""
    pick = 0 if to == "UV" else 1
    out = vector
    for k in sites:
        out = linalg.apply_single_qubit_gate(out, k, transform_matrices(coeffs, k)[pick])
    return out


def subsets(n: int, min_size: int = 0):
    """All subsets of {1..n} with at least ``min_size`` members, by size then lexicographically."""
    for r in range(min_size, n + 1):
        yield from combinations(range(1, n + 1), r)


def bits_for(n: int, ones) -> str:
    ones = set(ones)
    return "".join("1" if k in ones else "0" for k in range(1, n + 1))
