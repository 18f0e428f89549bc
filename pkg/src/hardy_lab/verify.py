"""Certify the three sets of Hardy conditions and the contradiction they imply."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import circuit as circ
from .analytics import p_nonlocal_general
from .state import (HardyState, TransformCoefficients, bits_for, cd_amplitudes, mixed_amplitudes,
                    subsets, uv_amplitudes)

ANALYTIC_TOL = 1e-10
CIRCUIT_TOL = 1e-9


@dataclass
class Condition1:
    p_all_u: float
    passed: bool


@dataclass
class Condition2:
    site: int
    p_d: float
    p_d_expected: float
    p_all_u_given_d: float
    passed: bool


@dataclass
class Condition3:
    sites: tuple[int, ...]
    outcome: str
    probability: float
    passed: bool


@dataclass
class LHVMargin:
    pair: tuple[int, int]
    p_dd: float
    p_all_u: float
    margin: float


@dataclass
class Condition3Set:
    records: list[Condition3]
    total: float
    expected_total: float
    count_ok: bool
    total_ok: bool
    margins: list[LHVMargin] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (all(r.passed for r in self.records) and self.count_ok and self.total_ok
                and self.total > 0.0 and all(m.margin > 0.0 for m in self.margins))


@dataclass
class ParadoxReport:
    n: int
    A: list[complex]
    tolerance: float
    condition1: Condition1
    condition2: list[Condition2]
    condition3: Condition3Set

    @property
    def lhv_margins(self) -> list[LHVMargin]:
        return self.condition3.margins

    @property
    def certified(self) -> bool:
        return (self.condition1.passed
                and all(c.passed for c in self.condition2)
                and self.condition3.passed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["A"] = [{"re": float(np.real(a)), "im": float(np.imag(a))} for a in self.A]
        d["certified"] = self.certified
        return d


def check_condition1(state, tol: float = ANALYTIC_TOL) -> Condition1:
    """P(U_1 ... U_n) must vanish; accepts a UV-frame HardyState or a PREPARE histogram."""
    if isinstance(state, HardyState):
        if state.frame != "UV":
            raise ValueError(f"condition 1 needs the UV frame, got {state.frame}")
        p = float(state.probabilities()[-1])
    elif isinstance(state, circ.Histogram):
        if state.mode != circ.PREPARE:
            raise ValueError(f"condition 1 needs a prepare-mode histogram, got {state.mode}")
        p = float(state.frequencies[-1])
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    return Condition1(p, p <= tol)


def check_condition2(coeffs: TransformCoefficients, k: int, tol: float = ANALYTIC_TOL,
                     state: HardyState | None = None) -> Condition2:
    """D_k = 1 forces U = 1 on every other site.

    ``state`` overrides the analytic MIXED(k) state, e.g. for negative controls.
    """
    if state is None:
        state = mixed_amplitudes(coeffs, k)
    elif state.frame != "MIXED" or state.mixed_site != k:
        raise ValueError(f"condition 2 needs the MIXED({k}) frame")
    n = coeffs.n
    probs = state.probabilities()
    idx = np.arange(probs.size)
    dk = (idx >> (n - k)) & 1 == 1
    p_d = float(probs[dk].sum())
    p_joint = float(probs[-1])
    conditional = p_joint / p_d if p_d > 0 else 0.0
    N2 = coeffs.normalization ** 2
    expected = float(N2 * abs(coeffs.B[k - 1]) ** 2 * abs(coeffs.a_omega) ** 2)
    passed = conditional >= 1.0 - tol and abs(p_d - expected) <= tol
    return Condition2(k, p_d, expected, conditional, passed)


def check_condition3(coeffs: TransformCoefficients, tol: float = ANALYTIC_TOL,
                     state: HardyState | None = None) -> Condition3Set:
    """Outcomes with d on at least two sites, their total, and the LHV margins."""
    coeffs.require_paradox()
    if state is None:
        state = cd_amplitudes(coeffs)
    n = coeffs.n
    probs = state.probabilities()
    records = []
    for beta in subsets(n, 2):
        bits = bits_for(n, beta)
        p = float(probs[int(bits, 2)])
        records.append(Condition3(beta, bits, p, p > 0.0))
    total = float(sum(r.probability for r in records))
    count_ok = sum(r.passed for r in records) == (1 << n) - n - 1
    expected = p_nonlocal_general(coeffs)
    p_all_u = float(uv_amplitudes(coeffs).probabilities()[-1])
    idx = np.arange(probs.size)
    margins = []
    for k, l in combinations(range(1, n + 1), 2):
        both = (((idx >> (n - k)) & 1) == 1) & (((idx >> (n - l)) & 1) == 1)
        p_dd = float(probs[both].sum())
        margins.append(LHVMargin((k, l), p_dd, p_all_u, p_dd - p_all_u))
    return Condition3Set(records, total, expected, count_ok, abs(total - expected) <= tol, margins)


def certify(coeffs: TransformCoefficients, tol: float = ANALYTIC_TOL) -> ParadoxReport:
    c1 = check_condition1(uv_amplitudes(coeffs), tol)
    c2 = [check_condition2(coeffs, k, tol) for k in range(1, coeffs.n + 1)]
    return ParadoxReport(coeffs.n, list(coeffs.A), tol, c1, c2, check_condition3(coeffs, tol))


@dataclass
class CrossValidation:
    n: int
    tolerance: float
    deviations: dict[str, float]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self) -> dict:
        return {"n": self.n, "tolerance": self.tolerance, "deviations": self.deviations,
                "max_deviation": self.max_deviation, "passed": self.passed}


def cross_validate(coeffs: TransformCoefficients, tol: float = CIRCUIT_TOL) -> CrossValidation:
    """Compare every circuit mode's exact distribution with the analytic frame.

    The circuit uses RY angles from |A_k|; outcome probabilities depend on
    the coefficients only through their magnitudes.
    """
    n = coeffs.n
    thetas = [circ.theta_of_A(a) for a in np.abs(coeffs.A)]
    pairs = [(circ.PREPARE, uv_amplitudes(coeffs)), (circ.FULL_CD, cd_amplitudes(coeffs))]
    pairs += [(f"mixed:{k}", mixed_amplitudes(coeffs, k)) for k in range(1, n + 1)]
    dev = {}
    for mode, analytic in pairs:
        hist = circ.run_exact(circ.build_circuit(n, thetas, mode))
        dev[mode] = float(np.abs(hist.probs - analytic.probabilities()).max())
    return CrossValidation(n, tol, dev)
