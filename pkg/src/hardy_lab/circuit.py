"""The three Hardy circuits: preparation with post-selection, one-site and all-site back-rotation.

Data sites are 1..n, the ancilla is site n+1. After the forward rotations a
computational |1> reads as |u>, after a back-rotation RY(-theta) it reads as
|d> (up to a sign that no probability sees).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _accel, linalg

PREPARE = "prepare"
FULL_CD = "full-cd"
MIN_SUCCESS = 1e-12


def theta_of_A(A: float) -> float:
    if not 0.0 < A < 1.0:
        raise ValueError(f"A must lie in (0, 1), got {A}")
    return 2.0 * float(np.arcsin(A))


def parse_mode(mode) -> tuple[str, int | None]:
    """Accept "prepare", "full-cd", "mixed:<k>" or ("mixed", k)."""
    if isinstance(mode, tuple):
        kind, k = mode
        return kind, int(k)
    mode = str(mode).lower()
    if mode in (PREPARE, FULL_CD):
        return mode, None
    if mode.startswith("mixed:"):
        return "mixed", int(mode.split(":", 1)[1])
    raise ValueError(f"unknown mode {mode!r}")


def mode_name(kind: str, k: int | None) -> str:
    return f"mixed:{k}" if kind == "mixed" else kind


@dataclass(frozen=True)
class Gate:
    kind: str  # "RY" or "MCX"
    target: int
    theta: float = 0.0
    controls: tuple[int, ...] = ()


@dataclass(frozen=True)
class CircuitSpec:
    num_data_sites: int
    gates: tuple[Gate, ...]
    has_ancilla: bool = True
    postselect: tuple[int, int] | None = None
    mode: str = PREPARE

    @property
    def num_sites(self) -> int:
        return self.num_data_sites + int(self.has_ancilla)

    def __post_init__(self):
        m = self.num_sites
        for g in self.gates:
            if not all(1 <= s <= m for s in (g.target, *g.controls)):
                raise ValueError(f"gate {g} touches a site outside 1..{m}")
            if g.target in g.controls:
                raise ValueError(f"gate {g} targets one of its controls")
        if self.postselect is not None:
            if not self.has_ancilla or self.postselect[0] != m:
                raise ValueError("post-selection is only allowed on the ancilla")
            if self.postselect[1] not in (0, 1):
                raise ValueError("post-selected value must be 0 or 1")


def build_circuit(n: int, thetas, mode=PREPARE) -> CircuitSpec:
    if n < 2:
        raise ValueError("n must be at least 2")
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (n,):
        raise ValueError(f"need {n} angles, got shape {thetas.shape}")
    if not np.all((thetas > 0) & (thetas < np.pi)):
        raise ValueError("angles must lie in (0, pi)")
    kind, k = parse_mode(mode)
    if kind == "mixed" and not 1 <= k <= n:
        raise ValueError(f"mixed site {k} out of range 1..{n}")
    ancilla = n + 1
    gates = [Gate("RY", s, theta=float(thetas[s - 1])) for s in range(1, n + 1)]
    gates.append(Gate("MCX", ancilla, controls=tuple(range(1, n + 1))))
    back = {PREPARE: [], FULL_CD: range(1, n + 1), "mixed": [k]}[kind]
    gates += [Gate("RY", s, theta=-float(thetas[s - 1])) for s in back]
    return CircuitSpec(n, tuple(gates), True, (ancilla, 0), mode_name(kind, k))


def build_circuit_for_A(n: int, A, mode=PREPARE) -> CircuitSpec:
    A = np.broadcast_to(np.asarray(A, dtype=float), (n,))
    return build_circuit(n, [theta_of_A(a) for a in A], mode)


def simulate(circuit: CircuitSpec) -> np.ndarray:
    """Full statevector, data sites followed by the ancilla, from |0...0>."""
    psi = np.zeros(1 << circuit.num_sites, dtype=np.complex128)
    psi[0] = 1.0
    for g in circuit.gates:
        if g.kind == "RY":
            psi = linalg.apply_single_qubit_gate(psi, g.target, linalg.ry(g.theta))
        elif g.kind == "MCX":
            psi = linalg.apply_multi_controlled_x(psi, g.controls, g.target)
        else:
            raise ValueError(f"unknown gate kind {g.kind!r}")
    return psi


@dataclass
class Histogram:
    """Outcome table over data-site bitstrings (site 1 leftmost).

    ``probs`` holds exact post-selected probabilities in exact mode;
    ``counts`` holds kept shots in sampled mode.
    """

    n: int
    mode: str
    probs: np.ndarray | None = None
    counts: np.ndarray | None = None
    postselect_success: float = 1.0
    shots: int | None = None
    seed: int | None = None
    execution: int = 0
    raw_ancilla_flagged: float = 0.0
    state: np.ndarray | None = field(default=None, repr=False)

    @property
    def sampled(self) -> bool:
        return self.counts is not None

    @property
    def frequencies(self) -> np.ndarray:
        if self.sampled:
            return self.counts / max(int(self.counts.sum()), 1)
        return self.probs

    def entries(self) -> dict[str, float]:
        values = self.counts if self.sampled else self.probs
        return {b: (int(v) if self.sampled else float(v))
                for b, v in zip(linalg.bitstrings(self.n), values)}

    def __getitem__(self, bits: str):
        values = self.counts if self.sampled else self.probs
        return values[int(bits, 2)]

    def nonlocal_sum(self) -> float:
        """Total weight on outcomes with two or more ones."""
        return float(self.frequencies[_accel.popcount(self.n) >= 2].sum())


class PostSelectionError(RuntimeError):
    pass


def run_exact(circuit: CircuitSpec) -> Histogram:
    psi = simulate(circuit)
    n = circuit.num_data_sites
    if circuit.postselect is None:
        probs = np.abs(psi) ** 2
        if circuit.has_ancilla:
            probs = probs.reshape(-1, 2).sum(axis=1)
        return Histogram(n, circuit.mode, probs=probs, state=psi)
    _, keep = circuit.postselect
    branches = psi.reshape(-1, 2)
    kept = branches[:, keep]
    success = float(np.vdot(kept, kept).real)
    if success < MIN_SUCCESS:
        raise PostSelectionError("post-selection annihilated the state")
    flagged = float(np.vdot(branches[:, 1 - keep], branches[:, 1 - keep]).real)
    kept = kept / np.sqrt(success)
    return Histogram(n, circuit.mode, probs=np.abs(kept) ** 2, postselect_success=success,
                     raw_ancilla_flagged=flagged, state=kept)


def rng_for(seed: int, execution: int = 0) -> np.random.Generator:
    """Counter-based stream: one independent Philox key per (seed, execution)."""
    return np.random.Generator(np.random.Philox(key=[int(seed), int(execution)]))


def sample_shots(hist: Histogram, shots: int, seed: int, execution: int = 0) -> Histogram:
    """Multinomial draw of ``shots`` kept outcomes from an exact histogram."""
    if hist.sampled:
        raise ValueError("sample_shots needs an exact histogram")
    if shots < 1:
        raise ValueError("shots must be at least 1")
    p = np.clip(hist.probs, 0.0, None)
    p = p / p.sum()
    counts = rng_for(seed, execution).multinomial(shots, p)
    return Histogram(hist.n, hist.mode, counts=counts, postselect_success=hist.postselect_success,
                     shots=shots, seed=seed, execution=execution)


def run_sampled(circuit: CircuitSpec, shots: int, seed: int, execution: int = 0) -> Histogram:
    """Sample raw shots including the ancilla and discard those failing post-selection.

    ``shots`` counts raw executions; the histogram keeps only accepted ones and
    ``postselect_success`` is the observed acceptance rate.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    psi = simulate(circuit)
    raw = np.abs(psi) ** 2
    counts = rng_for(seed, execution).multinomial(shots, raw / raw.sum()).reshape(-1, 2)
    n = circuit.num_data_sites
    if circuit.postselect is None:
        kept = counts.sum(axis=1)
    else:
        kept = counts[:, circuit.postselect[1]]
    total = int(kept.sum())
    if total == 0:
        raise PostSelectionError("post-selection discarded every shot")
    return Histogram(n, circuit.mode, counts=kept, postselect_success=total / shots,
                     shots=total, seed=seed, execution=execution)
