"""Closed-form nonlocal probability, its optimum over A, the large-n limit,
the area under the curve, and entanglement of the Hardy state."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg
from .state import TransformCoefficients, uv_amplitudes

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

P_NONLOCAL = "P_NONLOCAL"
OPTIMUM = "OPTIMUM"
INTEGRAL = "INTEGRAL"
ENTROPY = "ENTROPY"
NEGATIVITY = "NEGATIVITY"
ASYMPTOTE = "ASYMPTOTE"


@dataclass
class AnalyticsResult:
    kind: str
    n: int | None
    value: float
    inputs: dict = field(default_factory=dict)
    secondary_value: float | None = None
    tolerance: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"{self.kind} value is not finite")

    def to_dict(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------ nonlocal probability

def p_nonlocal_general(coeffs: TransformCoefficients) -> float:
    """Combined probability of all c/d outcomes with two or more d results."""
    coeffs.require_paradox()
    a2 = np.abs(coeffs.A) ** 2
    w = float(np.prod(a2))
    return w - w * w / (1.0 - w) * float(np.sum((1.0 - a2) / a2))


def p_nonlocal_equal(n: int, A: float) -> float:
    """Equal-coefficient form A^(2n) - n A^(4n-2) (1-A^2) / (1-A^(2n)).

    (1-t)/(1-t^n) is evaluated as 1/(1 + t + ... + t^(n-1)) with t = A^2 so
    the value stays accurate as A approaches 1.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < A < 1.0:
        raise ValueError(f"A must lie in (0, 1), got {A}")
    t = A * A
    geo = sum(t**j for j in range(n))
    return t**n - n * t ** (2 * n - 1) / geo


def _p_equal_extended(n: int, A: float) -> float:
    return 0.0 if A <= 0.0 or A >= 1.0 else p_nonlocal_equal(n, A)


# ------------------------------------------------------------ 1-D maximization

def golden_section_max(f, a: float, b: float, tol: float = 1e-10) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on [a, b]; returns (x, f(x)) with bracket width <= tol."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    candidates = [(f(x), x), (fc, c), (fd, d)]
    fx, x = max(candidates)
    return x, fx


def optimize_A(n: int, grid_points: int = 10_000, tol: float = 1e-9) -> tuple[float, float]:
    """Maximizer (A*, P*) of p_nonlocal_equal(n, .) on (0, 1).

    A uniform scan locates the global grid maximum, then golden-section
    search refines within the two neighbouring grid cells.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    grid = np.linspace(0.0, 1.0, grid_points + 1)[1:-1]
    vals = np.array([p_nonlocal_equal(n, a) for a in grid])
    i = int(np.argmax(vals))
    lo = grid[i - 1] if i > 0 else 0.0
    hi = grid[i + 1] if i + 1 < grid.size else 1.0
    x, fx = golden_section_max(lambda a: _p_equal_extended(n, a), lo, hi, tol)
    if fx < vals[i]:  # pragma: no cover - unimodal bracket guarantees otherwise
        x, fx = float(grid[i]), float(vals[i])
    return float(x), float(fx)


def asymptote_function(x: float) -> float:
    """Large-n limit of the equal-coefficient curve in the variable x = A^(2n).

    With x fixed, n(1 - A^2) -> -ln x, so the curve tends to x + x^2 ln(x) / (1 - x).
    """
    if x <= 0.0 or x >= 1.0:
        return 0.0 if x <= 0.0 else 0.0 * x
    return x + x * x * math.log(x) / (1.0 - x)


def asymptote(tol: float = 1e-11) -> tuple[float, float]:
    return golden_section_max(asymptote_function, 0.0, 1.0, tol)


# ------------------------------------------------------------ quadrature

def adaptive_simpson(f, a: float, b: float, abs_tol: float = 1e-9, max_depth: int = 60) -> float:
    """Adaptive Simpson with Richardson correction, iterative over an explicit stack.

    A panel is accepted once |S_left + S_right - S_whole| < 15 * tol_panel,
    where tol_panel is ``abs_tol`` scaled by the panel's share of [a, b].
    """
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, abs_tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, s, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        flm, frm = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - s
        if depth >= max_depth or abs(delta) < 15.0 * tol:
            total += left + right + delta / 15.0
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1))
    return total


def simpson_fixed(f, a: float, b: float, panels: int) -> float:
    if panels % 2:
        raise ValueError("panels must be even")
    x = np.linspace(a, b, panels + 1)
    y = np.array([f(v) for v in x])
    h = (b - a) / panels
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def integrate_P(n: int, abs_tol: float = 1e-9) -> float:
    """Area under p_nonlocal_equal(n, A) for A in [0, 1]; the endpoints contribute 0."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if abs_tol <= 0:
        raise ValueError("abs_tol must be positive")
    return adaptive_simpson(lambda a: _p_equal_extended(n, a), 0.0, 1.0, abs_tol)


# ------------------------------------------------------------ entanglement

HALF_CHAIN = "half"


def left_sites(n: int, bipartition="half") -> list[int]:
    """Left block for "half" ({1..floor(n/2)}) or "one-vs-rest:<k>" / ("one-vs-rest", k)."""
    if isinstance(bipartition, tuple):
        bipartition = f"{bipartition[0]}:{bipartition[1]}"
    if bipartition == HALF_CHAIN:
        return list(range(1, n // 2 + 1))
    if str(bipartition).startswith("one-vs-rest:"):
        k = int(str(bipartition).split(":", 1)[1])
        if not 1 <= k <= n:
            raise ValueError(f"site {k} out of range 1..{n}")
        return [k]
    raise ValueError(f"unknown bipartition {bipartition!r}")


def entropy(coeffs: TransformCoefficients, bipartition="half") -> float:
    """von Neumann entropy (bits) of the reduced Hardy state on the left block."""
    psi = uv_amplitudes(coeffs).vector
    return linalg.von_neumann_entropy(linalg.schmidt_spectrum(psi, left_sites(coeffs.n, bipartition)))


def negativity(coeffs: TransformCoefficients, bipartition="half") -> float:
    psi = uv_amplitudes(coeffs).vector
    return linalg.negativity(psi, left_sites(coeffs.n, bipartition))
