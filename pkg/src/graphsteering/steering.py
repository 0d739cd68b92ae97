"""Steering certification, white-noise thresholds and key-rate bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Bipartition, Graph, two_color
from .graphstate import build_graph_state
from .infotheory import mutual_information
from .registers import DensityOperator, PureState
from .schmidt import build_povm, derive_setting, joint_distribution

# Strict steering inequality: require the margin to clear floating-point noise.
STEERING_MARGIN = 1e-10


@dataclass(frozen=True)
class SteeringReport:
    i_per_setting: tuple
    i_total: float
    threshold: float
    steerable: bool
    margin: float


@dataclass(frozen=True)
class KeyRateReport:
    r_lower: float
    i_total: float
    d: int
    clamped: bool


def white_noise(psi: PureState, p: float) -> DensityOperator:
    """Mix a pure state with the maximally mixed operator at intensity p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise intensity must be in [0, 1], got {p}")
    dim = psi.register.total_dim
    mat = (p / dim) * np.eye(dim) + (1.0 - p) * np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityOperator(psi.register, mat)


def derive_both_settings(g: Graph, d: int, part: Bipartition):
    coloring = two_color(g)
    return tuple(derive_setting(g, d, coloring, part, m) for m in (1, 2))


def _povm_pairs(settings, d: int):
    return [(build_povm(s, "A", d), build_povm(s, "B", d)) for s in settings]


def _mutual_informations(rho: DensityOperator, povm_pairs, part: Bipartition):
    return tuple(
        mutual_information(joint_distribution(rho, pa, pb, part)) for pa, pb in povm_pairs
    )


def steering_statistic(
    rho: DensityOperator, settings, part: Bipartition
) -> SteeringReport:
    """Per-setting mutual information versus the log2(d) entropic floor."""
    d = rho.register.local_dim
    i_per = _mutual_informations(rho, _povm_pairs(settings, d), part)
    i_total = float(sum(i_per))
    threshold = float(np.log2(d))
    margin = i_total - threshold
    return SteeringReport(
        i_per_setting=i_per,
        i_total=i_total,
        threshold=threshold,
        steerable=margin > STEERING_MARGIN,
        margin=margin,
    )


def noise_threshold(g: Graph, d: int, part: Bipartition, tol: float = 1e-8) -> float:
    """Noise intensity where the certified total information hits log2(d).

    Bisection on p; below the returned value the noisy state is certified
    steerable.
    """
    settings = derive_both_settings(g, d, part)
    pairs = _povm_pairs(settings, d)
    psi = build_graph_state(g, d)
    threshold = np.log2(d)

    def excess(p: float) -> float:
        rho = white_noise(psi, p)
        return sum(_mutual_informations(rho, pairs, part)) - threshold

    lo, hi = 0.0, 1.0
    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo <= 0 or f_hi >= 0:
        raise RuntimeError(
            "noise threshold not bracketed; correlation forms look defective "
            f"(excess at 0: {f_lo}, at 1: {f_hi})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def key_rate_lower(report: SteeringReport) -> KeyRateReport:
    """Devetak-Winter style lower bound R_L = max(0, I_total - log2 d)."""
    d = int(round(2 ** report.threshold))
    raw = report.i_total - report.threshold
    clamped = raw < 0
    return KeyRateReport(
        r_lower=max(0.0, raw), i_total=report.i_total, d=d, clamped=clamped
    )


def disturbance_entropy(D: float, d: int) -> float:
    """H(D) = -(1-D) log2(1-D) - D log2(D / (d-1))."""
    if not 0.0 <= D <= 1.0:
        raise ValueError(f"disturbance must be in [0, 1], got {D}")
    out = 0.0
    if 0.0 < D:
        out -= D * np.log2(D / (d - 1))
    if D < 1.0:
        out -= (1.0 - D) * np.log2(1.0 - D)
    return float(out)


def critical_disturbance(d: int, tol: float = 1e-9) -> float:
    """Disturbance at which the key-rate bound vanishes: root of H(D) = log2(d)/2.

    Bisection on (0, (d-1)/d); H has infinite slope at D -> 0, so bisection is
    used for robustness.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    target = 0.5 * np.log2(d)
    lo, hi = 0.0, (d - 1) / d
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if disturbance_entropy(mid, d) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def key_rate_scan(g: Graph, d: int, part: Bipartition, p_grid):
    """Rows (p, i_total, r_lower) over a noise grid, sharing one derived setting."""
    p_grid = list(p_grid)
    if any(not 0.0 <= p <= 1.0 for p in p_grid):
        raise ValueError("noise grid must lie in [0, 1]")
    settings = derive_both_settings(g, d, part)
    pairs = _povm_pairs(settings, d)
    psi = build_graph_state(g, d)
    threshold = float(np.log2(d))
    rows = []
    for p in p_grid:
        rho = white_noise(psi, p)
        i_total = float(sum(_mutual_informations(rho, pairs, part)))
        rows.append((float(p), i_total, max(0.0, i_total - threshold)))
    return rows
