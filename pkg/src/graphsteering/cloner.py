"""Cloning-attack model in the effective d-level Schmidt space.

The attack is described on four abstract d-level registers (A, B and the
clone pair C, C') via a d x d probability table over generalized Bell states.
Everything here lives in dimension d**4 at most, so formula-level quantities
can always be cross-checked against direct measurement of the explicit state.

Index convention: the clone-pair Bell index is taken as (d-k) mod d, which
makes the formula-level marginals agree with direct measurement of the
explicit state; see the tests for that cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphstate import fourier_op
from .infotheory import CqEnsemble, shannon_entropy
from .registers import DensityOperator, PureState, QuditRegister


@dataclass(frozen=True, eq=False)
class GammaDistribution:
    """d x d probability table over the Bell-state indices (j, k)."""

    gamma: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("gamma must be a square table")
        if np.min(g) < 0:
            raise ValueError("gamma has a negative entry")
        if abs(g.sum() - 1.0) > 1e-12:
            raise ValueError(f"gamma sums to {g.sum()}, expected 1")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def d(self) -> int:
        return self.gamma.shape[0]


@dataclass(frozen=True, eq=False)
class ClonerOutput:
    """Pure output state on the four d-level registers, ordered (A, B, C, C')."""

    state: PureState

    @property
    def d(self) -> int:
        return self.state.register.local_dim

    def tensor(self) -> np.ndarray:
        d = self.d
        return self.state.amplitudes.reshape(d, d, d, d)


def bell_state(j: int, k: int, d: int) -> PureState:
    """Generalized Bell state (1/sqrt d) sum_v omega^{vk} |v>|v+j mod d>."""
    if not (0 <= j < d and 0 <= k < d):
        raise ValueError(f"Bell indices ({j},{k}) out of range for d={d}")
    omega = np.exp(2j * np.pi / d)
    amps = np.zeros(d * d, dtype=complex)
    for v in range(d):
        amps[v * d + (v + j) % d] = omega ** (v * k) / np.sqrt(d)
    return PureState(QuditRegister(2, d), amps)


def _bell_tensor(j: int, k: int, d: int) -> np.ndarray:
    return bell_state(j, k, d).amplitudes.reshape(d, d)


def cloner_output(g: GammaDistribution) -> ClonerOutput:
    """Output state sum_{jk} sqrt(gamma_jk) |Bell_jk>_AB |Bell_{j,(d-k) mod d}>_CC'."""
    d = g.d
    tensor = np.zeros((d, d, d, d), dtype=complex)
    for j in range(d):
        for k in range(d):
            w = np.sqrt(g.gamma[j, k])
            if w == 0:
                continue
            ab = _bell_tensor(j, k, d)
            cc = _bell_tensor(j, (d - k) % d, d)
            tensor += w * np.einsum("ab,cd->abcd", ab, cc)
    return ClonerOutput(PureState(QuditRegister(4, d), tensor.reshape(-1)))


def q_marginals(g: GammaDistribution, m: int) -> np.ndarray:
    """Distribution of the outcome difference t in Schmidt basis m."""
    if m == 1:
        return g.gamma.sum(axis=1)
    if m == 2:
        col_sums = g.gamma.sum(axis=0)
        t = np.arange(g.d)
        return col_sums[(-t) % g.d]
    raise ValueError("m must be 1 or 2")


def mutual_info_ab(g: GammaDistribution, m: int) -> float:
    """Closed form log2(d) + sum_t q_m^t log2 q_m^t for the A-B reduced state."""
    q = q_marginals(g, m)
    return float(np.log2(g.d) - shannon_entropy(q))


def measured_joint(output: ClonerOutput, m: int) -> np.ndarray:
    """Joint outcome table of registers A and B measured in Schmidt basis m.

    m=1 is the computational basis on both sides; m=2 uses the Fourier basis
    on A and its conjugate on B, so that matched outcomes coincide on the
    no-attack state for any d.
    """
    d = output.d
    tensor = output.tensor()
    if m == 2:
        f = fourier_op(d).matrix
        tensor = np.einsum("va,vbcd->abcd", f.conj(), tensor)
        tensor = np.einsum("vb,avcd->abcd", f, tensor)
    elif m != 1:
        raise ValueError("m must be 1 or 2")
    return np.einsum("abcd,abcd->ab", tensor, tensor.conj()).real


def conditional_ensemble(g: GammaDistribution, m: int) -> CqEnsemble:
    """Clone-pair states conditioned on A's Schmidt-basis-m outcome, with priors."""
    d = g.d
    tensor = cloner_output(g).tensor()
    if m == 2:
        f = fourier_op(d).matrix
        tensor = np.einsum("va,vbcd->abcd", f.conj(), tensor)
    elif m != 1:
        raise ValueError("m must be 1 or 2")
    priors = np.einsum("abcd,abcd->a", tensor, tensor.conj()).real
    reg = QuditRegister(2, d)
    conditionals = []
    for a in range(d):
        sub = tensor[a]  # axes (B, C, C')
        mat = np.einsum("bce,bfg->cefg", sub, sub.conj()).reshape(d * d, d * d)
        conditionals.append(DensityOperator(reg, mat / priors[a]))
    return CqEnsemble(priors=priors, conditionals=tuple(conditionals))


def no_sharing_sum(g: GammaDistribution):
    """Totals entering the no-sharing inequality.

    Returns (sum_ab, sum_ac_bound, total): the two-setting A-B information,
    the Holevo-chain bound on the A-C information, and their sum, which can
    never exceed 2 log2(d).
    """
    sum_ab = mutual_info_ab(g, 1) + mutual_info_ab(g, 2)
    sum_ac_bound = shannon_entropy(q_marginals(g, 1)) + shannon_entropy(q_marginals(g, 2))
    return float(sum_ab), float(sum_ac_bound), float(sum_ab + sum_ac_bound)


def phase_covariant_gamma(D: float, d: int) -> GammaDistribution:
    """Product-form attack copying both complementary bases equally well.

    The single-index distribution puts 1-D on the undisturbed outcome and
    spreads D uniformly over the d-1 others; its entropy is the disturbance
    entropy for both marginals.
    """
    if not 0.0 <= D <= 1.0:
        raise ValueError(f"disturbance must be in [0, 1], got {D}")
    r = np.full(d, D / (d - 1))
    r[0] = 1.0 - D
    return GammaDistribution(np.outer(r, r))


def dirichlet_gamma(d: int, rng: np.random.Generator) -> GammaDistribution:
    """Symmetric Dirichlet sample (concentration 1) over the d*d simplex."""
    return GammaDistribution(rng.dirichlet(np.ones(d * d)).reshape(d, d))
