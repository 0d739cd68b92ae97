"""Dense complex linear algebra for registers of N qudits of local dimension d.

Index convention is big-endian: qudit 1 is the most significant digit, so the
amplitude index of the product basis state |v_1, ..., v_N> is
sum_k v_k * d**(N-k).  Every other module adopts this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ATOL_ALGEBRA = 1e-12
ATOL_UNITARY = 1e-10
ATOL_EIG = 1e-10


@dataclass(frozen=True)
class QuditRegister:
    """A register of ``n_qudits`` systems, each of local dimension ``local_dim``."""

    n_qudits: int
    local_dim: int

    def __post_init__(self):
        if self.n_qudits < 1:
            raise ValueError(f"n_qudits must be positive, got {self.n_qudits}")
        if self.local_dim < 2:
            raise ValueError(f"local_dim must be >= 2, got {self.local_dim}")

    @property
    def total_dim(self) -> int:
        return self.local_dim ** self.n_qudits

    def index_of(self, digits: Sequence[int]) -> int:
        """Amplitude index of the basis state with the given digits (qudit 1 first)."""
        if len(digits) != self.n_qudits:
            raise ValueError("digit count does not match register size")
        idx = 0
        for v in digits:
            if not 0 <= v < self.local_dim:
                raise ValueError(f"digit {v} out of range for d={self.local_dim}")
            idx = idx * self.local_dim + v
        return idx

    def digits_of(self, index: int) -> tuple[int, ...]:
        """Digits (v_1, ..., v_N) of an amplitude index, qudit 1 most significant."""
        if not 0 <= index < self.total_dim:
            raise ValueError(f"index {index} out of range")
        digits = []
        for _ in range(self.n_qudits):
            digits.append(index % self.local_dim)
            index //= self.local_dim
        return tuple(reversed(digits))

    def digit_table(self, qudit: int) -> np.ndarray:
        """Vector of length total_dim holding digit v_qudit of every basis index."""
        if not 1 <= qudit <= self.n_qudits:
            raise ValueError(f"qudit index {qudit} out of range")
        d, n = self.local_dim, self.n_qudits
        idx = np.arange(self.total_dim)
        return (idx // d ** (n - qudit)) % d


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over an N-qudit register."""

    register: QuditRegister
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.register.total_dim,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected "
                f"({self.register.total_dim},)"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def density(self) -> DensityOperator:
        return DensityOperator(self.register, np.outer(self.amplitudes, self.amplitudes.conj()))

    def fidelity(self, other: PureState) -> float:
        return abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix over a qudit register."""

    register: QuditRegister
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        dim = self.register.total_dim
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix has shape {mat.shape}, expected ({dim}, {dim})")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL_ALGEBRA:
            raise ValueError("matrix is not Hermitian within 1e-12")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > ATOL_ALGEBRA:
            raise ValueError(f"trace is {tr}, expected 1")
        if np.min(np.linalg.eigvalsh(mat)) < -ATOL_EIG:
            raise ValueError("matrix has an eigenvalue below -1e-10")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True, eq=False)
class Operator:
    """A complex matrix acting on state vectors, optionally flagged as unitary."""

    in_dim: int
    out_dim: int
    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.out_dim, self.in_dim):
            raise ValueError(f"matrix has shape {mat.shape}, expected ({self.out_dim}, {self.in_dim})")
        if self.unitary:
            if self.in_dim != self.out_dim:
                raise ValueError("unitary operator must be square")
            err = np.max(np.abs(mat.conj().T @ mat - np.eye(self.in_dim)))
            if err > ATOL_UNITARY:
                raise ValueError(f"operator flagged unitary but |U^dag U - I| = {err}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def dagger(self) -> Operator:
        return Operator(self.out_dim, self.in_dim, self.matrix.conj().T, unitary=self.unitary)


def tensor_product(a, b):
    """Kronecker product of two states or two operators (qudit-1-most-significant)."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        if a.register.local_dim != b.register.local_dim:
            raise ValueError("tensor_product requires matching local dimensions")
        reg = QuditRegister(a.register.n_qudits + b.register.n_qudits, a.register.local_dim)
        return PureState(reg, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(
            a.in_dim * b.in_dim,
            a.out_dim * b.out_dim,
            np.kron(a.matrix, b.matrix),
            unitary=a.unitary and b.unitary,
        )
    raise TypeError("tensor_product expects two PureStates or two Operators")


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Reduced density operator on the 1-indexed qudits in ``keep``."""
    keep = sorted(set(keep))
    n, d = rho.register.n_qudits, rho.register.local_dim
    if not keep:
        raise ValueError("keep set must be non-empty; use trace() for the scalar")
    if any(not 1 <= q <= n for q in keep):
        raise ValueError(f"keep set {keep} has out-of-range qudit indices")
    tensor = rho.matrix.reshape([d] * (2 * n))
    # Row axis of qudit q is q-1, column axis is n+q-1; traced qudits share a label.
    row_labels = {}
    col_labels = {}
    next_label = 0
    for q in range(1, n + 1):
        if q in keep:
            row_labels[q] = next_label
            col_labels[q] = next_label + 1
            next_label += 2
        else:
            row_labels[q] = col_labels[q] = next_label
            next_label += 1
    subscripts = [row_labels[q] for q in range(1, n + 1)] + [col_labels[q] for q in range(1, n + 1)]
    out = [row_labels[q] for q in keep] + [col_labels[q] for q in keep]
    reduced = np.einsum(tensor, subscripts, out)
    dim_keep = d ** len(keep)
    return DensityOperator(QuditRegister(len(keep), d), reduced.reshape(dim_keep, dim_keep))


def apply(u: Operator, psi: PureState) -> PureState:
    """Apply a unitary-flagged operator to a state."""
    if not u.unitary:
        raise ValueError("apply requires a unitary-flagged operator")
    if u.in_dim != psi.register.total_dim:
        raise ValueError(f"operator dimension {u.in_dim} does not match state dimension {psi.register.total_dim}")
    return PureState(psi.register, u.matrix @ psi.amplitudes)


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector: normalized complex Gaussian components."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_state(register: QuditRegister, rng: np.random.Generator) -> PureState:
    """Haar-distributed pure state on the given register."""
    return PureState(register, haar_vector(register.total_dim, rng))


def permute_qudits(obj, order: Sequence[int]):
    """Reorder the tensor factors of a state or density operator.

    ``order`` lists the original 1-indexed qudits in their new positions, e.g.
    order=(2, 1, 3) makes the old qudit 2 the new qudit 1.
    """
    reg = obj.register
    n, d = reg.n_qudits, reg.local_dim
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"order {order} is not a permutation of 1..{n}")
    axes = [q - 1 for q in order]
    if isinstance(obj, PureState):
        amps = obj.amplitudes.reshape([d] * n).transpose(axes).reshape(-1)
        return PureState(reg, amps)
    if isinstance(obj, DensityOperator):
        full = axes + [n + a for a in axes]
        mat = obj.matrix.reshape([d] * (2 * n)).transpose(full).reshape(d ** n, d ** n)
        return DensityOperator(reg, mat)
    raise TypeError("permute_qudits expects a PureState or DensityOperator")


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """Amplitude-wise equality after removing one global phase.

    The phase is fixed from the largest-magnitude amplitude of ``a``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    k = int(np.argmax(np.abs(a)))
    if abs(b[k]) < 1e-14:
        return False
    phase = a[k] / b[k]
    phase /= abs(phase)
    return bool(np.max(np.abs(a - phase * b)) < tol)
