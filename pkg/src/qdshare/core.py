"""Dense density-matrix types and the linear algebra they need.

Subsystem 0 is ``A`` by convention, and basis kets are ordered with
subsystem 0 as the most significant index, so ``|q_A q_B q_C>`` maps to
row ``4*q_A + 2*q_B + q_C`` for three qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class QuantumError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(QuantumError, ValueError):
    """An input violates the documented precondition of an operation."""


class InvalidSubsystemError(PreconditionError):
    """A subsystem index is out of range or a subsystem set is malformed."""


class UnsupportedDimensionError(QuantumError, ValueError):
    """The operation is only implemented for some subsystem dimensions."""


class UnsupportedObservableError(QuantumError, ValueError):
    """The observable has a degenerate spectrum."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise PreconditionError(f"subsystem dimensions must all be >= 2, got {dims}")
    if int(np.prod(dims)) != size:
        raise PreconditionError(f"dims {dims} do not multiply to {size}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated mixed state over an ordered list of subsystems."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PreconditionError(f"density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "dims", _check_dims(self.dims, m.shape[0]))
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL:
            raise PreconditionError(f"matrix is not Hermitian (deviation {herm_err:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise PreconditionError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise PreconditionError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_parts(self) -> int:
        return len(self.dims)

    def eigenvalues(self) -> np.ndarray:
        """Spectrum in ascending order with values in [-PSD_TOL, 0) clamped to 0."""
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, None)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "dims", _check_dims(self.dims, v.size))
        norm2 = np.vdot(v, v).real
        if abs(norm2 - 1.0) > NORM_TOL:
            raise PreconditionError(f"state vector has squared norm {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(v))

    def __repr__(self):
        return f"PureState(dims={self.dims})"


def project_pure(psi: PureState) -> DensityMatrix:
    """Return the rank-1 density matrix ``|psi><psi|``."""
    if not isinstance(psi, PureState):
        psi = PureState(np.asarray(psi), (2,) * int(np.log2(np.size(psi))))
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), psi.dims)


def tensor(a, b, *rest) -> np.ndarray:
    """Kronecker product of two or more square matrices, left to right."""
    mats = [np.asarray(m) for m in (a, b, *rest)]
    for m in mats:
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PreconditionError(f"tensor factors must be square, got shape {m.shape}")
    return reduce(np.kron, mats)


def tensor_states(*states: DensityMatrix) -> DensityMatrix:
    """Product state of several density matrices, dims concatenated."""
    dims = tuple(d for s in states for d in s.dims)
    mats = [s.matrix for s in states]
    return DensityMatrix(reduce(np.kron, mats), dims)


def _normalize_subsystems(keep: Iterable[int] | int, n: int) -> tuple[int, ...]:
    if isinstance(keep, (int, np.integer)):
        keep = (keep,)
    keep = tuple(int(k) for k in keep)
    for k in keep:
        if not 0 <= k < n:
            raise InvalidSubsystemError(f"subsystem index {k} out of range for {n} subsystems")
    if len(set(keep)) != len(keep):
        raise InvalidSubsystemError(f"repeated subsystem index in {keep}")
    return tuple(sorted(keep))


def ptrace_array(matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace on a raw array; ``keep`` must be sorted and valid.

    Works on stacked inputs of shape ``(..., D, D)`` as well.
    """
    n = len(dims)
    keep = list(keep)
    if len(keep) == n:
        return matrix
    lead = matrix.shape[:-2]
    t = matrix.reshape(*lead, *dims, *dims)
    nl = len(lead)
    # trace out the discarded axes one at a time, highest index first
    for ax in sorted(set(range(n)) - set(keep), reverse=True):
        m = t.ndim - nl
        half = m // 2
        t = np.trace(t, axis1=nl + ax, axis2=nl + half + ax)
    dk = int(np.prod([dims[k] for k in keep]))
    return t.reshape(*lead, dk, dk)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the subsystems in ``keep``, in their original order."""
    keep = _normalize_subsystems(keep, rho.n_parts)
    if not keep:
        raise InvalidSubsystemError("keep must name at least one subsystem")
    red = ptrace_array(rho.matrix, rho.dims, keep)
    return DensityMatrix(red, tuple(rho.dims[k] for k in keep))


def permute_array(matrix: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder subsystems so that new subsystem ``i`` is old subsystem ``order[i]``."""
    n = len(dims)
    t = matrix.reshape(*dims, *dims)
    t = t.transpose(*order, *[n + o for o in order])
    d = matrix.shape[0]
    return t.reshape(d, d)


def eig_hermitian(m, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise PreconditionError(f"matrix is not Hermitian (deviation {dev:.3g})")
    return np.linalg.eigh((m + m.conj().T) / 2)


def embed_operator(op: np.ndarray, dims: Sequence[int], site: int) -> np.ndarray:
    """Place a single-subsystem operator at ``site`` with identities elsewhere."""
    mats = [op if k == site else np.eye(d) for k, d in enumerate(dims)]
    return reduce(np.kron, mats)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian observable with its spectral decomposition cached."""

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(init=False)
    eigenvectors: np.ndarray = field(init=False)
    name: str = ""

    def __post_init__(self):
        vals, vecs = eig_hermitian(self.matrix, tol=HERMITIAN_TOL)
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", _frozen(vecs))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_degenerate(self) -> bool:
        return bool(np.any(np.diff(self.eigenvalues) < 1e-9))

    def basis(self) -> list[np.ndarray]:
        return [self.eigenvectors[:, i] for i in range(self.dim)]

    def measurement(self) -> ProjectiveMeasurement:
        """Rank-1 projective measurement onto the eigenbasis."""
        return ProjectiveMeasurement.from_vectors(self.basis())

    def __repr__(self):
        return f"Observable({self.name or self.dim})"


PAULI_X = Observable(SIGMA_X, name="x")
PAULI_Y = Observable(SIGMA_Y, name="y")
PAULI_Z = Observable(SIGMA_Z, name="z")

_NAMED = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z,
          "sigma1": PAULI_X, "sigma2": PAULI_Y, "sigma3": PAULI_Z}


def named_observable(name: str) -> Observable:
    """Look up a Pauli observable by name (``x``, ``y``, ``z`` or ``sigma1..3``)."""
    try:
        return _NAMED[name.strip().lower()]
    except KeyError:
        raise PreconditionError(f"unknown observable {name!r}; use one of x, y, z") from None


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete set of orthogonal rank-1 projectors on one subsystem."""

    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        ps = tuple(_frozen(p) for p in self.projectors)
        if not ps:
            raise PreconditionError("measurement needs at least one projector")
        d = ps[0].shape[0]
        for p in ps:
            if p.shape != (d, d):
                raise PreconditionError("projectors must share one square shape")
            if np.max(np.abs(p @ p - p)) > 1e-10 or abs(np.trace(p).real - 1) > 1e-10:
                raise PreconditionError("each projector must be rank-1 and idempotent")
        if np.max(np.abs(sum(ps) - np.eye(d))) > 1e-10:
            raise PreconditionError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", ps)

    @classmethod
    def from_vectors(cls, vectors) -> ProjectiveMeasurement:
        vs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
        return cls(tuple(np.outer(v, v.conj()) for v in vs))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.projectors)
