"""Shannon and von Neumann entropies, mutual information and the Holevo quantity.

Every quantity is in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DensityMatrix,
    Observable,
    PreconditionError,
    ProjectiveMeasurement,
    _normalize_subsystems,
    embed_operator,
    partial_trace,
    ptrace_array,
)

EIG_FLOOR = 1e-12
ZERO_PROB = 1e-12


@dataclass(frozen=True)
class OutcomeDistribution:
    probabilities: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.probabilities)
        if any(x < -1e-12 or x > 1 + 1e-12 for x in p):
            raise PreconditionError(f"probabilities must lie in [0, 1], got {p}")
        if abs(sum(p) - 1.0) > 1e-9:
            raise PreconditionError(f"probabilities sum to {sum(p)!r}, expected 1")
        object.__setattr__(self, "probabilities", p)

    def __len__(self):
        return len(self.probabilities)

    def __getitem__(self, i):
        return self.probabilities[i]


def entropy_of_spectrum(eigs) -> float:
    """``-sum(l log2 l)`` over eigenvalues above EIG_FLOOR."""
    lam = np.asarray(eigs, dtype=float)
    lam = lam[lam > EIG_FLOOR]
    return float(-np.sum(lam * np.log2(lam)))


def matrix_entropy(m: np.ndarray) -> float:
    return entropy_of_spectrum(np.linalg.eigvalsh(m))


def shannon_entropy(p) -> float:
    """Shannon entropy of a discrete outcome distribution, 0 log 0 taken as 0."""
    if not isinstance(p, OutcomeDistribution):
        p = OutcomeDistribution(tuple(np.ravel(p)))
    arr = np.clip(np.array(p.probabilities), 0.0, None)
    arr = arr[arr > 0]
    return float(-np.sum(arr * np.log2(arr))) + 0.0


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return entropy_of_spectrum(rho.eigenvalues())


def subsystem_entropy(rho: DensityMatrix, parts) -> float:
    """Entropy of the reduced state on ``parts``; an empty set has entropy 0."""
    parts = _normalize_subsystems(parts, rho.n_parts)
    if not parts:
        return 0.0
    return matrix_entropy(ptrace_array(rho.matrix, rho.dims, parts))


def _disjoint(rho: DensityMatrix, s1, s2):
    s1 = _normalize_subsystems(s1, rho.n_parts)
    s2 = _normalize_subsystems(s2, rho.n_parts)
    if set(s1) & set(s2):
        raise PreconditionError(f"subsystem sets {s1} and {s2} overlap")
    return s1, s2


def conditional_entropy(rho: DensityMatrix, target, condition) -> float:
    """S(target | condition) = S(target + condition) - S(condition)."""
    t, c = _disjoint(rho, target, condition)
    if not t:
        raise PreconditionError("target set is empty")
    return subsystem_entropy(rho, t + c) - subsystem_entropy(rho, c)


def mutual_information(rho: DensityMatrix, part1, part2) -> float:
    p1, p2 = _disjoint(rho, part1, part2)
    return (subsystem_entropy(rho, p1) + subsystem_entropy(rho, p2)
            - subsystem_entropy(rho, p1 + p2))


def _check_site(rho: DensityMatrix, dim: int, measured: int) -> int:
    (measured,) = _normalize_subsystems(measured, rho.n_parts)
    if rho.dims[measured] != dim:
        raise PreconditionError(
            f"operator dimension {dim} does not match subsystem {measured} "
            f"of dimension {rho.dims[measured]}")
    return measured


def post_measurement_state(rho: DensityMatrix, obs: Observable, measured: int = 0) -> DensityMatrix:
    """Dephase subsystem ``measured`` in the eigenbasis of ``obs``.

    The result lives on the same subsystems as ``rho``; the measured register
    is classical afterwards.
    """
    measured = _check_site(rho, obs.dim, measured)
    out = np.zeros_like(rho.matrix)
    for p in obs.measurement().projectors:
        big = embed_operator(p, rho.dims, measured)
        out += big @ rho.matrix @ big
    return DensityMatrix((out + out.conj().T) / 2, rho.dims)


def measurement_distribution(rho: DensityMatrix, meas: ProjectiveMeasurement, measured: int = 0):
    """Outcome probabilities and the normalized states left on the other subsystems.

    Returns ``(OutcomeDistribution, conditionals)`` where ``conditionals[i]`` is
    ``None`` for outcomes with probability below ZERO_PROB.
    """
    if isinstance(meas, Observable):
        meas = meas.measurement()
    measured = _check_site(rho, meas.dim, measured)
    rest = [k for k in range(rho.n_parts) if k != measured]
    if not rest:
        raise PreconditionError("state has no subsystem left after the measurement")
    rest_dims = tuple(rho.dims[k] for k in rest)
    probs, conds = [], []
    for p in meas.projectors:
        big = embed_operator(p, rho.dims, measured)
        block = ptrace_array(big @ rho.matrix @ big, rho.dims, rest)
        pi = float(np.trace(block).real)
        probs.append(max(pi, 0.0))
        if pi < ZERO_PROB:
            conds.append(None)
        else:
            block = block / pi
            conds.append(DensityMatrix((block + block.conj().T) / 2, rest_dims))
    total = sum(probs)
    return OutcomeDistribution(tuple(x / total for x in probs)), conds


def holevo_quantity(rho: DensityMatrix, obs, measured: int = 0, memory=None) -> float:
    """I(P:M) = S(rho_M) - sum_i p_i S(rho_{M|i}) for a projective measurement on ``measured``."""
    if memory is None:
        memory = [k for k in range(rho.n_parts) if k != measured]
    mem = _normalize_subsystems(memory, rho.n_parts)
    if measured in mem:
        raise PreconditionError("measured subsystem must not be part of the memory")
    keep = tuple(sorted((measured, *mem)))
    red = partial_trace(rho, keep)
    site = keep.index(measured)
    dist, conds = measurement_distribution(red, obs, site)
    s_mem = matrix_entropy(ptrace_array(red.matrix, red.dims, [k for k in range(red.n_parts) if k != site]))
    avg = sum(p * von_neumann_entropy(c) for p, c in zip(dist.probabilities, conds) if c is not None)
    return s_mem - avg


def measured_conditional_entropy(rho: DensityMatrix, obs: Observable, measured: int, memory) -> float:
    """S(P|M): conditional entropy of the outcome register given memory ``M``."""
    mem = _normalize_subsystems(memory, rho.n_parts)
    if measured in mem:
        raise PreconditionError("measured subsystem must not be part of the memory")
    post = post_measurement_state(rho, obs, measured)
    return conditional_entropy(post, (measured,), mem)


def binary_entropy(p: float) -> float:
    return shannon_entropy((p, 1.0 - p))


__all__ = [
    "OutcomeDistribution", "shannon_entropy", "von_neumann_entropy", "subsystem_entropy",
    "conditional_entropy", "mutual_information", "post_measurement_state",
    "measurement_distribution", "holevo_quantity", "measured_conditional_entropy",
    "binary_entropy", "entropy_of_spectrum", "matrix_entropy",
]

