"""Classical correlation and one-sided quantum discord for a measured qubit.

The minimization over rank-1 projective measurements on the qubit is a
two-stage search over Bloch angles: an exhaustive coarse grid, then
Nelder-Mead refinement from the best few grid cells.  ``discord_oracle``
is a separate brute-force route kept for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .core import (
    DensityMatrix,
    PreconditionError,
    ProjectiveMeasurement,
    UnsupportedDimensionError,
    _normalize_subsystems,
    permute_array,
    ptrace_array,
)
from .entropy import EIG_FLOOR, matrix_entropy

COARSE_GRID = 64
ORACLE_GRID = 512
N_STARTS = 3
SIMPLEX_XATOL = 1e-8

__all__ = [
    "ProjectiveMeasurement", "DiscordResult", "bloch_measurement", "bloch_vector",
    "classical_correlation", "discord_oracle", "discord_one_sided",
]


@dataclass(frozen=True)
class DiscordResult:
    """Outcome of the measurement optimization.

    ``classical_correlation`` is a lower bound on the true value (the search may
    stop short of the global minimum), so ``discord`` is an upper bound.
    """

    discord: float
    classical_correlation: float
    mutual_information: float
    optimal_angles: tuple[float, float]
    optimizer_evaluations: int


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def _wrap_angles(theta: float, phi: float) -> tuple[float, float]:
    # the Bloch direction depends on theta mod 2pi; reflect into [0, pi]
    theta = float(np.mod(theta, 2 * np.pi))
    if theta > np.pi:
        theta = 2 * np.pi - theta
        phi = phi + np.pi
    return theta, float(np.mod(phi, 2 * np.pi))


def bloch_measurement(theta: float, phi: float) -> ProjectiveMeasurement:
    """Projectors onto cos(t/2)|0> + e^{i p} sin(t/2)|1> and its orthogonal complement."""
    theta, phi = _wrap_angles(theta, phi)
    up = bloch_vector(theta, phi)
    down = np.array([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)])
    return ProjectiveMeasurement.from_vectors([up, down])


def _reduce_measured_first(rho: DensityMatrix, measured: int, memory) -> tuple[np.ndarray, int]:
    """Reduce to measured + memory and move the measured qubit to the front."""
    n = rho.n_parts
    (measured,) = _normalize_subsystems(measured, n)
    if memory is None:
        memory = [k for k in range(n) if k != measured]
    mem = _normalize_subsystems(memory, n)
    if not mem:
        raise PreconditionError("memory must name at least one subsystem")
    if measured in mem:
        raise PreconditionError("measured subsystem must not be part of the memory")
    if rho.dims[measured] != 2:
        raise UnsupportedDimensionError(
            f"discord is implemented for a measured qubit only, got dimension {rho.dims[measured]}")
    keep = tuple(sorted((measured, *mem)))
    red = ptrace_array(rho.matrix, rho.dims, keep)
    red_dims = [rho.dims[k] for k in keep]
    site = keep.index(measured)
    order = [site] + [i for i in range(len(keep)) if i != site]
    red = permute_array(red, red_dims, order)
    d_mem = red.shape[0] // 2
    return red, d_mem


def _mutual_information(m: np.ndarray, d_mem: int) -> tuple[float, float]:
    s_a = matrix_entropy(ptrace_array(m, (2, d_mem), [0]))
    s_m = matrix_entropy(ptrace_array(m, (2, d_mem), [1]))
    return s_a + s_m - matrix_entropy(m), s_m


def _xlog2x(lam: np.ndarray) -> np.ndarray:
    safe = np.where(lam > EIG_FLOOR, lam, 1.0)
    return np.where(lam > EIG_FLOOR, lam * np.log2(safe), 0.0)


class _ConditionalEntropy:
    """Vectorized sum_i p_i S(rho_{M|i}) as a function of Bloch angles."""

    def __init__(self, m: np.ndarray, d_mem: int):
        r = m.reshape(2, d_mem, 2, d_mem).transpose(0, 2, 1, 3)
        self.blocks = r
        self.rho_mem = r[0, 0] + r[1, 1]
        self.calls = 0

    def __call__(self, theta, phi) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        self.calls += theta.size
        c = np.cos(theta / 2)
        s = np.sin(theta / 2)
        e = np.exp(1j * phi)
        r = self.blocks
        # <psi|rho|psi>_A with psi = (c, e s)
        first = (
            (c * c)[:, None, None] * r[0, 0]
            + (s * s)[:, None, None] * r[1, 1]
            + (c * s * e)[:, None, None] * r[0, 1]
            + (c * s * e.conj())[:, None, None] * r[1, 0]
        )
        second = self.rho_mem[None] - first
        total = np.zeros(theta.shape)
        for sigma in (first, second):
            lam = np.linalg.eigvalsh(sigma)
            p = lam.sum(axis=-1)
            total += -_xlog2x(lam).sum(axis=-1) + _xlog2x(p)
        return total


def _coarse_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    theta = np.linspace(0.0, np.pi, n)
    phi = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    return theta, phi


def classical_correlation(rho: DensityMatrix, measured: int = 0, memory=None,
                          grid: int = COARSE_GRID, n_starts: int = N_STARTS) -> DiscordResult:
    """J_A and D_A for a projective measurement on the qubit ``measured``.

    ``memory`` defaults to every other subsystem.
    """
    m, d_mem = _reduce_measured_first(rho, measured, memory)
    mi, s_mem = _mutual_information(m, d_mem)
    f = _ConditionalEntropy(m, d_mem)

    thetas, phis = _coarse_grid(grid)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    vals = f(tt, pp)
    # ascending value, ties broken by lower theta then lower phi
    order = np.lexsort((pp, tt, vals))
    best_val = float(vals[order[0]])
    best_x = (float(tt[order[0]]), float(pp[order[0]]))

    step_t = thetas[1] - thetas[0]
    step_p = phis[1] - phis[0]
    objective = lambda x: float(f(x[0], x[1])[0])  # noqa: E731
    for idx in order[:n_starts]:
        x0 = np.array([tt[idx], pp[idx]])
        simplex = np.array([x0, x0 + [step_t, 0.0], x0 + [0.0, step_p]])
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": SIMPLEX_XATOL,
                                "fatol": 1e-15, "maxiter": 4000})
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = (float(res.x[0]), float(res.x[1]))

    j = s_mem - best_val
    return DiscordResult(
        discord=mi - j,
        classical_correlation=j,
        mutual_information=mi,
        optimal_angles=_wrap_angles(*best_x),
        optimizer_evaluations=f.calls,
    )


def _oracle_conditional_entropy(m: np.ndarray, d_mem: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Explicit (P x I) rho (P x I) route, independent of the block contraction above."""
    d = 2 * d_mem
    eye_m = np.eye(d_mem)
    up = np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)
    proj_up = up[:, :, None] * up[:, None, :].conj()
    out = np.zeros(theta.shape)
    for proj in (proj_up, np.eye(2)[None] - proj_up):
        big = np.einsum("nab,ij->naibj", proj, eye_m).reshape(-1, d, d)
        post = big @ m[None] @ big
        cond = ptrace_array(post, (2, d_mem), [1])
        p = np.real(np.trace(cond, axis1=-2, axis2=-1))
        ok = p > 1e-12
        normed = cond[ok] / p[ok, None, None]
        lam = np.clip(np.linalg.eigvalsh(normed), 0.0, None)
        ent = np.zeros(theta.shape)
        ent[ok] = -_xlog2x(lam).sum(axis=-1)
        out += np.where(ok, p, 0.0) * ent
    return out


def discord_oracle(rho: DensityMatrix, measured: int = 0, memory=None,
                   grid: int = ORACLE_GRID, chunk: int = 16384) -> float:
    """Discord from an exhaustive ``grid x grid`` Bloch-angle search with no refinement.

    Since the grid minimum can only overshoot the true minimum, the value is an
    upper bound on the discord.
    """
    m, d_mem = _reduce_measured_first(rho, measured, memory)
    mi, s_mem = _mutual_information(m, d_mem)
    thetas, phis = _coarse_grid(grid)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    best = np.inf
    for start in range(0, tt.size, chunk):
        vals = _oracle_conditional_entropy(m, d_mem, tt[start:start + chunk], pp[start:start + chunk])
        best = min(best, float(vals.min()))
    return mi - (s_mem - best)


def discord_one_sided(rho: DensityMatrix, memory=None, measured: int = 0) -> float:
    """D_A(rho) with the measurement on subsystem ``measured`` (A by default)."""
    return classical_correlation(rho, measured=measured, memory=memory).discord
