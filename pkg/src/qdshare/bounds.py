"""Entropic uncertainty bounds with quantum memory and discord shareability bounds.

Tripartite quantities measure the observable ``x`` on A with memory B and
``z`` on A with memory C (subsystems 0, 1, 2).  Multipartite quantities take
one observable per memory subsystem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    PAULI_X,
    PAULI_Z,
    DensityMatrix,
    Observable,
    PreconditionError,
    UnsupportedDimensionError,
    UnsupportedObservableError,
    partial_trace,
)
from .correlations import classical_correlation
from .entropy import (
    conditional_entropy,
    holevo_quantity,
    measured_conditional_entropy,
    mutual_information,
    subsystem_entropy,
)

A, B, C = 0, 1, 2
MONOGAMY_TOL = 1e-8
ENTROPY_TOL = 1e-9
DISCORD_TOL = 1e-6


def _check_observable(o: Observable):
    if o.is_degenerate:
        raise UnsupportedObservableError(f"{o!r} has a degenerate spectrum")


def _overlaps(u: Observable, v: Observable) -> np.ndarray:
    """Matrix of |<u_i|v_j>|^2 over the two eigenbases."""
    return np.abs(u.eigenvectors.conj().T @ v.eigenvectors) ** 2


def incompatibility_c(x: Observable, z: Observable) -> float:
    """Largest squared overlap between eigenvectors of ``x`` and ``z``."""
    if x.dim != z.dim:
        raise PreconditionError(f"observables act on different dimensions ({x.dim}, {z.dim})")
    _check_observable(x)
    _check_observable(z)
    return float(np.max(_overlaps(x, z)))


def q_mu(x: Observable, z: Observable) -> float:
    return float(-np.log2(incompatibility_c(x, z)))


def multipartite_b(observables: Sequence[Observable]) -> float:
    """Incompatibility constant of N observables, by explicit enumeration of index tuples.

    The outer maximum runs over the eigenvector index of the last observable,
    the sum over the indices of observables 2 .. N-1, and the inner maximum
    over the index of the first observable.  For two observables this is ``c``.
    """
    obs = list(observables)
    if len(obs) < 2:
        raise PreconditionError("at least two observables are required")
    d = obs[0].dim
    for o in obs:
        if o.dim != d:
            raise PreconditionError("observables must share one dimension")
        _check_observable(o)
    n = len(obs)
    ov = [_overlaps(obs[m], obs[m + 1]) for m in range(n - 1)]
    best = 0.0
    for i_last in range(d):
        if n == 2:
            total = max(ov[0][i1, i_last] for i1 in range(d))
        else:
            total = 0.0
            for mid in itertools.product(range(d), repeat=n - 2):
                idx = (*mid, i_last)  # i_2 .. i_N
                term = max(ov[0][i1, idx[0]] for i1 in range(d))
                for m in range(1, n - 1):
                    term *= ov[m][idx[m - 1], idx[m]]
                total += term
        best = max(best, total)
    return float(best)


def four_partite_b_prime(observables: Sequence[Observable], reading: str = "printed") -> float:
    """b' for three observables.

    ``reading="printed"`` weights each term by |<u3_j|u3_k>|^2; ``"chained"``
    uses |<u2_j|u3_k>|^2 instead, which agrees with ``multipartite_b``.
    """
    m1, m2, m3 = observables
    for o in (m1, m2, m3):
        _check_observable(o)
    first = _overlaps(m1, m2).max(axis=0)  # max_i over |<u1_i|u2_j>|^2
    if reading == "printed":
        link = _overlaps(m3, m3)
    elif reading == "chained":
        link = _overlaps(m2, m3)
    else:
        raise PreconditionError(f"unknown b' reading {reading!r}")
    return float(np.max(first @ link))


def _check_tripartite(rho: DensityMatrix, *obs: Observable):
    if rho.n_parts != 3:
        raise PreconditionError(f"expected a tripartite state, got {rho.n_parts} subsystems")
    if rho.dims[A] != 2:
        raise UnsupportedDimensionError("subsystem A must be a qubit")
    for o in obs:
        if o.dim != rho.dims[A]:
            raise PreconditionError(f"{o!r} does not act on subsystem A")


def _s_meas(rho: DensityMatrix, obs: Observable, memory: int) -> float:
    pair = partial_trace(rho, (A, memory))
    return measured_conditional_entropy(pair, obs, 0, (1,))


def tripartite_lhs(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z) -> float:
    """S(X|B) + S(Z|C)."""
    _check_tripartite(rho, x, z)
    return _s_meas(rho, x, B) + _s_meas(rho, z, C)


def delta_eq6(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z) -> float:
    """(I(A:B) + I(A:C))/2 - (I(X:B) + I(Z:C))."""
    _check_tripartite(rho, x, z)
    mi = mutual_information(rho, A, B) + mutual_information(rho, A, C)
    hol = holevo_quantity(rho, x, A, (B,)) + holevo_quantity(rho, z, A, (C,))
    return 0.5 * mi - hol


def eq6_rhs(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z) -> float:
    s_cond = conditional_entropy(rho, A, B) + conditional_entropy(rho, A, C)
    return q_mu(x, z) + 0.5 * s_cond + max(0.0, delta_eq6(rho, x, z))


class Theorem1Bounds(NamedTuple):
    rhs_eq15: float
    rhs_eq16: float
    delta_p3: float
    delta_pp3: float


@dataclass(frozen=True)
class BoundReport:
    """Every scalar entering the tripartite uncertainty and shareability bounds."""

    lhs_uncertainty: float
    q_mu: float
    c: float
    delta: float
    delta_p3: float
    delta_pp3: float
    delta1: float
    delta2: float
    delta_T: float
    s_a: float
    discord_sum: float
    bound_new: float
    bound_hufan: float
    monogamy_condition_gap: float
    d_ab: float
    d_ac: float
    j_ab: float
    j_ac: float
    rhs_eq6: float
    rhs_eq15: float
    rhs_eq16: float
    applicable_monogamy: bool
    bound_monogamy: float | None

    @property
    def slack(self) -> float:
        """bound_new - discord_sum; nonnegative when the shareability bound holds."""
        return self.bound_new - self.discord_sum

    @property
    def saturated(self) -> bool:
        return abs(self.lhs_uncertainty - self.q_mu) < ENTROPY_TOL

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class _Pieces:
    c: float
    q: float
    s_xb: float
    s_zc: float
    s_zb: float
    s_a_b: float
    s_a_c: float
    i_ab: float
    i_ac: float
    s_a: float
    s_a_bc: float


def _pieces(rho: DensityMatrix, x: Observable, z: Observable) -> _Pieces:
    _check_tripartite(rho, x, z)
    c = incompatibility_c(x, z)
    return _Pieces(
        c=c,
        q=float(-np.log2(c)),
        s_xb=_s_meas(rho, x, B),
        s_zc=_s_meas(rho, z, C),
        s_zb=_s_meas(rho, z, B),
        s_a_b=conditional_entropy(rho, A, B),
        s_a_c=conditional_entropy(rho, A, C),
        i_ab=mutual_information(rho, A, B),
        i_ac=mutual_information(rho, A, C),
        s_a=subsystem_entropy(rho, A),
        s_a_bc=conditional_entropy(rho, A, (B, C)),
    )


def _delta_t(p: _Pieces) -> float:
    # both memory terms on B, as in the bipartite construction
    return p.s_xb + p.s_zb - p.q - p.s_a_b


def hufan_bound(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z) -> float:
    """S(A) + delta_T."""
    p = _pieces(rho, x, z)
    return p.s_a + _delta_t(p)


def theorem1_bounds(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z) -> Theorem1Bounds:
    r = theorem2_check(rho, x, z, monogamy=False)
    return Theorem1Bounds(r.rhs_eq15, r.rhs_eq16, r.delta_p3, r.delta_pp3)


def theorem2_check(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z,
                   monogamy: bool = True) -> BoundReport:
    """Evaluate every tripartite bound for ``rho`` with ``x`` (memory B) and ``z`` (memory C).

    With ``monogamy=True`` the discord D_A(rho_{A:BC}) is also optimized when
    the state satisfies S(A) = -S(A|BC), to fill ``bound_monogamy``.
    """
    p = _pieces(rho, x, z)
    ab = classical_correlation(rho, A, (B,))
    ac = classical_correlation(rho, A, (C,))

    lhs = p.s_xb + p.s_zc
    half_cond = 0.5 * (p.s_a_b + p.s_a_c)
    half_mi = 0.5 * (p.i_ab + p.i_ac)
    holevo = holevo_quantity(rho, x, A, (B,)) + holevo_quantity(rho, z, A, (C,))
    delta = half_mi - holevo
    d_sum = ab.discord + ac.discord
    delta_p3 = 0.5 * (d_sum - ab.classical_correlation - ac.classical_correlation)
    delta_pp3 = d_sum - half_mi
    delta1 = lhs - p.q - half_cond
    delta2 = -half_cond
    delta_t = _delta_t(p)
    gap = p.s_a + p.s_a_bc
    applicable = abs(gap) < MONOGAMY_TOL
    bound_mono = None
    if monogamy and applicable:
        bound_mono = classical_correlation(rho, A, (B, C)).discord + delta1 + delta2

    return BoundReport(
        lhs_uncertainty=lhs,
        q_mu=p.q,
        c=p.c,
        delta=delta,
        delta_p3=delta_p3,
        delta_pp3=delta_pp3,
        delta1=delta1,
        delta2=delta2,
        delta_T=delta_t,
        s_a=p.s_a,
        discord_sum=d_sum,
        bound_new=delta1 + delta2 + p.s_a,
        bound_hufan=p.s_a + delta_t,
        monogamy_condition_gap=gap,
        d_ab=ab.discord,
        d_ac=ac.discord,
        j_ab=ab.classical_correlation,
        j_ac=ac.classical_correlation,
        rhs_eq6=p.q + half_cond + max(0.0, delta),
        rhs_eq15=p.q + half_cond + max(0.0, delta_p3),
        rhs_eq16=p.q + half_cond + max(0.0, delta_pp3),
        applicable_monogamy=applicable,
        bound_monogamy=bound_mono,
    )


def monogamy_form(rho: DensityMatrix, x: Observable = PAULI_X, z: Observable = PAULI_Z) -> tuple[bool, float | None]:
    """(applicable, D_A(rho_{A:BC}) + delta1 + delta2); the bound is None when not applicable."""
    r = theorem2_check(rho, x, z, monogamy=True)
    return r.applicable_monogamy, r.bound_monogamy


@dataclass(frozen=True)
class MultipartiteBoundReport:
    n: int
    b: float
    lhs: float
    delta_N: float
    delta_pN: float
    delta1_N: float
    delta2_N: float
    s_a: float
    discord_sum: float
    discords: tuple[float, ...]
    rhs_eq9: float
    rhs_eq19: float
    b_prime_printed: float | None = None
    b_prime_chained: float | None = None

    @property
    def slack(self) -> float:
        return self.delta1_N + self.delta2_N + self.s_a - self.discord_sum

    @property
    def eq19_slack(self) -> float:
        return self.lhs - self.rhs_eq19

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _check_assignments(rho: DensityMatrix, observables, assignments) -> list[int]:
    n = rho.n_parts - 1
    if len(observables) != n:
        raise PreconditionError(f"{rho.n_parts}-partite state needs {n} observables, got {len(observables)}")
    if assignments is None:
        assignments = list(range(1, n + 1))
    assignments = [int(a) for a in assignments]
    if sorted(assignments) != list(range(1, n + 1)):
        raise PreconditionError(f"assignments {assignments} must map the observables one-to-one onto memories 1..{n}")
    if rho.dims[A] != 2:
        raise UnsupportedDimensionError("subsystem A must be a qubit")
    for o in observables:
        if o.dim != rho.dims[A]:
            raise PreconditionError(f"{o!r} does not act on subsystem A")
    return assignments


def theorem3_check(rho: DensityMatrix, observables: Sequence[Observable], assignments=None) -> MultipartiteBoundReport:
    """Multipartite shareability bound for an (N+1)-partite state with A = subsystem 0.

    ``assignments[i]`` is the memory subsystem that guesses the outcome of
    ``observables[i]``; by default observable i goes to subsystem i + 1.
    """
    observables = list(observables)
    mem = _check_assignments(rho, observables, assignments)
    n = len(observables)
    b = multipartite_b(observables)
    s_m = [_s_meas(rho, o, x) for o, x in zip(observables, mem)]
    s_ax = [conditional_entropy(rho, A, x) for x in mem]
    i_ax = [mutual_information(rho, A, x) for x in mem]
    i_mx = [holevo_quantity(rho, o, A, (x,)) for o, x in zip(observables, mem)]
    discords = tuple(classical_correlation(rho, A, (x,)).discord for x in mem)

    lhs = sum(s_m)
    frac = (n - 1) / n
    delta_n = frac * sum(i_ax) - sum(i_mx)
    delta_pn = sum(discords) - sum(i_ax) / n
    log_b = float(np.log2(b))
    bp = bc = None
    if n == 3:
        bp = four_partite_b_prime(observables, "printed")
        bc = four_partite_b_prime(observables, "chained")
    return MultipartiteBoundReport(
        n=n,
        b=b,
        lhs=lhs,
        delta_N=delta_n,
        delta_pN=delta_pn,
        delta1_N=lhs + log_b - frac * sum(s_ax),
        delta2_N=-sum(s_ax) / n,
        s_a=subsystem_entropy(rho, A),
        discord_sum=sum(discords),
        discords=discords,
        rhs_eq9=-log_b + frac * sum(s_ax) + max(0.0, delta_n),
        rhs_eq19=-log_b + frac * sum(s_ax) + max(0.0, delta_pn),
        b_prime_printed=bp,
        b_prime_chained=bc,
    )


def corollary_eq19_check(rho: DensityMatrix, observables: Sequence[Observable], assignments=None) -> float:
    """LHS minus RHS of the multipartite relation built on delta'^N."""
    return theorem3_check(rho, observables, assignments).eq19_slack
