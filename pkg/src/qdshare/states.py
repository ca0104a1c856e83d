"""Example three-qubit state families and seeded random states.

Kets are written ``|q_A q_B q_C>`` with A the most significant qubit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import DensityMatrix, PreconditionError, PureState, project_pure

MAX_RANDOM_DIM = 16
THREE_QUBITS = (2, 2, 2)


class Family(str, enum.Enum):
    GGHZ = "GGHZ"
    GW = "GW"
    WERNER_GHZ = "WERNER_GHZ"
    GHZ_W_MIX = "GHZ_W_MIX"
    RANDOM_PURE = "RANDOM_PURE"
    RANDOM_GINIBRE = "RANDOM_GINIBRE"

    @classmethod
    def parse(cls, tag: str) -> Family:
        try:
            return cls(tag.strip().upper().replace("-", "_"))
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise PreconditionError(f"unknown family {tag!r}; expected one of {names}") from None


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def ghz_ket() -> np.ndarray:
    return (_ket("000") + _ket("111")) / np.sqrt(2)


def w_ket() -> np.ndarray:
    return (_ket("001") + _ket("010") + _ket("100")) / np.sqrt(3)


def make_gghz(beta: float) -> PureState:
    """cos(beta)|000> + sin(beta)|111>."""
    return PureState(np.cos(beta) * _ket("000") + np.sin(beta) * _ket("111"), THREE_QUBITS)


def make_gw(theta: float, phi: float) -> PureState:
    """sin(theta)cos(phi)|100> + sin(theta)sin(phi)|010> + cos(theta)|001>."""
    v = (np.sin(theta) * np.cos(phi) * _ket("100")
         + np.sin(theta) * np.sin(phi) * _ket("010")
         + np.cos(theta) * _ket("001"))
    return PureState(v / np.linalg.norm(v), THREE_QUBITS)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"mixing parameter p must lie in [0, 1], got {p}")
    return p


def make_werner_ghz(p: float) -> DensityMatrix:
    """(1 - p)|GHZ><GHZ| + p I/8."""
    p = _check_p(p)
    g = ghz_ket()
    return DensityMatrix((1 - p) * np.outer(g, g.conj()) + p * np.eye(8) / 8, THREE_QUBITS)


def make_ghz_w_mix(p: float) -> DensityMatrix:
    """p|GHZ><GHZ| + (1 - p)|W><W|."""
    p = _check_p(p)
    g, w = ghz_ket(), w_ket()
    return DensityMatrix(p * np.outer(g, g.conj()) + (1 - p) * np.outer(w, w.conj()), THREE_QUBITS)


def _generator(seed: int) -> np.random.Generator:
    # Philox is counter-based, so each seed gives an independent reproducible stream
    return np.random.Generator(np.random.Philox(key=int(seed)))


def _check_random_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    d = int(np.prod(dims))
    if d > MAX_RANDOM_DIM:
        raise PreconditionError(f"random states are limited to total dimension {MAX_RANDOM_DIM}, got {d}")
    return dims


def random_ginibre(dims, seed: int) -> DensityMatrix:
    """G G^dagger / Tr(G G^dagger) for a square complex Gaussian G."""
    dims = _check_random_dims(dims)
    d = int(np.prod(dims))
    rng = _generator(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real, dims)


def random_haar_pure(dims, seed: int) -> PureState:
    dims = _check_random_dims(dims)
    d = int(np.prod(dims))
    rng = _generator(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), dims)


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Gaussian matrix."""
    rng = _generator(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


_DOMAINS = {
    "beta": (0.0, 2 * np.pi, False),
    "theta": (0.0, np.pi, True),
    "phi": (0.0, 2 * np.pi, False),
    "p": (0.0, 1.0, True),
}

_SWEPT = {
    Family.GGHZ: "beta",
    Family.GW: "theta",
    Family.WERNER_GHZ: "p",
    Family.GHZ_W_MIX: "p",
}

_DEFAULTS = {
    Family.GGHZ: {"beta": np.pi / 4},
    Family.GW: {"theta": np.arccos(1 / np.sqrt(3)), "phi": np.pi / 4},
    Family.WERNER_GHZ: {"p": 0.0},
    Family.GHZ_W_MIX: {"p": 1.0},
    Family.RANDOM_PURE: {},
    Family.RANDOM_GINIBRE: {},
}


@dataclass(frozen=True)
class StateFamilyPoint:
    family: Family
    params: dict = field(default_factory=dict)
    seed: int = 0
    dims: tuple[int, ...] = THREE_QUBITS

    def __post_init__(self):
        fam = self.family if isinstance(self.family, Family) else Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        params = dict(_DEFAULTS[fam])
        for k, v in self.params.items():
            if k not in params:
                raise PreconditionError(f"family {fam.value} has no parameter {k!r}")
            params[k] = float(v)
        for k, v in params.items():
            lo, hi, closed = _DOMAINS[k]
            if v < lo or v > hi or (not closed and v == hi):
                bracket = "]" if closed else ")"
                raise PreconditionError(f"{k}={v} outside [{lo:g}, {hi:g}{bracket}")
        object.__setattr__(self, "params", params)

    def pure_state(self) -> PureState | None:
        f = self.family
        if f is Family.GGHZ:
            return make_gghz(self.params["beta"])
        if f is Family.GW:
            return make_gw(self.params["theta"], self.params["phi"])
        if f is Family.RANDOM_PURE:
            return random_haar_pure(self.dims, self.seed)
        return None

    def build(self) -> DensityMatrix:
        f = self.family
        if f is Family.WERNER_GHZ:
            return make_werner_ghz(self.params["p"])
        if f is Family.GHZ_W_MIX:
            return make_ghz_w_mix(self.params["p"])
        if f is Family.RANDOM_GINIBRE:
            return random_ginibre(self.dims, self.seed)
        return project_pure(self.pure_state())


def swept_parameter(family: Family) -> str:
    family = Family.parse(family) if isinstance(family, str) else family
    if family not in _SWEPT:
        raise PreconditionError(f"family {family.value} has no sweep parameter")
    return _SWEPT[family]


def sweep_grid(family: Family, n: int) -> np.ndarray:
    """``n`` uniform points over the swept parameter's domain (half-open domains exclude the end)."""
    if n < 2:
        raise PreconditionError("a sweep grid needs at least 2 points")
    lo, hi, closed = _DOMAINS[swept_parameter(family)]
    return np.linspace(lo, hi, n, endpoint=closed)
