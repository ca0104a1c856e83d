import numpy as np
import pytest

from qdshare.core import DensityMatrix, PureState, project_pure


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def dm(vec, dims=None) -> DensityMatrix:
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    if dims is None:
        dims = (2,) * int(round(np.log2(vec.size)))
    return project_pure(PureState(vec, dims))


def naive_ptrace(m, dims, keep):
    """Brute-force partial trace by explicit index loops."""
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    drop = [k for k in range(n) if k not in keep]
    kd = [dims[k] for k in keep]
    dd = [dims[k] for k in drop]
    out = np.zeros((int(np.prod(kd)), int(np.prod(kd))), dtype=complex)

    def flat(idx):
        f = 0
        for i, d in zip(idx, dims):
            f = f * d + i
        return f

    for ki in np.ndindex(*kd):
        for kj in np.ndindex(*kd):
            s = 0
            for di in np.ndindex(*dd) if dd else [()]:
                full_i = [0] * n
                full_j = [0] * n
                for pos, k in enumerate(keep):
                    full_i[k] = ki[pos]
                    full_j[k] = kj[pos]
                for pos, k in enumerate(drop):
                    full_i[k] = di[pos]
                    full_j[k] = di[pos]
                s += m[flat(full_i), flat(full_j)]
            out[np.ravel_multi_index(ki, kd), np.ravel_multi_index(kj, kd)] = s
    return out


def brute_entropy(m) -> float:
    w = np.linalg.eigvalsh(m)
    w = w[w > 1e-14]
    return float(-np.sum(w * np.log2(w)))


@pytest.fixture
def bell():
    return dm(ket("00") + ket("11"))


@pytest.fixture
def ghz():
    return dm(ket("000") + ket("111"))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
