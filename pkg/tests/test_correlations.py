import numpy as np
import pytest
from numpy.testing import assert_allclose

from qdshare.core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityMatrix,
    UnsupportedDimensionError,
    project_pure,
    tensor,
    tensor_states,
)
from qdshare.correlations import (
    bloch_measurement,
    classical_correlation,
    discord_one_sided,
    discord_oracle,
)
from qdshare.entropy import holevo_quantity, mutual_information, subsystem_entropy
from qdshare.states import make_ghz_w_mix, make_werner_ghz, random_ginibre, random_haar_pure, random_unitary


def _same_projectors(meas, obs):
    want = obs.measurement().projectors
    got = meas.projectors
    matched = [min(np.max(np.abs(g - w)) for w in want) for g in got]
    return max(matched) < 1e-12


@pytest.mark.parametrize("angles, obs", [
    ((0, 0), PAULI_Z),
    ((np.pi / 2, 0), PAULI_X),
    ((np.pi / 2, np.pi / 2), PAULI_Y),
])
def test_bloch_measurement_axes(angles, obs):
    assert _same_projectors(bloch_measurement(*angles), obs)


def test_bloch_measurement_wraps_angles():
    a = bloch_measurement(0.7, 1.1)
    b = bloch_measurement(0.7 + 2 * np.pi, 1.1 - 2 * np.pi)
    for p, q in zip(a.projectors, b.projectors):
        assert_allclose(p, q, atol=1e-12)


def test_product_state_has_no_correlation():
    rho = tensor_states(random_ginibre((2,), 1), random_ginibre((2,), 2))
    r = classical_correlation(rho)
    assert r.classical_correlation == pytest.approx(0, abs=1e-9)
    assert r.discord == pytest.approx(0, abs=1e-9)
    assert discord_oracle(rho) == pytest.approx(0, abs=1e-9)


def test_bell_state(bell):
    r = classical_correlation(bell)
    assert r.classical_correlation == pytest.approx(1, abs=1e-6)
    assert r.discord == pytest.approx(1, abs=1e-6)
    assert r.mutual_information == pytest.approx(2, abs=1e-12)
    assert discord_oracle(bell) == pytest.approx(1, abs=1e-4)


def test_ghz_pair_is_classically_correlated(ghz):
    r = classical_correlation(ghz, 0, (1,))
    assert r.classical_correlation == pytest.approx(1, abs=1e-9)
    assert r.discord == pytest.approx(0, abs=1e-9)
    assert discord_oracle(ghz, 0, (1,), grid=128) == pytest.approx(0, abs=1e-9)


def test_bookkeeping_identity():
    for seed in range(10):
        r = classical_correlation(random_ginibre((2, 2), seed))
        assert abs(r.discord - (r.mutual_information - r.classical_correlation)) <= 1e-12
        assert r.discord >= -1e-9 and r.classical_correlation >= -1e-9
        theta, phi = r.optimal_angles
        assert 0 <= theta <= np.pi and 0 <= phi < 2 * np.pi


@pytest.mark.parametrize("seed", range(5))
def test_optimizer_agrees_with_oracle(seed):
    rho = random_ginibre((2, 2), 500 + seed)
    d_opt = classical_correlation(rho).discord
    d_grid = discord_oracle(rho)
    assert abs(d_opt - d_grid) <= 1e-4
    # the refined search can only improve on an unrefined grid
    assert d_opt <= d_grid + 1e-12


def test_correlation_ranges_and_holevo_dominance():
    for seed in range(30):
        rho = random_ginibre((2, 2), 100 + seed)
        r = classical_correlation(rho)
        s_a, s_b = subsystem_entropy(rho, 0), subsystem_entropy(rho, 1)
        assert -1e-9 <= r.classical_correlation <= min(s_a, s_b) + 1e-9
        assert -1e-9 <= r.discord <= mutual_information(rho, 0, 1) + 1e-9
        for obs in (PAULI_X, PAULI_Z):
            assert r.classical_correlation >= holevo_quantity(rho, obs, 0, (1,)) - 1e-6


def test_local_unitary_invariance():
    for seed in range(10):
        rho = random_ginibre((2, 2), 200 + seed)
        u = tensor(random_unitary(2, 2 * seed), random_unitary(2, 2 * seed + 1))
        rotated = DensityMatrix(u @ rho.matrix @ u.conj().T, (2, 2))
        assert abs(discord_one_sided(rotated) - discord_one_sided(rho)) <= 1e-6


def test_pure_state_discord_across_bc_is_entropy_of_a():
    for seed in range(10):
        rho = project_pure(random_haar_pure((2, 2, 2), seed))
        assert discord_one_sided(rho, (1, 2)) == pytest.approx(subsystem_entropy(rho, 0), abs=1e-6)


def test_family_discord_fixed_points():
    assert discord_one_sided(make_werner_ghz(1.0), (1,)) == pytest.approx(0, abs=1e-9)
    mix = make_ghz_w_mix(1.0)
    assert discord_one_sided(mix, (1,)) == pytest.approx(0, abs=1e-9)
    assert discord_oracle(mix, 0, (1,), grid=128) == pytest.approx(0, abs=1e-9)


def test_measured_subsystem_elsewhere():
    # swap A and B, then measure subsystem 1 instead of 0
    pair_c = tensor_states(project_pure(random_haar_pure((2, 2), 0)), random_ginibre((2,), 1))
    r_front = classical_correlation(pair_c, 0, (1,))
    swapped = DensityMatrix(
        pair_c.matrix.reshape(2, 2, 2, 2, 2, 2).transpose(1, 0, 2, 4, 3, 5).reshape(8, 8), (2, 2, 2))
    r_back = classical_correlation(swapped, 1, (0,))
    assert r_back.discord == pytest.approx(r_front.discord, abs=1e-9)


def test_qutrit_measurement_rejected():
    rho = random_ginibre((3, 2), 0)
    with pytest.raises(UnsupportedDimensionError):
        classical_correlation(rho, 0, (1,))
    with pytest.raises(UnsupportedDimensionError):
        discord_oracle(rho, 0, (1,))
