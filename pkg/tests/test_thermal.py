import numpy as np
import pytest
from numpy.testing import assert_allclose

from dilations import matcore as mc
from dilations.channels import Dilation, channel_distance, channel_of_dilation
from dilations.errors import (NotEquilibratingError, NotRobustError, NotThermalError,
                              RankError, ValidationError)
from dilations.thermal import (emergent_hamiltonian, equilibrating_to_thermal, gibbs,
                               nonequilibrium_witness, robust_catalysis_reduce,
                               thermal_operation_check)
from dilations.verify import commuting_unitary, equilibrating_check

from conftest import commuting_block_dilation

I2 = np.eye(2)
H_QUBIT = np.diag([0.0, 1.0])


def partial_swap(theta):
    U = np.eye(4, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    U[1:3, 1:3] = [[c, -s], [s, c]]
    return U


def perturbation_example(beta=0.8, theta=0.9):
    """A (x) C (x) B qubits: swap C with B, then rotate A against B."""
    w, _ = gibbs(H_QUBIT, beta)
    swap_cb = np.kron(I2, mc.swap(2))
    U_ab = swap_cb @ np.kron(partial_swap(theta), I2) @ swap_cb
    return U_ab @ swap_cb, w


def test_gibbs_qubit_oracle():
    beta = 1.3
    rho, spec = gibbs(H_QUBIT, beta)
    q = np.exp(-beta)
    assert_allclose(rho, np.diag([1, q]) / (1 + q), atol=1e-15)
    assert spec.Z == pytest.approx(1 + q)


def test_gibbs_shift_and_rotation_invariance(rng):
    H = mc.random_hermitian(3, rng)
    rho, spec = gibbs(H, 0.7)
    rho2, spec2 = gibbs(H + 5 * np.eye(3), 0.7)
    assert_allclose(rho, rho2, atol=1e-14)
    assert spec2.Z == pytest.approx(spec.Z * np.exp(-3.5))
    assert mc.residual(mc.commutator(rho, H)) < 1e-14


def test_gibbs_infinite_temperature(rng):
    rho, spec = gibbs(mc.random_hermitian(3, rng), 0.0)
    assert_allclose(rho, np.eye(3) / 3, atol=1e-15)
    assert spec.Z == pytest.approx(3)


def test_gibbs_rejects_negative_beta():
    with pytest.raises(ValidationError):
        gibbs(H_QUBIT, -1.0)


def test_emergent_hamiltonian_round_trip(rng):
    for d in (2, 3, 5):
        w = mc.random_density(d, rng)
        H = emergent_hamiltonian(w, 0.6)
        assert_allclose(gibbs(H.H, 0.6)[0], w, atol=1e-12)
        assert gibbs(H.H, 0.6)[1].Z == pytest.approx(1.0)


def test_emergent_hamiltonian_offset(rng):
    w = mc.random_density(3, rng)
    h1 = emergent_hamiltonian(w, 2.0).H
    h2 = emergent_hamiltonian(w, 2.0, Z=4.0).H
    assert_allclose(h2 - h1, -np.log(4.0) / 2.0 * np.eye(3), atol=1e-12)


def test_emergent_hamiltonian_rejects():
    with pytest.raises(RankError):
        emergent_hamiltonian(np.diag([1.0, 0.0]), 1.0)
    with pytest.raises(ValidationError):
        emergent_hamiltonian(I2 / 2, 0.0)
    with pytest.raises(ValidationError):
        emergent_hamiltonian(I2 / 2, 1.0, Z=-1.0)


def test_thermal_partial_swap_passes():
    beta = 0.9
    w, _ = gibbs(H_QUBIT, beta)
    rep = thermal_operation_check(Dilation(partial_swap(0.4), w, 2, 2), H_QUBIT, H_QUBIT, beta)
    assert rep.passed
    assert rep.witness["equilibrating_consistent"]
    assert rep.residuals["equilibrium_fixed_point"] < 1e-9


def test_thermal_detects_energy_violation():
    w, _ = gibbs(H_QUBIT, 0.9)
    rep = thermal_operation_check(Dilation(np.kron(mc.PAULI_X, I2), w, 2, 2), H_QUBIT, H_QUBIT, 0.9)
    assert not rep.passed and rep.residuals["energy_conservation"] > 0.1


def test_thermal_detects_non_gibbs_env():
    rep = thermal_operation_check(Dilation(np.eye(4), np.diag([0.3, 0.7]), 2, 2), H_QUBIT, H_QUBIT, 1.0)
    assert not rep.passed and rep.residuals["gibbs_environment"] > 0.1


def test_equilibrating_to_thermal(rng):
    for da, db in [(2, 2), (2, 3), (3, 3)]:
        dil, wa = commuting_block_dilation(da, db, rng)
        beta = float(rng.uniform(0.2, 3.0))
        h_sys, h_env, restricted = equilibrating_to_thermal(dil, wa, beta)
        assert thermal_operation_check(restricted, h_sys, h_env, beta).passed
        assert channel_distance(channel_of_dilation(restricted), channel_of_dilation(dil)) < 1e-9


def test_equilibrating_to_thermal_rank_deficient_env(rng):
    wa = np.diag([0.6, 0.4])
    units = [commuting_unitary(wa, rng) for _ in range(2)]
    kets = np.eye(3)
    U = (np.kron(units[0], np.outer(kets[0], kets[0])) + np.kron(units[1], np.outer(kets[1], kets[1]))
         + np.kron(mc.haar_random_unitary(2, rng), np.outer(kets[2], kets[2])))
    dil = Dilation(U, np.diag([0.7, 0.3, 0.0]), 2, 3)
    h_sys, h_env, restricted = equilibrating_to_thermal(dil, wa, 1.0)
    assert restricted.dim_env == 2
    assert thermal_operation_check(restricted, h_sys, h_env, 1.0).passed


def test_equilibrating_to_thermal_rejects(rng):
    dil = Dilation(mc.haar_random_unitary(4, rng), mc.random_density(2, rng), 2, 2)
    with pytest.raises(NotEquilibratingError):
        equilibrating_to_thermal(dil, mc.random_density(2, rng), 1.0)


def test_nonequilibrium_witness_swap():
    ws, we = np.diag([0.8, 0.2]), np.diag([0.6, 0.4])
    dil = Dilation(mc.swap(2), we, 2, 2)
    assert nonequilibrium_witness(dil, ws) == pytest.approx(0.2)
    assert not equilibrating_check(dil, ws).passed
    assert nonequilibrium_witness(dil, we) < 1e-15


def test_robust_reduction_passes():
    U, w = perturbation_example()
    red = robust_catalysis_reduce(U, w, w, w, w)
    assert red.report.passed
    assert red.dilation.dim_env == 4
    assert red.report.residuals["channel_distance"] < 1e-9


def test_robust_reduction_perturbed_catalyst_witness():
    U, w = perturbation_example()
    tau = w + 1e-3 * np.diag([1.0, -1.0])
    with pytest.raises(NotRobustError) as exc:
        robust_catalysis_reduce(U, w, tau, w, w)
    # the catalyst leaves holding the bath Gibbs state
    assert exc.value.witness == pytest.approx(mc.residual(tau - w), rel=1e-9)
    assert exc.value.witness == pytest.approx(1e-3)


def test_robust_reduction_rejects_non_thermal(rng):
    w, _ = gibbs(H_QUBIT, 0.5)
    with pytest.raises(NotThermalError):
        robust_catalysis_reduce(mc.haar_random_unitary(8, rng), w, w, w, w)
