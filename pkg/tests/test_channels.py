import numpy as np
import pytest
from numpy.testing import assert_allclose

from dilations import matcore as mc
from dilations.channels import (ChannelChoi, Dilation, MixedUnitaryDecomposition,
                                amplitude_damping, apply, channel_distance, channel_of_dilation,
                                covariance_check, dephasing_channel, fixed_point_check, from_kraus,
                                from_map, identity_channel, is_doubly_stochastic, to_kraus,
                                unitary_channel)
from dilations.errors import DimensionError, ValidationError
from dilations.thermal import gibbs

from conftest import random_mixed_unitary

X, Z = mc.PAULI_X, mc.PAULI_Z
I2 = np.eye(2)


def random_dilation(ds, de, rng):
    return Dilation(mc.haar_random_unitary(ds * de, rng), mc.random_density(de, rng), ds, de)


def test_dilation_validates():
    with pytest.raises(ValidationError):
        Dilation(np.ones((4, 4)), I2 / 2, 2, 2)
    with pytest.raises(ValidationError):
        Dilation(np.eye(4), np.diag([1.0, 1.0]), 2, 2)
    with pytest.raises(ValidationError):
        Dilation(np.eye(4), I2 / 2, 2, 3)


def test_identity_dilation_gives_identity_channel(rng):
    dil = Dilation(np.eye(6), mc.random_density(3, rng), 2, 3)
    assert channel_distance(channel_of_dilation(dil), identity_channel(2)) < 1e-14


def test_cnot_dilation_dephases():
    dil = Dilation(mc.CNOT, I2 / 2, 2, 2)
    oracle = from_map(lambda r: (r + Z @ r @ Z) / 2, 2)
    assert channel_distance(channel_of_dilation(dil), oracle) < 1e-15


def test_mixed_unitary_dilation_channel():
    dec = MixedUnitaryDecomposition([0.7, 0.3], [I2, X])
    dil = dec.dilation()
    assert_allclose(dil.U, np.kron(I2, np.diag([1, 0])) + np.kron(X, np.diag([0, 1])))
    oracle = from_map(lambda r: 0.7 * r + 0.3 * X @ r @ X, 2)
    assert channel_distance(channel_of_dilation(dil), oracle) < 1e-15


def test_channel_of_dilation_is_cptp(rng):
    for ds, de in [(2, 2), (2, 3), (3, 2)]:
        ch = channel_of_dilation(random_dilation(ds, de, rng))
        assert ch.cp_residual() < 1e-9 and ch.tp_residual() < 1e-9
        ch.validate()


def test_apply_identity(rng):
    rho = mc.random_density(3, rng)
    assert_allclose(apply(identity_channel(3), rho), rho, atol=1e-15)


def test_apply_dephasing_plus():
    plus = np.full((2, 2), 0.5)
    assert_allclose(apply(dephasing_channel(2), plus), I2 / 2)


def test_apply_agrees_with_partial_trace_route(rng):
    for _ in range(5):
        dil = random_dilation(2, 3, rng)
        rho = mc.random_density(2, rng)
        direct = mc.partial_trace(dil.evolve(rho), [2, 3], [0])
        assert_allclose(apply(channel_of_dilation(dil), rho), direct, atol=1e-13)
        assert mc.density_violations(direct) == []


def test_apply_linearity_on_matrix_units(rng):
    ch = channel_of_dilation(random_dilation(3, 2, rng))
    for i in range(3):
        for j in range(3):
            assert_allclose(apply(ch, mc.matrix_unit(3, i, j)), ch.blocks[i, :, j, :])


def test_apply_dimension_error():
    with pytest.raises(DimensionError):
        apply(identity_channel(2), np.eye(3))


def test_kraus_round_trip(rng):
    ch = channel_of_dilation(random_dilation(2, 3, rng))
    assert channel_distance(from_kraus(to_kraus(ch)), ch) < 1e-12


def test_ds_unitary_channel(rng):
    assert is_doubly_stochastic(unitary_channel(mc.haar_random_unitary(3, rng))).passed


def test_ds_amplitude_damping_fails():
    k0 = np.array([[1, 0], [0, np.sqrt(0.7)]])
    k1 = np.array([[0, np.sqrt(0.3)], [0, 0]])
    t_one = k0 @ k0.T + k1 @ k1.T
    assert_allclose(t_one, np.diag([1.3, 0.7]))
    rep = is_doubly_stochastic(amplitude_damping(0.3))
    assert not rep.passed
    assert rep.residuals["unitality"] == pytest.approx(mc.residual(t_one - I2))
    assert rep.residuals["unitality"] > 0.2


def test_ds_dephasing():
    assert is_doubly_stochastic(dephasing_channel(3)).passed


def test_ds_non_square():
    with pytest.raises(DimensionError):
        is_doubly_stochastic(from_kraus([np.ones((3, 2)) / np.sqrt(3)]))


def test_fixed_point(rng):
    assert fixed_point_check(identity_channel(2), mc.random_density(2, rng)).passed
    assert fixed_point_check(dephasing_channel(2), np.diag([0.3, 0.7])).passed
    assert not fixed_point_check(dephasing_channel(2), np.full((2, 2), 0.5)).passed


def test_covariance_trivial_cases(rng):
    ch = channel_of_dilation(random_dilation(2, 2, rng))
    assert covariance_check(ch, mc.random_density(2, rng), [0.0]).passed
    assert covariance_check(dephasing_channel(2), I2 / 2).passed


def test_covariance_thermal_partial_swap():
    beta, theta = 0.9, 0.6
    H = np.diag([0.0, 1.0])
    w, _ = gibbs(H, beta)
    U = np.eye(4, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    U[1:3, 1:3] = [[c, -s], [s, c]]
    assert mc.residual(mc.commutator(U, np.kron(w, w))) < 1e-15
    ch = channel_of_dilation(Dilation(U, w, 2, 2))
    assert covariance_check(ch, w, [0.7, -0.7, 2.3, -2.3]).passed


def test_covariance_detects_non_covariant():
    # Hadamard conjugation mixes energy levels
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    rep = covariance_check(unitary_channel(H), np.diag([0.8, 0.2]))
    assert not rep.passed and rep.residuals["covariance"] > 0.1


def test_distance_identity_vs_dephasing():
    d = channel_distance(identity_channel(2), dephasing_channel(2))
    diff = identity_channel(2).choi - dephasing_channel(2).choi
    off = diff - np.diag(np.diag(diff))
    assert d == pytest.approx(mc.residual(off))
    assert d == pytest.approx(np.sqrt(2) / 2)


def test_distance_metric_axioms(rng):
    chans = [channel_of_dilation(random_dilation(2, 2, rng)) for _ in range(6)]
    for a in chans:
        assert channel_distance(a, a) == 0
        for b in chans:
            assert channel_distance(a, b) == pytest.approx(channel_distance(b, a))
            for c in chans:
                assert channel_distance(a, c) <= channel_distance(a, b) + channel_distance(b, c) + 1e-12


def test_strongly_factorizable_is_ds(rng):
    for de in (2, 3):
        U = sum(np.kron(mc.haar_random_unitary(2, rng), np.outer(e, e))
                for e in np.eye(de)) if de == 2 else mc.haar_random_unitary(2 * de, rng)
        dil = Dilation(U, np.eye(de) / de, 2, de)
        assert is_doubly_stochastic(channel_of_dilation(dil)).passed


def test_decomposition_validation():
    with pytest.raises(ValidationError):
        MixedUnitaryDecomposition([0.5, 0.4], [I2, X])
    with pytest.raises(ValidationError):
        MixedUnitaryDecomposition([1.0], [np.ones((2, 2))])


def test_split_nondegenerate_keeps_channel(rng):
    dec = MixedUnitaryDecomposition([0.5, 0.5], [I2, X])
    split = dec.split_nondegenerate()
    assert len(np.unique(np.round(split.probabilities, 8))) == 4
    assert channel_distance(split.channel(), dec.channel()) < 1e-14
    dec = random_mixed_unitary(3, 3, rng)
    assert channel_distance(dec.split_nondegenerate(5).dilation() and
                            channel_of_dilation(dec.split_nondegenerate(5).dilation()),
                            dec.channel()) < 1e-13


def test_choi_shape_check():
    with pytest.raises(DimensionError):
        ChannelChoi(2, 2, np.eye(3))
