"""Gibbs states, emergent Hamiltonians and thermal operations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .channels import (Dilation, VerificationReport, channel_distance,
                       channel_of_dilation, from_map)
from .errors import (DimensionError, NotEquilibratingError, NotRobustError,
                     NotThermalError, RankError, ValidationError)
from .verify import equilibrating_check


@dataclass(eq=False)
class HamiltonianSpec:
    H: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.H = mc.check_finite(self.H, "H")
        mc.hermitian_spectral(self.H)


@dataclass(eq=False)
class GibbsSpec:
    H: HamiltonianSpec
    beta: float
    Z: float


def _ham(h) -> HamiltonianSpec:
    return h if isinstance(h, HamiltonianSpec) else HamiltonianSpec(np.asarray(h))


def gibbs(H, beta: float) -> tuple[np.ndarray, GibbsSpec]:
    """``exp(-beta H) / Z`` and its partition function."""
    if beta < 0:
        raise ValidationError("beta must be non-negative")
    spec = _ham(H)
    w, v = mc.hermitian_spectral(spec.H)
    e0 = w.min()
    boltz = np.exp(-beta * (w - e0))
    z_shift = boltz.sum()
    rho = (v * (boltz / z_shift)) @ mc.dagger(v)
    return (rho + mc.dagger(rho)) / 2, GibbsSpec(spec, float(beta), float(z_shift * np.exp(-beta * e0)))


def emergent_hamiltonian(omega: np.ndarray, beta: float, Z: float = 1.0,
                         gap: float = mc.DEGENERACY_GAP, label: str = "") -> HamiltonianSpec:
    """``H = -(log omega + log Z) / beta``, the Hamiltonian whose Gibbs state is ``omega``.

    ``Z`` fixes the additive energy offset; the Gibbs state does not depend on it.
    """
    if not beta > 0:
        raise ValidationError("beta must be positive")
    if not Z > 0:
        raise ValidationError("Z must be positive")
    w, v = mc.hermitian_spectral(omega)
    if w.min() <= gap:
        raise RankError(f"state is not full rank (smallest eigenvalue {w.min():.3e})")
    H = -(v * (np.log(w) + np.log(Z))) @ mc.dagger(v) / beta
    return HamiltonianSpec((H + mc.dagger(H)) / 2, label)


def thermal_operation_check(dil: Dilation, H_sys, H_env, beta: float,
                            tol: float = mc.ABS_TOL) -> VerificationReport:
    """Gibbs environment and energy conservation ``[U, H_sys + H_env] = 0``.

    The commutator residual is relative to the norm of the total Hamiltonian.
    The report also carries the equilibrium residuals for the system Gibbs state,
    which must vanish whenever both thermal residuals do.
    """
    hs, he = _ham(H_sys).H, _ham(H_env).H
    if hs.shape != (dil.dim_sys,) * 2 or he.shape != (dil.dim_env,) * 2:
        raise DimensionError("Hamiltonian dimensions do not match the dilation")
    g_env, _ = gibbs(he, beta)
    g_sys, _ = gibbs(hs, beta)
    h_tot = np.kron(hs, np.eye(dil.dim_env)) + np.kron(np.eye(dil.dim_sys), he)
    norm = np.linalg.norm(h_tot)
    comm = np.linalg.norm(mc.commutator(dil.U, h_tot))
    r_comm = float(comm / norm) if norm > 0 else float(comm)
    r_env = mc.residual(dil.omega_env - g_env)
    eq = equilibrating_check(dil, g_sys, tol)
    passed = r_env < tol and r_comm < tol
    return VerificationReport(
        "thermal_operation",
        {"gibbs_environment": r_env, "energy_conservation": r_comm,
         "equilibrium_fixed_point": eq.fixed_point_residual,
         "equilibrium_environment": eq.env_preservation_residual},
        tol, passed,
        {"equilibrating_consistent": bool(eq.passed or not passed)})


def equilibrating_to_thermal(dil: Dilation, omega_sys: np.ndarray, beta: float,
                             tol: float = mc.ABS_TOL, gap: float = mc.DEGENERACY_GAP
                             ) -> tuple[HamiltonianSpec, HamiltonianSpec, Dilation]:
    """Read an equilibrating dilation as a thermal operation.

    The environment is restricted to the support of its state and both
    Hamiltonians are obtained with :func:`emergent_hamiltonian` (``Z = 1``).
    """
    rep = equilibrating_check(dil, omega_sys, tol)
    if not rep.passed:
        raise NotEquilibratingError(
            f"not an equilibrating dilation (fixed point {rep.fixed_point_residual:.3e}, "
            f"environment {rep.env_preservation_residual:.3e})")
    h_sys = emergent_hamiltonian(omega_sys, beta, gap=gap, label="system")
    w, v = mc.hermitian_spectral(dil.omega_env)
    V = v[:, w > mc.support_threshold(w, gap)]
    P = np.kron(np.eye(dil.dim_sys), V)
    U_r = mc.dagger(P) @ dil.U @ P
    env = mc.dagger(V) @ dil.omega_env @ V
    env = (env + mc.dagger(env)) / 2
    env /= np.trace(env).real
    restricted = Dilation(U_r, env, dil.dim_sys, V.shape[1], tol=max(tol, 10 * rep.commutator_residual))
    h_env = emergent_hamiltonian(env, beta, gap=gap, label="environment")
    return h_sys, h_env, restricted


def nonequilibrium_witness(dil: Dilation, omega_sys: np.ndarray) -> float:
    """How far the environment moves when the system starts in ``omega_sys``."""
    omega_sys = np.asarray(omega_sys)
    if omega_sys.shape != (dil.dim_sys, dil.dim_sys):
        raise DimensionError("omega_sys does not match the system dimension")
    out = mc.partial_trace(dil.evolve(omega_sys), dil.dims, [1])
    return mc.residual(out - dil.omega_env)


@dataclass(eq=False)
class RobustReduction:
    dilation: Dilation
    report: VerificationReport


def robust_catalysis_reduce(U: np.ndarray, omega_a: np.ndarray, tau_c: np.ndarray,
                            omega_b: np.ndarray, omega_c: np.ndarray,
                            tol: float = mc.ABS_TOL) -> RobustReduction:
    """Turn a robust catalytic thermal operation on A into a plain dilation.

    ``U`` acts on A (x) C (x) B and must commute with the Gibbs product
    ``omega_a (x) omega_c (x) omega_b``. The catalyst marginal must be returned
    unchanged for every input on A. The merged environment is ``tau_c (x) omega_b``.

    Raises:
        NotThermalError: ``U`` does not commute with the Gibbs product.
        NotRobustError: the catalyst changes for some matrix unit on A; the
            exception's ``witness`` is the largest such residual.
    """
    omega_a, tau_c, omega_b, omega_c = (np.asarray(x) for x in (omega_a, tau_c, omega_b, omega_c))
    if omega_c.shape != tau_c.shape:
        raise DimensionError("tau_c and omega_c differ in dimension")
    da, dc, db = omega_a.shape[0], tau_c.shape[0], omega_b.shape[0]
    dims = [da, dc, db]
    mc.check_dims(U, dims)

    premise = mc.residual(mc.commutator(U, mc.tensor_product(omega_a, omega_c, omega_b)))
    if not premise < tol:
        raise NotThermalError(f"U does not commute with the Gibbs product ({premise:.3e})")

    U6 = U.reshape(dims + dims)
    env = np.kron(tau_c, omega_b).reshape(dc, db, dc, db)
    cat = np.einsum("acbixy,xyuv,aebjuv->ijce", U6, env, U6.conj())
    target = np.einsum("ij,ce->ijce", np.eye(da), tau_c)
    basis_res = np.linalg.norm(cat - target, axis=(2, 3)) / np.sqrt(dc)
    worst = float(basis_res.max())
    if not worst < tol:
        i, j = np.unravel_index(int(np.argmax(basis_res)), basis_res.shape)
        raise NotRobustError(
            f"catalyst not preserved for input |{i}><{j}| (residual {worst:.3e})", worst)

    joint_in = mc.tensor_product(omega_a, tau_c, omega_b)
    joint = U @ joint_in @ mc.dagger(U)
    r23 = mc.residual(mc.partial_trace(joint, dims, [0]) - omega_a)
    r24 = mc.residual(mc.partial_trace(joint, dims, [2]) - omega_b)
    r_comm = mc.residual(mc.commutator(U, joint_in))

    merged = Dilation(U, np.kron(tau_c, omega_b), da, dc * db)
    original = from_map(
        lambda x: mc.partial_trace(U @ mc.tensor_product(x, tau_c, omega_b) @ mc.dagger(U),
                                   dims, [0]), da)
    dist = channel_distance(original, channel_of_dilation(merged))
    residuals = {"premise_commutator": premise, "catalyst_basis": worst,
                 "system_gibbs": r23, "bath_gibbs": r24,
                 "catalyst_commutator": r_comm, "channel_distance": dist}
    passed = all(v < tol for v in residuals.values())
    return RobustReduction(merged, VerificationReport("robust_catalysis", residuals, tol, passed))
