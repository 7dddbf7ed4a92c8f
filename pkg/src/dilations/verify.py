"""Verifiers for equilibrating and catalytic dilations.

Conditions quantified over all system states are checked exactly, either on
a matrix-unit operator basis (linearity) or on a single maximally entangled
input, never by sampling.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import matcore as mc
from .channels import (Dilation, MixedUnitaryDecomposition, channel_distance,
                       channel_of_dilation)
from .errors import DegeneracyError, DimensionError, NotEquilibratingError


@dataclass
class EquilibriumReport:
    fixed_point_residual: float
    env_preservation_residual: float
    joint_product_residual: float
    commutator_residual: float
    mutual_info_out: float
    passed: bool
    tol: float
    marginal_residuals: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": "equilibrium", "passed": bool(self.passed), "tol": self.tol,
                "residuals": {
                    "fixed_point": self.fixed_point_residual,
                    "env_preservation": self.env_preservation_residual,
                    "joint_product": self.joint_product_residual,
                    "commutator": self.commutator_residual,
                    "mutual_info_out": self.mutual_info_out,
                    "marginals": [float(r) for r in self.marginal_residuals]}}


@dataclass
class CatalyticReport:
    passed: bool
    tol: float
    marginal_residual: float | None = None
    structural_commutator_residual: float | None = None
    sector_pt_unitarity_residuals: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": "catalytic", "passed": bool(self.passed), "tol": self.tol,
                "residuals": {
                    "marginal": self.marginal_residual,
                    "structural_commutator": self.structural_commutator_residual,
                    "sector_pt_unitarity": [float(r) for r in self.sector_pt_unitarity_residuals]}}


@dataclass
class Sector:
    eigenvalue: float
    dimension: int
    block: np.ndarray
    in_support: bool = True


@dataclass
class BlockDecomposition:
    sectors: list

    @property
    def total_dimension(self) -> int:
        return sum(s.block.shape[0] for s in self.sectors)


class EntropyFlow(NamedTuple):
    s_before: float
    s_after: float
    residual: float


# ---------------------------------------------------------------------------
# equilibrium
# ---------------------------------------------------------------------------

def equilibrating_check(dil: Dilation, omega_sys: np.ndarray,
                        tol: float = mc.ABS_TOL) -> EquilibriumReport:
    """Check that ``(omega_sys, omega_env)`` are in equilibrium under ``dil.U``."""
    omega_sys = np.asarray(omega_sys)
    if omega_sys.shape != (dil.dim_sys, dil.dim_sys):
        raise DimensionError(f"omega_sys has shape {omega_sys.shape}, dim_sys={dil.dim_sys}")
    prod = np.kron(omega_sys, dil.omega_env)
    sigma = dil.U @ prod @ mc.dagger(dil.U)
    fp = mc.residual(mc.partial_trace(sigma, dil.dims, [0]) - omega_sys)
    env = mc.residual(mc.partial_trace(sigma, dil.dims, [1]) - dil.omega_env)
    return EquilibriumReport(
        fixed_point_residual=fp,
        env_preservation_residual=env,
        joint_product_residual=mc.residual(sigma - prod),
        commutator_residual=mc.residual(mc.commutator(dil.U, prod)),
        mutual_info_out=mc.mutual_information(sigma, dil.dims),
        passed=fp < tol and env < tol,
        tol=tol,
        marginal_residuals=[fp, env])


def multipartite_equilibrium_check(U: np.ndarray, states: Sequence[np.ndarray],
                                   dims: Sequence[int] | None = None,
                                   tol: float = mc.ABS_TOL) -> EquilibriumReport:
    """Equilibrium of any number of parties under a global unitary.

    ``mutual_info_out`` is the total correlation ``sum_X H(X) - H(all)`` of the
    output, which vanishes exactly when the output is a product state.
    """
    if len(states) < 2:
        raise DimensionError("need at least two parties")
    states = [np.asarray(s) for s in states]
    sdims = [s.shape[0] for s in states]
    if dims is not None and [int(d) for d in dims] != sdims:
        raise DimensionError(f"dims {list(dims)} do not match state dimensions {sdims}")
    mc.check_dims(U, sdims)
    prod = mc.tensor_product(*states)
    sigma = U @ prod @ mc.dagger(U)
    margs = [mc.partial_trace(sigma, sdims, [k]) for k in range(len(states))]
    res = [mc.residual(m - s) for m, s in zip(margs, states)]
    tc = sum(mc.von_neumann_entropy(m) for m in margs) - mc.von_neumann_entropy(sigma)
    return EquilibriumReport(
        fixed_point_residual=res[0],
        env_preservation_residual=max(res[1:]),
        joint_product_residual=mc.residual(sigma - prod),
        commutator_residual=mc.residual(mc.commutator(U, prod)),
        mutual_info_out=tc,
        passed=all(r < tol for r in res),
        tol=tol,
        marginal_residuals=res)


def nondegenerate_spectrum(omega: np.ndarray, gap: float = mc.DEGENERACY_GAP) -> bool:
    w, _ = mc.hermitian_spectral(omega)
    return all(len(c) == 1 for c in mc.eigenvalue_clusters(w, gap))


def commuting_unitary(omega: np.ndarray, seed=None, gap: float = mc.DEGENERACY_GAP) -> np.ndarray:
    """Random unitary commuting with ``omega``: Haar blocks on each eigenspace."""
    rng = np.random.default_rng(seed)
    w, v = mc.hermitian_spectral(omega)
    blocks = np.zeros((len(w), len(w)), dtype=complex)
    for c in mc.eigenvalue_clusters(w, gap):
        blocks[np.ix_(c, c)] = mc.haar_random_unitary(len(c), rng)
    return v @ blocks @ mc.dagger(v)


# ---------------------------------------------------------------------------
# catalysis
# ---------------------------------------------------------------------------

def catalytic_check(dil: Dilation, tol: float = mc.ABS_TOL) -> CatalyticReport:
    """Single-input test with a reference system maximally entangled with the system.

    Applies ``1_R (x) U`` to ``|Omega><Omega|_{R,sys} (x) omega_env``, traces
    out the system and compares with ``1_R/d (x) omega_env``.
    """
    ds, de = dil.dim_sys, dil.dim_env
    lam, vecs = np.linalg.eigh(dil.omega_env)
    U = dil.U.reshape(ds, de, ds, de)
    # psi_k[r, a, b] = <a b| U |r e_k> / sqrt(ds)
    psi = np.einsum("abrx,xk->krab", U, vecs) / np.sqrt(ds)
    rho_rb = np.einsum("k,krab,ksac->rbsc", lam, psi, psi.conj()).reshape(ds * de, ds * de)
    r = mc.residual(rho_rb - np.kron(np.eye(ds) / ds, dil.omega_env))
    return CatalyticReport(passed=r < tol, tol=tol, marginal_residual=r)


def catalytic_check_exhaustive(dil: Dilation, tol: float = mc.ABS_TOL) -> CatalyticReport:
    """Environment invariance checked on every system matrix unit ``|i><j|``."""
    ds, de = dil.dim_sys, dil.dim_env
    U = dil.U.reshape(ds, de, ds, de)
    out = np.einsum("abix,xy,acjy->ijbc", U, dil.omega_env, U.conj())
    target = np.einsum("ij,bc->ijbc", np.eye(ds), dil.omega_env)
    r = float(np.max(np.linalg.norm(out - target, axis=(2, 3)))) / np.sqrt(de)
    return CatalyticReport(passed=r < tol, tol=tol, marginal_residual=r)


def block_decomposition(dil: Dilation, gap: float = mc.DEGENERACY_GAP) -> BlockDecomposition:
    """Compress ``U`` onto ``sys (x) E_s`` for each eigenspace ``E_s`` of ``omega_env``."""
    w, v = mc.hermitian_spectral(dil.omega_env)
    thr = mc.support_threshold(w, gap)
    sectors = []
    for c in mc.eigenvalue_clusters(w, gap):
        P = np.kron(np.eye(dil.dim_sys), v[:, c])
        sectors.append(Sector(float(np.mean(w[c])), len(c),
                              mc.dagger(P) @ dil.U @ P, bool(np.mean(w[c]) > thr)))
    return BlockDecomposition(sectors)


def structural_catalytic_check(dil: Dilation, tol: float = mc.ABS_TOL,
                               gap: float = mc.DEGENERACY_GAP
                               ) -> tuple[CatalyticReport, BlockDecomposition]:
    """Catalytic iff ``U`` commutes with ``1 (x) omega_env`` and every supported
    sector block has a unitary partial transpose on the system factor."""
    comm = mc.residual(mc.commutator(dil.U, np.kron(np.eye(dil.dim_sys), dil.omega_env)))
    dec = block_decomposition(dil, gap)
    pt = [mc.unitarity_residual(mc.partial_transpose(s.block, [dil.dim_sys, s.dimension], 0))
          for s in dec.sectors if s.in_support]
    ok = comm < tol and all(r < tol for r in pt)
    return CatalyticReport(passed=ok, tol=tol, structural_commutator_residual=comm,
                           sector_pt_unitarity_residuals=pt), dec


def extract_mixed_unitary(dil: Dilation, tol: float = mc.ABS_TOL,
                          gap: float = mc.DEGENERACY_GAP) -> MixedUnitaryDecomposition:
    """Read off ``U = sum_i U_i (x) |i><i|`` from a non-degenerate equilibrating dilation."""
    if not nondegenerate_spectrum(dil.omega_env, gap):
        raise DegeneracyError("environment state has a degenerate spectrum")
    comm = mc.residual(mc.commutator(dil.U, np.kron(np.eye(dil.dim_sys), dil.omega_env)))
    if not comm < tol:
        raise NotEquilibratingError(
            f"U does not commute with 1 (x) omega_env (residual {comm:.3e})")
    w, v = mc.hermitian_spectral(dil.omega_env)
    thr = mc.support_threshold(w, gap)
    probs, units = [], []
    for k in range(len(w)):
        if w[k] <= thr:
            continue
        P = np.kron(np.eye(dil.dim_sys), v[:, [k]])
        probs.append(w[k])
        units.append(mc.dagger(P) @ dil.U @ P)
    probs = np.array(probs) / np.sum(probs)
    dec = MixedUnitaryDecomposition(probs, units, tol=max(tol, 10 * comm))
    dist = channel_distance(dec.channel(), channel_of_dilation(dil))
    if not dist < tol:
        raise NotEquilibratingError(f"extracted decomposition misses the channel by {dist:.3e}")
    return dec


def entropy_flow_check(dil: Dilation) -> EntropyFlow:
    """Environment entropy before and after, for a maximally mixed system input."""
    ds = dil.dim_sys
    sigma = dil.evolve(np.eye(ds) / ds)
    s0 = mc.von_neumann_entropy(dil.omega_env)
    s1 = mc.von_neumann_entropy(mc.partial_trace(sigma, dil.dims, [1]))
    return EntropyFlow(s0, s1, abs(s0 - s1))
