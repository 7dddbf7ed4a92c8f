"""Schur multipliers and their fermionic catalytic dilations.

A real positive semidefinite matrix ``X`` with unit diagonal defines the
channel ``x -> x o X`` (entrywise product). Writing ``X`` as the Gram matrix of
unit vectors ``g_i`` in ``R^d`` and pairing the coordinates with ``d``
anticommuting Hermitian unitaries ``v_k`` gives the self-adjoint unitary

    U = sum_k a_k (x) v_k,   a_k = diag((g_1)_k, ..., (g_n)_k)

whose dilation with a maximally mixed ``2**d``-dimensional environment is
catalytic and reproduces the Schur multiplier.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .channels import (ChannelChoi, Dilation, VerificationReport, channel_distance,
                       channel_of_dilation)
from .errors import (InternalConsistencyError, PreconditionError, ResourceError,
                     ValidationError)
from .verify import catalytic_check

log = logging.getLogger(__name__)

MAX_MODES = 12
RANK_THRESHOLD = 1e-10


@dataclass(eq=False)
class SchurMatrix:
    X: np.ndarray
    tol: float = mc.ABS_TOL

    def __post_init__(self):
        X = np.asarray(self.X)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValidationError(f"Schur matrix must be square, got {X.shape}")
        if np.iscomplexobj(X):
            if np.max(np.abs(X.imag), initial=0.0) >= self.tol:
                raise ValidationError("Schur matrix must be real")
            X = X.real
        X = X.astype(float)
        bad = []
        if not np.all(np.isfinite(X)):
            bad.append("finite entries")
        elif np.max(np.abs(X - X.T)) >= self.tol:
            bad.append("symmetric")
        elif np.max(np.abs(np.diag(X) - 1)) >= self.tol:
            bad.append("unit diagonal")
        elif np.linalg.eigvalsh(X)[0] <= -self.tol:
            bad.append("positive semidefinite")
        if bad:
            raise ValidationError(f"invalid Schur matrix: fails {', '.join(bad)}")
        self.X = (X + X.T) / 2

    @property
    def n(self) -> int:
        return self.X.shape[0]


@dataclass(eq=False)
class GramFactorization:
    g: np.ndarray          # n x d, row i is the unit vector g_i
    a: list                # d diagonal n x n matrices
    renormalization: float

    @property
    def d(self) -> int:
        return self.g.shape[1]


@dataclass(eq=False)
class MajoranaSet:
    v: list

    @property
    def d(self) -> int:
        return len(self.v)


def _schur(X) -> SchurMatrix:
    return X if isinstance(X, SchurMatrix) else SchurMatrix(np.asarray(X))


def random_schur_matrix(n: int, d: int, seed=None) -> SchurMatrix:
    """Gram matrix of ``n`` random unit vectors in ``R^d``."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return SchurMatrix(g @ g.T)


def schur_channel(X) -> ChannelChoi:
    X = _schur(X).X
    n = X.shape[0]
    J = np.zeros((n, n, n, n), dtype=complex)
    idx = np.arange(n)
    J[idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = X
    return ChannelChoi(n, n, J.reshape(n * n, n * n))


def gram_factorize(X, tol: float = mc.ABS_TOL) -> GramFactorization:
    """Unit vectors ``g_i`` with ``g_i . g_j = X_ij`` from the spectral decomposition.

    Eigenvalues below ``RANK_THRESHOLD * lambda_max`` are dropped, so ``d`` is
    the numerical rank. Rows are renormalised to unit length; a correction
    larger than 1e-6 is logged as a warning and reported in ``renormalization``.
    """
    X = _schur(X).X
    w, v = np.linalg.eigh(X)
    w, v = w[::-1], v[:, ::-1]
    keep = w > RANK_THRESHOLD * w[0]
    v = v[:, keep]
    lead = np.argmax(np.abs(v) > 1e-12, axis=0)
    v = v * np.sign(v[lead, np.arange(v.shape[1])])
    g = v * np.sqrt(w[keep])
    norms = np.linalg.norm(g, axis=1)
    dev = float(np.max(np.abs(norms - 1)))
    if dev > 1e-6:
        log.warning("Gram vectors deviate from unit length by %.3e; input violates X_ii = 1", dev)
    g = g / norms[:, None]
    a = [np.diag(g[:, k]) for k in range(g.shape[1])]
    return GramFactorization(g, a, dev)


def majorana_ops(d: int) -> MajoranaSet:
    """Jordan-Wigner Majoranas ``Z^(k) (x) X (x) 1^(d-k-1)`` on ``d`` modes."""
    if d < 1:
        raise ValidationError("need at least one mode")
    if d > MAX_MODES:
        raise ResourceError(f"{d} modes need 2**{d} dimensional matrices; limit is {MAX_MODES}")
    I2 = np.eye(2, dtype=complex)
    return MajoranaSet([mc.tensor_product(*([mc.PAULI_Z] * k + [mc.PAULI_X] + [I2] * (d - k - 1)))
                        for k in range(d)])


def build_schur_dilation(X, tol: float = mc.ABS_TOL) -> tuple[Dilation, VerificationReport]:
    """Catalytic dilation ``(U, 1/2**d)`` of the Schur multiplier of ``X``.

    The report holds the three defining properties: Gram identity
    ``X_ij = 2**-d Tr(u_i u_j)``, equality with :func:`schur_channel`, and the
    catalytic test, plus self-adjointness and ``U**2 = 1``.

    Raises:
        InternalConsistencyError: if any residual reaches ``tol``.
    """
    sx = _schur(X)
    gf = gram_factorize(sx, tol)
    maj = majorana_ops(gf.d)
    n, D = sx.n, 2 ** gf.d
    U = sum(np.kron(a, v) for a, v in zip(gf.a, maj.v))
    u = [sum(gf.g[i, k] * maj.v[k] for k in range(gf.d)) for i in range(n)]
    gram = np.array([[np.trace(ui @ uj).real / D for uj in u] for ui in u])
    dil = Dilation(U, np.eye(D, dtype=complex) / D, n, D)
    residuals = {
        "gram_identity": float(np.max(np.abs(gram - sx.X))),
        "channel": channel_distance(channel_of_dilation(dil), schur_channel(sx)),
        "catalytic": catalytic_check(dil, tol).marginal_residual,
        "self_adjoint": mc.residual(U - mc.dagger(U)),
        "involution": mc.residual(U @ U - np.eye(n * D)),
    }
    report = VerificationReport("schur_dilation", residuals, tol,
                                all(r < tol for r in residuals.values()),
                                {"modes": gf.d, "renormalization": gf.renormalization})
    if not report.passed:
        bad = {k: v for k, v in residuals.items() if not v < tol}
        raise InternalConsistencyError(f"Schur dilation failed its own checks: {bad}")
    return dil, report


# ---------------------------------------------------------------------------
# factorizable decomposition and extremality
# ---------------------------------------------------------------------------

def _require_maximally_mixed(dil: Dilation, tol: float):
    r = mc.residual(dil.omega_env - np.eye(dil.dim_env) / dil.dim_env)
    if not r < tol:
        raise PreconditionError(f"environment is not maximally mixed (residual {r:.3e})")


def factorizable_decompose(dil: Dilation, basis: np.ndarray,
                           tol: float = mc.ABS_TOL) -> list[ChannelChoi]:
    """Channels ``T_j(rho) = Tr_env(U (rho (x) |j><j|) U^dag)`` for the columns of ``basis``.

    Their uniform average is the channel of ``dil``.
    """
    _require_maximally_mixed(dil, tol)
    basis = mc.check_unitary(basis, tol, "basis")
    if basis.shape[0] != dil.dim_env:
        raise PreconditionError("basis does not match the environment dimension")
    return [channel_of_dilation(dil.with_env(np.outer(b, b.conj()))) for b in basis.T]


@dataclass(eq=False)
class ExtremalityWitness:
    basis: np.ndarray
    components: list
    pair: tuple
    distance: float
    trial: int

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self.components), 1 / len(self.components))


def extremality_witness_search(dil: Dilation, n_bases: int = 32, seed=0,
                               tol: float = mc.ABS_TOL) -> ExtremalityWitness | None:
    """Look for an environment basis whose components are not all equal.

    A hit certifies that the channel is a non-trivial uniform mixture of
    doubly-stochastic channels. ``None`` only means nothing was found.
    """
    _require_maximally_mixed(dil, tol)
    if not catalytic_check(dil, tol).passed:
        raise PreconditionError("dilation is not catalytic")
    rng = np.random.default_rng(seed)
    for trial in range(n_bases):
        basis = mc.haar_random_unitary(dil.dim_env, rng)
        comps = factorizable_decompose(dil, basis, tol)
        best, pair = 0.0, (0, 0)
        for j in range(len(comps)):
            for k in range(j + 1, len(comps)):
                dist = channel_distance(comps[j], comps[k])
                if dist > best:
                    best, pair = dist, (j, k)
        if best > tol:
            return ExtremalityWitness(basis, comps, pair, best, trial)
    return None
