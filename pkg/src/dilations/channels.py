"""Channel representations, dilations and channel-level predicates.

The canonical representation is the unnormalised Choi matrix

    J = sum_ij |i><j| (x) T(|i><j|)

with the *input* factor first. Complete positivity is ``J >= 0`` and trace
preservation is ``Tr_out J = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import matcore as mc
from .errors import DimensionError, ValidationError

DEFAULT_T_SAMPLES = (0.0, 0.5, -0.5, 1.0, -1.0, np.pi, -np.pi)


@dataclass
class VerificationReport:
    """Named residuals plus a verdict. Residuals are kept even when passing."""

    name: str
    residuals: dict
    tol: float
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "tol": self.tol,
                "residuals": {k: float(v) for k, v in self.residuals.items()},
                "witness": self.witness}


@dataclass(eq=False)
class Dilation:
    """A unitary ``U`` on system (x) environment together with an environment state."""

    U: np.ndarray
    omega_env: np.ndarray
    dim_sys: int
    dim_env: int
    tol: float = mc.ABS_TOL

    def __post_init__(self):
        self.U = mc.check_finite(self.U, "U")
        self.omega_env = mc.check_finite(self.omega_env, "omega_env")
        if self.dim_sys < 1 or self.dim_env < 1:
            raise ValidationError("dimensions must be positive")
        n = self.dim_sys * self.dim_env
        if self.U.shape != (n, n):
            raise ValidationError(
                f"U has shape {self.U.shape}, expected {(n, n)} = dim_sys*dim_env")
        if self.omega_env.shape != (self.dim_env, self.dim_env):
            raise ValidationError(
                f"omega_env has shape {self.omega_env.shape}, expected dim_env={self.dim_env}")
        mc.check_unitary(self.U, self.tol)
        mc.check_density(self.omega_env, self.tol, "omega_env")

    @property
    def dims(self) -> list[int]:
        return [self.dim_sys, self.dim_env]

    def with_env(self, omega_env: np.ndarray) -> "Dilation":
        return Dilation(self.U, omega_env, self.dim_sys, self.dim_env, self.tol)

    def evolve(self, rho_sys: np.ndarray) -> np.ndarray:
        """Joint output ``U (rho (x) omega_env) U^dag``."""
        return self.U @ np.kron(rho_sys, self.omega_env) @ mc.dagger(self.U)


@dataclass(eq=False)
class ChannelChoi:
    dim_in: int
    dim_out: int
    choi: np.ndarray

    def __post_init__(self):
        self.choi = mc.check_finite(self.choi, "choi")
        n = self.dim_in * self.dim_out
        if self.choi.shape != (n, n):
            raise DimensionError(f"Choi matrix has shape {self.choi.shape}, expected {(n, n)}")

    @property
    def blocks(self) -> np.ndarray:
        """``J`` as a tensor ``[i, a, j, c]`` with ``T(|i><j|)[a, c]``."""
        return self.choi.reshape(self.dim_in, self.dim_out, self.dim_in, self.dim_out)

    def cp_residual(self) -> float:
        lam = np.linalg.eigvalsh((self.choi + mc.dagger(self.choi)) / 2)[0]
        return max(0.0, -float(lam))

    def tp_residual(self) -> float:
        tr_out = mc.partial_trace(self.choi, [self.dim_in, self.dim_out], [0])
        return mc.residual(tr_out - np.eye(self.dim_in))

    def validate(self, tol: float = mc.ABS_TOL) -> "ChannelChoi":
        bad = []
        if mc.hermiticity_residual(self.choi) >= tol:
            bad.append("Hermitian Choi")
        if self.cp_residual() >= tol:
            bad.append("complete positivity")
        if self.tp_residual() >= tol:
            bad.append("trace preservation")
        if bad:
            raise ValidationError(f"not a channel: fails {', '.join(bad)}")
        return self

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return apply(self, x)


@dataclass(eq=False)
class MixedUnitaryDecomposition:
    probabilities: np.ndarray
    unitaries: list
    tol: float = mc.ABS_TOL

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        self.unitaries = [mc.check_finite(u, "U_i") for u in self.unitaries]
        if len(self.probabilities) != len(self.unitaries) or not len(self.unitaries):
            raise ValidationError("need one probability per unitary (and at least one term)")
        if np.any(self.probabilities < -self.tol):
            raise ValidationError("probabilities must be non-negative")
        if abs(self.probabilities.sum() - 1) >= self.tol:
            raise ValidationError(f"probabilities sum to {self.probabilities.sum()}, not 1")
        shapes = {u.shape for u in self.unitaries}
        if len(shapes) != 1:
            raise ValidationError(f"unitaries have inconsistent shapes {shapes}")
        for u in self.unitaries:
            mc.check_unitary(u, self.tol, "U_i")

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    def channel(self) -> ChannelChoi:
        return from_kraus([np.sqrt(max(p, 0.0)) * u
                           for p, u in zip(self.probabilities, self.unitaries)])

    def dilation(self) -> Dilation:
        """``U = sum_i U_i (x) |i><i|`` with ``omega_env = diag(p)``."""
        k = len(self.unitaries)
        U = sum(np.kron(u, mc.matrix_unit(k, i, i)) for i, u in enumerate(self.unitaries))
        return Dilation(U, np.diag(self.probabilities).astype(complex), self.dim, k)

    def split_nondegenerate(self, seed=0) -> "MixedUnitaryDecomposition":
        """Split every term in two so that all weights are pairwise distinct.

        Repeated unitaries are allowed, so the channel is unchanged while the
        diagonal environment state of :meth:`dilation` becomes non-degenerate.
        """
        rng = np.random.default_rng(seed)
        p = self.probabilities
        for _ in range(100):
            a = rng.uniform(0.2, 0.8, size=len(p))
            q = np.concatenate([p * a, p * (1 - a)])
            if np.min(np.diff(np.sort(q))) > 1e-6:
                return MixedUnitaryDecomposition(q, list(self.unitaries) * 2, self.tol)
        raise ValidationError("could not split weights into distinct values")


# ---------------------------------------------------------------------------
# constructors and conversions
# ---------------------------------------------------------------------------

def from_kraus(kraus: Sequence[np.ndarray]) -> ChannelChoi:
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    d_out, d_in = kraus[0].shape
    ks = np.stack(kraus)
    J = np.einsum("kai,kcj->iajc", ks, ks.conj()).reshape(d_in * d_out, d_in * d_out)
    return ChannelChoi(d_in, d_out, J)


def to_kraus(ch: ChannelChoi, tol: float = mc.ABS_TOL) -> list[np.ndarray]:
    """Kraus operators from the spectral decomposition of the Choi matrix."""
    w, v = np.linalg.eigh((ch.choi + mc.dagger(ch.choi)) / 2)
    if w[0] < -tol:
        raise ValidationError(f"Choi matrix has negative eigenvalue {w[0]:.3e}")
    out = []
    for lam, vec in zip(w[::-1], v.T[::-1]):
        if lam > tol:
            out.append(np.sqrt(lam) * vec.reshape(ch.dim_in, ch.dim_out).T)
    return out


def from_map(f: Callable[[np.ndarray], np.ndarray], dim_in: int) -> ChannelChoi:
    """Choi matrix of a linear map given as a Python function on matrices."""
    blocks = [[f(mc.matrix_unit(dim_in, i, j)) for j in range(dim_in)] for i in range(dim_in)]
    dim_out = blocks[0][0].shape[0]
    return ChannelChoi(dim_in, dim_out, np.block(blocks))


def identity_channel(d: int) -> ChannelChoi:
    return from_kraus([np.eye(d)])


def unitary_channel(U: np.ndarray) -> ChannelChoi:
    return from_kraus([U])


def dephasing_channel(d: int) -> ChannelChoi:
    """Complete dephasing in the computational basis."""
    return from_kraus([mc.matrix_unit(d, i, i) for i in range(d)])


def amplitude_damping(gamma: float) -> ChannelChoi:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return from_kraus([k0, k1])


def channel_of_dilation(dil: Dilation) -> ChannelChoi:
    """Choi matrix of ``rho -> Tr_env(U (rho (x) omega_env) U^dag)``."""
    ds, de = dil.dim_sys, dil.dim_env
    U = dil.U.reshape(ds, de, ds, de)
    J = np.einsum("abix,xy,cbjy->iajc", U, dil.omega_env, U.conj())
    return ChannelChoi(ds, ds, J.reshape(ds * ds, ds * ds))


def env_channel(dil: Dilation, rho_sys: np.ndarray) -> ChannelChoi:
    """The complementary map ``sigma -> Tr_sys(U (rho_sys (x) sigma) U^dag)`` on the environment."""
    ds, de = dil.dim_sys, dil.dim_env
    U = dil.U.reshape(ds, de, ds, de)
    J = np.einsum("abxi,xy,acyj->ibjc", U, rho_sys, U.conj())
    return ChannelChoi(de, de, J.reshape(de * de, de * de))


# ---------------------------------------------------------------------------
# application and predicates
# ---------------------------------------------------------------------------

def apply(T: ChannelChoi, x: np.ndarray) -> np.ndarray:
    """Apply the channel to any operator (the map is linear)."""
    x = np.asarray(x)
    if x.shape != (T.dim_in, T.dim_in):
        raise DimensionError(f"input has shape {x.shape}, channel expects dim {T.dim_in}")
    return np.einsum("ij,iajc->ac", x, T.blocks)


def channel_distance(t1: ChannelChoi, t2: ChannelChoi) -> float:
    if (t1.dim_in, t1.dim_out) != (t2.dim_in, t2.dim_out):
        raise DimensionError("channels act on different spaces")
    return mc.residual(t1.choi - t2.choi)


def _square(T: ChannelChoi):
    if T.dim_in != T.dim_out:
        raise DimensionError("operation requires equal input and output dimension")


def is_doubly_stochastic(T: ChannelChoi, tol: float = mc.ABS_TOL) -> VerificationReport:
    _square(T)
    r = mc.residual(apply(T, np.eye(T.dim_in)) - np.eye(T.dim_out))
    return VerificationReport("doubly_stochastic", {"unitality": r}, tol, r < tol)


def fixed_point_check(T: ChannelChoi, omega: np.ndarray,
                      tol: float = mc.ABS_TOL) -> VerificationReport:
    _square(T)
    r = mc.residual(apply(T, omega) - omega)
    return VerificationReport("fixed_point", {"fixed_point": r}, tol, r < tol)


def covariance_check(T: ChannelChoi, omega: np.ndarray,
                     t_samples: Sequence[float] = DEFAULT_T_SAMPLES,
                     tol: float = mc.ABS_TOL,
                     gap: float = mc.DEGENERACY_GAP) -> VerificationReport:
    """Time-translation covariance under ``omega**(it)`` on every matrix unit."""
    _square(T)
    d = T.dim_in
    J4 = T.blocks
    worst, worst_t = 0.0, None
    for t in t_samples:
        W = mc.matrix_power_it(omega, t, gap)
        lhs = np.einsum("ki,lj,kalc->ijac", W, W.conj(), J4)
        rhs = np.einsum("ab,ibjd,cd->ijac", W, J4, W.conj())
        r = float(np.max(np.linalg.norm(lhs - rhs, axis=(2, 3)))) / np.sqrt(d)
        if r > worst or worst_t is None:
            worst, worst_t = r, float(t)
    return VerificationReport("covariance", {"covariance": worst}, tol, worst < tol,
                              {"worst_t": worst_t})
