"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy`` arrays. Tensor factors are described by a
sequence of subsystem dimensions (``dims``) whose product must equal the
matrix dimension. Factor 0 is the leftmost (most significant) index, so
``np.kron(a, b)`` has ``dims == [a.shape[0], b.shape[0]]``.

All residuals in the package are Frobenius norms divided by the square root
of the matrix dimension, see :func:`residual`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy.special import entr

from .errors import DimensionError, ValidationError

ABS_TOL = 1e-9
DEGENERACY_GAP = 1e-8


@dataclass(frozen=True)
class ToleranceSpec:
    abs_tol: float = ABS_TOL
    degeneracy_gap: float = DEGENERACY_GAP

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.degeneracy_gap > 0):
            raise ValidationError("tolerances must be strictly positive")


def residual(m: np.ndarray) -> float:
    """Frobenius norm of ``m`` divided by sqrt of its row dimension."""
    m = np.asarray(m)
    return float(np.linalg.norm(m) / np.sqrt(m.shape[0]))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dimensions {dims}")
    m = np.asarray(m)
    n = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (n, n):
        raise DimensionError(f"matrix of shape {m.shape} does not factor as {dims}")
    return dims


def hermiticity_residual(m: np.ndarray) -> float:
    return residual(m - dagger(m))


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return float("inf")
    return residual(dagger(u) @ u - np.eye(u.shape[0]))


def is_unitary(u: np.ndarray, tol: float = ABS_TOL) -> bool:
    return unitarity_residual(u) < tol


def check_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValidationError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m


def check_unitary(u: np.ndarray, tol: float = ABS_TOL, name: str = "U") -> np.ndarray:
    u = check_finite(u, name)
    r = unitarity_residual(u)
    if not r < tol:
        raise ValidationError(f"{name} is not unitary (residual {r:.3e} >= {tol:.1e})")
    return u


def density_violations(rho: np.ndarray, tol: float = ABS_TOL) -> list[str]:
    """Return the list of density-matrix invariants ``rho`` fails."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return ["square"]
    if not np.all(np.isfinite(rho)):
        return ["finite"]
    bad = []
    if np.linalg.norm(rho - dagger(rho)) >= tol:
        bad.append("hermitian")
    if abs(np.trace(rho) - 1) >= tol:
        bad.append("unit trace")
    if np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0] <= -tol:
        bad.append("positive semidefinite")
    return bad


def check_density(rho: np.ndarray, tol: float = ABS_TOL, name: str = "state") -> np.ndarray:
    rho = check_finite(rho, name)
    bad = density_violations(rho, tol)
    if bad:
        raise ValidationError(f"{name} is not a density matrix: fails {', '.join(bad)}")
    return rho


# ---------------------------------------------------------------------------
# tensor structure
# ---------------------------------------------------------------------------

def tensor_product(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices, left factor most significant."""
    if not ops:
        raise ValueError("need at least one operand")
    return reduce(np.kron, (np.asarray(o) for o in ops))


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    The kept factors stay in their original order.
    """
    dims = check_dims(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep={keep} out of range for {n} factors")
    t = np.asarray(m).reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [k for k in keep] + [k + n for k in keep]
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return np.einsum(t, row + col, out).reshape(d_keep, d_keep)


def partial_transpose(m: np.ndarray, dims: Sequence[int], subsystem) -> np.ndarray:
    """Transpose the indices of the chosen factor(s) only."""
    dims = check_dims(m, dims)
    n = len(dims)
    subs = {int(subsystem)} if np.isscalar(subsystem) else {int(s) for s in subsystem}
    if any(s < 0 or s >= n for s in subs):
        raise DimensionError(f"subsystem {sorted(subs)} out of range for {n} factors")
    perm = list(range(2 * n))
    for s in subs:
        perm[s], perm[s + n] = s + n, s
    d = int(np.prod(dims))
    return np.asarray(m).reshape(dims + dims).transpose(perm).reshape(d, d)


def reshuffle(v: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    r"""Realignment ``R(V)_{(i,k),(j,l)} = V_{(i,j),(k,l)}`` on a split ``[d1, d2]``.

    The result has shape ``(d1**2, d2**2)``. For ``d1 == d2`` the map is an
    involution. Under this convention the swap operator is mapped to itself
    and the identity to the unnormalised maximally entangled projector.
    """
    dims = check_dims(v, dims)
    if len(dims) != 2:
        raise DimensionError(f"reshuffle needs a bipartite split, got {dims}")
    d1, d2 = dims
    return np.asarray(v).reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


# ---------------------------------------------------------------------------
# spectral functions
# ---------------------------------------------------------------------------

def hermitian_spectral(m: np.ndarray, tol: float = ABS_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix with a deterministic gauge.

    Eigenvalues come back in descending order. Each eigenvector's first
    component of non-negligible modulus is made real and positive.

    Raises:
        ValidationError: if ``m`` is not Hermitian within ``tol`` (relative to
            its norm when that exceeds one).
    """
    m = check_finite(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got {m.shape}")
    scale = max(1.0, float(np.linalg.norm(m)))
    if np.linalg.norm(m - dagger(m)) >= tol * scale:
        raise ValidationError("matrix is not Hermitian")
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    w, v = w[::-1], v[:, ::-1]
    for k in range(v.shape[1]):
        col = v[:, k]
        j = int(np.argmax(np.abs(col) > 1e-12 * np.abs(col).max()))
        v[:, k] = col * (abs(col[j]) / col[j])
    return w, v


def support_threshold(eigenvalues: np.ndarray, gap: float = DEGENERACY_GAP) -> float:
    return gap * max(float(np.max(eigenvalues)), 0.0)


def support_projector(omega: np.ndarray, gap: float = DEGENERACY_GAP) -> np.ndarray:
    w, v = hermitian_spectral(omega)
    on = w > support_threshold(w, gap)
    return v[:, on] @ dagger(v[:, on])


def _function_on_support(omega, f, gap):
    w, v = hermitian_spectral(omega)
    on = w > support_threshold(w, gap)
    return (v[:, on] * f(w[on])) @ dagger(v[:, on])


def matrix_power_it(omega: np.ndarray, t: float, gap: float = DEGENERACY_GAP) -> np.ndarray:
    """``omega**(i t)`` restricted to the support of ``omega`` (zero on the kernel)."""
    return _function_on_support(omega, lambda lam: np.exp(1j * t * np.log(lam)), gap)


def log_on_support(omega: np.ndarray, gap: float = DEGENERACY_GAP) -> np.ndarray:
    return _function_on_support(omega, np.log, gap)


def eigenvalue_clusters(w: np.ndarray, gap: float = DEGENERACY_GAP) -> list[np.ndarray]:
    """Group indices of descending eigenvalues ``w`` into near-degenerate clusters.

    Consecutive eigenvalues closer than ``gap * max|w|`` fall in one cluster.
    """
    w = np.asarray(w, dtype=float)
    thr = gap * max(float(np.max(np.abs(w))), 0.0)
    groups, start = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or abs(w[k - 1] - w[k]) > thr:
            groups.append(np.arange(start, k))
            start = k
    return groups


# ---------------------------------------------------------------------------
# entropies (natural logarithm)
# ---------------------------------------------------------------------------

def von_neumann_entropy(rho: np.ndarray) -> float:
    lam = np.clip(np.linalg.eigvalsh((rho + dagger(rho)) / 2), 0.0, None)
    return float(np.sum(entr(lam)))


def mutual_information(rho: np.ndarray, dims: Sequence[int], part: Iterable[int] = (0,)) -> float:
    """``H(X) + H(Y) - H(XY)`` where X are the factors in ``part`` and Y the rest.

    With two factors the default ``part`` gives I(A:B).
    """
    dims = check_dims(rho, dims)
    part = sorted(set(int(p) for p in part))
    rest = [k for k in range(len(dims)) if k not in part]
    if not part or not rest:
        raise DimensionError("mutual information needs a non-trivial bipartition")
    return (von_neumann_entropy(partial_trace(rho, dims, part))
            + von_neumann_entropy(partial_trace(rho, dims, rest))
            - von_neumann_entropy(rho))


def relative_entropy(rho: np.ndarray, sigma: np.ndarray, gap: float = DEGENERACY_GAP) -> float:
    """``Tr rho (log rho - log sigma)``; ``inf`` when supp(rho) is not inside supp(sigma)."""
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shapes differ: {rho.shape} vs {sigma.shape}")
    kernel = np.eye(sigma.shape[0]) - support_projector(sigma, gap)
    if np.real(np.trace(kernel @ rho)) > gap:
        return float("inf")
    return float(np.real(np.trace(rho @ (log_on_support(rho, gap) - log_on_support(sigma, gap)))))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _check_d(d):
    if int(d) != d or d < 1:
        raise ValidationError(f"dimension must be a positive integer, got {d}")
    return int(d)


def max_entangled_vector(d: int) -> np.ndarray:
    d = _check_d(d)
    return np.eye(d).reshape(d * d).astype(complex) / np.sqrt(d)


def max_entangled(d: int) -> np.ndarray:
    """Projector onto ``d**-1/2 sum_i |ii>``."""
    psi = max_entangled_vector(d)
    return np.outer(psi, psi.conj())


def swap(d: int, d2: int | None = None) -> np.ndarray:
    """Swap operator ``|a>|b> -> |b>|a>`` from ``C^d (x) C^d2`` to ``C^d2 (x) C^d``."""
    d = _check_d(d)
    d2 = d if d2 is None else _check_d(d2)
    s = np.zeros((d2 * d, d * d2), dtype=complex)
    for a in range(d):
        for b in range(d2):
            s[b * d + a, a * d2 + b] = 1
    return s


def haar_random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary from the QR factorisation of a Ginibre matrix."""
    d = _check_d(d)
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^dag / Tr`` with a ``d x rank`` Ginibre ``G``."""
    d = _check_d(d)
    rng = np.random.default_rng(seed)
    k = d if rank is None else _check_d(rank)
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_hermitian(d: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + dagger(g)) / 2


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1
    return e


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
