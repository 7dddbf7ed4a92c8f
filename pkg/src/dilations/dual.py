"""Correspondence between catalytic unitaries and dual-unitary operators.

A unitary ``U`` on A (x) B with ``d_A == d_B`` has a unitary partial transpose
on A exactly when ``U S`` is dual-unitary, ``S`` being the swap. The
realignment convention is the one of :func:`dilations.matcore.reshuffle`.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import matcore as mc
from .channels import VerificationReport
from .errors import DimensionError, NotCatalyticUnitaryError, PreconditionError


def realign(v: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Realignment of ``V: H1 (x) H2 -> H3 (x) H4``.

    ``dims`` is either ``[d1, d2]`` for a square bipartite operator or
    ``[d3, d4, d1, d2]`` (output factors then input factors). The result maps
    ``H4 (x) H2 -> H3 (x) H1`` with entries ``R[(i,k),(j,l)] = V[(i,j),(k,l)]``.
    """
    dims = [int(d) for d in dims]
    if len(dims) == 2:
        return mc.reshuffle(v, dims)
    if len(dims) != 4:
        raise DimensionError(f"expected 2 or 4 dimensions, got {dims}")
    o1, o2, i1, i2 = dims
    v = np.asarray(v)
    if v.shape != (o1 * o2, i1 * i2):
        raise DimensionError(f"operator of shape {v.shape} does not match {dims}")
    return v.reshape(o1, o2, i1, i2).transpose(0, 2, 1, 3).reshape(o1 * i1, o2 * i2)


def is_dual_unitary(v: np.ndarray, dims: Sequence[int], tol: float = mc.ABS_TOL) -> VerificationReport:
    r = realign(v, dims)
    if r.shape[0] != r.shape[1]:
        raise DimensionError(f"realigned operator is {r.shape}; dual-unitarity needs it square")
    res = mc.unitarity_residual(r)
    uni = mc.unitarity_residual(np.asarray(v)) if v.shape[0] == v.shape[1] else float("inf")
    return VerificationReport("dual_unitary", {"realigned_unitarity": res, "unitarity": uni},
                              tol, res < tol and uni < tol)


def _square_dims(dims):
    dims = [int(d) for d in dims]
    if len(dims) != 2 or dims[0] != dims[1]:
        raise DimensionError(f"the correspondence is exposed for square splits only, got {dims}")
    return dims[0]


def catalytic_to_dual(U: np.ndarray, dims: Sequence[int], tol: float = mc.ABS_TOL) -> np.ndarray:
    """``V = U S`` for a unitary whose partial transpose on the first factor is unitary."""
    d = _square_dims(dims)
    mc.check_unitary(U, tol)
    r = mc.unitarity_residual(mc.partial_transpose(U, [d, d], 0))
    if not r < tol:
        raise NotCatalyticUnitaryError(f"partial transpose is not unitary (residual {r:.3e})")
    return np.asarray(U) @ mc.swap(d)


def dual_to_catalytic(V: np.ndarray, dims: Sequence[int], tol: float = mc.ABS_TOL) -> np.ndarray:
    """``U = V S`` for a dual-unitary ``V``; inverse of :func:`catalytic_to_dual`."""
    d = _square_dims(dims)
    rep = is_dual_unitary(V, [d, d], tol)
    if not rep.passed:
        raise PreconditionError(f"operator is not dual-unitary: {rep.residuals}")
    return np.asarray(V) @ mc.swap(d)
