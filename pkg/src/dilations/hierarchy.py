"""Certificate-based placement of a channel in the doubly-stochastic hierarchy

    MU  <  CAT  <  EQ_DS  <  F  <  DS

(mixed unitary, catalytic, doubly-stochastic equilibrating = strongly
factorizable, factorizable, doubly stochastic). A class is only marked
``CERTIFIED_IN`` with a verified certificate attached; membership in F is
never refuted, and MU/CAT/EQ_DS are only refuted through a DS failure.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import matcore as mc
from .channels import (ChannelChoi, Dilation, MixedUnitaryDecomposition, channel_distance,
                       channel_of_dilation, is_doubly_stochastic, to_kraus)
from .errors import DimensionError, InternalConsistencyError, ValidationError
from .schur import SchurMatrix, build_schur_dilation
from .verify import catalytic_check

CLASSES = ("MU", "CAT", "EQ_DS", "F", "DS")


class Status(str, enum.Enum):
    CERTIFIED_IN = "CERTIFIED_IN"
    CERTIFIED_OUT = "CERTIFIED_OUT"
    UNKNOWN = "UNKNOWN"


@dataclass
class HierarchyReport:
    status: dict
    certificates: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self.check_consistency()

    def check_consistency(self):
        for k, c in enumerate(CLASSES):
            if self.status[c] is Status.CERTIFIED_IN:
                if any(self.status[s] is Status.CERTIFIED_OUT for s in CLASSES[k + 1:]):
                    raise InternalConsistencyError(f"{c} is IN but a superset is OUT")
                if c not in self.certificates:
                    raise InternalConsistencyError(f"{c} is IN without a certificate")
            if self.status[c] is Status.CERTIFIED_OUT:
                if any(self.status[s] is Status.CERTIFIED_IN for s in CLASSES[:k]):
                    raise InternalConsistencyError(f"{c} is OUT but a subset is IN")

    def to_dict(self) -> dict:
        return {"status": {c: self.status[c].value for c in CLASSES},
                "certificates": self.certificates, "notes": self.notes}


def _validate_certificate(cert, tol):
    if isinstance(cert, MixedUnitaryDecomposition):
        for u in cert.unitaries:
            mc.check_unitary(u, tol, "decomposition unitary")
        if abs(cert.probabilities.sum() - 1) >= tol or np.any(cert.probabilities < -tol):
            raise ValidationError("decomposition probabilities are not a distribution")
    elif isinstance(cert, Dilation):
        mc.check_unitary(cert.U, tol, "dilation unitary")
        mc.check_density(cert.omega_env, tol, "dilation environment state")
    else:
        raise ValidationError(f"unsupported certificate type {type(cert).__name__}")


def _schur_matrix_of(channel: ChannelChoi, tol: float):
    """``X`` if the channel is a real Schur multiplier, else ``None``."""
    n = channel.dim_in
    J4 = channel.blocks
    idx = np.arange(n)
    X = J4[idx[:, None], idx[:, None], idx[None, :], idx[None, :]].copy()
    rest = J4.copy()
    rest[idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = 0
    if np.max(np.abs(rest)) >= tol or np.max(np.abs(X.imag)) >= tol:
        return None
    try:
        return SchurMatrix(X.real, tol)
    except ValidationError:
        return None


def classify(channel: ChannelChoi, certificates: Iterable = (), tol: float = mc.ABS_TOL,
             construct: bool = True) -> HierarchyReport:
    """Place ``channel`` in the hierarchy using supplied and constructible certificates.

    With ``construct`` set, a rank-one Choi matrix yields a one-term mixed
    unitary decomposition and a real Schur multiplier yields its fermionic
    catalytic dilation.

    Raises:
        ValidationError: a certificate violates its own invariants.
    """
    if channel.dim_in != channel.dim_out:
        raise DimensionError("classification needs a square channel")
    certificates = list(certificates)
    for cert in certificates:
        _validate_certificate(cert, tol)

    status = {c: Status.UNKNOWN for c in CLASSES}
    certs, notes = {}, []
    ds = is_doubly_stochastic(channel, tol)
    if not ds.passed:
        for c in CLASSES:
            status[c] = Status.CERTIFIED_OUT
        certs["DS"] = ds.to_dict()
        return HierarchyReport(status, certs, notes)
    status["DS"] = Status.CERTIFIED_IN
    certs["DS"] = ds.to_dict()

    if construct:
        kraus = to_kraus(channel, tol)
        if len(kraus) == 1:
            try:
                certificates.append(MixedUnitaryDecomposition([1.0], kraus, tol=max(tol, 1e-8)))
                notes.append("constructed one-term decomposition from rank-one Choi matrix")
            except ValidationError:
                pass
        sx = _schur_matrix_of(channel, tol)
        if sx is not None:
            certificates.append(build_schur_dilation(sx, tol)[0])
            notes.append("constructed fermionic dilation of the Schur multiplier")

    def mark(cls, cert):
        if cls not in certs:
            status[cls] = Status.CERTIFIED_IN
            certs[cls] = cert

    for cert in certificates:
        if isinstance(cert, MixedUnitaryDecomposition):
            if cert.dim != channel.dim_in:
                notes.append("decomposition dimension mismatch; ignored")
                continue
            dist = channel_distance(cert.channel(), channel)
            if dist < tol:
                mark("MU", {"type": "mixed_unitary", "terms": len(cert.unitaries),
                            "channel_distance": dist})
            else:
                notes.append(f"decomposition does not reproduce the channel ({dist:.3e})")
        else:
            if cert.dim_sys != channel.dim_in:
                notes.append("dilation dimension mismatch; ignored")
                continue
            dist = channel_distance(channel_of_dilation(cert), channel)
            if not dist < tol:
                notes.append(f"dilation does not reproduce the channel ({dist:.3e})")
                continue
            cat = catalytic_check(cert, tol)
            if cat.passed:
                mark("CAT", {"type": "catalytic_dilation", "channel_distance": dist,
                             **cat.to_dict()["residuals"]})
            comm = mc.residual(mc.commutator(cert.U, np.kron(np.eye(cert.dim_sys), cert.omega_env)))
            if comm < tol:
                mark("EQ_DS", {"type": "strongly_factorizable_dilation",
                               "channel_distance": dist, "commutator": comm})

    for k, c in enumerate(CLASSES):
        if status[c] is Status.CERTIFIED_IN:
            for sup in CLASSES[k + 1:]:
                mark(sup, {"type": "implied", "by": c})
    if status["EQ_DS"] is not Status.CERTIFIED_IN:
        notes.append("F is only certified through strong factorizability")
    return HierarchyReport(status, certs, notes)
