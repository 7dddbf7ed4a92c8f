"""Command-line front end.

Exit codes: 0 success, 1 a verification failed (witness JSON on stdout),
2 bad input.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import jsonio, matcore as mc
from .channels import channel_of_dilation, is_doubly_stochastic
from .dual import is_dual_unitary
from .errors import (DimensionError, DilationError, NotRobustError, NotThermalError,
                     PreconditionError, ValidationError)
from .hierarchy import classify
from .schur import (build_schur_dilation, extremality_witness_search, factorizable_decompose,
                    random_schur_matrix)
from .thermal import (equilibrating_to_thermal, gibbs, robust_catalysis_reduce,
                      thermal_operation_check)
from .verify import (catalytic_check, equilibrating_check, multipartite_equilibrium_check,
                     structural_catalytic_check)

MAX_BLOCK = 8


class InputError(Exception):
    pass


def _block(m):
    m = np.asarray(m)
    if max(m.shape) <= MAX_BLOCK:
        return jsonio.matrix_to_json(m)
    return {"truncated": True, "rows": m.shape[0], "cols": m.shape[1]}


def _witness(name, value, tol, block=None):
    w = {"residual": name, "value": float(value), "threshold": tol}
    if block is not None:
        w["block"] = _block(block)
    return w


def _emit(payload, passed, args, witness=None):
    payload = dict(payload)
    payload["passed"] = bool(passed)
    if witness is not None and not passed:
        payload["witness"] = witness
    print(jsonio.dump(payload))
    return 0 if passed else 1


def _write(obj, path):
    text = jsonio.dump(obj, path)
    if path is None:
        print(text)


def _matrix(path):
    return jsonio.matrix_from_json(jsonio.load(path))


def _dilation(path, tol):
    return jsonio.dilation_from_json(jsonio.load(path), tol)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _catalytic_one(path, tol):
    dil = _dilation(path, tol)
    rep = catalytic_check(dil, tol)
    srep, _ = structural_catalytic_check(dil, tol)
    return dil, rep, srep


def cmd_verify_catalytic(args):
    if args.batch:
        files = sorted(Path(args.batch).glob("*.json"))
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda p: _catalytic_one(p, args.tol), files))
        rows = [{"file": p.name, "passed": rep.passed, "marginal": rep.marginal_residual,
                 "structural_passed": srep.passed} for p, (_, rep, srep) in zip(files, results)]
        return _emit({"command": "verify catalytic", "results": rows},
                     all(r["passed"] for r in rows), args)
    dil, rep, srep = _catalytic_one(args.dilation, args.tol)
    ds, de = dil.dim_sys, dil.dim_env
    joint = np.kron(np.eye(ds), dil.U) @ np.kron(mc.max_entangled(ds), dil.omega_env)
    joint = joint @ mc.dagger(np.kron(np.eye(ds), dil.U))
    diff = mc.partial_trace(joint, [ds, ds, de], [0, 2]) - np.kron(np.eye(ds) / ds, dil.omega_env)
    return _emit({"command": "verify catalytic", "report": rep.to_dict(),
                  "structural": srep.to_dict()},
                 rep.passed, args, _witness("marginal_residual", rep.marginal_residual, args.tol, diff))


def cmd_verify_equilibrating(args):
    dil = _dilation(args.dilation, args.tol)
    omega = _matrix(args.state)
    rep = equilibrating_check(dil, omega, args.tol)
    sigma = dil.evolve(omega)
    if rep.env_preservation_residual >= rep.fixed_point_residual:
        w = _witness("env_preservation_residual", rep.env_preservation_residual, args.tol,
                     mc.partial_trace(sigma, dil.dims, [1]) - dil.omega_env)
    else:
        w = _witness("fixed_point_residual", rep.fixed_point_residual, args.tol,
                     mc.partial_trace(sigma, dil.dims, [0]) - omega)
    return _emit({"command": "verify equilibrating", "report": rep.to_dict()}, rep.passed, args, w)


def cmd_verify_thermal(args):
    dil = _dilation(args.dilation, args.tol)
    hs, he = _matrix(args.h_sys), _matrix(args.h_env)
    rep = thermal_operation_check(dil, hs, he, args.beta, args.tol)
    name = max(("gibbs_environment", "energy_conservation"), key=lambda k: rep.residuals[k])
    h_tot = np.kron(hs, np.eye(dil.dim_env)) + np.kron(np.eye(dil.dim_sys), he)
    block = (mc.commutator(dil.U, h_tot) if name == "energy_conservation"
             else dil.omega_env - gibbs(he, args.beta)[0])
    return _emit({"command": "verify thermal", "beta": args.beta, "report": rep.to_dict()},
                 rep.passed, args, _witness(name, rep.residuals[name], args.tol, block))


def cmd_verify_robust(args):
    U = _matrix(args.unitary)
    oa, tc, ob, oc = (_matrix(p) for p in (args.omega_a, args.tau_c, args.omega_b, args.omega_c))
    try:
        red = robust_catalysis_reduce(U, oa, tc, ob, oc, args.tol)
    except NotRobustError as exc:
        return _emit({"command": "verify robust", "error": str(exc)}, False, args,
                     _witness("catalyst_basis", exc.witness, args.tol))
    except NotThermalError as exc:
        return _emit({"command": "verify robust", "error": str(exc)}, False, args,
                     _witness("premise_commutator", float("nan"), args.tol))
    h_sys, h_env, restricted = equilibrating_to_thermal(red.dilation, oa, args.beta, args.tol)
    therm = thermal_operation_check(restricted, h_sys, h_env, args.beta, args.tol)
    if args.out:
        jsonio.dump(jsonio.dilation_to_json(red.dilation), args.out)
    passed = red.report.passed and therm.passed
    return _emit({"command": "verify robust", "beta": args.beta, "report": red.report.to_dict(),
                  "thermal": therm.to_dict()}, passed, args,
                 _witness("channel_distance", red.report.residuals["channel_distance"], args.tol))


def cmd_verify_dual(args):
    V = _matrix(args.unitary)
    rep = is_dual_unitary(V, args.dims, args.tol)
    return _emit({"command": "verify dual", "report": rep.to_dict()}, rep.passed, args,
                 _witness("realigned_unitarity", rep.residuals["realigned_unitarity"], args.tol))


def cmd_verify_multipartite(args):
    U = _matrix(args.unitary)
    states = [_matrix(p) for p in args.states]
    rep = multipartite_equilibrium_check(U, states, tol=args.tol)
    k = int(np.argmax(rep.marginal_residuals))
    return _emit({"command": "verify multipartite", "report": rep.to_dict()}, rep.passed, args,
                 _witness(f"marginal_{k}", rep.marginal_residuals[k], args.tol))


# ---------------------------------------------------------------------------
# build / decompose / search / classify / random
# ---------------------------------------------------------------------------

def cmd_build_schur(args):
    X = jsonio.schur_from_json(jsonio.load(args.matrix), args.tol)
    dil, rep = build_schur_dilation(X, args.tol)
    _write(jsonio.dilation_to_json(dil), args.out)
    if args.out:
        print(jsonio.dump({"command": "build schur", "report": rep.to_dict()}))
    return 0


def cmd_build_mixed_unitary(args):
    dec = jsonio.decomposition_from_json(jsonio.load(args.decomposition), args.tol)
    if args.nondegenerate:
        dec = dec.split_nondegenerate(args.seed)
    _write(jsonio.dilation_to_json(dec.dilation()), args.out)
    return 0


def cmd_build_gibbs(args):
    rho, spec = gibbs(_matrix(args.hamiltonian), args.beta)
    _write(jsonio.matrix_to_json(rho), args.out)
    if args.out:
        print(jsonio.dump({"command": "build gibbs", "beta": args.beta, "Z": spec.Z}))
    return 0


def cmd_decompose_factorizable(args):
    dil = _dilation(args.dilation, args.tol)
    basis = _matrix(args.basis) if args.basis else np.eye(dil.dim_env)
    comps = factorizable_decompose(dil, basis, args.tol)
    avg = sum(c.choi for c in comps) / len(comps)
    target = channel_of_dilation(dil).choi
    out = {"command": "decompose factorizable",
           "average_residual": mc.residual(avg - target),
           "unitality_residuals": [is_doubly_stochastic(c, args.tol).residuals["unitality"]
                                   for c in comps],
           "components": [jsonio.channel_to_json(c) for c in comps]}
    _write(out, args.out)
    return 0


def cmd_search_extremality(args):
    dil = _dilation(args.dilation, args.tol)
    w = extremality_witness_search(dil, args.bases, args.seed, args.tol)
    if w is None:
        out = {"command": "search extremality", "result": "UNKNOWN", "bases_tried": args.bases}
    else:
        out = {"command": "search extremality", "result": "NOT_EXTREMAL", "trial": w.trial,
               "pair": list(w.pair), "distance": w.distance,
               "basis": jsonio.matrix_to_json(w.basis), "weights": w.weights.tolist(),
               "components": [jsonio.channel_to_json(c) for c in w.components]}
    _write(out, args.out)
    return 0


def _certificate(obj, tol):
    if "terms" in obj:
        return jsonio.decomposition_from_json(obj, tol)
    if "unitary" in obj and "env_state" in obj:
        return jsonio.dilation_from_json(obj, tol)
    raise ValidationError("certificate is neither a decomposition nor a dilation")


def cmd_classify(args):
    certs = [_certificate(jsonio.load(p), args.tol) for p in args.certificate or []]
    if args.channel:
        channel = jsonio.channel_from_json(jsonio.load(args.channel)).validate(args.tol)
    elif args.dilation:
        dil = _dilation(args.dilation, args.tol)
        channel = channel_of_dilation(dil)
        certs.append(dil)
    else:
        raise InputError("classify needs --channel or --dilation")
    rep = classify(channel, certs, args.tol, construct=not args.no_construct)
    _write({"command": "classify", **rep.to_dict()}, args.out)
    return 0


def cmd_random(args):
    if args.kind == "unitary":
        obj = jsonio.matrix_to_json(mc.haar_random_unitary(args.dim, args.seed))
    elif args.kind == "density":
        obj = jsonio.matrix_to_json(mc.random_density(args.dim, args.seed, args.rank))
    else:
        obj = jsonio.schur_to_json(random_schur_matrix(args.n, args.rank or 2, args.seed))
    _write(obj, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dilations",
                                     description="Construct, verify and classify channel dilations.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify").add_subparsers(dest="what", required=True)
    p = verify.add_parser("equilibrating")
    p.add_argument("--dilation", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_verify_equilibrating)
    p = verify.add_parser("catalytic")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dilation")
    g.add_argument("--batch")
    p.set_defaults(func=cmd_verify_catalytic)
    p = verify.add_parser("thermal")
    p.add_argument("--dilation", required=True)
    p.add_argument("--h-sys", required=True)
    p.add_argument("--h-env", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_verify_thermal)
    p = verify.add_parser("robust")
    for name in ("--unitary", "--omega-a", "--tau-c", "--omega-b", "--omega-c"):
        p.add_argument(name, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_verify_robust)
    p = verify.add_parser("dual")
    p.add_argument("--unitary", required=True)
    p.add_argument("--dims", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_verify_dual)
    p = verify.add_parser("multipartite")
    p.add_argument("--unitary", required=True)
    p.add_argument("--states", nargs="+", required=True)
    p.set_defaults(func=cmd_verify_multipartite)
    for q in verify.choices.values():
        _common(q)

    build = sub.add_parser("build").add_subparsers(dest="what", required=True)
    p = build.add_parser("schur")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_build_schur)
    p = build.add_parser("mixed-unitary")
    p.add_argument("--decomposition", required=True)
    p.add_argument("--nondegenerate", action="store_true")
    p.set_defaults(func=cmd_build_mixed_unitary)
    p = build.add_parser("gibbs")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_build_gibbs)
    for q in build.choices.values():
        _common(q)

    p = sub.add_parser("decompose").add_subparsers(dest="what", required=True).add_parser("factorizable")
    p.add_argument("--dilation", required=True)
    p.add_argument("--basis")
    _common(p)
    p.set_defaults(func=cmd_decompose_factorizable)

    p = sub.add_parser("search").add_subparsers(dest="what", required=True).add_parser("extremality")
    p.add_argument("--dilation", required=True)
    p.add_argument("--bases", type=int, default=32)
    _common(p)
    p.set_defaults(func=cmd_search_extremality)

    p = sub.add_parser("classify")
    p.add_argument("--channel")
    p.add_argument("--dilation")
    p.add_argument("--certificate", action="append")
    p.add_argument("--no-construct", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_classify)

    rnd = sub.add_parser("random").add_subparsers(dest="kind", required=True)
    for kind in ("unitary", "density", "schur"):
        p = rnd.add_parser(kind)
        if kind == "schur":
            p.add_argument("--n", type=int, required=True)
        else:
            p.add_argument("--dim", type=int, required=True)
        p.add_argument("--rank", type=int, default=None)
        _common(p)
        p.set_defaults(func=cmd_random)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, DimensionError, PreconditionError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DilationError as exc:
        print(jsonio.dump({"command": args.command, "passed": False,
                           "witness": {"error": type(exc).__name__, "message": str(exc)}}))
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
