"""Command-line front end.

    acmc validate   --structure S.json
    acmc decompose  --input L.json --structure S.json [--tol]
    acmc classify   --input L.json --structure S.json [--tol] [--i k]
    acmc dims       --n N
    acmc transform  --input params.json --structure S.json
    acmc subgroup   --input params.json --structure S.json [--i k]
    acmc chart-demo DEMO --n N --seed K [--fd-step h] [--tol]
    acmc verify     --n N --seed K

Reports are JSON (stdout, or --output). Exit status: 0 success, 1 a check
or classification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import chart, io, suites
from .errors import AcmError, SchemaError
from .lee import subgroup_membership, transform_structure
from .split import CLOSED_CLASSES, DEFAULT_TOL, KILLING_CLASSES, decompose, omega_membership, subspace_dims
from .structure import validate

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEMOS = ("cosymplectic", "deformation", "vertical", "killing")


class InputError(Exception):
    pass


def _default_tol(fallback: float) -> float:
    env = os.environ.get("ACMC_TOL")
    if env is None:
        return fallback
    try:
        tol = float(env)
    except ValueError:
        raise InputError(f"ACMC_TOL is not a number: {env!r}")
    if not tol > 0:
        raise InputError("ACMC_TOL must be positive")
    return tol


def _positive(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acmc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, *flags, **kw):
        p = sub.add_parser(name, **kw)
        if "input" in flags:
            p.add_argument("--input", required=True)
        if "structure" in flags:
            p.add_argument("--structure", required=True)
        if "n" in flags:
            p.add_argument("--n", type=int, required=True)
        if "seed" in flags:
            p.add_argument("--seed", type=int, default=0)
        if "i" in flags:
            p.add_argument("--i", type=int, choices=range(1, 10))
        p.add_argument("--tol", type=_positive)
        p.add_argument("--output")
        return p

    add("validate", "structure", help="residuals of the structure axioms")
    add("decompose", "input", "structure", help="nine-component decomposition of a (0,2)-tensor")
    add("classify", "input", "structure", "i", help="Omega-classification of nabla(theta)")
    add("dims", "n", help="dimensions of the nine subspaces")
    add("transform", "input", "structure", help="apply c(u, v) to a structure")
    add("subgroup", "input", "structure", "i", help="membership in G1, G1^0, G1i^0")
    demo = add("chart-demo", "n", "seed", help="classify points of a built-in chart")
    demo.add_argument("demo", choices=DEMOS)
    demo.add_argument("--fd-step", type=_positive, default=chart.DEFAULT_STEP)
    add("verify", "n", "seed", help="run the property suites")
    return parser


def _read(path):
    try:
        return io.load_json(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    except SchemaError as exc:
        raise InputError(f"{path}: {exc}")


def _load(path, parse, *args):
    doc = _read(path)
    try:
        return parse(doc, *args)
    except SchemaError as exc:
        raise InputError(f"{path}: {exc}")


def _floats(xs):
    return [float(x) for x in xs]


def cmd_validate(args):
    S = _load(args.structure, io.parse_structure)
    report = validate(S, args.tol or _default_tol(1e-10))
    return {"command": "validate", "ok": report.ok, "tol": report.tol,
            "residuals": report.residuals}, report.ok


def _decomposition_doc(rep):
    return {
        "signature": sorted(rep.signature),
        "norms": _floats(rep.norms),
        "norm": rep.norm,
        "reconstruction_residual": rep.reconstruction_residual,
        "tol": rep.tol,
        "components": [c.tolist() for c in rep.components],
    }


def cmd_decompose(args):
    S = _load(args.structure, io.parse_structure)
    L = _load(args.input, io.parse_bilinear, S.dim)
    rep = decompose(S, L, args.tol or _default_tol(DEFAULT_TOL))
    return {"command": "decompose", **_decomposition_doc(rep)}, True


def cmd_classify(args):
    S = _load(args.structure, io.parse_structure)
    L = _load(args.input, io.parse_bilinear, S.dim)
    rep = decompose(S, L, args.tol or _default_tol(DEFAULT_TOL))
    members = omega_membership(rep.signature)
    doc = {
        "command": "classify",
        "signature": sorted(rep.signature),
        "norms": _floats(rep.norms),
        "omega_membership": members,
        "closed": rep.signature <= CLOSED_CLASSES,
        "killing": rep.signature <= KILLING_CLASSES,
    }
    ok = True
    if args.i is not None:
        ok = args.i in members
        doc["requested_class"] = args.i
        doc["in_requested_class"] = ok
    return doc, ok


def cmd_dims(args):
    if args.n < 1:
        raise InputError("--n must be >= 1")
    dims = subspace_dims(args.n)
    return {"command": "dims", "n": args.n, "dims": list(dims), "total": sum(dims)}, True


def cmd_transform(args):
    S = _load(args.structure, io.parse_structure)
    p, _ = _load(args.input, io.parse_params, S.dim)
    T = transform_structure(S, p)
    report = validate(T, args.tol or _default_tol(1e-10))
    return {"command": "transform", "structure": io.serialize_structure(T),
            "validation": report.residuals, "ok": report.ok}, report.ok


def cmd_subgroup(args):
    S = _load(args.structure, io.parse_structure)
    p, L = _load(args.input, io.parse_params, S.dim)
    if L is None:
        raise InputError(f"{args.input}: /: missing field 'L_dvphi'")
    m = subgroup_membership(S, p, L, args.tol or _default_tol(DEFAULT_TOL))
    doc = {"command": "subgroup", "in_G1": m.in_G1, "in_G1_0": m.in_G1_0,
           "G1i_indices": sorted(m.G1i_indices), "du_norm": m.du_norm, "dv_xi": m.dv_xi,
           "signature": sorted(m.signature)}
    ok = True
    if args.i is not None:
        ok = args.i in m.G1i_indices
        doc["in_requested_subgroup"] = ok
    return doc, ok


def _demo_field(name, n, step):
    base = chart.cosymplectic_chart(n, step)
    zero = lambda q: 0.0
    if name == "cosymplectic":
        return base
    if name == "deformation":
        _, c = suites.deformation_cases(n)[0]
        return chart.conformal_deform_field(base, zero, lambda q: 0.5 * q @ c @ q)
    if name == "vertical":
        # dv(xi) != 0: still W1, Lee form no longer closed
        return chart.conformal_deform_field(base, zero, lambda q: 0.3 * q[0] * q[-1])
    raise ValueError(name)


def cmd_chart_demo(args):
    if args.n < 2:
        raise InputError("chart demos need --n >= 2")
    tol = args.tol or _default_tol(chart.CHART_TOL)
    rng = np.random.default_rng(args.seed)
    points = []
    if args.demo == "killing":
        field = chart.cosymplectic_chart(args.n, args.fd_step)
        d = field.dim

        def rot(q):
            out = np.zeros(d)
            out[0], out[1] = q[1], -q[0]
            return out

        for _ in range(3):
            p = rng.uniform(-1, 1, d)
            S = field(p)
            L = chart.nabla_covector(rot, chart.christoffel(field.metric_field(), p, args.fd_step), p,
                                     args.fd_step)
            sig = decompose(S, L, tol).signature
            points.append({"point": p.tolist(), "signature": sorted(sig),
                           "killing": sig <= KILLING_CLASSES})
        ok = all(pt["killing"] for pt in points)
    else:
        field = _demo_field(args.demo, args.n, args.fd_step)
        for _ in range(3):
            p = rng.uniform(-1, 1, field.dim)
            pc = chart.classify_point(field, p, tol=tol)
            points.append({"point": p.tolist(), "label": pc.label, "signature": sorted(pc.signature),
                           "F_norm": pc.F_norm, "w1_residual": pc.w1_residual,
                           "dtheta_norm": pc.dtheta_norm, "hdtheta_norm": pc.hdtheta_norm,
                           "component_norms": _floats(pc.component_norms),
                           "theta": pc.theta.tolist()})
        ok = all(pt["label"] != "not-W1" for pt in points)
    return {"command": "chart-demo", "demo": args.demo, "n": args.n, "seed": args.seed,
            "tol": tol, "fd_step": args.fd_step, "points": points}, ok


def cmd_verify(args):
    if args.n < 1:
        raise InputError("--n must be >= 1")
    checks = suites.run_all(args.n, args.seed)
    failed = [c.name for c in checks if not c.passed]
    return {"command": "verify", "n": args.n, "seed": args.seed,
            "checks": [c.as_dict() for c in checks], "failed": failed,
            "passed": len(checks) - len(failed), "total": len(checks)}, not failed


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "classify": cmd_classify,
    "dims": cmd_dims,
    "transform": cmd_transform,
    "subgroup": cmd_subgroup,
    "chart-demo": cmd_chart_demo,
    "verify": cmd_verify,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        doc, ok = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"acmc: error: {exc}", file=stderr)
        return EXIT_INPUT
    except AcmError as exc:
        print(f"acmc: error: {exc}", file=stderr)
        return EXIT_INPUT
    text = io.dumps(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if not ok:
        print(f"acmc: {args.command}: check failed", file=stderr)
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
