"""``qgeom`` command-line interface.

Exit codes: 0 success, 1 domain or input error (JSON on stderr), 2 failed
invariant suite, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import composite, flows, qubit
from .basis import gellmann_basis
from .errors import QGeomError
from .io import dumps, load_json, load_matrix, matrix_to_json
from .selftest import kahler_check, run_selftest
from .states import (
    RANK_RTOL,
    STATE_TOL,
    purity,
    purity_bounds,
    r_squared,
    rank_of,
    spectrum_class,
    validate_state,
    von_neumann_entropy,
)

EXIT_OK, EXIT_DOMAIN, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2, 64
QUBIT_FIELDS = {f"{name}{j}": (name, j) for name in ("L", "Ytilde", "Y") for j in (1, 2, 3)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats3(s: str) -> np.ndarray:
    try:
        x = np.array([float(p) for p in s.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {s!r}")
    if x.shape != (3,):
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {s!r}")
    return x


# -- subcommands ------------------------------------------------------------

def cmd_basis(args) -> int:
    B = gellmann_basis(args.n)

    def nonzero(T):
        idx = np.argwhere(np.abs(T) > 1e-14)
        return [[int(j) + 1, int(k) + 1, int(l) + 1, float(T[j, k, l])] for j, k, l in idx]

    report = {
        "config": {"n": args.n},
        "dim": B.dim,
        "matrices": [matrix_to_json(h) for h in B.h],
        "c_nonzero": nonzero(B.c),
        "d_nonzero": nonzero(B.d),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    rho = validate_state(load_matrix(args.state), args.state_tol)
    cls = spectrum_class(rho, args.rank_tol)
    bounds = purity_bounds(rho.shape[0], max(cls.rank, 1))
    report = {
        "config": {"state": args.state, "rank_tol": args.rank_tol, "state_tol": args.state_tol},
        "n": rho.shape[0],
        "rank": cls.rank,
        "purity": purity(rho),
        "entropy": von_neumann_entropy(rho),
        "r2": r_squared(rho),
        "eigenvalues": cls.eigenvalues,
        "multiplicities": list(cls.multiplicities),
        "purity_bounds": bounds._asdict(),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_flow(args) -> int:
    rho = validate_state(load_matrix(args.state))
    spec = flows.FlowSpec.from_dict(load_json(args.spec), n=rho.shape[0])
    if spec.n != rho.shape[0]:
        raise QGeomError(f"generators are {spec.n}x{spec.n} but the state is {rho.shape[0]}x{rho.shape[0]}")
    traj = flows.integrate(spec, rho)
    if args.out:
        traj.to_csv(args.out)
    else:
        traj.to_csv(sys.stdout)
    return EXIT_OK


def cmd_kahler_check(args) -> int:
    report = kahler_check(args.n, args.samples, args.seed, args.threads)
    _emit(dumps(report), args.out)
    if not report["passed"]:
        print(f"invariant failed: {', '.join(report['failing'])}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _qubit_field(name: str, j: int):
    fn = {"L": qubit.qubit_L, "Ytilde": qubit.qubit_Ytilde, "Y": qubit.qubit_pseudo_gradient}[name]

    def fld(rho):
        v = fn(j, qubit.bloch_coords(rho))
        return np.einsum("j,jab->ab", v, qubit.PAULI) / 2

    return fld


def cmd_qubit_demo(args) -> int:
    name, j = QUBIT_FIELDS[args.field]
    rho0 = qubit.bloch_state(args.start)
    traj = flows.rk4_integrate(_qubit_field(name, j), rho0, args.t, args.dt, args.record_every)
    lines = ["t,x1,x2,x3,r,purity"]
    for t, s in zip(traj.times, traj.states):
        x = qubit.bloch_coords(s)
        row = [t, *x, np.linalg.norm(x), purity(s)]
        lines.append(",".join(repr(float(v) + 0.0) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


ENTANGLE_TESTS = ("ball", "ppt", "product", "abrank", "schmidt", "absolute")


def cmd_entangle(args) -> int:
    tests = [t.strip() for t in args.tests.split(",") if t.strip()]
    unknown = sorted(set(tests) - set(ENTANGLE_TESTS))
    if unknown:
        raise UsageError(f"unknown tests {unknown}; choose from {', '.join(ENTANGLE_TESTS)}")
    dims = composite.parse_dims(args.dims)
    rho = validate_state(load_matrix(args.state))
    report = {"config": {"state": args.state, "dims": list(dims), "tests": tests,
                         "ppt_tol": args.ppt_tol, "product_tol": args.product_tol}}
    N = dims[0] * dims[1]
    for t in tests:
        if t == "ball":
            # rank k implies purity >= 1/k, so purity <= 1/(N-1) forces rank N
            report["ball"] = {"certified_separable": composite.separable_ball_test(rho, dims),
                              "purity": purity(rho), "bound": 1.0 / (N - 1) if N > 1 else 1.0,
                              "rank": rank_of(rho)}
        elif t == "ppt":
            ok, lam = composite.ppt_test(rho, dims, args.ppt_tol)
            report["ppt"] = {"ppt": ok, "min_eigenvalue": lam}
        elif t == "product":
            report["product"] = {"is_product": composite.is_product(rho, dims, args.product_tol),
                                 "defect": composite.product_defect(rho, dims)}
        elif t == "abrank":
            if composite.is_product(rho, dims, args.product_tol):
                report["abrank"] = list(composite.ab_rank(rho, dims, args.product_tol))
            else:
                report["abrank"] = None
        elif t == "schmidt":
            w, V = np.linalg.eigh(rho)
            if w[-1] < 1 - RANK_RTOL:
                report["schmidt"] = None
            else:
                sd = composite.schmidt_rank(V[:, -1], dims)
                report["schmidt"] = {"rank": sd.rank, "coefficients": sd.coefficients}
        elif t == "absolute":
            if N == 4:
                report["absolute"] = composite.absolutely_separable_2q(np.linalg.eigvalsh(rho))
            else:
                report["absolute"] = None
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    only = [c.strip() for c in args.criteria.split(",")] if args.criteria else None
    report = run_selftest(args.seed, only)
    _emit(dumps(report), args.out)
    for key, res in report["criteria"].items():
        status = "PASS" if res["passed"] else "FAIL"
        extra = "" if res["passed"] else f" ({', '.join(res['failing'])})"
        print(f"{status} {key}{extra}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_INVARIANT


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgeom", description="Geometry of finite-dimensional quantum states.")
    p.add_argument("-v", "--verbose", action="store_true", help="log debug output to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("basis", help="orthonormal su(n) basis and structure constants")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("classify", help="rank, purity, entropy of a state")
    s.add_argument("state", help="matrix JSON file")
    s.add_argument("--rank-tol", type=float, default=RANK_RTOL)
    s.add_argument("--state-tol", type=float, default=STATE_TOL)
    s.add_argument("--out")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("flow", help="integrate a flow and write a CSV trajectory")
    s.add_argument("--spec", required=True, help="flow JSON: kind, a, b, t_final, dt, record_every")
    s.add_argument("--state", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_flow)

    s = sub.add_parser("kahler-check", help="Kahler and bracket invariant suite")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=None, help="default: $QGEOM_THREADS or 1")
    s.add_argument("--out")
    s.set_defaults(func=cmd_kahler_check)

    s = sub.add_parser("qubit-demo", help="Bloch-ball trajectory of one qubit field")
    s.add_argument("--field", choices=sorted(QUBIT_FIELDS), required=True)
    s.add_argument("--start", type=_floats3, required=True, help="x1,x2,x3")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--record-every", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_qubit_demo)

    s = sub.add_parser("entangle", help="separability and product-structure report")
    s.add_argument("--state", required=True)
    s.add_argument("--dims", required=True, help="e.g. 2x2")
    s.add_argument("--tests", default="ball,ppt,product,abrank")
    s.add_argument("--ppt-tol", type=float, default=composite.PPT_TOL)
    s.add_argument("--product-tol", type=float, default=composite.PRODUCT_TOL)
    s.add_argument("--out")
    s.set_defaults(func=cmd_entangle)

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--criteria", help="comma-separated criterion numbers, default all")
    s.add_argument("--out")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (QGeomError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
