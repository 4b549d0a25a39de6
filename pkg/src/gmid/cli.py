"""Command-line interface: one binary, subcommand per operation.

Machine-readable canonical JSON goes to stdout, human diagnostics to
stderr.  Exit codes: 0 success, 2 validation or precondition failure,
3 numerical non-convergence or budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import controllers, dde_sim, jsonio, rootfinder, synthesis
from .budget import deadline_scope
from .errors import (
    GmidError,
    NonConvergenceError,
    OverflowGuardError,
    PreconditionError,
    TimeBudgetExceeded,
    ValidationError,
)
from .kummer import KummerParams, ode_residual, phi_series, reflection_residual
from .quasipoly import DelaySystem

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _load_system(path: str) -> DelaySystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read system file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"system file is not valid JSON: {exc}") from exc
    return jsonio.system_from_json(data)


def _emit(payload: dict, csv_path: str | None = None, csv_text: str | None = None) -> None:
    sys.stdout.write(jsonio.canonical_json(payload) + "\n")
    if csv_path and csv_text is not None:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(csv_text)


def _cmd_synth(args) -> int:
    if args.s0 is None and args.a_n_minus_1 is None:
        raise ValidationError("provide either --s0 or --a-n-minus-1")
    s0 = args.s0
    if s0 is None:
        s0 = synthesis.admissible_root(args.n, args.m, args.tau, args.a_n_minus_1)
    cert = synthesis.synthesize(args.n, args.m, args.tau, s0)
    _emit(jsonio.certificate_to_json(cert))
    return EXIT_OK


def _cmd_verify(args) -> int:
    sys_ = _load_system(args.system)
    s0 = args.s0
    if s0 is None:
        s0 = synthesis.admissible_root(sys_.n, sys_.m, sys_.tau, sys_.a[sys_.n - 1])
    mult = synthesis.verify_multiplicity(sys_, s0, rel_tol=args.rel_tol)
    _emit(
        {
            "system": sys_.to_json(),
            "s0": s0,
            "multiplicity": mult,
            "max_multiplicity": sys_.m + sys_.n + 1,
            "residuals": list(synthesis.derivative_residuals(sys_, s0)),
            "stable": synthesis.stability_verdict(sys_.n, sys_.m, sys_.tau, sys_.a[sys_.n - 1]),
        }
    )
    return EXIT_OK


def _cmd_roots(args) -> int:
    sys_ = _load_system(args.system)
    rect = rootfinder.Rectangle(args.re_lo, args.re_hi, args.im_lo, args.im_hi)
    rs = rootfinder.system_rootset(sys_, rect, tol=args.tol)
    _emit(jsonio.rootset_to_json(rs), args.csv, jsonio.rootset_to_csv(rs) if args.csv else None)
    return EXIT_OK


def _cmd_chain(args) -> int:
    spec = synthesis.neutral_chain(args.n, args.window)
    _emit(jsonio.chain_to_json(spec))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    sys_ = _load_system(args.system)
    hist = jsonio.history_from_json(json.loads(args.history))
    traj = dde_sim.simulate(sys_, hist, args.t_end, dt=args.dt)
    payload = jsonio.trajectory_to_json(traj, stride=args.stride)
    if args.t_skip is not None:
        payload["decay_rate"] = dde_sim.decay_rate(traj, args.t_skip)
    _emit(payload, args.csv, jsonio.trajectory_to_csv(traj) if args.csv else None)
    return EXIT_OK


def _cmd_transport_sim(args) -> int:
    field = dde_sim.simulate_transport(
        args.L,
        getattr(args, "lambda"),
        args.k_p,
        args.k_i,
        lambda x: np.sin(2.0 * np.pi * x / args.L),
        args.t_end,
        nx=args.nx,
        dt=args.dt,
    )
    _emit(
        jsonio.field_to_json(field, stride_t=args.stride, stride_x=1),
        args.csv,
        jsonio.field_to_csv(field) if args.csv else None,
    )
    return EXIT_OK


def _cmd_pendulum(args) -> int:
    if args.tau is None:
        design, cert = controllers.pendulum_gmid(args.L, args.g, certify=args.certify)
        _emit(
            {
                "design": {
                    "L": design.L,
                    "g": design.g,
                    "k_p": design.k_p,
                    "k_d": design.k_d,
                    "tau": design.tau,
                    "s0": design.s0,
                    "multiplicity": design.multiplicity,
                },
                "certificate": jsonio.certificate_to_json(cert),
            }
        )
        return EXIT_OK
    plus, minus = controllers.pendulum_triple(args.L, args.g, args.tau)
    out = {"branches": {}}
    for name, design in (("plus", plus), ("minus", minus)):
        entry = {
            "L": design.L,
            "g": design.g,
            "k_p": design.k_p,
            "k_d": design.k_d,
            "tau": design.tau,
            "s0": design.s0,
            "multiplicity": design.multiplicity,
            "rightmost_branch": name == "plus",
        }
        if args.certify:
            cert = controllers.certify_design(design.system(), design.s0)
            entry["certificate"] = jsonio.certificate_to_json(cert)
        out["branches"][name] = entry
    _emit(out)
    return EXIT_OK


def _cmd_transport(args) -> int:
    design, cert = controllers.transport_pi_gmid(args.L, getattr(args, "lambda"), certify=args.certify)
    _emit(
        {
            "design": {
                "L": design.L,
                "lambda": design.lam,
                "k_p": design.k_p,
                "k_i": design.k_i,
                "tau": design.tau,
                "s0": design.s0,
                "multiplicity": design.multiplicity,
            },
            "certificate": jsonio.certificate_to_json(cert),
        }
    )
    return EXIT_OK


def _cmd_kummer(args) -> int:
    p = KummerParams(args.a, args.b)
    z = complex(args.z_re, args.z_im)
    value = phi_series(p, z)
    _emit(
        {
            "a": p.a,
            "b": p.b,
            "z_re": z.real,
            "z_im": z.imag,
            "value_re": value.real,
            "value_im": value.imag,
            "residuals": {
                "reflection": reflection_residual(p, z),
                "ode": ode_residual(p, z),
            },
        }
    )
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .service import serve

    serve(args.bind, args.port, static_dir=args.static)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmid",
        description="Maximal-multiplicity dominant-root design for single-delay equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize the maximal-multiplicity coefficient set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--s0", type=float)
    p.add_argument("--a-n-minus-1", dest="a_n_minus_1", type=float)
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("verify", help="verify the multiplicity of a designated root")
    p.add_argument("system", help="path to a system JSON file")
    p.add_argument("--s0", type=float)
    p.add_argument("--rel-tol", type=float, default=1e-8)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("roots", help="locate all roots in a rectangle")
    p.add_argument("system")
    p.add_argument("--re-lo", type=float, required=True)
    p.add_argument("--re-hi", type=float, required=True)
    p.add_argument("--im-lo", type=float, required=True)
    p.add_argument("--im-hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_roots)

    p = sub.add_parser("chain", help="neutral imaginary chain offsets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=float, required=True)
    p.set_defaults(fn=_cmd_chain)

    p = sub.add_parser("simulate", help="method-of-steps time simulation")
    p.add_argument("system")
    p.add_argument("--history", required=True, help='history JSON, e.g. {"kind":"constant","value":1}')
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-skip", type=float, help="fit a decay rate after this time")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("transport-sim", help="characteristics transport simulation")
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--lambda", type=float, required=True)
    p.add_argument("--k-p", type=float, required=True)
    p.add_argument("--k-i", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--nx", type=int, default=256)
    p.add_argument("--dt", type=float)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_transport_sim)

    p = sub.add_parser("pendulum", help="pendulum controller designs")
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--tau", type=float, help="free delay: produce the triple-root pair")
    p.add_argument("--no-certify", dest="certify", action="store_false")
    p.set_defaults(fn=_cmd_pendulum, certify=True)

    p = sub.add_parser("transport", help="transport boundary controller design")
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--lambda", type=float, required=True)
    p.add_argument("--no-certify", dest="certify", action="store_false")
    p.set_defaults(fn=_cmd_transport, certify=True)

    p = sub.add_parser("kummer", help="confluent hypergeometric diagnostics")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--z-re", type=float, default=0.0)
    p.add_argument("--z-im", type=float, default=0.0)
    p.set_defaults(fn=_cmd_kummer)

    p = sub.add_parser("serve", help="run the JSON HTTP service")
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8723)
    p.add_argument("--static", help="directory of UI static files to serve at /")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with deadline_scope():
            return args.fn(args)
    except (ValidationError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NonConvergenceError, OverflowGuardError, TimeBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GmidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
