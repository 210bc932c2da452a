"""Command line interface: ``pscf <command> ...``.

Exit codes: 0 success, 1 other library error, 2 parse or config error,
3 computational budget exceeded, 4 fit failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cf as cfe
from . import lab
from .errors import (
    ConfigError,
    FitError,
    FitFailed,
    NotStabilized,
    ParseError,
    PrecisionExhausted,
    PscfError,
    StepBudgetExceeded,
)
from .approx import construct_eta
from .hypothesis_check import check_hypothesis, forecast_period
from .powersum import parse


def _m_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return range(int(lo), int(hi) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None


def _emit(record: dict):
    print(json.dumps(record, indent=2, sort_keys=True))


def cmd_cf_sqrt(args):
    exp = cfe.sqrt_cf(args.D, max_steps=args.max_steps)
    print(exp)
    print(f"R = {exp.R}")


def cmd_cf_surd(args):
    x = cfe.QuadSurd.of(args.P, args.Q, args.D)
    exp = cfe.surd_cf(x, max_steps=args.max_steps)
    print(exp)
    print(f"preperiod = {len(exp.preperiod)}, R = {exp.R}")


def cmd_ps_eval(args):
    print(parse(args.alpha)(args.n))


def cmd_hypothesis(args):
    alpha = parse(args.alpha)
    if args.r is not None:
        _emit(check_hypothesis(alpha, args.r).as_record())
        return
    fc = forecast_period(alpha)
    _emit({"overall": fc.overall, "parities": [rep.as_record() for rep in fc.reports]})


def cmd_eta(args):
    alpha, beta, gamma = parse(args.alpha), parse(args.beta), parse(args.gamma)
    ec = construct_eta(alpha, beta, gamma, args.r, Fraction(args.t))
    _emit({
        "eta": str(ec.eta),
        "H": ec.H,
        "s": ec.s,
        "t": str(ec.t),
        "error_root": str(ec.error_root),
        "postcondition_ok": ec.postcondition_ok,
    })


def cmd_fit(args):
    alpha = parse(args.alpha)
    fcf = lab.fit_functional_cf(alpha, args.r, args.m_range, window=args.window,
                                integrality_required=not args.rational,
                                max_steps=args.max_steps)
    _emit({
        "R": fcf.R,
        "betas": [str(b) for b in fcf.betas],
        "fitted_ms": [fcf.fitted_ms[0], fcf.fitted_ms[-1]],
        "heldout_ms": fcf.checked_ms,
    })


def cmd_experiment_run(args):
    cfg = lab.load_config(args.config)
    status, findings = lab.run_experiment(cfg)
    print(f"wrote {cfg.csv_path} and {cfg.findings_path}")
    if "functional_cf" in findings:
        fc = findings["functional_cf"]
        print(f"R = {fc['R']}; betas: {', '.join(fc['betas'])}")
    elif "fit_failure" in findings:
        ff = findings["fit_failure"]
        print(f"fit failed at a_{ff['index']}: {ff['reason']}", file=sys.stderr)
    else:
        print("no stabilization; growth table in findings")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pscf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    cf = sub.add_parser("cf", help="continued fractions of quadratic surds")
    cfs = cf.add_subparsers(dest="cf_command", required=True)
    q = cfs.add_parser("sqrt", help="expansion of sqrt(D)")
    q.add_argument("D", type=int)
    q.add_argument("--max-steps", type=int, default=cfe.DEFAULT_MAX_STEPS)
    q.set_defaults(func=cmd_cf_sqrt)
    q = cfs.add_parser("surd", help="expansion of (sqrt(D) + P)/Q")
    q.add_argument("P", type=int)
    q.add_argument("Q", type=int)
    q.add_argument("D", type=int)
    q.add_argument("--max-steps", type=int, default=cfe.DEFAULT_MAX_STEPS)
    q.set_defaults(func=cmd_cf_surd)

    ps = sub.add_parser("ps", help="power sum utilities")
    pss = ps.add_subparsers(dest="ps_command", required=True)
    q = pss.add_parser("eval", help="evaluate a power sum at n")
    q.add_argument("alpha")
    q.add_argument("n", type=int)
    q.set_defaults(func=cmd_ps_eval)

    q = sub.add_parser("hypothesis", help="decide the approximation hypothesis per parity")
    q.add_argument("alpha")
    q.add_argument("--r", type=int, choices=(0, 1))
    q.set_defaults(func=cmd_hypothesis)

    q = sub.add_parser("eta", help="build the approximating power sum")
    q.add_argument("alpha")
    q.add_argument("beta")
    q.add_argument("gamma")
    q.add_argument("r", type=int, choices=(0, 1))
    q.add_argument("t", help="rational in (0, 1), e.g. 1/9")
    q.set_defaults(func=cmd_eta)

    q = sub.add_parser("fit", help="fit a functional continued fraction")
    q.add_argument("alpha")
    q.add_argument("r", type=int, choices=(0, 1))
    q.add_argument("--m-range", type=_m_range, required=True)
    q.add_argument("--window", type=int, default=5)
    q.add_argument("--rational", action="store_true", help="allow rational coefficients")
    q.add_argument("--max-steps", type=int, default=cfe.DEFAULT_MAX_STEPS)
    q.set_defaults(func=cmd_fit)

    ex = sub.add_parser("experiment", help="config-driven experiments")
    exs = ex.add_subparsers(dest="experiment_command", required=True)
    q = exs.add_parser("run", help="run an experiment config")
    q.add_argument("config")
    q.set_defaults(func=cmd_experiment_run)
    return p


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ParseError, ConfigError)):
        return 2
    if isinstance(exc, (StepBudgetExceeded, PrecisionExhausted)):
        return 3
    if isinstance(exc, (FitFailed, FitError, NotStabilized)):
        return 4
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status = args.func(args)
    except PscfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return status or 0
