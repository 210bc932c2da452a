"""Experiments on the continued fractions of sqrt(alpha(2m+r)) as m varies.

A scan computes the exact expansion for every m in a window; when the period
length is constant over the last ``W`` usable rows, each partial quotient
``a_i(m)`` is fitted by a power sum and the resulting functional expansion is
checked against fresh expansions beyond the scanned window. Constancy over a
finite window and agreement on held-out m are evidence, never proof, of the
behaviour for all large m.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import cf as cfe
from .errors import (
    ConfigError,
    FitError,
    FitFailed,
    MembershipFailed,
    NonIntegerValue,
    NotStabilized,
    ParseError,
    PerfectSquare,
    PscfError,
    SquarePowerSum,
    StepBudgetExceeded,
    ZeroRoot,
)
from .hypothesis_check import forecast_period
from .powersum import PowerSum, parse
from .recurrence import SequenceSample, fit_power_sum

OK, SQUARE, NONPOSITIVE, BUDGET = "ok", "square", "nonpositive", "budget"
CSV_COLUMNS = ["m", "value_digits", "is_square", "a0_digits", "R", "period_digest"]


@dataclass(frozen=True)
class ScanRow:
    m: int
    value: int
    status: str
    a0: Optional[int] = None
    period: Tuple[int, ...] = ()
    trace_ok: Optional[bool] = None
    error: str = ""

    @property
    def R(self) -> Optional[int]:
        return len(self.period) if self.status == OK else None

    @property
    def usable(self) -> bool:
        return self.status == OK

    def quotients(self):
        return [self.a0, *self.period]

    def digest(self) -> str:
        if self.status != OK:
            return self.status
        per = self.period
        if len(per) <= 9:
            return " ".join(map(str, per))
        return " ".join(map(str, per[:8])) + " .. " + str(per[-1])


@dataclass
class PeriodScan:
    alpha: PowerSum
    r: int
    rows: List[ScanRow]

    @property
    def usable_rows(self) -> List[ScanRow]:
        return [row for row in self.rows if row.usable]

    def growth(self) -> List[Tuple[int, int]]:
        return [(row.m, row.R) for row in self.usable_rows]


def _integer_value(alpha: PowerSum, n: int, m: int) -> int:
    v = alpha(n)
    if v.denominator != 1:
        raise NonIntegerValue(f"alpha({n}) = {v} is not an integer (m={m})")
    return v.numerator


def scan_row(alpha: PowerSum, r: int, m: int, max_steps: int = cfe.DEFAULT_MAX_STEPS) -> ScanRow:
    D = _integer_value(alpha, 2 * m + r, m)
    if D <= 0:
        return ScanRow(m, D, NONPOSITIVE)
    try:
        exp = cfe.sqrt_cf(D, max_steps=max_steps)
    except PerfectSquare:
        return ScanRow(m, D, SQUARE, a0=cfe.isqrt(D))
    except StepBudgetExceeded as exc:
        return ScanRow(m, D, BUDGET, a0=cfe.isqrt(D), error=str(exc))
    trace_ok = cfe.trace_identity_check(exp.a0, exp.period)
    return ScanRow(m, D, OK, exp.a0, exp.period, trace_ok)


def _scan_task(args):
    return scan_row(*args)


def period_scan(alpha: PowerSum, r: int, m_range: Sequence[int],
                max_steps: int = cfe.DEFAULT_MAX_STEPS, jobs: int = 1) -> PeriodScan:
    """Exact expansion of sqrt(alpha(2m+r)) for each m; rows come back in m order."""
    if r not in (0, 1):
        raise ValueError("r must be 0 or 1")
    ms = list(m_range)
    tasks = [(alpha, r, m, max_steps) for m in ms]
    if jobs > 1 and len(ms) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_task, tasks))
    else:
        rows = [scan_row(*t) for t in tasks]
    return PeriodScan(alpha, r, rows)


def detect_stabilization(scan: PeriodScan, window: int = 5) -> Optional[int]:
    rows = scan.usable_rows
    if window < 1 or len(rows) < window:
        return None
    lengths = {row.R for row in rows[-window:]}
    return lengths.pop() if len(lengths) == 1 else None


@dataclass
class FunctionalCF:
    R: int
    betas: List[PowerSum]
    validity: int
    fitted_ms: List[int]
    checked_ms: List[int]
    quality_checks: int = 0

    def expansion_at(self, m: int) -> cfe.CFExpansion:
        vals = [b(m) for b in self.betas]
        return cfe.CFExpansion(int(vals[0]), (), tuple(int(v) for v in vals[1:]))


def _stable_run(scan: PeriodScan, R: int) -> List[ScanRow]:
    run: List[ScanRow] = []
    for row in reversed(scan.rows):
        if not row.usable or row.R != R or (run and run[-1].m != row.m + 1):
            break
        run.append(row)
    return run[::-1]


def fit_from_scan(scan: PeriodScan, R: int, integrality_required: bool = True,
                  holdout: int = 2, extra: int = 2,
                  max_steps: int = cfe.DEFAULT_MAX_STEPS) -> FunctionalCF:
    """Fit a_0..a_R over the stabilized run, then confirm on ``extra`` unseen m."""
    run = _stable_run(scan, R)
    if len(run) < 6:
        raise FitFailed(0, f"only {len(run)} consecutive rows with R={R}; need 6")
    betas = []
    for i in range(R + 1):
        sample = SequenceSample(tuple((row.m, row.quotients()[i]) for row in run))
        try:
            fit = fit_power_sum(sample, integrality_required, holdout)
        except (FitError, ZeroRoot) as exc:
            raise FitFailed(i, f"{type(exc).__name__}: {exc}") from exc
        betas.append(fit.fitted)
    if R >= 1 and betas[R] != 2 * betas[0]:
        raise FitFailed(R, f"beta_R = {betas[R]} differs from 2*beta_0 = {2 * betas[0]}")
    fcf = FunctionalCF(R, betas, run[0].m, [row.m for row in run], [])

    quality = 0
    for row in run:
        exp = cfe.CFExpansion(row.a0, (), row.period)
        for i in range(R + 1):
            if not cfe.quality_bound_check(row.value, exp, i):
                raise FitFailed(i, f"convergent bound violated at m={row.m}")
            quality += 1
    fcf.quality_checks = quality

    last = run[-1].m
    for m in list(range(last + 1, last + 1 + extra)):
        row = scan_row(scan.alpha, scan.r, m, max_steps)
        want = fcf.expansion_at(m)
        got = cfe.CFExpansion(row.a0, (), row.period) if row.usable else None
        if got != want:
            idx = 0
            if got is not None:
                idx = next((i for i in range(min(got.R, R) + 1) if got[i] != want[i]), R)
            raise FitFailed(idx, f"held-out m={m}: expected {want}, computed {got}")
        fcf.checked_ms.append(m)
    return fcf


def fit_functional_cf(alpha: PowerSum, r: int, m_range: Sequence[int], window: int = 5,
                      integrality_required: bool = True, holdout: int = 2, extra: int = 2,
                      max_steps: int = cfe.DEFAULT_MAX_STEPS) -> FunctionalCF:
    scan = period_scan(alpha, r, m_range, max_steps)
    R = detect_stabilization(scan, window)
    if R is None:
        raise NotStabilized(f"period length not constant over the last {window} usable rows")
    return fit_from_scan(scan, R, integrality_required, holdout, extra, max_steps)


# ------------------------------------------------------- structural checks

@dataclass
class MembershipReport:
    ms: List[int]
    branches: List[str]  # "eta" or "eta-1"
    stable_from: int
    eventually_constant: bool


def floor_eta_membership(alpha: PowerSum, r: int, eta: PowerSum,
                         m_range: Sequence[int]) -> MembershipReport:
    """Check floor(sqrt(alpha(2m+r))) in {eta(m), eta(m) - 1} for every m."""
    ms = list(m_range)
    branches = []
    for m in ms:
        D = _integer_value(alpha, 2 * m + r, m)
        e = eta(m)
        if e.denominator != 1:
            raise NonIntegerValue(f"eta({m}) = {e} is not an integer")
        e = e.numerator
        a0 = cfe.isqrt(D) if D >= 0 else None
        if a0 == e:
            branches.append("eta")
        elif a0 == e - 1:
            branches.append("eta-1")
        else:
            raise MembershipFailed(m, a0, e)
    k = len(branches) - 1
    while k > 0 and branches[k - 1] == branches[-1]:
        k -= 1
    return MembershipReport(ms, branches, ms[k], len(ms) - k >= min(3, len(ms)))


def tail_surd(alpha: PowerSum, r: int, m: int, h: int) -> cfe.QuadSurd:
    """``|sqrt(alpha(2m+r)) - p_{h-1}/q_{h-1}|**-1`` as an exact surd, 1 <= h <= R."""
    D = _integer_value(alpha, 2 * m + r, m)
    exp = cfe.sqrt_cf(D)
    if not 1 <= h <= exp.R:
        raise ValueError(f"h={h} outside 1..R={exp.R}")
    p, q = cfe.convergents(exp, h)[h - 1]
    return cfe.reciprocal_distance(D, p, q)


def power_sum_convergents(betas: Sequence[PowerSum]) -> List[Tuple[PowerSum, PowerSum]]:
    """Convergents p_i, q_i of [beta_0; beta_1, ...] as power sums in m."""
    one, zero = PowerSum.constant(1, "m"), PowerSum((), "m")
    p0, q0, p1, q1 = one, zero, zero, one
    out = []
    for b in betas:
        p0, q0, p1, q1 = b * p0 + p1, b * q0 + q1, p0, q0
        out.append((p0, q0))
    return out


def symbolic_tail(alpha_r: PowerSum, prefix: Sequence[PowerSum]):
    """(gamma', tau', xi') with ``|sqrt(alpha_r) - [prefix]|**-1 = (sqrt(gamma') + tau')/xi'``.

    xi' is sign-normalized to be eventually positive.
    """
    p, q = power_sum_convergents(prefix)[-1]
    gamma = q.square().square() * alpha_r
    tau = p * q
    xi = q.square() * alpha_r - p.square()
    if xi and xi.leading[0] < 0:
        xi = -xi
    return gamma, tau, xi


@dataclass
class SignWindowReport:
    ms: List[int]
    nonneg: List[bool]   # gamma' - (beta_u xi' - tau')^2 >= 0
    negative: List[bool]  # gamma' - (xi' + xi' beta_u - tau')^2 < 0
    nonneg_eventual: Optional[bool]
    negative_eventual: Optional[bool]
    inconclusive: bool

    @property
    def floor_matches(self) -> bool:
        return bool(self.nonneg_eventual) and bool(self.negative_eventual)


def _eventual(values: List[bool]) -> Optional[bool]:
    k = len(values) - 1
    while k > 0 and values[k - 1] == values[-1]:
        k -= 1
    return values[-1] if len(values) - k >= 3 else None


def sign_window_check(gamma: PowerSum, tau: PowerSum, xi: PowerSum, beta_u: PowerSum,
                      m_range: Sequence[int]) -> SignWindowReport:
    ms = list(m_range)
    low = gamma - (beta_u * xi - tau).square()
    high = gamma - (xi + xi * beta_u - tau).square()
    nonneg = [low(m) >= 0 for m in ms]
    negative = [high(m) < 0 for m in ms]
    if len(ms) < 3:
        return SignWindowReport(ms, nonneg, negative, None, None, True)
    return SignWindowReport(ms, nonneg, negative, _eventual(nonneg), _eventual(negative), False)


# ------------------------------------------------------------ experiments

@dataclass
class ExperimentConfig:
    alpha: PowerSum
    alpha_text: str
    r: int = 0
    m_lo: int = 0
    m_hi: int = 0
    window: int = 5
    step_budget: int = cfe.DEFAULT_MAX_STEPS
    integrality_required: bool = True
    holdout: int = 2
    csv_path: Optional[Path] = None
    findings_path: Optional[Path] = None
    verbose: bool = False
    jobs: int = 1

    @property
    def m_range(self):
        return range(self.m_lo, self.m_hi + 1)


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_range(text: str, line: int) -> Tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"line {line}: m_range must look like a..b, got {text!r}") from None


def parse_config(text: str, base_dir: Path = Path("."), stem: str = "experiment") -> ExperimentConfig:
    """Flat ``key = value`` config; '#' starts a comment."""
    raw: Dict[str, Tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = (value.strip(), lineno)
    known = {"alpha", "r", "m_range", "window", "step_budget", "integrality_required",
             "holdout", "csv", "findings", "verbose", "jobs"}
    for key, (_, lineno) in raw.items():
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    for key in ("alpha", "m_range"):
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    text_a, ln = raw["alpha"]
    try:
        alpha = parse(text_a, unit="n", line=ln)
    except ParseError as exc:
        raise ConfigError(f"alpha: {exc}") from exc

    def integer(key, default):
        if key not in raw:
            return default
        value, lineno = raw[key]
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} must be an integer") from None

    def boolean(key, default):
        if key not in raw:
            return default
        value, lineno = raw[key]
        if value.lower() not in _BOOL:
            raise ConfigError(f"line {lineno}: {key} must be true or false")
        return _BOOL[value.lower()]

    lo, hi = _parse_range(*raw["m_range"])
    cfg = ExperimentConfig(
        alpha=alpha,
        alpha_text=text_a,
        r=integer("r", 0),
        m_lo=lo,
        m_hi=hi,
        window=integer("window", 5),
        step_budget=integer("step_budget", cfe.DEFAULT_MAX_STEPS),
        integrality_required=boolean("integrality_required", True),
        holdout=integer("holdout", 2),
        csv_path=base_dir / raw.get("csv", (f"{stem}.csv", 0))[0],
        findings_path=base_dir / raw.get("findings", (f"{stem}.findings.json", 0))[0],
        verbose=boolean("verbose", False),
        jobs=integer("jobs", 1),
    )
    if cfg.r not in (0, 1):
        raise ConfigError(f"line {raw['r'][1]}: r must be 0 or 1")
    if cfg.window < 1 or cfg.m_lo < 0:
        raise ConfigError("window must be >= 1 and m_range must start at m >= 0")
    if cfg.m_hi - cfg.m_lo + 1 < cfg.window + 6:
        raise ConfigError(f"m_range {lo}..{hi} must span at least window + 6 = {cfg.window + 6} values")
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, path.parent, path.stem)


def scan_csv(scan: PeriodScan, verbose: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS + (["period"] if verbose else []))
    for row in scan.rows:
        rec = [
            row.m,
            len(str(abs(row.value))),
            "true" if row.status == SQUARE else "false",
            "" if row.a0 is None else len(str(row.a0)),
            "" if row.R is None else row.R,
            row.digest(),
        ]
        if verbose:
            rec.append(" ".join(map(str, row.period)))
        w.writerow(rec)
    return buf.getvalue()


EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_FIT = 0, 2, 3, 4


def run_experiment(cfg: ExperimentConfig) -> Tuple[int, dict]:
    """Scan, forecast, fit or report growth; write CSV and findings; return (exit code, findings)."""
    scan = period_scan(cfg.alpha, cfg.r, cfg.m_range, cfg.step_budget, cfg.jobs)
    findings: dict = {
        "alpha": str(cfg.alpha),
        "r": cfg.r,
        "m_range": [cfg.m_lo, cfg.m_hi],
        "window": cfg.window,
        "note": "constancy on the top window and agreement on held-out m are evidence, not proof",
    }
    try:
        fc = forecast_period(cfg.alpha)
        findings["forecast"] = {
            "overall": fc.overall,
            "parities": [rep.as_record() for rep in fc.reports],
        }
    except SquarePowerSum as exc:
        findings["forecast"] = {"overall": "SquarePowerSum", "detail": str(exc)}
    except PscfError as exc:
        findings["forecast"] = {"overall": "Error", "detail": f"{type(exc).__name__}: {exc}"}

    findings["excluded"] = [[row.m, row.status] for row in scan.rows
                            if row.status in (SQUARE, NONPOSITIVE)]
    findings["row_errors"] = [[row.m, row.error] for row in scan.rows if row.status == BUDGET]
    findings["trace_identity"] = {
        "checked": len(scan.usable_rows),
        "failed": [row.m for row in scan.usable_rows if not row.trace_ok],
    }

    status = EXIT_OK
    R = detect_stabilization(scan, cfg.window)
    findings["stabilized_R"] = R
    if R is None:
        findings["growth"] = scan.growth()
    else:
        try:
            fcf = fit_from_scan(scan, R, cfg.integrality_required, cfg.holdout,
                                max_steps=cfg.step_budget)
            findings["functional_cf"] = {
                "R": fcf.R,
                "betas": [str(b) for b in fcf.betas],
                "valid_from_m": fcf.validity,
                "fitted_ms": [fcf.fitted_ms[0], fcf.fitted_ms[-1]],
                "heldout_ms": fcf.checked_ms,
                "quality_bound_checks": fcf.quality_checks,
            }
        except FitFailed as exc:
            findings["fit_failure"] = {"index": exc.index, "reason": exc.reason}
            status = EXIT_FIT
    # budget blowups at single m are expected for growing periods; only a scan
    # left without enough usable rows to decide anything counts as a failure
    if status == EXIT_OK and findings["row_errors"] and len(scan.usable_rows) < cfg.window:
        status = EXIT_BUDGET
    findings["exit_status"] = status

    _write(cfg.csv_path, scan_csv(scan, cfg.verbose))
    _write(cfg.findings_path, json.dumps(findings, indent=2, sort_keys=True) + "\n")
    return status, findings


def _write(path: Optional[Path], text: str):
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
