"""Decide whether some xi satisfies ``l(alpha(2m+r) - xi(m)^2) < l(alpha)^(1/2)``.

Write ``alpha_r(m) = alpha(2m+r)`` with leading term ``B1 * c1^(2m)``; the
threshold is the integer ``c1``. If xi beats the threshold then
``sqrt(alpha_r) - xi = (alpha_r - xi^2) / (sqrt(alpha_r) + xi)`` decays
exponentially, so xi must coincide with the part of the formal expansion of
``sqrt(alpha_r)`` whose m-roots are >= 1 (a root-1 term left over would leave
a nonzero constant). That part is finite and computable, which turns the
search over all xi into a single candidate:

* ``B1`` not a rational square: the expansion carries ``sqrt(B1)``, no xi
  with rational coefficients exists (verdict Holds);
* some retained root is not an integer: xi cannot have integer roots
  (verdict Holds);
* otherwise the candidate xi is a witness (verdict Fails), and the residual
  ``alpha_r - xi^2`` has dominant root below ``c1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .errors import SquarePowerSum, ZeroPowerSum
from .approx import _restricted_sqrt_data, sqrt_expansion, sqrt_tail_root
from .powersum import PowerSum, rational_sqrt, symbolic_sqrt

HOLDS = "Holds"
FAILS = "Fails"
UNBOUNDED = "UnboundedPeriod"
NO_CONCLUSION = "NoConclusion"


@dataclass(frozen=True)
class Obstruction:
    kind: str  # "NonSquareLeadingScalar" or "NonIntegerRoot"
    root: Optional[Fraction] = None

    def __str__(self):
        return self.kind if self.root is None else f"{self.kind}({self.root})"


@dataclass(frozen=True)
class HypothesisReport:
    r: int
    verdict: str
    threshold: int
    witness: Optional[PowerSum] = None
    residual_root: Optional[Union[int, Fraction]] = None
    obstruction: Optional[Obstruction] = None

    def as_record(self) -> dict:
        return {
            "r": self.r,
            "verdict": self.verdict,
            "threshold": str(self.threshold),
            "witness": None if self.witness is None else str(self.witness),
            "residual_root": None if self.residual_root is None else str(self.residual_root),
            "obstruction": None if self.obstruction is None else str(self.obstruction),
        }


@dataclass(frozen=True)
class PeriodForecast:
    reports: Tuple[HypothesisReport, HypothesisReport]
    overall: str


def _threshold(alpha: PowerSum, r: int):
    ar, c1, sigma = _restricted_sqrt_data(alpha, r)
    if not ar:
        raise ZeroPowerSum(f"alpha vanishes on n = 2m+{r}")
    return ar, c1, sigma


def candidate_xi(alpha: PowerSum, r: int) -> Union[PowerSum, Obstruction]:
    ar, c1, sigma = _threshold(alpha, r)
    if rational_sqrt(ar.leading[0]) is None:
        return Obstruction("NonSquareLeadingScalar")
    H = 0
    while sqrt_tail_root(c1, sigma, H) >= 1:
        H += 1
    expansion, _ = sqrt_expansion(alpha, r, H)
    kept = [(c, root) for c, root in expansion.rational_part.terms if root >= 1]
    for _, root in kept:
        if not isinstance(root, int):
            return Obstruction("NonIntegerRoot", root)
    return PowerSum(kept, "m")


def check_hypothesis(alpha: PowerSum, r: int) -> HypothesisReport:
    ar, c1, _ = _threshold(alpha, r)
    threshold = c1.numerator if c1.denominator == 1 else c1
    xi = candidate_xi(alpha, r)
    if isinstance(xi, Obstruction):
        return HypothesisReport(r, HOLDS, threshold, obstruction=xi)
    residual = ar - xi.square()
    root = residual.dominant_root() if residual else 0
    if root >= threshold:  # excluded by the decay argument in the module docstring
        raise AssertionError(f"candidate {xi} leaves residual root {root} >= {threshold}")
    return HypothesisReport(r, FAILS, threshold, witness=xi, residual_root=root)


def forecast_period(alpha: PowerSum) -> PeriodForecast:
    if symbolic_sqrt(alpha) is not None:
        raise SquarePowerSum(f"{alpha} is the square of {symbolic_sqrt(alpha)}")
    reports = (check_hypothesis(alpha, 0), check_hypothesis(alpha, 1))
    overall = UNBOUNDED if all(rep.verdict == HOLDS for rep in reports) else NO_CONCLUSION
    return PeriodForecast(reports, overall)
