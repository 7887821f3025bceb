"""Closed-form asymptotics for counts of regular factorisations of K_n.

All large values are returned as LogReal.  Every formula here is a leading
term: the (1 + o(1)) corrections are never included, but the dimensionless
error scale of the factorisation count is available separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidInputError
from .numeric import LogReal, log_binomial, log_factorial, log_multinomial

__all__ = [
    "DegreeSpec",
    "CaseCondition",
    "CaseReport",
    "r_regular_asym",
    "r_prime",
    "mcleod_f_asym",
    "disjoint_prob_asym",
    "disjoint_error_scale",
    "multi_disjoint_prob_asym",
    "join_prob_asym",
    "error_scale",
    "triple_degree_sum",
    "check_case",
]

_HALF_LN2 = 0.5 * math.log(2.0)


@dataclass(frozen=True)
class DegreeSpec:
    """A factorisation instance: K_n split into factors of degree d0..dk.

    Requires sum(degrees) == n-1, every degree >= 1, and even degrees
    when n is odd (no regular graph of odd degree on an odd number of
    vertices).
    """

    n: int
    degrees: tuple

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degrees)
        if self.n < 2:
            raise InvalidInputError(f"need n >= 2, got n = {self.n}")
        if not degrees:
            raise InvalidInputError("degree list is empty")
        if any(d < 1 for d in degrees):
            raise InvalidInputError(f"degrees must all be >= 1, got {degrees}")
        if sum(degrees) != self.n - 1:
            raise InvalidInputError(
                f"degrees {degrees} sum to {sum(degrees)}, expected n-1 = {self.n - 1}"
            )
        if self.n % 2 == 1 and any(d % 2 for d in degrees):
            raise InvalidInputError(
                f"odd n = {self.n} requires every degree even, got {degrees}"
            )

    @staticmethod
    def parse(text: str) -> "DegreeSpec":
        """Parse 'n:d0,d1,...' (e.g. '10:8,1')."""
        try:
            head, tail = text.split(":")
            return DegreeSpec(int(head), tuple(int(x) for x in tail.split(",")))
        except ValueError as exc:
            raise InvalidInputError(f"cannot parse degree spec {text!r}") from exc

    @property
    def k(self) -> int:
        return len(self.degrees) - 1

    def lambdas(self) -> list[float]:
        return [d / (self.n - 1) for d in self.degrees]


@dataclass(frozen=True)
class CaseCondition:
    case_id: int
    description: str
    satisfied: Optional[bool]  # None when the condition is asymptotic
    margin: Optional[float]


@dataclass(frozen=True)
class CaseReport:
    """Which proven case covers the instance, if decidable at finite n.

    Only case 1 has purely finite conditions; the o(.) conditions of
    cases 2-4 are reported as margins with satisfied=None, never as
    verdicts, so case_id is 1 or None.
    """

    case_id: Optional[int]
    conditions: tuple

    def margins(self) -> dict:
        return {
            f"case{c.case_id}_{i}": c.margin
            for i, c in enumerate(self.conditions)
            if c.margin is not None
        }


def _entropy_term(lambdas: Sequence[float]) -> float:
    # 0*log 0 == 0 convention; never triggered while degrees are >= 1
    return sum(l * math.log(l) for l in lambdas if l > 0.0)


def r_regular_asym(n: int, d: int) -> LogReal:
    """Leading-term count of d-regular graphs on n vertices,
    (lam^lam (1-lam)^(1-lam))^C(n,2) * C(n-1,d)^n * e^(1/4) * 2^(1/2)."""
    if not 1 <= d <= n - 2:
        raise InvalidInputError(f"degree must satisfy 1 <= d <= n-2, got (n={n}, d={d})")
    if n % 2 == 1 and d % 2 == 1:
        raise InvalidInputError(f"no {d}-regular graph on odd n = {n}")
    lam = d / (n - 1)
    log_val = (
        n * (n - 1) / 2 * _entropy_term([lam, 1.0 - lam])
        + n * log_binomial(n - 1, d)
        + 0.25
        + _HALF_LN2
    )
    return LogReal.exp(log_val)


def r_prime(spec: DegreeSpec) -> LogReal:
    """Conjectured count R'(n; d0..dk) of ordered factorisations."""
    lams = spec.lambdas()
    k = spec.k
    log_val = (
        spec.n * (spec.n - 1) / 2 * _entropy_term(lams)
        + spec.n * log_multinomial(spec.n - 1, spec.degrees)
        + k / 4.0
        + k * _HALF_LN2
    )
    return LogReal.exp(log_val)


def mcleod_f_asym(n: int, k: int) -> LogReal:
    """Leading-term count of sequences of k disjoint perfect matchings:
    (n!/(2^(n/2) (n/2)!))^k * (n!/(n^k (n-k)!))^(n/2) * (1-k/n)^(n/4) * e^(k/4)."""
    if n % 2 or n < 2:
        raise InvalidInputError(f"matching sequences need even n >= 2, got {n}")
    if not 1 <= k <= n - 2:
        raise InvalidInputError(f"need 1 <= k <= n-2, got (n={n}, k={k})")
    log_pm = log_factorial(n) - (n / 2) * math.log(2.0) - log_factorial(n // 2)
    log_fall = log_factorial(n) - log_factorial(n - k)  # ln n!/(n-k)!
    log_val = (
        k * log_pm
        + (n / 2) * (log_fall - k * math.log(n))
        + (n / 4) * math.log1p(-k / n)
        + k / 4.0
    )
    return LogReal.exp(log_val)


def disjoint_prob_asym(d: int, h: int) -> float:
    """Leading-term probability that a random relabelling of an h-regular
    graph is edge-disjoint from a d-regular graph: exp(-dh/2)."""
    if d < 1 or h < 1:
        raise InvalidInputError(f"degrees must be >= 1, got (d={d}, h={h})")
    return math.exp(-0.5 * d * h)


def disjoint_error_scale(d: int, h: int, n: int) -> float:
    """Order of the relative error of disjoint_prob_asym at finite n."""
    return d * d * h * h / n


def multi_disjoint_prob_asym(degrees: Sequence[int]) -> float:
    """Leading-term probability that independently relabelled regular
    graphs of the given degrees are pairwise edge-disjoint."""
    degrees = list(degrees)
    if any(d < 1 for d in degrees):
        raise InvalidInputError(f"degrees must be >= 1, got {degrees}")
    pair_sum = 0.0
    for i in range(len(degrees)):
        for j in range(i + 1, len(degrees)):
            pair_sum += degrees[i] * degrees[j]
    return math.exp(-0.5 * pair_sum)


def join_prob_asym(n: int, d1: int, d2: int) -> float:
    """Edge-disjointness probability of a random d1-regular graph and an
    arbitrary d2-regular graph (dense-d1 regime formula):
    (1-lam1)^(d2 n/2) * exp(-lam1 d2 (d2-2) / (4 (1-lam1)))."""
    if d1 < 0 or d2 < 0:
        raise InvalidInputError("degrees must be nonnegative")
    lam1 = d1 / (n - 1)
    if lam1 >= 1.0:
        raise InvalidInputError(f"need d1/(n-1) < 1, got d1 = {d1}, n = {n}")
    log_val = (d2 * n / 2) * math.log1p(-lam1) - lam1 * d2 * (d2 - 2) / (4 * (1 - lam1))
    return math.exp(log_val)


def _small_degree_sum(spec: DegreeSpec) -> int:
    return sum(spec.degrees[1:])


def triple_degree_sum(degrees: Sequence[int]) -> int:
    """sum over 1 <= i <= j < t <= k of d_i d_j d_t^2, for a list
    (d_1, ..., d_k)."""
    d = list(degrees)
    k = len(d)
    total = 0
    for t in range(1, k):
        for i in range(t):
            for j in range(i, t):
                total += d[i] * d[j] * d[t] * d[t]
    return total


def error_scale(spec: DegreeSpec) -> float:
    """Dimensionless error magnitude d^3/n + (triple sum)/n with
    d = d1+...+dk.  Diagnostic only: the implicit constants are unknown."""
    d = _small_degree_sum(spec)
    return (d**3 + triple_degree_sum(spec.degrees[1:])) / spec.n


def check_case(spec: DegreeSpec) -> CaseReport:
    """Report which proven case applies (case 1) or the finite-n margins
    of the asymptotic conditions (cases 2-4)."""
    n = spec.n
    k = spec.k
    conds: list[CaseCondition] = []

    # case 1: k == 1 (the degree range 1 <= d1 <= n-2 is implied by the
    # spec invariants once k == 1)
    case1 = k == 1
    conds.append(CaseCondition(1, "k == 1", case1, None))

    dsum = _small_degree_sum(spec)
    trip = triple_degree_sum(spec.degrees[1:])
    conds.append(
        CaseCondition(2, "sum(d_i, i>=1) = o(n^(1/3)): margin sum/n^(1/3)", None, dsum / n ** (1 / 3))
    )
    conds.append(
        CaseCondition(2, "triple degree sum = o(n): margin sum/n", None, trip / n)
    )

    all_ones = all(d == 1 for d in spec.degrees[1:]) and k >= 1
    conds.append(CaseCondition(3, "d_1 = ... = d_k = 1", all_ones, None))
    conds.append(
        CaseCondition(3, "k = o(n^(5/6)): margin k/n^(5/6)", None, k / n ** (5 / 6))
    )

    if k >= 1:
        d1 = spec.degrees[1]
        c_star = min(d1, n - 1 - d1) * math.log(n) / n
        conds.append(
            CaseCondition(
                4,
                "min(d1, n-1-d1) >= c n/log n with c > 2/3: margin c*/(2/3)",
                None,
                c_star / (2.0 / 3.0),
            )
        )
        rest = sum(spec.degrees[2:])
        conds.append(
            CaseCondition(
                4,
                "sum(d_i, i>=2) = O(n^eps), eps small: reference margin sum/n^0.1",
                None,
                rest / n**0.1,
            )
        )

    return CaseReport(1 if case1 else None, tuple(conds))
