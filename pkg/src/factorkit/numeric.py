"""Log-space real arithmetic and log-combinatorics.

Counts such as R'(n; d0..dk) overflow double precision long before the
sizes of interest (n ~ 150), so every formula value lives in a LogReal:
a sign plus the natural log of the magnitude.  "log" means natural log
throughout the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import InvalidInputError

__all__ = [
    "LogReal",
    "log_factorial",
    "log_binomial",
    "log_multinomial",
    "SummationInput",
    "SumBounds",
    "sum_bounds",
]


@dataclass(frozen=True)
class LogReal:
    """A signed real stored as (sign, ln|x|).

    sign is -1, 0 or +1; log_mag is ignored (and stored as 0.0) when
    sign == 0.  Multiplication and division never leave log space, so
    values with |log_mag| up to ~1e6 are safe.
    """

    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise InvalidInputError(f"LogReal sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and self.log_mag != 0.0:
            object.__setattr__(self, "log_mag", 0.0)

    @staticmethod
    def zero() -> "LogReal":
        return LogReal(0, 0.0)

    @staticmethod
    def one() -> "LogReal":
        return LogReal(1, 0.0)

    @staticmethod
    def from_float(x: float) -> "LogReal":
        if x == 0:
            return LogReal.zero()
        return LogReal(1 if x > 0 else -1, math.log(abs(x)))

    @staticmethod
    def from_int(x: int) -> "LogReal":
        if x == 0:
            return LogReal.zero()
        # math.log handles arbitrary-precision ints exactly enough
        return LogReal(1 if x > 0 else -1, math.log(abs(x)))

    @staticmethod
    def exp(log_mag: float, sign: int = 1) -> "LogReal":
        """The value sign * e**log_mag."""
        if sign == 0:
            return LogReal.zero()
        return LogReal(sign, log_mag)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0 or other.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log_mag + other.log_mag)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log_mag - other.log_mag)

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log_mag) if self.sign else self

    def __add__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_mag >= other.log_mag else (other, self)
        if self.sign == other.sign:
            return LogReal(self.sign, hi.log_mag + math.log1p(math.exp(lo.log_mag - hi.log_mag)))
        diff = lo.log_mag - hi.log_mag
        if diff == 0.0:
            return LogReal.zero()
        return LogReal(hi.sign, hi.log_mag + math.log1p(-math.exp(diff)))

    def __sub__(self, other: "LogReal") -> "LogReal":
        return self + (-other)

    def __pow__(self, exponent: float) -> "LogReal":
        if self.sign == 0:
            if exponent == 0:
                return LogReal.one()
            if exponent < 0:
                raise ZeroDivisionError("0 to a negative power")
            return LogReal.zero()
        if self.sign < 0:
            raise InvalidInputError("power of a negative LogReal is not defined here")
        return LogReal(1, self.log_mag * exponent)

    def inverse(self) -> "LogReal":
        return LogReal.one() / self

    def log(self) -> float:
        """Natural log; requires a positive value."""
        if self.sign <= 0:
            raise InvalidInputError("log of a non-positive LogReal")
        return self.log_mag

    def to_float(self) -> float:
        """Nearest double; overflows to +-inf rather than raising."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_mag)
        except OverflowError:
            return self.sign * math.inf

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogReal(0)"
        s = "-" if self.sign < 0 else ""
        return f"LogReal({s}exp({self.log_mag!r}))"


# ---------------------------------------------------------------------------
# ln-factorial: exact summation below a cutoff, Stirling series above it.

_STIRLING_CUTOFF = 1024
_LN_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_ln_fact_table: list[float] = [0.0]
_ln_fact_comp = 0.0  # Kahan carry for the running prefix sum


def _extend_table(m: int) -> None:
    global _ln_fact_comp
    s = _ln_fact_table[-1]
    c = _ln_fact_comp
    for i in range(len(_ln_fact_table), m + 1):
        y = math.log(i) - c
        t = s + y
        c = (t - s) - y
        s = t
        _ln_fact_table.append(s)
    _ln_fact_comp = c


def log_factorial(m: int) -> float:
    """ln(m!) for integer m >= 0."""
    if not isinstance(m, int):
        raise InvalidInputError(f"log_factorial wants an integer, got {m!r}")
    if m < 0:
        raise InvalidInputError(f"log_factorial of negative {m}")
    if m < _STIRLING_CUTOFF:
        if m >= len(_ln_fact_table):
            _extend_table(min(_STIRLING_CUTOFF - 1, max(m, 256)))
        return _ln_fact_table[m]
    # Stirling series for ln Gamma(m+1); at m >= 1024 the first dropped
    # term is below 1e-24 relative
    x = float(m)
    return (
        (x + 0.5) * math.log(x)
        - x
        + _LN_SQRT_2PI
        + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x**3)
        + 1.0 / (1260.0 * x**5)
    )


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k); zero-width cases give 0.0, out-of-range raises."""
    if k < 0 or k > n:
        raise InvalidInputError(f"binomial index out of range: C({n},{k})")
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


def log_multinomial(n: int, parts: Sequence[int]) -> float:
    """ln( n! / prod(parts_i!) ) with sum(parts) == n required."""
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise InvalidInputError(f"negative part in multinomial: {parts}")
    if sum(parts) != n:
        raise InvalidInputError(f"multinomial parts {parts} do not sum to {n}")
    return log_factorial(n) - sum(log_factorial(p) for p in parts)


# ---------------------------------------------------------------------------
# Summation lemma: sandwich bounds for sums defined by the ratio recurrence
#   n_0 = 1,  n_i / n_{i-1} = A(i) (1 - (i-1) B(i)) / i .

@dataclass(frozen=True)
class SummationInput:
    """Inputs of the summation bound.

    a_values[i-1] = A(i) and b_values[i-1] = B(i) for 1 <= i <= Z.
    Hypotheses: Z >= 2, A(i) >= 0, 1 - (i-1)B(i) >= 0, and there is a
    c_hat in (0, 1/3) with max{A/Z, |C|} <= c_hat for all A in [A1, A2]
    and C in [C1, C2] (A1/A2, C1/C2 the extremes of A(i), A(i)B(i)).
    """

    Z: int
    a_values: tuple
    b_values: tuple
    c_hat: float

    def __post_init__(self):
        object.__setattr__(self, "a_values", tuple(float(a) for a in self.a_values))
        object.__setattr__(self, "b_values", tuple(float(b) for b in self.b_values))

    @staticmethod
    def constant(Z: int, a: float, b: float, c_hat: float) -> "SummationInput":
        return SummationInput(Z, (a,) * Z, (b,) * Z, c_hat)

    def validate(self) -> None:
        if self.Z < 2:
            raise InvalidInputError(f"Z must be >= 2, got {self.Z}")
        if len(self.a_values) != self.Z or len(self.b_values) != self.Z:
            raise InvalidInputError("A and B must each have exactly Z entries")
        if not (0.0 < self.c_hat < 1.0 / 3.0):
            raise InvalidInputError(f"c_hat must lie in (0, 1/3), got {self.c_hat}")
        for i in range(1, self.Z + 1):
            if self.a_values[i - 1] < 0:
                raise InvalidInputError(f"hypothesis A({i}) >= 0 fails: A({i}) = {self.a_values[i - 1]}")
            if 1.0 - (i - 1) * self.b_values[i - 1] < 0:
                raise InvalidInputError(
                    f"hypothesis 1 - (i-1)B(i) >= 0 fails at i = {i}: "
                    f"1 - {i - 1}*{self.b_values[i - 1]} < 0"
                )
        a2 = max(self.a_values)
        cs = [a * b for a, b in zip(self.a_values, self.b_values)]
        cbound = max(abs(min(cs)), abs(max(cs)))
        if a2 / self.Z > self.c_hat:
            raise InvalidInputError(
                f"hypothesis max A/Z <= c_hat fails: {a2}/{self.Z} > {self.c_hat}"
            )
        if cbound > self.c_hat:
            raise InvalidInputError(f"hypothesis |C| <= c_hat fails: {cbound} > {self.c_hat}")


class SumBounds(NamedTuple):
    sigma1: float
    sigma2: float
    total: float
    a1: float
    a2: float
    c1: float
    c2: float
    slack: float


def sum_bounds(inp: SummationInput) -> SumBounds:
    """Evaluate the recurrence sum and its sandwich bounds.

    Returns (sigma1, sigma2, total, ...) with sigma1 <= total <= sigma2
    guaranteed whenever the hypotheses hold.  The sigma1 line follows the
    typeset reading exp(A1 - A1*C2/2) - (2 e c_hat)^Z; see README.
    """
    inp.validate()
    a1 = min(inp.a_values)
    a2 = max(inp.a_values)
    cs = [a * b for a, b in zip(inp.a_values, inp.b_values)]
    c1 = min(cs)
    c2 = max(cs)
    slack = (2 * math.e * inp.c_hat) ** inp.Z

    total = 1.0
    term = 1.0
    for i in range(1, inp.Z + 1):
        a = inp.a_values[i - 1]
        damp = 1.0 - (i - 1) * inp.b_values[i - 1]
        if a == 0.0 or damp == 0.0:
            break  # n_j = 0 for all j >= i
        term *= a * damp / i
        total += term

    sigma1 = math.exp(a1 - 0.5 * a1 * c2) - slack
    sigma2 = math.exp(a2 - 0.5 * a2 * c1 + 0.5 * a2 * c1 * c1) + slack
    return SumBounds(sigma1, sigma2, total, a1, a2, c1, c2, slack)
