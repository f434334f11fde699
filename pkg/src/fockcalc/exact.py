"""Exact rational arithmetic kernels.

The coefficient field everywhere in this package is the rationals,
represented by ``fractions.Fraction`` (arbitrary precision, always in
lowest terms, positive denominator).  This module adds:

* truncated univariate power series over Fraction,
* Bernoulli numbers (convention fixed by x/(e^x - 1), so B_1 = -1/2),
* zeta values at nonpositive integers,
* the partition generating function and its eta-shifted form.

Truncation discipline: every binary series operation carries the minimum
truncation order of its inputs, and reading a coefficient beyond the
truncation order raises ``SeriesError`` instead of silently returning 0.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class SeriesError(ValueError):
    """Invalid series operation (bad precondition or uncertified read)."""


def rat_str(q: Fraction) -> str:
    """Serialize a rational as ``p`` or ``p/q`` (q > 1), e.g. ``-1/12``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s)


class PowerSeries:
    """Truncated power series sum_{0 <= n <= order} c_n x^n over Fraction.

    Coefficients are stored sparsely; absent exponents are zero.  All
    arithmetic is exact through the carried truncation order.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs=None, order=0):
        if order < 0:
            raise SeriesError("truncation order must be >= 0")
        self.order = order
        self.coeffs = {}
        if coeffs:
            for n, c in coeffs.items():
                if n < 0:
                    raise SeriesError("power series exponents must be >= 0")
                if n > order:
                    raise SeriesError(f"exponent {n} exceeds truncation order {order}")
                c = Fraction(c)
                if c:
                    self.coeffs[n] = c

    @classmethod
    def zero(cls, order):
        return cls({}, order)

    @classmethod
    def one(cls, order):
        return cls({0: ONE}, order)

    @classmethod
    def x(cls, order):
        return cls({1: ONE} if order >= 1 else {}, order)

    def coeff(self, n: int) -> Fraction:
        if n < 0:
            return ZERO
        if n > self.order:
            raise SeriesError(
                f"coefficient of x^{n} requested beyond truncation order {self.order}")
        return self.coeffs.get(n, ZERO)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return PowerSeries({n: c for n, c in self.coeffs.items() if n <= order}, order)

    def constant_term(self) -> Fraction:
        return self.coeffs.get(0, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other):
        order = min(self.order, other.order)
        out = {}
        for n in set(self.coeffs) | set(other.coeffs):
            if n <= order:
                c = self.coeffs.get(n, ZERO) + other.coeffs.get(n, ZERO)
                if c:
                    out[n] = c
        return PowerSeries(out, order)

    def __neg__(self):
        return PowerSeries({n: -c for n, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "PowerSeries":
        a = Fraction(a)
        if not a:
            return PowerSeries.zero(self.order)
        return PowerSeries({n: a * c for n, c in self.coeffs.items()}, self.order)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by x^k (k >= 0); truncation order grows with the shift."""
        if k < 0:
            raise SeriesError("shift exponent must be >= 0")
        return PowerSeries({n + k: c for n, c in self.coeffs.items()}, self.order + k)

    def __mul__(self, other):
        order = min(self.order, other.order)
        out = {}
        for i, a in self.coeffs.items():
            if i > order:
                continue
            for j, b in other.coeffs.items():
                n = i + j
                if n > order:
                    continue
                c = out.get(n, ZERO) + a * b
                if c:
                    out[n] = c
                elif n in out:
                    del out[n]
        return PowerSeries(out, order)

    def div(self, other: "PowerSeries") -> "PowerSeries":
        """Exact long division; requires a unit constant term in the divisor."""
        b0 = other.constant_term()
        if not b0:
            raise SeriesError("division by a series with zero constant term")
        order = min(self.order, other.order)
        out = {}
        for n in range(order + 1):
            acc = self.coeffs.get(n, ZERO)
            for k, ck in out.items():
                acc -= ck * other.coeffs.get(n - k, ZERO)
            c = acc / b0
            if c:
                out[n] = c
        return PowerSeries(out, order)

    def inverse(self) -> "PowerSeries":
        return PowerSeries.one(self.order).div(self)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(x)); the inner series must have zero constant term."""
        if inner.constant_term():
            raise SeriesError("composition requires zero inner constant term")
        order = min(self.order, inner.order)
        inner = inner.truncate(order)
        out = PowerSeries({0: self.coeffs.get(0, ZERO)}, order)
        power = PowerSeries.one(order)
        for n in range(1, order + 1):
            power = power * inner
            if power.is_zero():
                break
            cn = self.coeffs.get(n, ZERO)
            if cn:
                out = out + power.scale(cn)
        return out

    def pow_int(self, k: int) -> "PowerSeries":
        """Integer power; negative k inverts (unit constant term required)."""
        if k < 0:
            return self.inverse().pow_int(-k)
        result = PowerSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries.zero(0)
        return PowerSeries({n - 1: n * c for n, c in self.coeffs.items() if n >= 1},
                           self.order - 1)

    def exp(self) -> "PowerSeries":
        """exp of a series with zero constant term, via e' = a' e."""
        if self.constant_term():
            raise SeriesError("exp requires zero constant term")
        order = self.order
        out = {0: ONE}
        for n in range(1, order + 1):
            acc = ZERO
            for k in range(1, n + 1):
                ak = self.coeffs.get(k, ZERO)
                if ak:
                    acc += k * ak * out.get(n - k, ZERO)
            c = acc / n
            if c:
                out[n] = c
        return PowerSeries(out, order)

    def log(self) -> "PowerSeries":
        """log of a series with constant term 1, via l' = a'/a."""
        if self.constant_term() != 1:
            raise SeriesError("log requires constant term 1")
        order = self.order
        out = {}
        for n in range(1, order + 1):
            acc = n * self.coeffs.get(n, ZERO)
            for k in range(1, n):
                lk = out.get(k, ZERO)
                if lk:
                    acc -= k * lk * self.coeffs.get(n - k, ZERO)
            c = acc / n
            if c:
                out[n] = c
        return PowerSeries(out, order)

    def to_pairs(self):
        """JSON form: sorted [exponent, "p/q"] pairs."""
        return [[n, rat_str(c)] for n, c in sorted(self.coeffs.items())]

    def __repr__(self):
        terms = " + ".join(f"{rat_str(c)}*x^{n}" for n, c in sorted(self.coeffs.items()))
        return f"PowerSeries({terms or '0'}; order {self.order})"


def series_arith(a: PowerSeries, b: PowerSeries, op: str) -> PowerSeries:
    """Dispatch form of the binary series operations: add/mul/div/compose."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a.div(b)
    if op == "compose":
        return a.compose(b)
    raise SeriesError(f"unknown series operation {op!r}")


def series_exp_log(a: PowerSeries, op: str) -> PowerSeries:
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise SeriesError(f"unknown series operation {op!r}")


def exp_x(order: int) -> PowerSeries:
    """e^x - computed from the factorial coefficients."""
    return PowerSeries({n: Fraction(1, _factorial(n)) for n in range(order + 1)}, order)


@functools.lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return 1 if n <= 1 else n * _factorial(n - 1)


# ---------------------------------------------------------------------------
# Bernoulli numbers and zeta at nonpositive integers
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE = [ONE]


def bernoulli(k: int) -> Fraction:
    """B_k in the x/(e^x - 1) convention (B_1 = -1/2).

    Computed by the classical recurrence sum_{j<m} C(m+1, j) B_j = -... ,
    i.e. B_m = -1/(m+1) * sum_{j=0}^{m-1} C(m+1, j) B_j, which pins the
    same values as the generating-function division (cross-checked by
    ``check_geometric_bernoulli``).
    """
    if k < 0:
        raise ValueError("Bernoulli index must be >= 0")
    while len(_BERNOULLI_CACHE) <= k:
        m = len(_BERNOULLI_CACHE)
        acc = ZERO
        for j in range(m):
            acc += comb(m + 1, j) * _BERNOULLI_CACHE[j]
        _BERNOULLI_CACHE.append(-acc / (m + 1))
    return _BERNOULLI_CACHE[k]


def bernoulli_series(order: int) -> PowerSeries:
    """x/(e^x - 1) through the given order, by exact long division.

    The coefficient of x^k is B_k / k!.
    """
    # divide x by (e^x - 1) after cancelling the common factor x
    denom = PowerSeries(
        {n - 1: Fraction(1, _factorial(n)) for n in range(1, order + 2)}, order)
    return PowerSeries.one(order).div(denom)


def zeta_nonpositive(n: int) -> Fraction:
    """zeta(-n) for n >= 0.

    zeta(-n) = -B_{n+1}/(n+1) for n >= 1; zeta(0) is the special case
    -B_1 - 1 = -1/2.
    """
    if n < 0:
        raise ValueError("argument must be >= 0 (value requested is zeta(-n))")
    if n == 0:
        return -bernoulli(1) - 1
    return -bernoulli(n + 1) / (n + 1)


def check_geometric_bernoulli(order: int):
    """Compare the two rigorous routes to 1/(1 - e^x) coefficient-wise.

    Left side: -x^{-1} * (x/(e^x-1)) with the inner series computed by long
    division.  Right side: -sum_k B_k/k! x^{k-1} with B_k from the
    recurrence.  The report has one cell per exponent from -1 up.
    """
    from .report import VerificationReport

    if order < 1:
        raise ValueError("order must be >= 1")
    rep = VerificationReport(
        identity="geometric-bernoulli",
        parameters={"order": order},
    )
    divided = bernoulli_series(order)
    for k in range(order + 1):
        lhs = -divided.coeff(k)          # coefficient of x^{k-1} on the left
        rhs = -bernoulli(k) / _factorial(k)
        rep.add_cell(f"x^{k - 1}", rat_str(lhs), rat_str(rhs))
    return rep


# ---------------------------------------------------------------------------
# Partition generating function and the eta-shifted graded dimension
# ---------------------------------------------------------------------------

def graded_dimension(max_n: int) -> PowerSeries:
    """prod_{n>0} (1 - q^n)^{-1} through q^max_n.

    The coefficient of q^n is the number of partitions of n, which is the
    dimension of the weight-n subspace of the Fock space.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    result = PowerSeries.one(max_n)
    for n in range(1, max_n + 1):
        geometric = PowerSeries(
            {j * n: ONE for j in range(max_n // n + 1)}, max_n)
        result = result * geometric
    return result


@dataclass(frozen=True)
class ShiftedQSeries:
    """q^shift times an ordinary power series in q; shift is rational."""

    shift: Fraction
    series: PowerSeries

    def to_json_dict(self):
        return {"shift": rat_str(self.shift), "series": self.series.to_pairs()}


def chi_s(max_n: int) -> ShiftedQSeries:
    """Graded dimension in the regularized grading: q^{-1/24} / prod (1-q^n).

    This is 1/eta(q); the -1/24 offset is the vacuum eigenvalue shift of
    the regularized degree operator.
    """
    return ShiftedQSeries(Fraction(-1, 24), graded_dimension(max_n))
