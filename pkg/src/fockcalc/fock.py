"""The polynomial boson Fock space and its oscillator actions.

States are finite rational combinations of monomials h(-j1)...h(-jk)*1,
indexed by integer partitions (parts sorted descending).  The mode h(n)
acts by multiplication for n < 0, by n * d/dh(-n) for n > 0, and by zero
for n = 0; the vacuum is the empty partition.  wt h(-j) = j, so the weight
of a monomial is the sum of its parts.

Also provides Laurent polynomials in t with the homogeneous derivative
D = t d/dt, the target of the differential-operator projection of the
quadratic operator families.
"""

from __future__ import annotations

import functools
from fractions import Fraction

from .exact import ZERO, rat_str

# A monomial is a tuple of parts sorted descending; () is the vacuum.
VACUUM = ()


def monomial(parts) -> tuple:
    """Canonical monomial from an iterable of positive integer parts."""
    parts = tuple(sorted(parts, reverse=True))
    if any(p < 1 for p in parts):
        raise ValueError("parts must be positive integers")
    return parts


def monomial_weight(mon) -> int:
    return sum(mon)


class FockVector:
    """Finite sparse rational combination of Fock monomials.

    The term map never stores zero coefficients.  Instances are treated
    as immutable once returned from this module's functions.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_monomial(cls, mon, coeff=1):
        coeff = Fraction(coeff)
        return cls({monomial(mon): coeff} if coeff else {})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.frozen())

    def frozen(self):
        """Canonical hashable form (sorted term tuple)."""
        return tuple(sorted(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for mon, c in other.terms.items():
            acc = out.get(mon, ZERO) + c
            if acc:
                out[mon] = acc
            elif mon in out:
                del out[mon]
        return FockVector(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for mon, c in other.terms.items():
            acc = out.get(mon, ZERO) - c
            if acc:
                out[mon] = acc
            elif mon in out:
                del out[mon]
        return FockVector(out)

    def __neg__(self):
        return FockVector({mon: -c for mon, c in self.terms.items()})

    def scale(self, a):
        a = Fraction(a)
        if not a:
            return FockVector()
        return FockVector({mon: a * c for mon, c in self.terms.items()})

    def __mul__(self, a):
        return self.scale(a)

    __rmul__ = __mul__

    def coeff(self, mon) -> Fraction:
        return self.terms.get(tuple(mon), ZERO)

    def max_weight(self) -> int:
        """Largest monomial weight present (-1 for the zero vector)."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def weight_components(self):
        """Split into homogeneous pieces, sorted by weight."""
        buckets = {}
        for mon, c in self.terms.items():
            buckets.setdefault(sum(mon), {})[mon] = c
        return [(w, FockVector(t)) for w, t in sorted(buckets.items())]

    def __repr__(self):
        return f"FockVector({fock_str(self)})"

    def to_json(self):
        return [{"monomial": list(mon), "coefficient": rat_str(c)}
                for mon, c in sorted(self.terms.items())]


def fock_str(v: FockVector) -> str:
    """Canonical display string, e.g. ``1/2*[1,1] + 2*[3]``; "0" if zero."""
    if not v.terms:
        return "0"
    bits = []
    for mon, c in sorted(v.terms.items()):
        label = "[" + ",".join(str(p) for p in mon) + "]"
        bits.append(f"{rat_str(c)}*{label}")
    return " + ".join(bits)


def vacuum() -> FockVector:
    return FockVector({VACUUM: Fraction(1)})


def h_apply(n: int, v: FockVector) -> FockVector:
    """Action of the oscillator mode h(n) on a vector.

    n < 0: multiply by h(n), i.e. insert a part -n.
    n > 0: n * d/dh(-n), removing one part n per occurrence.
    n = 0: zero map (the central mode acts trivially).
    """
    if n == 0 or not v:
        return FockVector()
    out = {}
    if n < 0:
        part = -n
        for mon, c in v.terms.items():
            new = _insert_part(mon, part)
            acc = out.get(new, ZERO) + c
            if acc:
                out[new] = acc
            elif new in out:
                del out[new]
    else:
        for mon, c in v.terms.items():
            mult = mon.count(n)
            if not mult:
                continue
            new = _remove_part(mon, n)
            acc = out.get(new, ZERO) + c * n * mult
            if acc:
                out[new] = acc
            elif new in out:
                del out[new]
    return FockVector(out)


@functools.lru_cache(maxsize=None)
def _insert_part(mon: tuple, part: int) -> tuple:
    for i, p in enumerate(mon):
        if part >= p:
            return mon[:i] + (part,) + mon[i:]
    return mon + (part,)


@functools.lru_cache(maxsize=None)
def _remove_part(mon: tuple, part: int) -> tuple:
    i = mon.index(part)
    return mon[:i] + mon[i + 1:]


def weight(v: FockVector) -> int:
    """Common weight of a homogeneous nonzero vector."""
    weights = {sum(mon) for mon in v.terms}
    if not weights:
        raise ValueError("the zero vector has no weight")
    if len(weights) > 1:
        raise ValueError(f"vector is not weight-homogeneous: weights {sorted(weights)}")
    return weights.pop()


@functools.lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple:
    """All partitions of n as descending tuples, in descending lex order."""
    if n == 0:
        return (VACUUM,)
    out = []

    def rec(remaining, max_part, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for p in range(min(max_part, remaining), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


@functools.lru_cache(maxsize=None)
def weight_basis(w: int) -> tuple:
    """Basis monomials of the weight-w subspace, deterministically ordered."""
    return partitions_of(w)


@functools.lru_cache(maxsize=None)
def weight_index(w: int) -> dict:
    return {mon: i for i, mon in enumerate(weight_basis(w))}


def basis(max_weight: int) -> list:
    """All basis monomials of weight <= max_weight, by weight then lex."""
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    out = []
    for w in range(max_weight + 1):
        out.extend(weight_basis(w))
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials in t and the operators D^r (t^n D) D^r
# ---------------------------------------------------------------------------

class LaurentPolyVector:
    """Finitely supported map from integer powers of t to Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def monomial(cls, power: int, coeff=1):
        coeff = Fraction(coeff)
        return cls({power: coeff} if coeff else {})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolyVector):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k, ZERO) + c
            if acc:
                out[k] = acc
            elif k in out:
                del out[k]
        return LaurentPolyVector(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, a):
        a = Fraction(a)
        if not a:
            return LaurentPolyVector()
        return LaurentPolyVector({k: a * c for k, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "LaurentPolyVector(0)"
        body = " + ".join(f"{rat_str(c)}*t^{k}" for k, c in sorted(self.terms.items()))
        return f"LaurentPolyVector({body})"


def d_apply(p: LaurentPolyVector) -> LaurentPolyVector:
    """The homogeneous derivative D = t d/dt: D t^m = m t^m."""
    return LaurentPolyVector({k: k * c for k, c in p.terms.items() if k})


def t_mul(n: int, p: LaurentPolyVector) -> LaurentPolyVector:
    return LaurentPolyVector({k + n: c for k, c in p.terms.items()})


def diff_op_apply(r: int, n: int, p: LaurentPolyVector) -> LaurentPolyVector:
    """Apply (-1)^{r+1} D^r (t^n D) D^r to a Laurent polynomial.

    On t^m this gives (-1)^{r+1} m^{r+1} (m+n)^r t^{m+n}.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    out = p
    for _ in range(r):
        out = d_apply(out)
    out = t_mul(n, d_apply(out))
    for _ in range(r):
        out = d_apply(out)
    sign = 1 if (r + 1) % 2 == 0 else -1
    return out.scale(sign)
