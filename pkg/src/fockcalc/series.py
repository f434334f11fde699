"""Sparse multivariate formal series with certified exponent regions.

Two kinds of variables coexist:

* truncated-nonnegative ("trunc") variables: the true series has only
  nonnegative exponents in them, and values are certified through a
  total-degree cap ``tcap`` over the whole trunc group;
* window variables: the true series is doubly infinite, and only
  exponents inside a certified interval [lo, hi] are known (None on a
  side means certified all the way out, i.e. known zero beyond the
  stored support in that direction).

Arithmetic propagates certified regions conservatively and raises
``UncertifiedError`` rather than ever emitting an unknown coefficient as
if it were exact.  Geometric-series poles in a linear form of the trunc
variables stay symbolic in ``LocalizedSeries`` and are expanded as late
as possible under an explicit ``ExpansionConvention``; only expansion
introduces negative trunc exponents, recorded per series in
``neg_floor`` (below the floor the value is uncertified, not zero).

On this core the module builds the formal delta function, the formal
translation and dilation exponentials, the colon- and ++-ordered
generating products of oscillator pairs, the contraction identity check,
and the verifier for the generating-function commutator identity of the
zeta-regularized quadratic family.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact import ZERO, bernoulli
from .fock import FockVector, fock_str, h_apply
from .quadratic import ordered_pair_apply
from .report import VerificationReport


class UncertifiedError(ValueError):
    """A coefficient outside the certified region was requested or needed."""


@dataclass(frozen=True)
class VarSpec:
    """A formal variable with its exponent policy.

    kind "trunc": nonnegative exponents, truncated (order = default cap).
    kind "window": integer exponents certified on [lo, hi].
    """

    name: str
    kind: str
    lo: int | None = None
    hi: int | None = None
    order: int | None = None


def trunc_var(name: str, order: int | None = None) -> VarSpec:
    return VarSpec(name, "trunc", order=order)


def window_var(name: str, lo: int, hi: int) -> VarSpec:
    if lo > hi:
        raise ValueError("window lo must be <= hi")
    return VarSpec(name, "window", lo=lo, hi=hi)


@dataclass(frozen=True)
class ExpansionConvention:
    """Negative powers are permitted only in the distinguished variable."""

    distinguished: str


NEG_POWERS_Y1 = ExpansionConvention("y1")
NEG_POWERS_Y2 = ExpansionConvention("y2")


def convention(name: str) -> ExpansionConvention:
    table = {"neg-powers-y1": NEG_POWERS_Y1, "neg-powers-y2": NEG_POWERS_Y2}
    if name not in table:
        raise ValueError(f"unknown expansion convention {name!r}")
    return table[name]


def _min_none(a, b):
    # None acts as +infinity
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def comb_int(a: int, b: int) -> int:
    """Binomial coefficient with arbitrary integer top argument."""
    if b < 0:
        return 0
    num = 1
    for i in range(b):
        num *= a - i
    return num // factorial(b)


class MultiSeries:
    """Sparse series over a fixed ordered variable tuple.

    terms maps exponent tuples to coefficients (Fraction or FockVector).
    Certification state: ``x_ival`` per window variable, ``tcap`` for the
    trunc group (None = complete), ``neg_floor`` marking trunc variables
    whose negative exponents are certified only down to a floor.
    """

    __slots__ = ("varspecs", "terms", "x_ival", "tcap", "neg_floor", "_pos",
                 "_trunc")

    def __init__(self, varspecs, terms=None, x_ival=None, tcap=None,
                 neg_floor=None):
        self.varspecs = tuple(varspecs)
        self._pos = {v.name: i for i, v in enumerate(self.varspecs)}
        self._trunc = tuple(i for i, v in enumerate(self.varspecs)
                            if v.kind == "trunc")
        self.terms = terms if terms is not None else {}
        self.x_ival = dict(x_ival) if x_ival else {}
        for v in self.varspecs:
            if v.kind == "window" and v.name not in self.x_ival:
                self.x_ival[v.name] = (v.lo, v.hi)
        self.tcap = tcap
        self.neg_floor = dict(neg_floor) if neg_floor else {}

    # -- structure helpers --------------------------------------------------

    def pos(self, name: str) -> int:
        return self._pos[name]

    def window_names(self):
        return tuple(v.name for v in self.varspecs if v.kind == "window")

    def tdeg(self, cell) -> int:
        return sum(cell[i] for i in self._trunc)

    def same_space(self, other: "MultiSeries") -> bool:
        return self.varspecs == other.varspecs

    def _accumulate(self, cell, val):
        acc = self.terms.get(cell)
        acc = val if acc is None else acc + val
        if acc:
            self.terms[cell] = acc
        elif cell in self.terms:
            del self.terms[cell]

    # -- certification --------------------------------------------------------

    def known(self, cell) -> bool:
        """True when the exact coefficient at the cell is determined."""
        for i in self._trunc:
            if cell[i] < 0:
                name = self.varspecs[i].name
                if name in self.neg_floor:
                    if cell[i] < self.neg_floor[name]:
                        return False
                else:
                    return True    # known zero: true support is nonnegative
        if self.tcap is not None and self.tdeg(cell) > self.tcap:
            return False
        for name in self.window_names():
            lo, hi = self.x_ival[name]
            e = cell[self._pos[name]]
            if lo is not None and e < lo:
                return False
            if hi is not None and e > hi:
                return False
        return True

    def coeff(self, cell):
        cell = tuple(cell)
        if not self.known(cell):
            raise UncertifiedError(f"cell {cell} outside certified region")
        got = self.terms.get(cell)
        if got is not None:
            return got
        for c in self.terms.values():
            return c - c         # zero of the coefficient space
        return ZERO

    def _prune(self):
        dead = [c for c in self.terms if not self.terms[c] or not self.known(c)]
        for c in dead:
            del self.terms[c]
        return self

    # -- linear operations ----------------------------------------------------

    def add(self, other: "MultiSeries") -> "MultiSeries":
        assert self.same_space(other)
        ival = {}
        for name in self.window_names():
            alo, ahi = self.x_ival[name]
            blo, bhi = other.x_ival[name]
            lo = alo if blo is None else (blo if alo is None else max(alo, blo))
            hi = ahi if bhi is None else (bhi if ahi is None else min(ahi, bhi))
            ival[name] = (lo, hi)
        floor = dict(self.neg_floor)
        for name, f in other.neg_floor.items():
            floor[name] = max(floor.get(name, f), f)
        out = MultiSeries(self.varspecs, dict(self.terms), ival,
                          _min_none(self.tcap, other.tcap), floor)
        for cell, c in other.terms.items():
            out._accumulate(cell, c)
        return out._prune()

    def sub(self, other):
        return self.add(other.scale(-1))

    def scale(self, a) -> "MultiSeries":
        a = Fraction(a)
        terms = {}
        if a:
            for cell, c in self.terms.items():
                terms[cell] = c.scale(a) if isinstance(c, FockVector) else c * a
        return MultiSeries(self.varspecs, terms, self.x_ival, self.tcap,
                           self.neg_floor)

    def scale_vector(self, v: FockVector) -> "MultiSeries":
        """Tensor a scalar series with a fixed vector."""
        terms = {}
        for cell, c in self.terms.items():
            vec = v.scale(c)
            if vec:
                terms[cell] = vec
        return MultiSeries(self.varspecs, terms, self.x_ival, self.tcap,
                           self.neg_floor)

    def diff(self, name: str) -> "MultiSeries":
        """Partial derivative in one variable."""
        i = self._pos[name]
        spec = self.varspecs[i]
        out_terms = {}
        for cell, c in self.terms.items():
            e = cell[i]
            if e == 0:
                continue
            new = cell[:i] + (e - 1,) + cell[i + 1:]
            val = c.scale(e) if isinstance(c, FockVector) else c * e
            acc = out_terms.get(new)
            acc = val if acc is None else acc + val
            if acc:
                out_terms[new] = acc
            elif new in out_terms:
                del out_terms[new]
        ival = dict(self.x_ival)
        tcap = self.tcap
        floor = dict(self.neg_floor)
        if spec.kind == "window":
            lo, hi = ival[name]
            ival[name] = (None if lo is None else lo - 1,
                          None if hi is None else hi - 1)
        else:
            tcap = None if tcap is None else tcap - 1
            if name in floor:
                floor[name] -= 1
        return MultiSeries(self.varspecs, out_terms, ival, tcap, floor)._prune()

    # -- multiplication ---------------------------------------------------------

    def _supp(self, name):
        i = self._pos[name]
        if not self.terms:
            return (None, None)
        exps = [cell[i] for cell in self.terms]
        return (min(exps), max(exps))

    def mul(self, other: "MultiSeries") -> "MultiSeries":
        """Certified product.

        Both factors must be ordinary in the trunc group (expanded pole
        series never multiply; expand last).  Per window variable, the
        unknown region of either factor must be matched by certified-zero
        behaviour of the other, else the certified result region is empty
        and this raises.
        """
        assert self.same_space(other)
        if self.neg_floor or other.neg_floor:
            raise UncertifiedError("cannot multiply expanded pole series; "
                                   "expand after all products")
        tcap = _min_none(self.tcap, other.tcap)
        ival = {}
        for name in self.window_names():
            ival[name] = _mul_interval(self.x_ival[name], self._supp(name),
                                       other.x_ival[name], other._supp(name))
        out = MultiSeries(self.varspecs, {}, ival, tcap)
        for ca, a in self.terms.items():
            a_vec = isinstance(a, FockVector)
            for cb, b in other.terms.items():
                cell = tuple(x + y for x, y in zip(ca, cb))
                if tcap is not None and out.tdeg(cell) > tcap:
                    continue
                if a_vec:
                    val = a.scale(b)
                elif isinstance(b, FockVector):
                    val = b.scale(a)
                else:
                    val = a * b
                out._accumulate(cell, val)
        return out._prune()

    # -- serialization -----------------------------------------------------------

    def to_json(self):
        from .exact import rat_str
        records = []
        for cell in sorted(self.terms):
            c = self.terms[cell]
            records.append({
                "exponents": {v.name: e for v, e in zip(self.varspecs, cell) if e},
                "coefficient": c.to_json() if isinstance(c, FockVector)
                               else rat_str(c),
            })
        return records

    def __repr__(self):
        names = ",".join(v.name for v in self.varspecs)
        return (f"MultiSeries[{names}]({len(self.terms)} terms, "
                f"tcap={self.tcap}, x={self.x_ival})")


def _mul_interval(a_iv, a_supp, b_iv, b_supp):
    """Certified interval of a product in one window variable.

    A cell of the product is certified only when every contributing
    split avoids the unknown regions: an unknown region of one factor
    must be matched by certified-zero behaviour of the other (requiring
    certification to infinity on that side), and two unknown regions on
    the same side must not be able to meet.  Support bounds are None for
    a factor with no stored terms (certified zero throughout its
    interval).
    """
    alo, ahi = a_iv
    blo, bhi = b_iv
    asmin, asmax = a_supp
    bsmin, bsmax = b_supp

    def empty():
        raise UncertifiedError(
            "window-variable product has an empty certified region")

    lo_cands, hi_cands = [], []
    if alo is not None:              # A unknown below: B must vanish above
        if bhi is not None:
            empty()
        if bsmax is not None:
            lo_cands.append(alo + bsmax)
        if blo is not None:
            lo_cands.append(alo + blo - 1)
    if blo is not None:              # B unknown below: A must vanish above
        if ahi is not None:
            empty()
        if asmax is not None:
            lo_cands.append(blo + asmax)
        if alo is not None:
            lo_cands.append(alo + blo - 1)
    if ahi is not None:              # A unknown above: B must vanish below
        if blo is not None:
            empty()
        if bsmin is not None:
            hi_cands.append(ahi + bsmin)
        if bhi is not None:
            hi_cands.append(ahi + bhi + 1)
    if bhi is not None:              # B unknown above: A must vanish below
        if alo is not None:
            empty()
        if asmin is not None:
            hi_cands.append(bhi + asmin)
        if ahi is not None:
            hi_cands.append(ahi + bhi + 1)
    lo = max(lo_cands) if lo_cands else None
    hi = min(hi_cands) if hi_cands else None
    if lo is not None and hi is not None and lo > hi:
        empty()
    return (lo, hi)


# ---------------------------------------------------------------------------
# Elementary constructions
# ---------------------------------------------------------------------------

def constant_series(varspecs, value=Fraction(1)) -> MultiSeries:
    complete = {v.name: (None, None) for v in varspecs if v.kind == "window"}
    zero_cell = (0,) * len(varspecs)
    terms = {zero_cell: Fraction(value)} if value else {}
    return MultiSeries(varspecs, terms, complete)


def monomial_series(varspecs, exponents: dict, value=Fraction(1)) -> MultiSeries:
    out = constant_series(varspecs, value)
    if not value:
        return out
    cell = [0] * len(varspecs)
    for name, e in exponents.items():
        cell[out.pos(name)] = e
    out.terms = {tuple(cell): Fraction(value)}
    return out


@functools.lru_cache(maxsize=None)
def _exp_cells(coeffs: tuple, tcap: int) -> tuple:
    """Term list of exp(sum c_i u_i) through total degree tcap."""
    out = []

    def rec(i, budget, prefix, value):
        if i == len(coeffs):
            out.append((tuple(prefix), value))
            return
        c = coeffs[i]
        if c == 0:
            rec(i + 1, budget, prefix + [0], value)
            return
        power = Fraction(1)
        for k in range(budget + 1):
            rec(i + 1, budget - k, prefix + [k], value * power)
            power = power * c / (k + 1)

    rec(0, tcap, [], Fraction(1))
    return tuple(out)


def exp_linear_form(varspecs, form: dict, tcap: int) -> MultiSeries:
    """exp(sum_v form[v]*v) over the trunc variables, total degree <= tcap."""
    names = [v.name for v in varspecs if v.kind == "trunc"]
    coeffs = tuple(form.get(n, 0) for n in names)
    pos = {v.name: i for i, v in enumerate(varspecs)}
    terms = {}
    for local_cell, value in _exp_cells(coeffs, tcap):
        if not value:
            continue
        cell = [0] * len(varspecs)
        for n, e in zip(names, local_cell):
            cell[pos[n]] = e
        terms[tuple(cell)] = value
    complete = {v.name: (None, None) for v in varspecs if v.kind == "window"}
    return MultiSeries(varspecs, terms, complete, tcap)


def delta_series(varspecs, ratio: dict, window: tuple) -> MultiSeries:
    """The formal delta function sum_n (ratio)^n restricted to a window.

    ratio is a single monomial given as an exponent map over window
    variables; each variable's certified interval is the image of the
    window under its ratio exponent.
    """
    lo, hi = window
    pos = {v.name: i for i, v in enumerate(varspecs)}
    terms = {}
    for n in range(lo, hi + 1):
        cell = [0] * len(varspecs)
        for name, rho in ratio.items():
            cell[pos[name]] = rho * n
        terms[tuple(cell)] = Fraction(1)
    ival = {}
    for v in varspecs:
        if v.kind != "window":
            continue
        rho = ratio.get(v.name, 0)
        if rho == 0:
            ival[v.name] = (None, None)
        else:
            ival[v.name] = (min(rho * lo, rho * hi), max(rho * lo, rho * hi))
    return MultiSeries(varspecs, terms, ival)


def apply_taylor(yname: str, f: MultiSeries, xname: str,
                 order: int | None = None) -> MultiSeries:
    """Formal translation f(x) -> f(x+y), binomials expanded in
    nonnegative powers of y.

    x^m translates to sum_k C(m,k) x^{m-k} y^k (general integer m); the
    certified x interval shrinks by the y order at the top end.
    """
    yspec = f.varspecs[f.pos(yname)]
    if yspec.kind != "trunc":
        raise ValueError("translation variable must be truncated-nonnegative")
    jmax = order if order is not None else (
        yspec.order if yspec.order is not None else f.tcap)
    if jmax is None:
        raise ValueError("no truncation order available for the y variable")
    xi, yi = f.pos(xname), f.pos(yname)
    tcap = _min_none(f.tcap, jmax)
    ival = dict(f.x_ival)
    lo, hi = ival[xname]
    ival[xname] = (lo, None if hi is None else hi - jmax)
    out = MultiSeries(f.varspecs, {}, ival, tcap, f.neg_floor)
    for cell, c in f.terms.items():
        m = cell[xi]
        for k in range(jmax + 1):
            coef = comb_int(m, k)
            if not coef:
                continue
            new = list(cell)
            new[xi] = m - k
            new[yi] = cell[yi] + k
            val = c.scale(coef) if isinstance(c, FockVector) else c * coef
            out._accumulate(tuple(new), val)
    return out._prune()


def apply_dilation(yname: str, f: MultiSeries, xname: str,
                   order: int | None = None) -> MultiSeries:
    """Formal dilation f(x) -> f(e^y x): the x^n coefficient picks up the
    exponential series e^{ny} through the y truncation."""
    yspec = f.varspecs[f.pos(yname)]
    if yspec.kind != "trunc":
        raise ValueError("dilation variable must be truncated-nonnegative")
    jmax = order if order is not None else (
        yspec.order if yspec.order is not None else f.tcap)
    if jmax is None:
        raise ValueError("no truncation order available for the y variable")
    xi, yi = f.pos(xname), f.pos(yname)
    out = MultiSeries(f.varspecs, {}, f.x_ival, _min_none(f.tcap, jmax),
                      f.neg_floor)
    for cell, c in f.terms.items():
        n = cell[xi]
        power = Fraction(1)
        for k in range(jmax + 1):
            if k:
                power = power * n / k
                if not power:
                    break
            new = list(cell)
            new[yi] = cell[yi] + k
            val = c.scale(power) if isinstance(c, FockVector) else c * power
            out._accumulate(tuple(new), val)
    return out._prune()


# ---------------------------------------------------------------------------
# Localized pole series
# ---------------------------------------------------------------------------

class LocalizedSeries:
    """body / lambda^order with lambda an integer linear form in trunc vars.

    The body is an ordinary (nonnegative) series; expansion into a
    MultiSeries happens once, at the very end, under an explicit
    convention.
    """

    __slots__ = ("pole", "order", "body")

    def __init__(self, pole: dict, order: int, body: MultiSeries):
        if order < 0:
            raise ValueError("pole order must be >= 0")
        self.pole = {k: v for k, v in pole.items() if v}
        self.order = order
        self.body = body

    def scale(self, a):
        return LocalizedSeries(self.pole, self.order, self.body.scale(a))

    def mul_series(self, s: MultiSeries):
        return LocalizedSeries(self.pole, self.order, self.body.mul(s))

    def _pole_times(self, s: MultiSeries) -> MultiSeries:
        """Multiply an ordinary series by the linear form lambda."""
        out = MultiSeries(s.varspecs, {}, s.x_ival,
                          None if s.tcap is None else s.tcap + 1)
        for name, c in self.pole.items():
            i = s.pos(name)
            for cell, val in s.terms.items():
                new = cell[:i] + (cell[i] + 1,) + cell[i + 1:]
                out._accumulate(new,
                                val.scale(c) if isinstance(val, FockVector)
                                else val * c)
        return out

    def dy(self, name: str) -> "LocalizedSeries":
        """d/dname of body/lambda^order, folded to pole order + 1."""
        c = self.pole.get(name, 0)
        part = self._pole_times(self.body.diff(name))
        if c:
            part = part.add(self.body.scale(-self.order * c))
        return LocalizedSeries(self.pole, self.order + 1, part)

    def add(self, other: "LocalizedSeries") -> "LocalizedSeries":
        if self.pole != other.pole:
            raise ValueError("cannot add localized series with different poles")
        k = max(self.order, other.order)
        body_a = self.body
        for _ in range(k - self.order):
            body_a = self._pole_times(body_a)
        body_b = other.body
        for _ in range(k - other.order):
            body_b = other._pole_times(body_b)
        return LocalizedSeries(self.pole, k, body_a.add(body_b))

    def expand(self, conv: ExpansionConvention, dvar_floor: int) -> MultiSeries:
        """Binomial expansion with negative powers confined to the
        distinguished variable.

        lambda^{-k} = sum_{i>=0} C(-k,i) (c_d y_d)^{-k-i} mu^i where
        mu = lambda - c_d y_d.  Certified for cells with distinguished
        exponent >= dvar_floor and total degree <= body.tcap - k.
        """
        dvar = conv.distinguished
        c_d = self.pole.get(dvar, 0)
        if not c_d:
            raise ValueError(
                f"distinguished variable {dvar} does not appear in the pole")
        body, k = self.body, self.order
        if k == 0:
            return body
        if body.tcap is None:
            raise ValueError("pole expansion needs a truncated body")
        tcap = body.tcap - k
        di = body.pos(dvar)
        mu = {n: c for n, c in self.pole.items() if n != dvar}
        i_max = body.tcap - k - dvar_floor
        complete = {n: (None, None) for n in body.window_names()}
        out = MultiSeries(body.varspecs, {}, complete, tcap, {dvar: dvar_floor})
        mu_power = {(0,) * len(body.varspecs): Fraction(1)}
        for i in range(max(i_max, 0) + 1):
            c_i = Fraction(comb_int(-k, i), c_d ** (k + i))
            if c_i:
                for mcell, mval in mu_power.items():
                    for bcell, bval in body.terms.items():
                        cell = [x + y for x, y in zip(mcell, bcell)]
                        cell[di] -= k + i
                        cell = tuple(cell)
                        if cell[di] < dvar_floor or out.tdeg(cell) > tcap:
                            continue
                        out._accumulate(
                            cell,
                            bval.scale(c_i * mval)
                            if isinstance(bval, FockVector)
                            else bval * c_i * mval)
            if not mu:
                break
            nxt = {}
            for mcell, mval in mu_power.items():
                for name, c in mu.items():
                    j = body.pos(name)
                    new = mcell[:j] + (mcell[j] + 1,) + mcell[j + 1:]
                    acc = nxt.get(new, ZERO) + mval * c
                    if acc:
                        nxt[new] = acc
                    elif new in nxt:
                        del nxt[new]
            mu_power = nxt
        return out


def _poly_in_form(varspecs, form: dict, coeffs, tcap: int) -> MultiSeries:
    """sum_k coeffs[k] * (linear form)^k as an ordinary series."""
    complete = {v.name: (None, None) for v in varspecs if v.kind == "window"}
    out = MultiSeries(varspecs, {}, complete, tcap)
    pos = {v.name: i for i, v in enumerate(varspecs)}
    power = {(0,) * len(varspecs): Fraction(1)}
    for k in range(tcap + 1):
        if k:
            nxt = {}
            for cell, val in power.items():
                for name, c in form.items():
                    j = pos[name]
                    new = cell[:j] + (cell[j] + 1,) + cell[j + 1:]
                    acc = nxt.get(new, ZERO) + val * c
                    if acc:
                        nxt[new] = acc
                    elif new in nxt:
                        del nxt[new]
            power = nxt
            if not power:
                break
        ck = coeffs[k] if k < len(coeffs) else ZERO
        if not ck:
            continue
        for cell, val in power.items():
            acc = out.terms.get(cell, ZERO) + ck * val
            if acc:
                out.terms[cell] = acc
            elif cell in out.terms:
                del out.terms[cell]
    return out


def _geometric_pole_coeffs(order: int):
    """Coefficients of G(u) = u/(1 - e^{-u}) = sum_k B_k (-u)^k / k!."""
    return [bernoulli(k) * (-1) ** k / Fraction(factorial(k))
            for k in range(order + 1)]


def one_minus_exp_inverse(y1: str, y2: str, order: int,
                          varspecs=None) -> LocalizedSeries:
    """1/(1 - e^{-y1+y2}) as (y1-y2)^{-1} F(y1, y2).

    F is the entire body G(y1-y2) with G(u) = u/(1-e^{-u}); its diagonal
    profile carries the Bernoulli data.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if varspecs is None:
        varspecs = (trunc_var(y1, order), trunc_var(y2, order))
    body = _poly_in_form(varspecs, {y1: 1, y2: -1},
                         _geometric_pole_coeffs(order), order)
    return LocalizedSeries({y1: 1, y2: -1}, 1, body)


def _derivative_pole(a_form: dict, b_form: dict, varspecs,
                     order: int) -> LocalizedSeries:
    """W'(a-b) for W(u) = 1/(1-e^{-u}): pole order 2 with body H(a-b),
    H(u) = u G'(u) - G(u)."""
    g = _geometric_pole_coeffs(order)
    h = [(k - 1) * g[k] for k in range(order + 1)]
    lam: dict = {}
    for name, c in a_form.items():
        lam[name] = lam.get(name, 0) + c
    for name, c in b_form.items():
        lam[name] = lam.get(name, 0) - c
    lam = {n: c for n, c in lam.items() if c}
    body = _poly_in_form(varspecs, lam, h, order)
    return LocalizedSeries(lam, 2, body)


# ---------------------------------------------------------------------------
# Oscillator generating products
# ---------------------------------------------------------------------------

def slot_pair_apply(varspecs, a_form: dict, b_form: dict, xname: str,
                    window: tuple, v: FockVector, tcap: int) -> MultiSeries:
    """:h(e^a x) h(e^b x): applied to v, unhalved.

    a and b are integer linear forms in the trunc variables.  The
    coefficient of x^e is sum_j :h(j)h(n-j): v exp(-j a - (n-j) b) with
    n = -e, a finite sum on any finite vector.
    """
    pos = {vs.name: i for i, vs in enumerate(varspecs)}
    xi = pos[xname]
    lo, hi = window
    ival = {vs.name: ((lo, hi) if vs.name == xname else (None, None))
            for vs in varspecs if vs.kind == "window"}
    out = MultiSeries(varspecs, {}, ival, tcap)
    if not v:
        return out
    wv = v.max_weight()
    for e in range(lo, hi + 1):
        n = -e
        for j in range(min(0, n) - wv, max(0, n) + wv + 1):
            k = n - j
            if j == 0 or k == 0:
                continue
            vec = ordered_pair_apply(j, k, v)
            if not vec:
                continue
            form: dict = {}
            for name, c in a_form.items():
                form[name] = form.get(name, 0) - j * c
            for name, c in b_form.items():
                form[name] = form.get(name, 0) - k * c
            for ycell, c in exp_linear_form(varspecs, form, tcap).terms.items():
                cell = ycell[:xi] + (e,) + ycell[xi + 1:]
                out._accumulate(cell, vec.scale(c))
    return out


def slot_pair_apply_series(a_form: dict, b_form: dict, xname: str,
                           window: tuple, s: MultiSeries) -> MultiSeries:
    """Apply the colon pair in a fresh window variable to every
    coefficient of a vector-valued series."""
    if s.tcap is None:
        raise ValueError("series must carry a truncation cap")
    xi = s.pos(xname)
    lo, hi = window
    ival = dict(s.x_ival)
    ival[xname] = (lo, hi)
    out = MultiSeries(s.varspecs, {}, ival, s.tcap, s.neg_floor)
    for scell, vec in s.terms.items():
        if scell[xi] != 0:
            raise ValueError(f"series already involves {xname}")
        budget = s.tcap - s.tdeg(scell)
        part = slot_pair_apply(s.varspecs, a_form, b_form, xname, window, vec,
                               budget)
        for pcell, pvec in part.terms.items():
            cell = tuple(a + b for a, b in zip(scell, pcell))
            out._accumulate(cell, pvec)
    return out._prune()


def normal_ordered_pair(y1: str, y2: str, xname: str, v: FockVector,
                        window: tuple, order: int) -> MultiSeries:
    """:h(e^{y1} x) h(e^{y2} x): v, unhalved (the generating function of
    the quadratic family carries the extra 1/2)."""
    varspecs = (trunc_var(y1, order), trunc_var(y2, order),
                window_var(xname, *window))
    return slot_pair_apply(varspecs, {y1: 1}, {y2: 1}, xname, window, v, order)


def plusplus_pair(y1: str, y2: str, xname: str, v: FockVector, window: tuple,
                  order: int,
                  conv: ExpansionConvention = NEG_POWERS_Y1) -> MultiSeries:
    """++h(e^{y1} x) h(e^{y2} x)++ v: the colon product minus the expanded
    scalar correction d/dy1 [1/(1 - e^{-y1+y2})] acting as identity."""
    if conv.distinguished not in (y1, y2):
        raise ValueError("convention must distinguish one of the pair slots")
    colon = normal_ordered_pair(y1, y2, xname, v, window, order)
    pole = one_minus_exp_inverse(y1, y2, order + 2, colon.varspecs).dy(y1)
    correction = pole.expand(conv, -(2 + order)).scale_vector(v)
    return colon.sub(correction)


# ---------------------------------------------------------------------------
# Contraction identity
# ---------------------------------------------------------------------------

def contraction_check(v: FockVector, window: int) -> VerificationReport:
    """h(x1)h(x2) v = :h(x1)h(x2): v + [x2 d/dx2 1/(1-x2/x1)] v on the
    +-window box.

    Left side by iterated application; right side by normal-ordered
    application plus the geometric contraction scalar
    sum_{k>=1} k (x2/x1)^k acting as identity.
    """
    rep = VerificationReport(
        identity="contraction",
        parameters={"weight": v.max_weight(), "window": window},
    )
    box = range(-window, window + 1)
    for e1 in box:
        for e2 in box:
            lhs = h_apply(-e1, h_apply(-e2, v))
            rhs = ordered_pair_apply(-e1, -e2, v)
            if e1 + e2 == 0 and e2 >= 1:
                rhs = rhs + v.scale(e2)
            if lhs or rhs:
                rep.add_cell(f"x1^{e1} x2^{e2}", fock_str(lhs), fock_str(rhs))
            else:
                rep.bulk_passed += 1
    return rep


# ---------------------------------------------------------------------------
# Generating-function commutator identity of the regularized family
# ---------------------------------------------------------------------------

# the four right-hand terms: (outer variable, a-slot form, b-slot var,
# delta dilation pair (f, g)) for delta(e^f x1 / e^g x2)
_RHS_TERMS = (
    ("y1", {"y1": -1, "y2": 1, "y3": 1}, "y4", ("y1", "y3")),
    ("y1", {"y1": -1, "y2": 1, "y4": 1}, "y3", ("y1", "y4")),
    ("y2", {"y1": 1, "y2": -1, "y3": 1}, "y4", ("y2", "y3")),
    ("y2", {"y1": 1, "y2": -1, "y4": 1}, "y3", ("y2", "y4")),
)


def _mul_delta_pinned(n_series: MultiSeries, f: str, g: str, x1: str, x2: str,
                      out_window: tuple, tcap: int) -> MultiSeries:
    """n_series(x2, y) * delta(e^f x1 / e^g x2) on the output box.

    The delta contributes e^{n(f-g)} x1^n x2^{-n}; for an output cell the
    x1 exponent pins n, so the x2 slice of n_series is shifted by n and
    convolved with one exponential factor.
    """
    x1i, x2i = n_series.pos(x1), n_series.pos(x2)
    lo, hi = out_window
    n_lo, n_hi = n_series.x_ival[x2]
    ival = dict(n_series.x_ival)
    ival[x1] = (lo, hi)
    ival[x2] = (None if n_lo is None else n_lo - lo,
                None if n_hi is None else n_hi - hi)
    out = MultiSeries(n_series.varspecs, {}, ival,
                      _min_none(n_series.tcap, tcap))
    for e1 in range(lo, hi + 1):
        efactor = exp_linear_form(n_series.varspecs, {f: e1, g: -e1}, tcap)
        for ncell, vec in n_series.terms.items():
            e2 = ncell[x2i] - e1
            for ycell, c in efactor.terms.items():
                cell = [a + b for a, b in zip(ncell, ycell)]
                cell[x1i] = e1
                cell[x2i] = e2
                cell = tuple(cell)
                if out.tcap is not None and out.tdeg(cell) > out.tcap:
                    continue
                out._accumulate(cell, vec.scale(c))
    return out._prune()


def regularized_commutator_check(v: FockVector, window: int, ydeg: int,
                                 conv: ExpansionConvention = NEG_POWERS_Y1,
                                 ) -> VerificationReport:
    """Verify the generating-function commutator identity of the
    zeta-regularized quadratic family on one vector.

    Left side: the bracket of the two colon-ordered generating products,
    halved twice (the scalar ++-corrections cancel in any bracket).
    Right side: four terms, each a regularized generating function with a
    composite first slot times a dilated delta series, differentiated in
    an outer variable.  Pole parts are carried symbolically and expanded
    at comparison time under the given convention.  Compared cells: total
    y-degree <= ydeg, both x exponents in the +-window, the distinguished
    variable allowed down to the recorded pole floor.
    """
    w, d = window, ydeg
    dvar = conv.distinguished
    floor_d = -(3 + 3 * d) - 1
    body_order = d + 3
    varspecs = (trunc_var("y1", d), trunc_var("y2", d), trunc_var("y3", d),
                trunc_var("y4", d), window_var("x1", -w, w),
                window_var("x2", -w, w))
    pos = {vs.name: i for i, vs in enumerate(varspecs)}
    x1i, x2i = pos["x1"], pos["x2"]

    # left side: (1/4) [colon pair at x1, colon pair at x2] v
    q = slot_pair_apply(varspecs, {"y3": 1}, {"y4": 1}, "x2", (-w, w), v, d)
    pq = slot_pair_apply_series({"y1": 1}, {"y2": 1}, "x1", (-w, w), q)
    r = slot_pair_apply(varspecs, {"y1": 1}, {"y2": 1}, "x1", (-w, w), v, d)
    qr = slot_pair_apply_series({"y3": 1}, {"y4": 1}, "x2", (-w, w), r)
    lhs = pq.sub(qr).scale(Fraction(1, 4))

    # right side, colon parts: -(1/4) d_outer [slot series * delta]
    rhs = MultiSeries(varspecs, {}, {"x1": (-w, w), "x2": (-w, w)}, d)
    localized = {n: None for n in range(-w, w + 1)}
    for outer, a_form, b_var, (f, g) in _RHS_TERMS:
        n_series = slot_pair_apply(varspecs, a_form, {b_var: 1}, "x2",
                                   (-2 * w, 2 * w), v, d + 1)
        nd = _mul_delta_pinned(n_series, f, g, "x1", "x2", (-w, w), d + 1)
        rhs = rhs.add(nd.diff(outer).scale(Fraction(-1, 4)))
        # correction part: +(1/4) d_outer [ W'(a-b) e^{n(f-g)} ] at (n, -n)
        base = _derivative_pole(a_form, {b_var: 1}, varspecs, body_order)
        for n in range(-w, w + 1):
            efactor = exp_linear_form(varspecs, {f: n, g: -n}, body_order)
            piece = (base.mul_series(efactor).dy(outer)
                     .scale(Fraction(1, 4))
                     .expand(conv, floor_d).scale_vector(v))
            acc = localized[n]
            localized[n] = piece if acc is None else acc.add(piece)

    rep = VerificationReport(
        identity="regularized-commutator-genfun",
        parameters={"weight": v.max_weight(), "window": w, "ydeg": d,
                    "convention": f"neg-powers-{dvar}",
                    "dvar_floor": floor_d},
    )

    others = [n for n in ("y1", "y2", "y3", "y4") if n != dvar]

    def in_region(cell):
        if not (-w <= cell[x1i] <= w and -w <= cell[x2i] <= w):
            return False
        ed = cell[pos[dvar]]
        if ed < floor_d:
            return False
        rest = [cell[pos[n]] for n in others]
        if any(e < 0 for e in rest):
            return False
        return ed + sum(rest) <= d

    ycell_count = 0
    for ed in range(floor_d, d + 1):
        budget = d - ed
        ycell_count += (budget + 1) * (budget + 2) * (budget + 3) // 6
    region_size = ycell_count * (2 * w + 1) ** 2

    candidates = set(lhs.terms) | set(rhs.terms)
    for n, ser in localized.items():
        if ser is None:
            continue
        for cell in ser.terms:
            full = list(cell)
            full[x1i] = n
            full[x2i] = -n
            candidates.add(tuple(full))
    checked = sorted(c for c in candidates if in_region(c))
    rep.bulk_passed += region_size - len(checked)

    zero = FockVector()
    for cell in checked:
        lv = lhs.terms.get(cell, zero) if lhs.known(cell) else None
        rv = rhs.terms.get(cell, zero) if rhs.known(cell) else None
        if rv is not None and cell[x2i] == -cell[x1i]:
            ser = localized[cell[x1i]]
            if ser is not None:
                ycell = list(cell)
                ycell[x1i] = 0
                ycell[x2i] = 0
                ycell = tuple(ycell)
                if ser.known(ycell):
                    rv = rv + ser.terms.get(ycell, zero)
                else:
                    rv = None
        key = _cell_key(varspecs, cell)
        if lv is None or rv is None:
            rep.add_uncertified(key)
        else:
            rep.add_cell(key, fock_str(lv), fock_str(rv))
    return rep


def _cell_key(varspecs, cell):
    return " ".join(f"{v.name}^{e}" for v, e in zip(varspecs, cell) if e) or "1"
