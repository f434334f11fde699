"""Normal-ordered quadratic operators and their bracket verifiers.

The degree-n quadratic operator on the Fock space is
(1/2) sum_j :h(j) h(n-j):, and the r-indexed family weights each factor
by an r-th power of its mode index.  Normal ordering means annihilation
factors act first; on any finite vector only finitely many j contribute,
so applications are exact on the untruncated space.

The regularized family adds the exact scalar (-1)^r (1/2) zeta(-2r-1) to
the degree-0 operator.  Verifiers in this module check the bracket
relations of both families, decompose commutators over the spanning
family by exact linear algebra, test that regularized central terms are
pure monomials, and project operator parts onto Lie brackets of the
differential operators (-1)^{r+1} D^r (t^n D) D^r.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import ZERO, rat_str, zeta_nonpositive
from .fock import (FockVector, LaurentPolyVector, diff_op_apply, fock_str,
                   h_apply, weight_basis, weight_index)
from .report import FAIL, PASS, VerificationReport


class WindowError(ValueError):
    """A requested block lies outside the certified window."""


class FitError(ValueError):
    """Exact linear fit is impossible or not unique at this truncation."""


# ---------------------------------------------------------------------------
# Operator applications (exact on the whole space)
# ---------------------------------------------------------------------------

def ordered_pair_apply(j: int, k: int, v: FockVector) -> FockVector:
    """:h(j)h(k): v with the annihilation factor applied first."""
    if j > 0 and k < 0:
        return h_apply(k, h_apply(j, v))
    return h_apply(j, h_apply(k, v))


def Lr_apply(r: int, n: int, v: FockVector) -> FockVector:
    """(1/2) sum_j j^r (n-j)^r :h(j)h(n-j): v.

    Terms containing h(0) vanish; annihilation indices above the top
    weight of v vanish, so the sum below is the full result.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if not v:
        return FockVector()
    wv = v.max_weight()
    acc = FockVector()
    half = Fraction(1, 2)
    for j in range(min(0, n) - wv, max(0, n) + wv + 1):
        k = n - j
        if j == 0 or k == 0:
            continue
        term = ordered_pair_apply(j, k, v)
        if term:
            acc = acc + term.scale(half * (j ** r) * (k ** r))
    return acc


def L_apply(n: int, v: FockVector) -> FockVector:
    return Lr_apply(0, n, v)


def Lbar_apply(r: int, n: int, v: FockVector) -> FockVector:
    """Regularized family: for n = 0 add (-1)^r (1/2) zeta(-2r-1) times v."""
    out = Lr_apply(r, n, v)
    if n == 0 and v:
        shift = Fraction(1, 2) * zeta_nonpositive(2 * r + 1)
        if r % 2:
            shift = -shift
        out = out + v.scale(shift)
    return out


class OperatorSpec:
    """A weight-graded operator given by its exact action on vectors."""

    __slots__ = ("key", "name", "degree", "apply")

    def __init__(self, key, name, degree, apply_fn):
        self.key = key
        self.name = name
        self.degree = degree
        self.apply = apply_fn

    def __repr__(self):
        return f"OperatorSpec({self.name})"


def L_op(n: int) -> OperatorSpec:
    return OperatorSpec(("L", n), f"L({n})", n, lambda v: L_apply(n, v))


def Lr_op(r: int, n: int) -> OperatorSpec:
    return OperatorSpec(("Lr", r, n), f"L^({r})({n})", n,
                        lambda v: Lr_apply(r, n, v))


def Lbar_op(r: int, n: int) -> OperatorSpec:
    return OperatorSpec(("Lbar", r, n), f"Lbar^({r})({n})", n,
                        lambda v: Lbar_apply(r, n, v))


def identity_op() -> OperatorSpec:
    return OperatorSpec(("Id",), "Id", 0, lambda v: v)


# ---------------------------------------------------------------------------
# Graded matrices and certified commutators
# ---------------------------------------------------------------------------

class GradedOperator:
    """Per-weight exact matrix blocks of a weight-graded operator.

    Blocks are stored column-wise: cols[w][i] is the image of the i-th
    basis monomial of weight w, a vector of weight w - degree.  Blocks
    exist for every weight in the certified domain.
    """

    __slots__ = ("degree", "domain_bound", "cols")

    def __init__(self, degree, domain_bound, cols):
        self.degree = degree
        self.domain_bound = domain_bound
        self.cols = cols

    def column(self, w: int, i: int) -> FockVector:
        if w not in self.cols:
            raise WindowError(f"weight {w} outside certified domain")
        return self.cols[w][i]

    def apply(self, v: FockVector) -> FockVector:
        acc = FockVector()
        for mon, c in v.terms.items():
            w = sum(mon)
            if w not in self.cols:
                raise WindowError(f"weight {w} outside certified domain")
            acc = acc + self.cols[w][weight_index(w)[mon]].scale(c)
        return acc

    def block_equal(self, other: "GradedOperator", max_weight: int) -> bool:
        for w in range(max_weight + 1):
            for i in range(len(weight_basis(w))):
                if self.column(w, i) != other.column(w, i):
                    return False
        return True


_MATRIX_CACHE: dict = {}


def to_matrix(spec: OperatorSpec, max_weight: int) -> GradedOperator:
    """Exact per-weight blocks of spec on all basis vectors <= max_weight."""
    cached = _MATRIX_CACHE.get((spec.key, max_weight))
    if cached is not None:
        return cached
    cols = {}
    for w in range(max_weight + 1):
        images = []
        for mon in weight_basis(w):
            img = spec.apply(FockVector({mon: Fraction(1)}))
            if img and w - spec.degree < 0:
                raise ValueError(f"{spec.name} image escapes to negative weight")
            images.append(img)
        cols[w] = tuple(images)
    out = GradedOperator(spec.degree, max_weight, cols)
    _MATRIX_CACHE[(spec.key, max_weight)] = out
    return out


def commutator(a: GradedOperator, b: GradedOperator, max_weight: int) -> GradedOperator:
    """[a, b] on every source weight where both orders are representable.

    A source weight w is certified when blocks exist for w and for the
    intermediate weights w - deg(b) and w - deg(a); uncertified weights
    are omitted rather than approximated.
    """
    cols = {}
    for w in range(max_weight + 1):
        if w > a.domain_bound or w > b.domain_bound:
            continue
        if w - b.degree > a.domain_bound or w - a.degree > b.domain_bound:
            continue
        images = []
        for i in range(len(weight_basis(w))):
            ab = a.apply(b.cols[w][i])
            ba = b.apply(a.cols[w][i])
            images.append(ab - ba)
        cols[w] = tuple(images)
    if not cols:
        raise WindowError("window too small to certify any commutator block")
    return GradedOperator(a.degree + b.degree, max(cols), cols)


# ---------------------------------------------------------------------------
# Bracket relation verifiers
# ---------------------------------------------------------------------------

def _verify_bracket(identity, m, n, max_weight, op_factory, apply_fn, central):
    enlarged = max_weight + abs(m) + abs(n)
    a = to_matrix(op_factory(m), enlarged)
    b = to_matrix(op_factory(n), enlarged)
    comm = commutator(a, b, max_weight)
    rep = VerificationReport(
        identity=identity,
        parameters={"m": m, "n": n, "max_weight": max_weight},
        data={"central_term": rat_str(central)},
    )
    for w in range(max_weight + 1):
        for i, mon in enumerate(weight_basis(w)):
            if w in comm.cols:
                lhs = comm.column(w, i)
            else:
                rep.add_uncertified(list(mon))
                continue
            e = FockVector({mon: Fraction(1)})
            rhs = apply_fn(m + n, e).scale(m - n)
            if central and m + n == 0:
                rhs = rhs + e.scale(central)
            rep.add_cell(list(mon), fock_str(lhs), fock_str(rhs))
    return rep


def verify_virasoro(m: int, n: int, max_weight: int) -> VerificationReport:
    """[L(m), L(n)] = (m-n) L(m+n) + (1/12)(m^3 - m) delta_{m+n,0}, exactly."""
    central = Fraction(m ** 3 - m, 12) if m + n == 0 else ZERO
    return _verify_bracket("virasoro-bracket", m, n, max_weight,
                           L_op, L_apply, central)


def verify_modified_virasoro(m: int, n: int, max_weight: int) -> VerificationReport:
    """[Lbar(m), Lbar(n)] = (m-n) Lbar(m+n) + (1/12) m^3 delta_{m+n,0}."""
    central = Fraction(m ** 3, 12) if m + n == 0 else ZERO
    return _verify_bracket("modified-virasoro-bracket", m, n, max_weight,
                           lambda k: Lbar_op(0, k),
                           lambda k, v: Lbar_apply(0, k, v), central)


# ---------------------------------------------------------------------------
# Exact linear algebra helpers
# ---------------------------------------------------------------------------

def solve_exact(rows, rhs, ncols):
    """Solve an overdetermined exact rational system A x = b.

    Returns (solution, unique).  On a rank-deficient but consistent
    system the particular solution with free variables set to zero is
    returned and unique is False.  Raises FitError when the system is
    inconsistent (no exact solution at all).
    """
    aug = [list(row) + [val] for row, val in zip(rows, rhs)]
    pivots = []
    row_at = 0
    for col in range(ncols):
        pivot = None
        for r in range(row_at, len(aug)):
            if aug[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        aug[row_at], aug[pivot] = aug[pivot], aug[row_at]
        inv = 1 / aug[row_at][col]
        aug[row_at] = [x * inv for x in aug[row_at]]
        for r in range(len(aug)):
            if r != row_at and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row_at])]
        pivots.append(col)
        row_at += 1
    for r in range(row_at, len(aug)):
        if aug[r][ncols]:
            raise FitError("inconsistent system: nonzero residual")
    sol = [ZERO] * ncols
    for r, col in enumerate(pivots):
        sol[col] = aug[r][ncols]
    return sol, len(pivots) == ncols


def interpolate_polynomial(points):
    """Exact coefficients (low to high) of the unique polynomial of degree
    < len(points) through the given (x, y) pairs."""
    npts = len(points)
    rows = [[Fraction(x) ** k for k in range(npts)] for x, _ in points]
    rhs = [Fraction(y) for _, y in points]
    sol, unique = solve_exact(rows, rhs, npts)
    assert unique  # distinct nodes: the Vandermonde system is regular
    return sol


# ---------------------------------------------------------------------------
# Central decomposition and its consequences
# ---------------------------------------------------------------------------

class CentralDecomposition:
    """[family(r)(m), family(s)(n)] = sum_j c_j family(j)(m+n) + scalar.

    operator_part[j] is the coefficient on the degree-(m+n) operator of
    index j, for j = 0..r+s; scalar_part multiplies the identity and can
    be nonzero only when m + n = 0.  residual maps each basis monomial to
    the exact defect vector and must be empty for a successful fit.
    unique records whether the truncation pins the coefficients; a
    degenerate-but-consistent fit still certifies the span containment.
    """

    __slots__ = ("r", "s", "m", "n", "regularized", "operator_part",
                 "scalar_part", "residual", "unique")

    def __init__(self, r, s, m, n, regularized, operator_part, scalar_part,
                 residual, unique=True):
        self.r = r
        self.s = s
        self.m = m
        self.n = n
        self.regularized = regularized
        self.operator_part = operator_part
        self.scalar_part = scalar_part
        self.residual = residual
        self.unique = unique

    @property
    def ok(self):
        return not self.residual

    def __repr__(self):
        kind = "Lbar" if self.regularized else "L"
        ops = ", ".join(f"{rat_str(c)}*{kind}^({j})({self.m + self.n})"
                        for j, c in enumerate(self.operator_part) if c)
        return (f"CentralDecomposition({ops or '0'}"
                f" + {rat_str(self.scalar_part)}*Id, residual "
                f"{'0' if self.ok else 'NONZERO'})")


def central_decompose(r: int, s: int, m: int, n: int, max_weight: int,
                      regularized: bool = True) -> CentralDecomposition:
    """Fit [fam^(r)(m), fam^(s)(n)] over span{fam^(j)(m+n)} (+ Id if m+n=0).

    Solved exactly over all basis images up to max_weight.  The fit either
    has an exactly zero residual or fails; nothing is approximated.
    """
    fam = Lbar_apply if regularized else Lr_apply
    jmax = r + s
    with_id = (m + n == 0)
    ncols = jmax + 1 + (1 if with_id else 0)

    rows, rhs = [], []
    images = {}
    for w in range(max_weight + 1):
        for mon in weight_basis(w):
            e = FockVector({mon: Fraction(1)})
            comm = fam(r, m, fam(s, n, e)) - fam(s, n, fam(r, m, e))
            fams = [fam(j, m + n, e) for j in range(jmax + 1)]
            images[mon] = (comm, fams, e)
            support = set(comm.terms)
            for f in fams:
                support |= set(f.terms)
            if with_id:
                support.add(mon)
            for mu in sorted(support):
                row = [f.terms.get(mu, ZERO) for f in fams]
                if with_id:
                    row.append(Fraction(1) if mu == mon else ZERO)
                rows.append(row)
                rhs.append(comm.terms.get(mu, ZERO))

    sol, unique = solve_exact(rows, rhs, ncols)
    op_part = sol[:jmax + 1]
    scalar = sol[jmax + 1] if with_id else ZERO

    residual = {}
    for mon, (comm, fams, e) in images.items():
        fit = FockVector()
        for c, f in zip(op_part, fams):
            if c:
                fit = fit + f.scale(c)
        if scalar:
            fit = fit + e.scale(scalar)
        diff = comm - fit
        if diff:
            residual[mon] = diff
    return CentralDecomposition(r, s, m, n, regularized, op_part, scalar,
                                residual, unique)


def verify_monomial_purity(r: int, s: int, m_max: int,
                           max_weight: int) -> VerificationReport:
    """Check that the central term of [Lbar^(r)(m), Lbar^(s)(-m)] is a pure
    monomial in m.

    The scalars for m = 1..m_max are interpolated exactly; the unique
    interpolating polynomial must have degree <= 2(r+s)+3 and exactly one
    nonzero coefficient, whose exponent and value are recorded.
    """
    degree_bound = 2 * (r + s) + 3
    rep = VerificationReport(
        identity="central-monomial-purity",
        parameters={"r": r, "s": s, "m_max": m_max, "max_weight": max_weight},
    )
    if m_max < degree_bound + 1:
        raise ValueError(
            f"m_max={m_max} gives too few interpolation points for degree "
            f"bound {degree_bound}")

    zero_dec = central_decompose(r, s, 0, 0, max_weight)
    rep.add_cell("scalar(m=0)", rat_str(zero_dec.scalar_part), "0")

    scalars = []
    for m in range(1, m_max + 1):
        dec = central_decompose(r, s, m, -m, max_weight)
        if not dec.ok:
            rep.add_cell(f"residual(m={m})", "NONZERO", "0", FAIL)
            return rep
        if not dec.unique:
            # the truncation does not pin the scalar; a larger weight is
            # needed before interpolation makes sense
            rep.add_cell(f"fit-unique(m={m})", "false", "true", FAIL)
            return rep
        scalars.append(dec.scalar_part)

    coeffs = interpolate_polynomial(list(zip(range(1, m_max + 1), scalars)))
    top = max((k for k, c in enumerate(coeffs) if c), default=0)
    nonzero = [(k, c) for k, c in enumerate(coeffs) if c]
    rep.add_cell("interpolated-degree", str(top), f"<={degree_bound}",
                 PASS if top <= degree_bound else FAIL)
    rep.add_cell("nonzero-coefficients", str(len(nonzero)), "1",
                 PASS if len(nonzero) == 1 else FAIL)
    if len(nonzero) == 1:
        k, c = nonzero[0]
        rep.data["monomial_exponent"] = k
        rep.data["monomial_coefficient"] = rat_str(c)
        for m, sc in zip(range(1, m_max + 1), scalars):
            rep.add_cell(f"scalar(m={m})", rat_str(sc),
                         rat_str(c * Fraction(m) ** k))
    return rep


def verify_diff_op_projection(r: int, s: int, m: int, n: int,
                              max_weight: int, p_bound: int) -> VerificationReport:
    """Project the operator part of [L^(r)(m), L^(s)(n)] to differential
    operators and compare with the directly computed Lie bracket.

    Both sides are applied to t^p for |p| <= p_bound.  The scalar part of
    the decomposition (the cocycle value) is recorded as data, not
    asserted against any formula.
    """
    rep = VerificationReport(
        identity="diffop-projection",
        parameters={"r": r, "s": s, "m": m, "n": n,
                    "max_weight": max_weight, "p_bound": p_bound},
    )
    dec = central_decompose(r, s, m, n, max_weight, regularized=False)
    if not dec.ok:
        rep.add_cell("fit-residual", "NONZERO", "0", FAIL)
        return rep
    if not dec.unique:
        rep.add_cell("fit-unique", "false", "true", FAIL)
        return rep
    rep.data["cocycle_value"] = rat_str(dec.scalar_part)
    rep.data["operator_part"] = [rat_str(c) for c in dec.operator_part]

    for p in range(-p_bound, p_bound + 1):
        tp = LaurentPolyVector.monomial(p)
        lhs = LaurentPolyVector()
        for j, c in enumerate(dec.operator_part):
            if c:
                lhs = lhs + diff_op_apply(j, m + n, tp).scale(c)
        rhs = (diff_op_apply(r, m, diff_op_apply(s, n, tp))
               - diff_op_apply(s, n, diff_op_apply(r, m, tp)))
        rep.add_cell(f"t^{p}", repr(lhs), repr(rhs))
    return rep
