"""Rigorous M-th-power certificates for annihilated norm units.

The final stage of a divisibility proof: apply a norm map and an
annihilator exponent to the distinguished unit, embed every conjugate
of the result as a high-precision real, round the characteristic
polynomial of the M-th roots to integers, and certify with one exact
integer division that the normed unit is an M-th power.  Cyclotomic
factors of the annihilator are folded into the norm map first, which
shrinks the conjugate count from the cell size down to a small
rectangle.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from sympy import cyclotomic_poly, divisors
from sympy.abc import t

from .errors import (
    DegenerateUnit,
    DivisionFailed,
    FactorizationIncomplete,
    PrecisionInsufficient,
    RoundingAmbiguous,
)

_PRECISION_FLOOR = 500
_ESTIMATE_DIGITS = 50
_GUARD_DIGITS = 30


# ---------------------------------------------------------------------------
# integer bivariate helpers on {(i, j): coeff} dicts

def _lift_window(terms, M, window):
    """Integer lift of a mod-M polynomial: window 'signed' centers the
    coefficients in [-(M-1)/2, (M-1)/2], 'unsigned' keeps [0, M)."""
    half = (M - 1) // 2
    out = {}
    for (i, j), c in terms.items():
        c %= M
        if window == "signed" and c > half:
            c -= M
        if c:
            out[(i, j)] = c
    return out


def _cyclotomic_coeffs(k):
    return [int(c) for c in reversed(cyclotomic_poly(k, t).as_poly(t).all_coeffs())]


def _divide_once(poly, cyclo, axis):
    """Exact division by a monic univariate polynomial in x (axis 0) or y
    (axis 1), coefficients taken in the other variable.  None if inexact."""
    deg = len(cyclo) - 1
    rem = dict(poly)
    quot = {}
    while rem:
        (i, j) = max(rem, key=lambda k: (k[axis], k[1 - axis]))
        lead = i if axis == 0 else j
        if lead < deg:
            return None
        c = rem[(i, j)]
        qkey = (i - deg, j) if axis == 0 else (i, j - deg)
        quot[qkey] = c
        for e, cc in enumerate(cyclo):
            key = (qkey[0] + e, j) if axis == 0 else (i, qkey[1] + e)
            val = rem.get(key, 0) - c * cc
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    return quot


def _strip_cyclotomics(poly, degree, axis):
    """Remove monic cyclotomic factors Phi_k for k dividing the cell degree,
    ascending k, each to maximal multiplicity."""
    stripped = []
    for k in sorted(divisors(degree))[1:]:
        cyclo = _cyclotomic_coeffs(k)
        while True:
            quot = _divide_once(poly, cyclo, axis)
            if quot is None:
                break
            poly = quot
            stripped.append(k)
    return stripped, poly


def _geometric_modulus(ks, degree):
    """The subgroup index encoded by a product of cyclotomic prefactors.

    The product over the stripped Phi_k must be a geometric sum
    1 + X^d + X^{2d} + ... + X^{(s-1)d}, the element sum of a cyclic
    subgroup; the norm map then descends to the subgroup of index
    d (step form) or s (dense form, d = 1).
    """
    if not ks:
        return 1
    prod = {0: 1}
    for k in ks:
        nxt = {}
        for e, c in prod.items():
            for d, cc in enumerate(_cyclotomic_coeffs(k)):
                nxt[e + d] = nxt.get(e + d, 0) + c * cc
        prod = {e: c for e, c in nxt.items() if c}
    exps = sorted(prod)
    s = len(exps)
    step = exps[1] if s > 1 else 1
    if (
        any(c != 1 for c in prod.values())
        or exps != [step * i for i in range(s)]
        or s < 2
    ):
        raise FactorizationIncomplete(
            f"prefactor {ks} is not a subgroup element sum"
        )
    m = step if step > 1 else s
    if degree % m:
        raise FactorizationIncomplete(
            f"subgroup index {m} does not divide degree {degree}"
        )
    return m


@dataclass(frozen=True)
class NormPlan:
    """How one annihilator generator drives the norm and the embedding.

    The unit is normed from the full group down to the rectangle of
    conjugate_degrees, then raised to the residual exponent; prefactors
    records the cyclotomic factors absorbed into the norm, as (axis, k)
    pairs with axis "x" or "y", and lift records which coefficient
    window produced the factorable integer representative.
    """

    p: int
    q: int
    M: int
    lift: str
    prefactors: tuple
    full_degrees: tuple
    conjugate_degrees: tuple
    residual: tuple

    @property
    def conjugate_count(self):
        return self.conjugate_degrees[0] * self.conjugate_degrees[1]


def plan_norm(gen):
    """Split an annihilator generator into cyclotomic prefactors, an
    adjusted norm map, and a residual exponent with integer coefficients.

    The generator is lifted to Z[x, y] and the cyclotomic factors are
    divided out exactly over Z, so the residual is the true integer
    cofactor and the identity lift = prefactors * residual holds in
    Z[x, y], not merely mod M.  Both coefficient windows are tried and
    the one whose factorization reaches the smaller conjugate rectangle
    wins, the unsigned window on ties; a generator none of whose lifts
    factors through subgroup element sums raises FactorizationIncomplete.
    """
    shape = gen.shape
    if not any(c % shape.M for c in gen.terms.values()):
        raise FactorizationIncomplete("zero annihilator generator")
    best = None
    for window in ("unsigned", "signed"):
        poly = _lift_window(gen.terms, shape.M, window)
        ks_x, poly = _strip_cyclotomics(poly, shape.D1, 0)
        ks_y, poly = _strip_cyclotomics(poly, shape.D2, 1)
        try:
            m_x = _geometric_modulus(ks_x, shape.D1)
            m_y = _geometric_modulus(ks_y, shape.D2)
        except FactorizationIncomplete:
            continue
        rect = (shape.D1 // m_x) * (shape.D2 // m_y)
        if best is None or rect < best[0]:
            best = (rect, window, ks_x, ks_y, m_x, m_y, poly)
    if best is None:
        raise FactorizationIncomplete(
            "no integer lift factors through subgroup element sums"
        )
    _, window, ks_x, ks_y, m_x, m_y, poly = best
    return NormPlan(
        p=shape.p, q=shape.q, M=shape.M, lift=window,
        prefactors=tuple([("x", k) for k in ks_x] + [("y", k) for k in ks_y]),
        full_degrees=(shape.p - 1, shape.q - 1),
        conjugate_degrees=(shape.D1 // m_x, shape.D2 // m_y),
        residual=tuple(sorted((i, j, c) for (i, j), c in poly.items())),
    )


# ---------------------------------------------------------------------------
# high-precision embeddings

@dataclass(frozen=True)
class BigReal:
    """A working-precision real with a coarse tracked absolute error."""

    value: object
    error_bound: object

    @classmethod
    def exact(cls, n):
        return cls(mpmath.mpf(n), mpmath.mpf(0))

    def _ulp(self, v):
        return (abs(v) + 1) * mpmath.eps

    def __add__(self, other):
        v = self.value + other.value
        return BigReal(v, self.error_bound + other.error_bound + self._ulp(v))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BigReal(-self.value, self.error_bound)

    def __mul__(self, other):
        v = self.value * other.value
        err = (
            abs(self.value) * other.error_bound
            + abs(other.value) * self.error_bound
            + self.error_bound * other.error_bound
            + self._ulp(v)
        )
        return BigReal(v, err)


def _full_exponent(plan):
    """The residual times the adjusted norm, in the full exponent ring."""
    Dx, Dy = plan.full_degrees
    A, B = plan.conjugate_degrees
    out = {}
    for i, j, c in plan.residual:
        for u in range(Dx // A):
            for v in range(Dy // B):
                key = ((i + A * u) % Dx, (j + B * v) % Dy)
                out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


class _Embedder:
    """Shared tables for evaluating conjugates of the normed unit.

    Magnitudes are logarithms of 2 sin(pi a / c) factors; phases are exact
    rationals in units of pi, so the sign of each real conjugate is exact
    and no imaginary residue is ever introduced.
    """

    def __init__(self, ctx, plan):
        self.ctx = ctx
        self.plan = plan
        self.exponent = _full_exponent(plan)
        self._lnmag = {}
        self._conj = {}

    def _log_factor(self, a, c):
        a %= c
        if a == 0:
            raise DegenerateUnit(f"vanishing factor 1 - zeta_{c}^0")
        if (a, c) not in self._lnmag:
            self._lnmag[(a, c)] = mpmath.log(2 * mpmath.sin(mpmath.pi * a / c))
        return self._lnmag[(a, c)]

    def _eta_conjugate(self, m, n):
        """(log magnitude, phase/pi) of the (m, n) conjugate of the unit."""
        key = (m, n)
        if key in self._conj:
            return self._conj[key]
        ctx, p, q = self.ctx, self.ctx.p, self.ctx.q
        a = pow(ctx.gamma, m, p)
        b = pow(ctx.delta, n, q)
        e_p = -a * (ctx.g + 1) * ((p + 1) // 2) % p
        e_q = -b * (ctx.h + 1) * ((q + 1) // 2) % q
        cross = (a * q + b * p) % (p * q)
        L = 2 * self._log_factor(cross, p * q)
        L += self._log_factor(ctx.g * a, p) - self._log_factor(a, p)
        L += self._log_factor(ctx.h * b, q) - self._log_factor(b, q)
        phase = (
            Fraction(2 * e_p, p) + Fraction(2 * e_q, q)
            + 2 * (Fraction(cross, p * q) - Fraction(1, 2))
            + Fraction(ctx.g * a % p, p) - Fraction(a % p, p)
            + Fraction(ctx.h * b % q, q) - Fraction(b % q, q)
        )
        self._conj[key] = (L, phase)
        return self._conj[key]

    def conjugate(self, I, J):
        """(sign, log magnitude, error bound) of sigma^I tau^J of the
        normed-and-annihilated unit."""
        Dx, Dy = self.plan.full_degrees
        L = mpmath.mpf(0)
        phase = Fraction(0)
        weight = 0
        for (m, n), c in self.exponent.items():
            lm, ph = self._eta_conjugate((m + I) % Dx, (n + J) % Dy)
            L += c * lm
            phase += c * ph
            weight += abs(c)
        if phase.denominator != 1:
            raise DegenerateUnit(f"conjugate ({I}, {J}) is not real")
        sign = -1 if phase.numerator % 2 else 1
        err = 8 * weight * (abs(L) + 1) * mpmath.eps
        return sign, L, err

    def all_conjugates(self):
        A, B = self.plan.conjugate_degrees
        return [self.conjugate(I, J) for I in range(A) for J in range(B)]


def embed_unit(ctx, plan, conjugate, precision, mth_root=1):
    """One conjugate of the normed unit as a BigReal, optionally with the
    real M-th root applied (M odd, so the root keeps the sign)."""
    with mpmath.workdps(precision + _GUARD_DIGITS):
        if not plan.residual:
            return BigReal.exact(1)
        sign, L, err = _Embedder(ctx, plan).conjugate(*conjugate)
        v = sign * mpmath.exp(L / mth_root)
        return BigReal(v, abs(v) * (err / mth_root + 4 * mpmath.eps))


# ---------------------------------------------------------------------------
# integer polynomials and the divisibility certificate

@dataclass(frozen=True)
class IntegerPolynomial:
    """Monic polynomial over Z, coefficients ascending by degree."""

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def is_palindromic(self):
        return self.coefficients == tuple(reversed(self.coefficients))

    def substitute_power(self, M):
        """The exact integer polynomial self(X^M)."""
        out = [0] * (self.degree * M + 1)
        for e, c in enumerate(self.coefficients):
            out[e * M] = c
        return IntegerPolynomial(tuple(out))

    def __str__(self):
        return " + ".join(
            f"{c}*x^{e}" for e, c in reversed(list(enumerate(self.coefficients))) if c
        )


def verify_power(p_poly, p_norm, M):
    """Certify divisibility p_poly(x) | p_norm(x^M) by exact division.

    p_norm is the characteristic polynomial of the conjugate values
    themselves; substituting x^M is exact integer bookkeeping, so a zero
    remainder is a rigorous proof that every root of p_poly is an M-th
    root of a conjugate value.
    """
    big = list(p_norm.substitute_power(M).coefficients)
    div = p_poly.coefficients
    deg = p_poly.degree
    for i in range(len(big) - 1, deg - 1, -1):
        c = big[i]
        if c:
            for k, dc in enumerate(div):
                big[i - deg + k] -= c * dc
    if any(big[:deg]):
        raise DivisionFailed(
            f"remainder of degree < {deg} is nonzero; not an M-th power witness"
        )
    return True


def _expand_roots(roots):
    """Monic product of (X - root) over BigReal roots, ascending coeffs."""
    coeffs = [BigReal.exact(1)]
    for r in roots:
        nxt = [BigReal.exact(0) for _ in range(len(coeffs) + 1)]
        for e, c in enumerate(coeffs):
            nxt[e + 1] = nxt[e + 1] + c
            nxt[e] = nxt[e] - c * r
        coeffs = nxt
    return coeffs


def _round_coefficients(coeffs, threshold):
    ints = []
    worst = mpmath.mpf(0)
    for c in coeffs:
        n = mpmath.nint(c.value)
        dist = abs(c.value - n)
        worst = max(worst, dist)
        if dist - c.error_bound >= threshold:
            # the error interval around the value excludes every integer,
            # so the polynomial provably has a non-integer coefficient
            raise DivisionFailed(
                f"coefficient {mpmath.nstr(c.value, 25)} is provably "
                f"non-integral (error bound {mpmath.nstr(c.error_bound, 5)})"
            )
        if dist >= threshold or c.error_bound >= threshold:
            raise RoundingAmbiguous(
                f"coefficient {mpmath.nstr(c.value, 25)} is not confidently integral"
            )
        ints.append(int(n))
    return ints, worst


@dataclass(frozen=True)
class PowerCertificate:
    """Serializable outcome of one annihilator generator's rigor pass."""

    plan: NormPlan
    polynomial: IntegerPolynomial
    norm_polynomial: IntegerPolynomial
    precision_digits: int
    max_rounding_error: float
    divides: bool

    def serialize(self):
        return {
            "p": self.plan.p, "q": self.plan.q, "M": self.plan.M,
            "lift": self.plan.lift,
            "prefactors": [list(pf) for pf in self.plan.prefactors],
            "conjugate_degrees": list(self.plan.conjugate_degrees),
            "residual": [list(r) for r in self.plan.residual],
            "polynomial": [str(c) for c in self.polynomial.coefficients],
            "norm_polynomial": [str(c) for c in self.norm_polynomial.coefficients],
            "precision_digits": self.precision_digits,
            "max_rounding_error": self.max_rounding_error,
            "palindromic": self.polynomial.is_palindromic,
            "divides": self.divides,
        }


def _estimate_digits(ctx, plan):
    with mpmath.workdps(_ESTIMATE_DIGITS):
        values = _Embedder(ctx, plan).all_conjugates()
    growth = sum(max(float(L), 0.0) for _, L, _ in values)
    return max(
        _PRECISION_FLOOR,
        64 + math.ceil(growth / math.log(10)) + plan.conjugate_count,
    )


def certificate_cost(ctx, gen):
    """Norm plan and working-precision estimate for one generator.

    Cheap enough to rank candidate generators before committing to a
    full certificate: the estimate is built from 50-digit magnitudes of
    the planned conjugates.
    """
    plan = plan_norm(gen)
    return plan, _estimate_digits(ctx, plan)


def build_P(ctx, plan, M, precision):
    """Round the two characteristic polynomials at a fixed precision.

    Returns (P, P_norm, max rounding distance): P has the real M-th roots
    of the conjugate values as roots, P_norm the values themselves.
    Raises RoundingAmbiguous when any coefficient is not confidently
    integral at this precision.
    """
    with mpmath.workdps(precision + _GUARD_DIGITS):
        threshold = mpmath.mpf(10) ** -(precision // 4)
        values = _Embedder(ctx, plan).all_conjugates()
        roots, full = [], []
        for sign, L, err in values:
            rv = sign * mpmath.exp(L / M)
            fv = sign * mpmath.exp(L)
            roots.append(BigReal(rv, abs(rv) * (err / M + 4 * mpmath.eps)))
            full.append(BigReal(fv, abs(fv) * (err + 4 * mpmath.eps)))
        p_ints, err_p = _round_coefficients(_expand_roots(roots), threshold)
        n_ints, err_n = _round_coefficients(_expand_roots(full), threshold)
    return (
        IntegerPolynomial(tuple(p_ints)),
        IntegerPolynomial(tuple(n_ints)),
        float(max(err_p, err_n)),
    )


def step3_certificate(ctx, gen, precision=None, precision_cap=40000):
    """Full rigor pass for one annihilator generator.

    Precision starts at an estimate from low-precision magnitudes (or the
    explicit override) and doubles on rounding ambiguity up to the cap;
    the certificate's divides flag records the exact division verdict.
    Raises DivisionFailed as soon as some coefficient's error interval
    excludes every integer, which proves the unit is not an M-th power
    without grinding to the precision cap.
    """
    M = gen.shape.M
    plan = plan_norm(gen)
    digits = precision if precision is not None else _estimate_digits(ctx, plan)
    while True:
        try:
            p_poly, n_poly, worst = build_P(ctx, plan, M, digits)
            break
        except RoundingAmbiguous:
            digits *= 2
            if digits > precision_cap:
                raise PrecisionInsufficient(
                    f"no integral rounding below {precision_cap} digits"
                )
    try:
        divides = verify_power(p_poly, n_poly, M)
    except DivisionFailed:
        divides = False
    return PowerCertificate(
        plan=plan, polynomial=p_poly, norm_polynomial=n_poly,
        precision_digits=digits, max_rounding_error=worst, divides=divides,
    )
