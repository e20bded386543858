"""Unit-index factors from character-sum resultants.

The index of the cyclic unit subgroup picked by a primitive-root pair
(g, h) splits over the two conductors into products over nontrivial even
characters.  Each product is a plain integer resultant, so every
divisibility question the pipeline asks is answered in exact arithmetic.
A floating-point check of the underlying regulator identity lives here
too; only the test suite calls it.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from sympy import Poly, Symbol, primerange, resultant

from .errors import PrecisionInsufficient
from .modarith import all_primitive_roots, find_primitive_root

# the published tables ignore prime factors at or above this bound
PRIME_BOUND = 10000


def _index_table(n, gamma):
    table, acc = {}, 1
    for e in range(n - 1):
        table[acc] = e
        acc = acc * gamma % n
    return table


def character_product(p, q, g, gamma=None):
    """Exact product over the nontrivial even characters of conductor p.

    Every even character of conductor p factors through the order-n
    quotient of (Z/p)*, n = (p-1)/2, so the product of the bracket
    2(chi(q)^-1 - 1) + (chi(g^-1) - 1)(q - 1) over nontrivial even chi
    equals prod over the n-th roots of unity zeta != 1 of
    A(zeta) = 2(zeta^c - 1) + (q - 1)(zeta^d - 1) with c = -ind(q) and
    d = -ind(g) mod n, i.e. the resultant of (t^n - 1)/(t - 1) with A.
    """
    n = (p - 1) // 2
    if n == 1:
        return 1
    if gamma is None:
        gamma = find_primitive_root(p)
    ind = _index_table(p, gamma)
    c = -ind[q % p] % n
    d = -ind[g % p] % n
    t = Symbol("t")
    bracket = 2 * (t**c - 1) + (q - 1) * (t**d - 1)
    psi = Poly(sum(t**i for i in range(n)), t)
    value = int(resultant(psi, Poly(bracket, t)))
    if value == 0:
        raise ArithmeticError(f"vanishing character product for p={p}, g={g}")
    return value


def _small_odd_factors(value, bound):
    """Trial-factor below the bound; the leftover cofactor stays opaque."""
    factors = []
    for s in primerange(3, bound):
        if s * s > value and value < bound:
            break
        e = 0
        while value % s == 0:
            value //= s
            e += 1
        if e:
            factors.append((s, e))
    if 1 < value < bound:
        factors.append((value, 1))
        value = 1
    return tuple(factors), value


def _factored_json(two_exponent, odd_factors, cofactor):
    factors = ([(2, two_exponent)] if two_exponent else []) + list(odd_factors)
    return {
        "factors": [[int(s), int(e)] for s, e in factors],
        "cofactor": cofactor != 1,
    }


@dataclass(frozen=True)
class IndexFactor:
    """P(g, h) = |Pi_p(g) Pi_q(h)| / (2|G|), stored with its small factors.

    two_exponent is the actual 2-adic valuation; odd_factors lists the odd
    primes below the bound with multiplicity; cofactor is the unfactored
    remainder (all its prime factors are at or above the bound).
    """

    p: int
    q: int
    g: int
    h: int
    group_order: int
    product_p: int
    product_q: int
    value: int
    two_exponent: int
    odd_factors: tuple
    cofactor: int

    def l_adic_valuation(self, l):
        if l == 2:
            return self.two_exponent
        v, x = 0, self.value
        while x % l == 0:
            x //= l
            v += 1
        return v

    def distinct_odd_small(self):
        return len(self.odd_factors)

    def serialize(self):
        return {
            "g": self.g,
            "h": self.h,
            **_factored_json(self.two_exponent, self.odd_factors, self.cofactor),
        }


def index_factor(p, q, g, h, prime_bound=PRIME_BOUND):
    """Assemble the exact index factor for one primitive-root pair."""
    product_p = character_product(p, q, g)
    product_q = character_product(q, p, h)
    group_order = (p - 1) * (q - 1) // 2
    value, rem = divmod(abs(product_p * product_q), 2 * group_order)
    if rem:
        raise ArithmeticError(f"index factor for ({p}, {q}) is not integral")
    two = 0
    odd = value
    while odd % 2 == 0:
        odd //= 2
        two += 1
    odd_factors, cofactor = _small_odd_factors(odd, prime_bound)
    return IndexFactor(
        p=p, q=q, g=g, h=h, group_order=group_order,
        product_p=product_p, product_q=product_q, value=value,
        two_exponent=two, odd_factors=odd_factors, cofactor=cofactor,
    )


@dataclass(frozen=True)
class GcdReport:
    """Per-pair index factors and their gcd for one conductor."""

    p: int
    q: int
    bound: int
    per_pair: dict
    gcd_value: int
    gcd_two_exponent: int
    gcd_odd_small: tuple
    gcd_cofactor: int

    def l_adic_valuation(self, l):
        if l == 2:
            return self.gcd_two_exponent
        v, x = 0, self.gcd_value
        while x % l == 0:
            x //= l
            v += 1
        return v

    def serialize(self):
        return {
            "p": self.p,
            "q": self.q,
            "bound": self.bound,
            "gcd": _factored_json(
                self.gcd_two_exponent, self.gcd_odd_small, self.gcd_cofactor
            ),
            "pairs": [self.per_pair[k].serialize() for k in sorted(self.per_pair)],
        }


def gcd_over_pairs(p, q, prime_bound=PRIME_BOUND):
    """Index factors for every primitive-root pair, with their gcd."""
    per_pair = {}
    for g in all_primitive_roots(p):
        for h in all_primitive_roots(q):
            per_pair[(g, h)] = index_factor(p, q, g, h, prime_bound)
    gcd_value = 0
    for f in per_pair.values():
        gcd_value = math.gcd(gcd_value, f.value)
    two = 0
    odd = gcd_value
    while odd % 2 == 0:
        odd //= 2
        two += 1
    odd_factors, cofactor = _small_odd_factors(odd, prime_bound)
    return GcdReport(
        p=p, q=q, bound=prime_bound, per_pair=per_pair,
        gcd_value=gcd_value, gcd_two_exponent=two,
        gcd_odd_small=odd_factors, gcd_cofactor=cofactor,
    )


def best_pair(report):
    """The pair whose factor has fewest distinct small odd primes, ties lex."""
    return min(
        report.per_pair,
        key=lambda gh: (report.per_pair[gh].distinct_odd_small(), gh),
    )


def rescreen_sequence(report, best):
    """Pair order for eliminating an l that divides the best pair's factor:
    best first, then same h with other g ascending, then same g with other
    h, then everything else lexicographically."""
    bg, bh = best
    pairs = sorted(report.per_pair)
    order = [best]
    order += [(g, h) for g, h in pairs if h == bh and g != bg]
    order += [(g, h) for g, h in pairs if g == bg and h != bh]
    order += [gh for gh in pairs if gh not in order]
    return order


def _log_abs_one_minus_root(j, c):
    """log|1 - zeta_c^j| as log(2 sin(pi j/c)), j != 0 mod c."""
    return mpmath.log(2 * mpmath.sin(mpmath.pi * (j % c) / c))


def conjugate_log_magnitudes(p, q, g, h):
    """log|eta_a| for each class a of (Z/pq)*/{+-1}, keyed by the rep < pq/2.

    The root-of-unity prefactors of eta have magnitude one, so only the
    cyclotomic differences contribute.  Caller sets the mpmath precision.
    """
    pq = p * q
    reps = [a for a in range(1, pq) if math.gcd(a, pq) == 1 and 2 * a < pq]
    return {
        a: 2 * _log_abs_one_minus_root(a * (p + q), pq)
        + _log_abs_one_minus_root(g * a, p)
        - _log_abs_one_minus_root(a, p)
        + _log_abs_one_minus_root(h * a, q)
        - _log_abs_one_minus_root(a, q)
        for a in reps
    }


def regulator_identity_check(p, q, g, h, precision=128):
    """Relative gap between det(log|eta_{ab}|) and its character product.

    Both sides of the regulator identity behind the index formula are
    evaluated independently at the given binary precision: the (|G|-1) x
    (|G|-1) determinant of conjugate log magnitudes, and the product over
    nontrivial even characters of conductor pq, p and q of their bracket
    times the corresponding log sum, divided by |G|.  Returns
    ||LHS| - |RHS|| / |LHS|.
    """
    with mpmath.workprec(precision):
        pq = p * q
        logs = conjugate_log_magnitudes(p, q, g, h)
        classes = {}
        for a in logs:
            classes[a] = a
            classes[pq - a] = a
        nontriv = [a for a in logs if a != 1]
        matrix = mpmath.matrix(len(nontriv))
        for i, a in enumerate(nontriv):
            for j, b in enumerate(nontriv):
                matrix[i, j] = logs[classes[a * b % pq]]
        det = mpmath.det(matrix)
        if det == 0:
            raise PrecisionInsufficient("regulator determinant vanished")

        gamma, delta = find_primitive_root(p), find_primitive_root(q)
        ind_p = _index_table(p, gamma)
        ind_q = _index_table(q, delta)

        def chi(j1, j2, a):
            arg = Fraction(0)
            if j1:
                arg += Fraction(j1 * ind_p[a % p], p - 1)
            if j2:
                arg += Fraction(j2 * ind_q[a % q], q - 1)
            arg = 2 * arg
            return mpmath.expjpi(mpmath.mpf(arg.numerator) / arg.denominator)

        product = mpmath.mpc(1) / len(logs)
        for j1 in range(p - 1):
            for j2 in range(q - 1):
                if (j1, j2) == (0, 0) or (j1 + j2) % 2:
                    continue
                if j2 == 0:
                    bracket = (
                        2 * (chi(j1, 0, q) ** -1 - 1)
                        + (chi(j1, 0, g) ** -1 - 1) * (q - 1)
                    ) / 2
                    logsum = mpmath.fsum(
                        chi(j1, 0, a) * _log_abs_one_minus_root(a, p)
                        for a in range(1, p)
                    )
                elif j1 == 0:
                    bracket = (
                        2 * (chi(0, j2, p) ** -1 - 1)
                        + (chi(0, j2, h) ** -1 - 1) * (p - 1)
                    ) / 2
                    logsum = mpmath.fsum(
                        chi(0, j2, a) * _log_abs_one_minus_root(a, q)
                        for a in range(1, q)
                    )
                else:
                    bracket = chi(j1, j2, p + q) ** -1
                    logsum = mpmath.fsum(
                        chi(j1, j2, a) * _log_abs_one_minus_root(a, pq)
                        for a in range(1, pq)
                        if math.gcd(a, pq) == 1
                    )
                product *= bracket * logsum

        return float(abs(abs(det) - abs(product)) / abs(det))
