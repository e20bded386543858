"""Prime-field arithmetic behind the split-prime witnesses.

Primitive roots, deterministic prime search along the residue class the
witnesses must occupy, and discrete logarithms inside the order-M subgroup
of F_r*.  Everything is exact integer arithmetic; sympy supplies primality
testing and factorization only.
"""

import math
from dataclasses import dataclass

from sympy import factorint, isprime

from .errors import NotInSubgroup, SearchExhausted

# search gives up past this bound unless the caller raises it
_DEFAULT_R_CAP = 1 << 40


def prime_power_split(M):
    """Return (l, k) with M = l^k, l prime, or raise ValueError."""
    if M < 2:
        raise ValueError(f"modulus {M} is not a prime power")
    ell = min(factorint(M))
    k = 0
    n = M
    while n % ell == 0:
        n //= ell
        k += 1
    if ell**k != M:
        raise ValueError(f"modulus {M} is not a prime power")
    return ell, k


@dataclass(frozen=True)
class ResidueRing:
    """Coefficient ring Z/M with M = l^k for an odd prime l."""

    modulus: int
    l: int
    k: int

    def __post_init__(self):
        if self.l == 2 or not isprime(self.l):
            raise ValueError(f"{self.l} is not an odd prime")
        if self.k < 1 or self.l**self.k != self.modulus:
            raise ValueError(f"{self.modulus} != {self.l}^{self.k}")

    @classmethod
    def from_modulus(cls, M):
        ell, k = prime_power_split(M)
        return cls(M, ell, k)


@dataclass(frozen=True)
class PrimeField:
    """F_r for a prime r; elements are plain ints in [0, r)."""

    r: int

    def __post_init__(self):
        if not isprime(self.r):
            raise ValueError(f"{self.r} is not prime")

    def inverse(self, a):
        return pow(a, -1, self.r)

    def multiplicative_order(self, a):
        """Exact order of a in F_r* (a != 0 mod r)."""
        a %= self.r
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        order = self.r - 1
        for s in factorint(order):
            while order % s == 0 and pow(a, order // s, self.r) == 1:
                order //= s
        return order


def has_exact_order(a, n, r):
    """True when a has multiplicative order exactly n in F_r*."""
    if pow(a, n, r) != 1:
        return False
    return all(pow(a, n // s, r) != 1 for s in factorint(n))


def find_primitive_root(n):
    """Smallest primitive root modulo an odd prime n."""
    if n == 2 or not isprime(n):
        raise ValueError(f"{n} is not an odd prime")
    order_factors = list(factorint(n - 1))
    for g in range(2, n):
        if all(pow(g, (n - 1) // s, n) != 1 for s in order_factors):
            return g
    raise ValueError(f"no primitive root modulo {n}")  # unreachable for prime n


def all_primitive_roots(n):
    """All primitive roots modulo an odd prime n, ascending.

    There are phi(n-1) of them: the powers g^j of any one of them with
    gcd(j, n-1) = 1.
    """
    g = find_primitive_root(n)
    roots = [pow(g, j, n) for j in range(1, n - 1) if math.gcd(j, n - 1) == 1]
    return sorted(roots)


@dataclass(frozen=True)
class SplitPrimeWitness:
    """A prime r with roots of unity of exact orders p, q and M in F_r.

    All three zetas are powers of t, the smallest primitive root mod r, so
    a witness is reproducible from r alone.  The choice pins the discrete
    log normalization used by the cached tables.
    """

    r: int
    zeta_p: int
    zeta_q: int
    zeta_M: int
    p: int
    q: int
    M: int
    t: int

    def __post_init__(self):
        if (self.r - 1) % (self.p * self.q) or (self.r - 1) % (2 * self.M):
            raise ValueError(f"{self.r} is not split for ({self.p}, {self.q}, {self.M})")
        for zeta, n in ((self.zeta_p, self.p), (self.zeta_q, self.q)):
            if pow(zeta, n, self.r) != 1 or zeta == 1:
                raise ValueError(f"witness element lacks exact order {n}")
        ell = prime_power_split(self.M)[0]
        if (
            pow(self.zeta_M, self.M, self.r) != 1
            or pow(self.zeta_M, self.M // ell, self.r) == 1
        ):
            raise ValueError(f"witness element lacks exact order {self.M}")

    @property
    def field(self):
        return PrimeField(self.r)


def witness_for_prime(r, p, q, M):
    """Build the canonical SplitPrimeWitness at a given split prime r."""
    if not isprime(r):
        raise ValueError(f"{r} is not prime")
    t = find_primitive_root(r)
    return SplitPrimeWitness(
        r=r,
        zeta_p=pow(t, (r - 1) // p, r),
        zeta_q=pow(t, (r - 1) // q, r),
        zeta_M=pow(t, (r - 1) // M, r),
        p=p,
        q=q,
        M=M,
        t=t,
    )


def search_split_primes(p, q, M, count, start=0, r_cap=None):
    """First `count` split-prime witnesses for (p, q, M) with r >= start.

    Walks the progression r = 1 (mod lcm(pq, 2M^2)); every prime found is
    a witness.  The squared factor keeps one witness list valid across the
    modulus escalation and matches the published tables.  Deterministic in
    all arguments.  Raises SearchExhausted past r_cap.
    """
    if p == q or p == 2 or q == 2 or not (isprime(p) and isprime(q)):
        raise ValueError(f"({p}, {q}) is not a pair of distinct odd primes")
    ResidueRing.from_modulus(M)
    if count < 1:
        raise ValueError("count must be positive")
    if r_cap is None:
        r_cap = _DEFAULT_R_CAP
    step = math.lcm(p * q, 2 * M * M)
    r = (max(start, 2) - 2) // step * step + step + 1
    witnesses = []
    while len(witnesses) < count:
        if r > r_cap:
            raise SearchExhausted(
                f"only {len(witnesses)} of {count} split primes for "
                f"({p}, {q}, M={M}) below {r_cap}"
            )
        if isprime(r):
            witnesses.append(witness_for_prime(r, p, q, M))
        r += step
    return witnesses


def _bsgs(g, h, n, r):
    """Solve g^d = h in F_r for 0 <= d < n (g of order dividing n)."""
    m = math.isqrt(n - 1) + 1
    baby = {}
    gj = 1
    for j in range(m):
        baby.setdefault(gj, j)
        gj = gj * g % r
    giant = pow(g, -m, r)
    gamma = h % r
    for i in range(m):
        if gamma in baby:
            return i * m + baby[gamma]
        gamma = gamma * giant % r
    raise NotInSubgroup(f"{h} is not a power of {g} mod {r}")


def dlog_mu_M(v, zeta_M, M, r):
    """Discrete log of v base zeta_M in the order-M subgroup of F_r*.

    Pohlig-Hellman descent along the l-adic filtration of the cyclic
    group of order M = l^k, with baby-step/giant-step at each digit.
    """
    ring = ResidueRing.from_modulus(M)
    v %= r
    if pow(v, M, r) != 1:
        raise NotInSubgroup(f"{v}^{M} != 1 mod {r}")
    ell = ring.l
    bottom = pow(zeta_M, M // ell, r)
    if bottom == 1:
        raise NotInSubgroup(f"dlog base lacks exact order {M}")
    inv_base = pow(zeta_M, -1, r)
    s = 0
    for i in range(ring.k):
        layer = pow(v * pow(inv_base, s, r) % r, M // ell ** (i + 1), r)
        s += _bsgs(bottom, layer, ell, r) * ell**i
    return s
