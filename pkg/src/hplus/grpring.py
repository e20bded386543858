"""Sparse two-variable group-ring arithmetic over Z/M.

Elements live in (Z/M)[x, y] / (x^D1 - 1, y^D2 - 1): exponents are reduced
modulo (D1, D2) on construction, so the quotient relations are baked into
the arithmetic.  The conjugation relation is NOT baked in; it is produced by
:func:`conjugation_relation` and carried as an explicit ideal generator.

The term order is lexicographic with x > y throughout the package.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch, ZeroPolynomial
from .modarith import prime_power_split as _prime_power_split
from . import kernels

# sparse/dense crossover for products; dense route uses the cyclic kernel
_DENSE_MUL_THRESHOLD = 4096


def _val(n, ell):
    """l-adic valuation of n (n != 0)."""
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass(frozen=True)
class RingShape:
    """Shape data of a cell ring (Z/M)[x,y]/(x^D1 - 1, y^D2 - 1).

    D1 = d1 * l^a1 and D2 = d2 * l^a2 where a_i is the l-adic valuation of
    p-1 (resp. q-1) and d_i the tame part actually used by the cell.  The
    full group-ring shape has D1 = p-1, D2 = q-1.
    """

    M: int
    D1: int
    D2: int
    p: int
    q: int
    a1: int
    a2: int
    d1: int
    d2: int
    ell: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        ell, k = _prime_power_split(self.M)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "k", k)
        if ell == 2:
            raise ValueError("coefficient modulus must be a power of an odd prime")
        if self.D1 != self.d1 * ell**self.a1 or self.D2 != self.d2 * ell**self.a2:
            raise ValueError("exponent moduli inconsistent with (d, a) data")
        if self.d1 % ell == 0 or self.d2 % ell == 0:
            raise ValueError("tame parts must be prime to l")
        if (self.p - 1) % self.d1 or (self.q - 1) % self.d2:
            raise ValueError("tame parts must divide p-1 and q-1")

    @classmethod
    def full(cls, p, q, M):
        """The full group-ring shape with D1 = p-1, D2 = q-1."""
        ell, _ = _prime_power_split(M)
        a1 = _val(p - 1, ell) if (p - 1) % ell == 0 else 0
        a2 = _val(q - 1, ell) if (q - 1) % ell == 0 else 0
        return cls(
            M=M, D1=p - 1, D2=q - 1, p=p, q=q,
            a1=a1, a2=a2, d1=(p - 1) // ell**a1, d2=(q - 1) // ell**a2,
        )

    @classmethod
    def cell(cls, p, q, M, d1, d2):
        """The restricted shape for a degree cell (d1, d2)."""
        ell, _ = _prime_power_split(M)
        a1 = _val(p - 1, ell) if (p - 1) % ell == 0 else 0
        a2 = _val(q - 1, ell) if (q - 1) % ell == 0 else 0
        return cls(
            M=M, D1=d1 * ell**a1, D2=d2 * ell**a2, p=p, q=q,
            a1=a1, a2=a2, d1=d1, d2=d2,
        )

    @property
    def m1(self):
        return (self.p - 1) // self.ell**self.a1

    @property
    def m2(self):
        return (self.q - 1) // self.ell**self.a2

    @property
    def rank(self):
        """Rank of the ring as a free Z/M-module."""
        return self.D1 * self.D2

    def with_modulus(self, M):
        """Same exponent structure over a different power of the same l."""
        return RingShape(
            M=M, D1=self.D1, D2=self.D2, p=self.p, q=self.q,
            a1=self.a1, a2=self.a2, d1=self.d1, d2=self.d2,
        )


class GroupRingElement:
    """A sparse element of the shape ring; immutable by convention."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape, terms):
        self.shape = shape
        clean = {}
        for (i, j), c in terms.items():
            # int() bars sympy/numpy scalars from reaching serialization
            c = int(c) % shape.M
            if c:
                key = (int(i) % shape.D1, int(j) % shape.D2)
                c2 = (clean.get(key, 0) + c) % shape.M
                if c2:
                    clean[key] = c2
                elif key in clean:
                    del clean[key]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, shape):
        return cls(shape, {})

    @classmethod
    def monomial(cls, shape, i, j, c=1):
        return cls(shape, {(i, j): c})

    @classmethod
    def constant(cls, shape, c):
        return cls(shape, {(0, 0): c})

    @classmethod
    def from_triples(cls, shape, triples):
        terms = {}
        for i, j, c in triples:
            terms[(i, j)] = terms.get((i, j), 0) + c
        return cls(shape, terms)

    @classmethod
    def from_grid(cls, shape, grid):
        terms = {}
        for i, j in zip(*np.nonzero(grid)):
            terms[(int(i), int(j))] = int(grid[i, j])
        return cls(shape, terms)

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def to_triples(self):
        """Canonical serialization: sorted (i, j, coefficient) triples."""
        return sorted((i, j, c) for (i, j), c in self.terms.items())

    def to_grid(self):
        shape = self.shape
        dtype = object if shape.M > kernels.INT64_SAFE_MOD else np.int64
        grid = np.zeros((shape.D1, shape.D2), dtype)
        for (i, j), c in self.terms.items():
            grid[i, j] = c
        return grid

    def evaluate(self, xval=1, yval=1):
        """Evaluate at integer arguments, reduced mod M."""
        M = self.shape.M
        return sum(
            c * pow(xval, i, M) * pow(yval, j, M) for (i, j), c in self.terms.items()
        ) % M

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        if isinstance(other, int):
            other = GroupRingElement.constant(self.shape, other)
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0) + c
        return GroupRingElement(self.shape, terms)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.shape, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GroupRingElement.constant(self.shape, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(
                self.shape, {k: c * other for k, c in self.terms.items()}
            )
        self._check(other)
        shape = self.shape
        if len(self.terms) * len(other.terms) > _DENSE_MUL_THRESHOLD:
            grid = kernels.cyclic_mul(self.to_grid(), other.to_grid(), shape.M)
            return GroupRingElement.from_grid(shape, grid)
        terms = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = ((i1 + i2) % shape.D1, (j1 + j2) % shape.D2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return GroupRingElement(shape, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers not supported")
        out = GroupRingElement.constant(self.shape, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.shape == other.shape
            and self.terms == other.terms
        )

    __hash__ = None

    # -- rendering ---------------------------------------------------------

    def __repr__(self):
        return f"GroupRingElement({self.to_text()!r})"

    def to_text(self):
        """Render grouped by descending x-power, y-polynomials descending."""
        if self.is_zero:
            return "0"
        by_x = {}
        for (i, j), c in self.terms.items():
            by_x.setdefault(i, {})[j] = c
        parts = []
        for i in sorted(by_x, reverse=True):
            ypoly = by_x[i]
            xstr = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if len(ypoly) > 1 and i > 0:
                chunks = []
                for j in sorted(ypoly, reverse=True):
                    chunks.append(self._monomial_text(ypoly[j], 0, j))
                parts.append(f"{xstr}({'+'.join(chunks)})")
            else:
                for j in sorted(ypoly, reverse=True):
                    parts.append(self._monomial_text(ypoly[j], i, j))
        return " + ".join(parts)

    @staticmethod
    def _monomial_text(c, i, j):
        xstr = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        ystr = "" if j == 0 else ("y" if j == 1 else f"y^{j}")
        mono = xstr + ystr
        if not mono:
            return f"{c}"
        return mono if c == 1 else f"{c}{mono}"


def add(a, b):
    """Sum of two elements of the same shape."""
    return a + b


def multiply(a, b):
    """Product of two elements of the same shape."""
    return a * b


def conjugation_relation(shape):
    """The relation x^((p-1)/2) y^((q-1)/2) - 1 of complex conjugation.

    from_triples, not a dict literal: when conjugation acts trivially on
    a cell the two keys coincide and must cancel to zero.
    """
    i = ((shape.p - 1) // 2) % shape.D1
    j = ((shape.q - 1) // 2) % shape.D2
    return GroupRingElement.from_triples(shape, [(i, j, 1), (0, 0, -1)])


def augmentation_ideal_generators(shape):
    """Generators [x - 1, y - 1] of the augmentation ideal."""
    return [
        GroupRingElement(shape, {(1, 0): 1, (0, 0): -1}),
        GroupRingElement(shape, {(0, 1): 1, (0, 0): -1}),
    ]


def leading_term(f):
    """The maximal (monomial, coefficient) under lex with x > y."""
    if f.is_zero:
        raise ZeroPolynomial("leading term of 0")
    mono = max(f.terms)
    return mono, f.terms[mono]


def scale_exponents(f, target, s1, s2):
    """Reindex f along (i, j) -> (i*s1, j*s2) into the target shape.

    Both directions of the l-power reindexing between a cell ring and its
    tame quotient use this: descent with s = l^a into the (d1, d2) shape,
    and the lift back with the same multipliers into the cell shape.  The
    coefficient modulus must match; exponents reduce in the target.
    """
    if f.shape.M != target.M:
        raise ShapeMismatch(f"modulus {f.shape.M} != {target.M}")
    return GroupRingElement(
        target, {(i * s1, j * s2): c for (i, j), c in f.terms.items()}
    )
