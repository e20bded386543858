"""Cyclotomic-unit conjugates and their Frobenius polynomials.

A split prime r realizes the roots of unity inside F_r, so each Galois
conjugate of the distinguished real unit becomes an explicit field
element.  Taking discrete logarithms of M-th power residues and sorting
them by conjugation exponents turns the Frobenius element of r into a
polynomial over Z/M in the two group-ring variables.  Records are
cached as JSON lines keyed by the witness normalization.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DegenerateUnit, ShapeMismatch
from .grpring import GroupRingElement, RingShape
from .modarith import SplitPrimeWitness, dlog_mu_M, find_primitive_root, has_exact_order


@dataclass(frozen=True)
class EtaContext:
    """Fixed data behind the conjugate indexing of the unit eta.

    gamma and delta generate the two Galois factors and drive the index
    maps i -> gamma^i mod p, j -> delta^j mod q; the pair (g, h) selects
    which unit is being conjugated.
    """

    p: int
    q: int
    g: int
    h: int
    gamma: int
    delta: int

    def __post_init__(self):
        for root, n in ((self.g, self.p), (self.h, self.q), (self.gamma, self.p),
                        (self.delta, self.q)):
            if not has_exact_order(root % n, n - 1, n):
                raise ValueError(f"{root} is not a primitive root mod {n}")

    @classmethod
    def standard(cls, p, q, g, h):
        """Index by the smallest primitive roots, the reporting convention."""
        return cls(p=p, q=q, g=g, h=h,
                   gamma=find_primitive_root(p), delta=find_primitive_root(q))


def eta_image(ctx, i, j, w):
    """The conjugate eta_(i, j) as an element of F_r.

    Exponent halving uses the inverse of 2 mod p (resp. q), so even
    primitive roots are handled the same as odd ones.
    """
    if (w.p, w.q) != (ctx.p, ctx.q):
        raise ShapeMismatch(f"witness conductor ({w.p}, {w.q}) != ({ctx.p}, {ctx.q})")
    p, q, r = ctx.p, ctx.q, w.r
    a = pow(ctx.gamma, i, p)
    b = pow(ctx.delta, j, q)
    e_p = -a * (ctx.g + 1) * ((p + 1) // 2) % p
    e_q = -b * (ctx.h + 1) * ((q + 1) // 2) % q
    cross = (1 - pow(w.zeta_p, a, r) * pow(w.zeta_q, b, r)) % r
    num_p = (1 - pow(w.zeta_p, ctx.g * a % p, r)) % r
    den_p = (1 - pow(w.zeta_p, a, r)) % r
    num_q = (1 - pow(w.zeta_q, ctx.h * b % q, r)) % r
    den_q = (1 - pow(w.zeta_q, b, r)) % r
    if not (cross and num_p and den_p and num_q and den_q):
        raise DegenerateUnit(f"vanishing cyclotomic factor at ({i}, {j}) mod {r}")
    v = pow(w.zeta_p, e_p, r) * pow(w.zeta_q, e_q, r) % r
    v = v * cross % r * cross % r
    v = v * num_p % r * pow(den_p, r - 2, r) % r
    return v * num_q % r * pow(den_q, r - 2, r) % r


@dataclass(frozen=True)
class FrobeniusRecord:
    """One Frobenius polynomial together with the witness that defined it."""

    witness: SplitPrimeWitness
    shape: RingShape
    poly: GroupRingElement

    def __post_init__(self):
        if self.shape.M != self.witness.M:
            raise ShapeMismatch(f"modulus {self.shape.M} != witness {self.witness.M}")
        if self.poly.evaluate(1, 1) != 0:
            raise DegenerateUnit(f"record for r={self.witness.r} fails augmentation")

    @property
    def r(self):
        return self.witness.r

    @property
    def M(self):
        return self.witness.M


def _witness_digest(w):
    blob = f"{w.r}:{w.t}:{w.zeta_p}:{w.zeta_q}:{w.zeta_M}"
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class FrobeniusCache:
    """Append-only JSON-lines store of computed records.

    Keys include a digest of the witness normalization, so records from
    a differently normalized witness never collide; repeated runs append
    nothing and return byte-identical polynomials.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._rows = {}
        if self.path.exists():
            with self.path.open() as fh:
                for line in fh:
                    row = json.loads(line)
                    self._rows[self._key_of(row)] = row["coeffs"]

    @staticmethod
    def _key_of(row):
        return (row["p"], row["q"], row["g"], row["h"], row["r"], row["M"],
                row["D1"], row["D2"], row["witness"])

    @staticmethod
    def _key(ctx, w, shape):
        return (ctx.p, ctx.q, ctx.g, ctx.h, w.r, shape.M, shape.D1, shape.D2,
                _witness_digest(w))

    def get(self, ctx, w, shape):
        coeffs = self._rows.get(self._key(ctx, w, shape))
        if coeffs is None:
            return None
        return GroupRingElement.from_triples(shape, [tuple(t) for t in coeffs])

    def put(self, ctx, w, shape, poly):
        key = self._key(ctx, w, shape)
        if key in self._rows:
            return
        coeffs = [list(t) for t in poly.to_triples()]
        self._rows[key] = coeffs
        row = {
            "p": ctx.p, "q": ctx.q, "g": ctx.g, "h": ctx.h, "r": w.r,
            "M": shape.M, "D1": shape.D1, "D2": shape.D2,
            "witness": _witness_digest(w), "coeffs": coeffs,
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")


def frobenius_polynomial_full(ctx, w, cache=None):
    """Frobenius polynomial on the full group, shape (p-1, q-1).

    The coefficient of x^i y^j is the discrete log of eta_(i, j) raised
    to (r-1)/M; the second index only runs to (q-1)/2 because the other
    half repeats the same conjugates.
    """
    shape = RingShape.full(ctx.p, ctx.q, w.M)
    if cache is not None:
        hit = cache.get(ctx, w, shape)
        if hit is not None:
            return FrobeniusRecord(witness=w, shape=shape, poly=hit)
    power = (w.r - 1) // w.M
    grid = {}
    for i in range(1, ctx.p):
        for j in range(1, (ctx.q - 1) // 2 + 1):
            s = dlog_mu_M(pow(eta_image(ctx, i, j, w), power, w.r),
                          w.zeta_M, w.M, w.r)
            key = (i % shape.D1, j % shape.D2)
            grid[key] = (grid.get(key, 0) + s) % w.M
    poly = GroupRingElement.from_triples(
        shape, [(i, j, c) for (i, j), c in grid.items()]
    )
    if cache is not None:
        cache.put(ctx, w, shape, poly)
    return FrobeniusRecord(witness=w, shape=shape, poly=poly)


def frobenius_polynomial_restricted(ctx, w, shape, cache=None):
    """Frobenius polynomial collapsed onto a degree cell.

    Collapsing sums the full polynomial's discrete logs over exponent
    classes mod (D1, D2), which equals the dlog of the class product by
    the homomorphism property; the full record is reused when cached.
    """
    if (shape.p, shape.q) != (ctx.p, ctx.q) or shape.M != w.M:
        raise ShapeMismatch(
            f"cell {shape.p, shape.q, shape.M} does not fit ({ctx.p}, {ctx.q}, {w.M})"
        )
    if cache is not None:
        hit = cache.get(ctx, w, shape)
        if hit is not None:
            return FrobeniusRecord(witness=w, shape=shape, poly=hit)
    full = frobenius_polynomial_full(ctx, w, cache)
    poly = GroupRingElement.from_triples(shape, full.poly.to_triples())
    if cache is not None:
        cache.put(ctx, w, shape, poly)
    return FrobeniusRecord(witness=w, shape=shape, poly=poly)
