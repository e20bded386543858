"""Ideal arithmetic in cell rings over Z/l^k.

Two independent engines are provided:

- a Howell-form engine treating an ideal as its Z/M-module span (every
  ideal is a submodule spanned by the cyclic shifts of its generators);
  the Howell normal form is a canonical basis, so span equality is array
  equality and quotient orders fall out of the pivot valuations;
- a strong Groebner engine working in the covering polynomial ring with
  the relations x^D1 - 1, y^D2 - 1 carried as explicit generators, with
  annihilator-closure (A-) polynomials alongside the classical S-pairs so
  that reduction is decisive over the chain ring Z/l^k.

The Howell engine is the workhorse; the Groebner engine doubles as an
independent oracle and as the extractor of minimal generators in the form
the annihilator step needs.  Term order is lex with x > y.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotSubideal, OracleMismatch
from .grpring import GroupRingElement, RingShape, _val
from . import kernels

_PAIR_LIMIT = 200000


# ---------------------------------------------------------------------------
# module spans and the Howell engine

def _shift_rows(grid, D1, D2):
    """All D1*D2 cyclic shifts of a coefficient grid, flattened to rows."""
    rows = np.empty((D1 * D2, D1 * D2), dtype=grid.dtype)
    t = 0
    for s1 in range(D1):
        rolled = np.roll(grid, s1, axis=0)
        for s2 in range(D2):
            rows[t] = np.roll(rolled, s2, axis=1).ravel()
            t += 1
    return rows


def element_to_vec(f):
    return f.to_grid().ravel()


def vec_to_element(shape, vec):
    return GroupRingElement.from_grid(shape, np.asarray(vec).reshape(shape.D1, shape.D2))


class SubmoduleForm:
    """Canonical Howell form of the Z/M-span of an ideal's shift rows.

    Spans with equal row arrays are equal as submodules; the converse holds
    because the form is unique, so equality tests and cache keys reduce to
    the row array.
    """

    __slots__ = ("shape", "rows", "_pivots")

    def __init__(self, shape, rows):
        self.shape = shape
        self.rows = rows
        self._pivots = None

    @classmethod
    def from_rows(cls, shape, raw_rows):
        rows = kernels.howell(raw_rows, shape.M, shape.ell, shape.k)
        return cls(shape, rows)

    @classmethod
    def from_generators(cls, shape, gens):
        if not gens:
            return cls(shape, np.zeros((0, shape.rank), np.int64))
        blocks = [_shift_rows(g.to_grid(), shape.D1, shape.D2) for g in gens]
        return cls.from_rows(shape, np.vstack(blocks))

    @property
    def pivots(self):
        """List of (column, valuation) per basis row."""
        if self._pivots is None:
            piv = []
            for t in range(self.rows.shape[0]):
                cols = np.nonzero(self.rows[t])[0]
                c = int(cols[0])
                piv.append((c, _val(int(self.rows[t, c]), self.shape.ell)))
            self._pivots = piv
        return self._pivots

    @property
    def log_size(self):
        """log_l of the span's cardinality."""
        return sum(self.shape.k - v for _, v in self.pivots)

    def contains_vec(self, vec):
        if self.rows.shape[0] == 0:
            return not np.any(np.asarray(vec) % self.shape.M)
        res = kernels.reduce_against(
            np.asarray(vec, dtype=self.rows.dtype) % self.shape.M,
            self.rows,
            self.shape.M,
        )
        return not np.any(res)

    def contains(self, f):
        return self.contains_vec(element_to_vec(f))

    def extended(self, gens):
        """Span enlarged by further generators' shift rows."""
        if not gens:
            return self
        blocks = [_shift_rows(g.to_grid(), self.shape.D1, self.shape.D2) for g in gens]
        raw = np.vstack([self.rows.astype(blocks[0].dtype)] + blocks) if self.rows.size \
            else np.vstack(blocks)
        return SubmoduleForm.from_rows(self.shape, raw)

    def __eq__(self, other):
        return (
            isinstance(other, SubmoduleForm)
            and self.shape == other.shape
            and self.rows.shape == other.rows.shape
            and bool(np.array_equal(self.rows, other.rows))
        )

    __hash__ = None

    def basis_elements(self):
        return [vec_to_element(self.shape, self.rows[t]) for t in range(self.rows.shape[0])]


def howell_oracle(gens, shape):
    """Canonical submodule form of the ideal generated by gens."""
    return SubmoduleForm.from_generators(shape, gens)


# ---------------------------------------------------------------------------
# strong Groebner engine in the covering ring

def _free_terms(f):
    """Copy an element's terms into a plain free-ring dict."""
    return dict(f.terms)


def _lt_free(poly):
    m = max(poly)
    return m, poly[m]


def _unit_normalize(poly, M, ell):
    """Scale so the leading coefficient is a pure power of l."""
    m, c = _lt_free(poly)
    v = _val(c, ell)
    u = c // ell**v
    if u == 1:
        return poly
    inv = pow(u, -1, M)
    return {mm: (cc * inv) % M for mm, cc in poly.items()}

def _mono_mul(poly, di, dj, c, M):
    out = {}
    for (i, j), cc in poly.items():
        s = cc * c % M
        if s:
            out[(i + di, j + dj)] = s
    return out


def _add_free(a, b, M):
    out = dict(a)
    for m, c in b.items():
        s = (out.get(m, 0) + c) % M
        if s:
            out[m] = s
        elif m in out:
            del out[m]
    return out


def _reduce_free(poly, basis, M, ell, k):
    """Full strong normal form of a free-ring poly against a basis list.

    A term c*x^i*y^j is reducible by g when lm(g) divides (i, j) and
    v_l(lc(g)) <= v_l(c); the reduction cancels the term exactly.
    Eliminations only introduce terms below the one removed, so a single
    descending sweep with restarts below the elimination point suffices.
    """
    poly = dict(poly)
    lts = [(_lt_free(g), g) for g in basis]
    while True:
        hit = False
        for m in sorted(poly, reverse=True):
            c = poly[m]
            vc = _val(c, ell)
            best = None
            for ((gi, gj), gc), g in lts:
                if gi <= m[0] and gj <= m[1]:
                    vg = _val(gc, ell)
                    if vg <= vc and (best is None or vg < best[0]):
                        best = (vg, (gi, gj), gc, g)
            if best is None:
                continue
            vg, (gi, gj), gc, g = best
            u = gc // ell**vg
            f = (c // ell**vg) * pow(u, -1, M) % M
            poly = _add_free(poly, _mono_mul(g, m[0] - gi, m[1] - gj, (M - f) % M, M), M)
            hit = True
            break
        if not hit:
            return poly


def _spoly(f, g, M, ell):
    (fi, fj), fc = _lt_free(f)
    (gi, gj), gc = _lt_free(g)
    li, lj = max(fi, gi), max(fj, gj)
    vf, vg = _val(fc, ell), _val(gc, ell)
    v = max(vf, vg)
    uf, ug = fc // ell**vf, gc // ell**vg
    a = ell ** (v - vf) * pow(uf, -1, M) % M
    b = ell ** (v - vg) * pow(ug, -1, M) % M
    return _add_free(
        _mono_mul(f, li - fi, lj - fj, a, M),
        _mono_mul(g, li - gi, lj - gj, (M - b) % M, M),
        M,
    )


def _relations_free(shape):
    return [
        {(shape.D1, 0): 1, (0, 0): shape.M - 1},
        {(0, shape.D2): 1, (0, 0): shape.M - 1},
    ]


@dataclass
class GroebnerBasis:
    """A minimalized, tail-reduced strong Groebner basis.

    `generators` are the quotient-ring images (the two ring relations drop
    out); `free_polys` retain the covering-ring members that reduction
    needs, relations included.
    """

    shape: RingShape
    generators: list
    free_polys: list

    def reduce(self, f):
        nf = _reduce_free(_free_terms(f), self.free_polys, self.shape.M,
                          self.shape.ell, self.shape.k)
        return GroupRingElement(self.shape, nf)

    def contains(self, f):
        return self.reduce(f).is_zero


def buchberger(gens, shape):
    """Strong Groebner basis of <gens> + ring relations over Z/l^k.

    Normal strategy (smallest S-pair lcm first); annihilator polynomials
    l^(k-v)*g enter the queue whenever a member's leading coefficient is
    a nonunit; completion is followed by minimalization, tail reduction,
    and unit normalization of every leading coefficient.
    """
    M, ell, k = shape.M, shape.ell, shape.k
    basis = []
    for g in list(gens):
        t = _free_terms(g)
        if t:
            basis.append(_unit_normalize(t, M, ell))
    basis.extend(_relations_free(shape))

    pairs = []

    def _push_pairs(n):
        f = basis[n]
        (fi, fj), fc = _lt_free(f)
        for t in range(n):
            (gi, gj), gc = _lt_free(basis[t])
            li, lj = max(fi, gi), max(fj, gj)
            # coprime leading monomials with unit leading coefficients
            # reduce to zero automatically
            if (
                min(fi, gi) == 0 and min(fj, gj) == 0
                and fc % ell and gc % ell
            ):
                continue
            pairs.append(((li, lj), t, n))
        vf = _val(fc, ell)
        if vf:
            pairs.append(((fi, fj), n, -1))

    for n in range(len(basis)):
        _push_pairs(n)

    seen = 0
    while pairs:
        seen += 1
        if seen > _PAIR_LIMIT:
            raise RuntimeError("Groebner completion exceeded the pair budget")
        pairs.sort(key=lambda e: (e[0], e[1], e[2]), reverse=True)
        _, t, n = pairs.pop()
        if n == -1:
            f = basis[t]
            _, fc = _lt_free(f)
            v = _val(fc, ell)
            cand = {m: (c * ell ** (k - v)) % M for m, c in f.items()}
            cand = {m: c for m, c in cand.items() if c}
        else:
            cand = _spoly(basis[t], basis[n], M, ell)
        nf = _reduce_free(cand, basis, M, ell, k)
        if nf:
            basis.append(_unit_normalize(nf, M, ell))
            _push_pairs(len(basis) - 1)

    # minimalize: drop members whose leading term another member reduces
    alive = list(range(len(basis)))
    changed = True
    while changed:
        changed = False
        for i in list(alive):
            (mi, ci) = _lt_free(basis[i])
            vi = _val(ci, ell)
            for t in alive:
                if t == i:
                    continue
                (mt, ct) = _lt_free(basis[t])
                if mt[0] <= mi[0] and mt[1] <= mi[1] and _val(ct, ell) <= vi:
                    alive.remove(i)
                    changed = True
                    break
            if changed:
                break

    kept = [basis[i] for i in sorted(alive, key=lambda t: _lt_free(basis[t])[0])]
    reduced = []
    for i, g in enumerate(kept):
        others = reduced + kept[i + 1:]
        m, c = _lt_free(g)
        tail = dict(g)
        del tail[m]
        tail = _reduce_free(tail, others, M, ell, k) if others else tail
        tail[m] = c
        reduced.append(_unit_normalize(tail, M, ell))

    quotient_gens = []
    for g in reduced:
        img = GroupRingElement(shape, g)
        if not img.is_zero:
            quotient_gens.append(img)
    return GroebnerBasis(shape=shape, generators=quotient_gens, free_polys=reduced)


def reduce_element(f, basis):
    """Normal form of f against a GroebnerBasis."""
    return basis.reduce(f)


# ---------------------------------------------------------------------------
# handles and derived operations

class IdealHandle:
    """An ideal of a cell ring, carrying both engine representations lazily."""

    __slots__ = ("shape", "generators", "_howell", "_gb")

    def __init__(self, shape, generators, howell=None):
        self.shape = shape
        self.generators = [g for g in generators if not g.is_zero]
        self._howell = howell
        self._gb = None

    def howell_form(self):
        if self._howell is None:
            self._howell = SubmoduleForm.from_generators(self.shape, self.generators)
        return self._howell

    def groebner_basis(self):
        if self._gb is None:
            self._gb = buchberger(self.generators, self.shape)
        return self._gb

    def contains(self, f):
        return self.howell_form().contains(f)

    def __eq__(self, other):
        return (
            isinstance(other, IdealHandle)
            and self.shape == other.shape
            and self.howell_form() == other.howell_form()
        )

    __hash__ = None

    def __repr__(self):
        gens = ", ".join(g.to_text() for g in self.generators)
        return f"IdealHandle({self.shape.D1}x{self.shape.D2} mod {self.shape.M}: {gens})"


def ideal(gens, shape):
    return IdealHandle(shape, list(gens))


def ideal_equal(A, B, engines=("howell",)):
    """Span equality of two ideals, optionally cross-checked by reduction."""
    res = None
    if "howell" in engines:
        res = A.howell_form() == B.howell_form()
    if "groebner" in engines:
        ga, gb = A.groebner_basis(), B.groebner_basis()
        alt = all(gb.contains(g) for g in A.generators) and all(
            ga.contains(g) for g in B.generators
        )
        if res is not None and alt != res:
            raise OracleMismatch(f"ideal_equal engines disagree: {res} vs {alt}")
        res = alt
    return res


def _gb_ring_log_size(basis, shape):
    """log_l |R / I| from a strong basis by coefficient-annihilator counting."""
    lts = [_lt_free(g) for g in basis.free_polys]
    total = 0
    for i in range(shape.D1):
        for j in range(shape.D2):
            minv = shape.k
            for (gi, gj), gc in lts:
                if gi <= i and gj <= j:
                    v = _val(gc, shape.ell)
                    if v < minv:
                        minv = v
            total += minv
    return total


def quotient_order(I, J, engines=("howell",)):
    """|I / J| for nested ideals J <= I; raises NotSubideal otherwise."""
    shape = I.shape
    res = None
    if "howell" in engines:
        hi, hj = I.howell_form(), J.howell_form()
        for t in range(hj.rows.shape[0]):
            if not hi.contains_vec(hj.rows[t]):
                raise NotSubideal("second ideal is not contained in the first")
        res = shape.ell ** (hi.log_size - hj.log_size)
    if "groebner" in engines:
        gi, gj = I.groebner_basis(), J.groebner_basis()
        for g in J.generators:
            if not gi.contains(g):
                raise NotSubideal("second ideal is not contained in the first")
        alt = shape.ell ** (
            _gb_ring_log_size(gj, shape) - _gb_ring_log_size(gi, shape)
        )
        if res is not None and alt != res:
            raise OracleMismatch(f"quotient_order engines disagree: {res} vs {alt}")
        res = alt
    return res


def ideal_quotient(T, J, verify=False):
    """The colon ideal (T : J) = {f : f*g in T for every generator g of J}.

    Kernel method: stack, per generator g, the multiplication-by-g images
    of the monomial basis next to an identity block, adjoin T's span rows
    in each image block, and read the colon span off the Howell rows whose
    image part vanished.  With verify=True the product f*g of every basis
    element is checked against T's Groebner basis as well.
    """
    shape = T.shape
    N = shape.rank
    gens_j = [g for g in J.generators if not g.is_zero]
    if not gens_j:
        # (T : 0) is the whole ring
        return IdealHandle(shape, [GroupRingElement.constant(shape, 1)])
    t_rows = T.howell_form().rows
    dtype = object if shape.M > kernels.INT64_SAFE_MOD else np.int64
    nblocks = len(gens_j)
    width = (nblocks + 1) * N
    stacked = []
    grids = [g.to_grid().astype(dtype, copy=False) for g in gens_j]
    for s1 in range(shape.D1):
        for s2 in range(shape.D2):
            row = np.zeros(width, dtype)
            for b, grid in enumerate(grids):
                row[b * N:(b + 1) * N] = np.roll(
                    np.roll(grid, s1, axis=0), s2, axis=1
                ).ravel()
            row[nblocks * N + s1 * shape.D2 + s2] = 1
            stacked.append(row)
    for b in range(nblocks):
        for t in range(t_rows.shape[0]):
            row = np.zeros(width, dtype)
            row[b * N:(b + 1) * N] = t_rows[t]
            stacked.append(row)
    H = kernels.howell(np.vstack(stacked), shape.M, shape.ell, shape.k)
    colon_rows = []
    for t in range(H.shape[0]):
        if not np.any(H[t, : nblocks * N]):
            colon_rows.append(H[t, nblocks * N:])
    if colon_rows:
        span = SubmoduleForm.from_rows(shape, np.vstack(colon_rows))
    else:
        span = SubmoduleForm(shape, np.zeros((0, N), np.int64))
    out = IdealHandle(shape, span.basis_elements(), howell=span)
    if verify:
        gb_t = T.groebner_basis()
        for f in out.generators:
            for g in gens_j:
                if not gb_t.contains(f * g):
                    raise OracleMismatch("colon ideal member fails Groebner membership")
    return out


def annihilator(J, verify=False):
    """Ann(J) = (0 : J) within the cell ring."""
    zero = IdealHandle(J.shape, [], howell=SubmoduleForm(
        J.shape, np.zeros((0, J.shape.rank), np.int64)
    ))
    return ideal_quotient(zero, J, verify=verify)
