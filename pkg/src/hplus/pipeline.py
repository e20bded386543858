"""Resolution of l-parts of h+ for a fixed real conductor pq.

The driver walks odd primes l below a bound and, for each, runs the
three-step procedure: stabilize the ascending Frobenius ideal chain in
every degree cell (screen), escalate the coefficient modulus through
powers of l until the quotient orders repeat, and close the surviving
candidates with power certificates on annihilator elements.  Unit-index
valuations separate genuine class-number divisors from artifacts of the
primitive-root pair, and every claimed l-part carries either a
certificate or the exact index identity that proves it.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

from sympy import cyclotomic_poly, divisors, factorint, isprime, n_order, primerange, totient

from . import groebner as gb
from .charfactor import best_pair, gcd_over_pairs, rescreen_sequence
from .errors import BudgetExhausted, HplusError, MCapReached, OracleMismatch
from .frobenius import EtaContext, FrobeniusCache, frobenius_polynomial_restricted
from .grpring import (
    GroupRingElement,
    RingShape,
    augmentation_ideal_generators,
    conjugation_relation,
    scale_exponents,
)
from .groebner import IdealHandle, SubmoduleForm
from .modarith import search_split_primes
from .step3 import certificate_cost, step3_certificate

STATUS_NOT_DIVIDING = "not_dividing"
STATUS_INDEX_ONLY = "divides_index_only"
STATUS_PROVED = "h_plus_l_part_proved"
STATUS_INCONCLUSIVE = "inconclusive"

# candidate search budget for structured annihilator elements
MAX_CERT_ATTEMPTS = 24


def _val(n, l):
    v = 0
    while n % l == 0 and n:
        n //= l
        v += 1
    return v


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on, so equal configs mean equal reports."""

    p: int
    q: int
    l_bound: int = 10000
    l_only: tuple = ()
    m_cap: int = 6
    prime_budget: int = 8
    r_cap: int = None
    precision_cap: int = 40000
    stabilization_window: int = 3
    cache_path: str = None
    out_path: str = None

    def __post_init__(self):
        if not (2 < self.p < self.q and isprime(self.p) and isprime(self.q)):
            raise ValueError("p and q must be odd primes with p < q")
        for name in ("l_bound", "m_cap", "prime_budget", "precision_cap",
                     "stabilization_window"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "l_only", tuple(sorted(set(self.l_only))))
        for l in self.l_only:
            if l == 2 or not isprime(l):
                raise ValueError(f"requested l = {l} is not an odd prime")

    def primes(self):
        if self.l_only:
            return list(self.l_only)
        return [l for l in primerange(3, self.l_bound)]

    def serialize(self):
        return {
            "p": self.p, "q": self.q, "l_bound": self.l_bound,
            "l_only": list(self.l_only), "m_cap": self.m_cap,
            "prime_budget": self.prime_budget, "r_cap": self.r_cap,
            "precision_cap": self.precision_cap,
            "stabilization_window": self.stabilization_window,
        }


@dataclass(frozen=True)
class DegreeCell:
    """One (d1, d2) block of the screening grid.

    d_i = gcd(p-1, l^f_i - 1) over the residue degrees f_i of the
    irreducible factors of x^m1 - 1 and y^m2 - 1 over F_l; distinct
    degree pairs collapsing to the same (d1, d2) share the cell, with
    the provenance retained in degree_pairs.
    """

    p: int
    q: int
    ell: int
    d1: int
    d2: int
    degree_pairs: tuple

    def shape(self, M):
        return RingShape.cell(self.p, self.q, M, self.d1, self.d2)

    @property
    def key(self):
        return (self.d1, self.d2)

    @property
    def cell_degrees(self):
        """The (d1 l^a1, d2 l^a2) pair reported in the Degree column."""
        a1 = _val(self.p - 1, self.ell)
        a2 = _val(self.q - 1, self.ell)
        return (self.d1 * self.ell ** a1, self.d2 * self.ell ** a2)

    def serialize(self):
        return {
            "d1": self.d1, "d2": self.d2,
            "degrees": list(self.cell_degrees),
            "factor_degree_pairs": [list(fp) for fp in self.degree_pairs],
        }


def _factor_degrees(m, l):
    """Sorted degrees of the irreducible factors of x^m - 1 over F_l."""
    degs = []
    for e in divisors(m):
        f = 1 if e == 1 else n_order(l, e)
        degs.extend([f] * (totient(e) // f))
    return sorted(degs)


def _tame_gcd(n, l, f):
    # gcd(n, l^f - 1) without forming l^f
    return math.gcd(n, (pow(l, f, n) - 1) % n)


def degree_grid(p, q, l):
    """Degree cells for one prime l, smallest blocks first."""
    a1, a2 = _val(p - 1, l), _val(q - 1, l)
    m1, m2 = (p - 1) // l ** a1, (q - 1) // l ** a2
    cells = {}
    for f1 in sorted(set(_factor_degrees(m1, l))):
        d1 = _tame_gcd(p - 1, l, f1)
        for f2 in sorted(set(_factor_degrees(m2, l))):
            d2 = _tame_gcd(q - 1, l, f2)
            cells.setdefault((d1, d2), []).append((f1, f2))
    return [
        DegreeCell(p=p, q=q, ell=l, d1=d1, d2=d2,
                   degree_pairs=tuple(cells[(d1, d2)]))
        for d1, d2 in sorted(cells, key=lambda t: (t[0] * t[1], t))
    ]


@dataclass
class ChainResult:
    """A stabilized Frobenius chain with its quotient order."""

    ideal: IdealHandle
    order: int
    witnesses_used: int


def _stabilize_chain(ctx, shape, config, cache=None):
    """Grow the relation ideal one split prime at a time until it stops.

    Stability means `stabilization_window` consecutive additions leave
    the span unchanged; the budget bounds how many Frobenius primes may
    be consumed at this modulus.
    """
    witnesses = search_split_primes(
        ctx.p, ctx.q, shape.M, config.prime_budget, r_cap=config.r_cap
    )
    current = SubmoduleForm.from_generators(shape, [conjugation_relation(shape)])
    streak = 0
    for used, w in enumerate(witnesses, start=1):
        rec = frobenius_polynomial_restricted(ctx, w, shape, cache)
        extended = current.extended([rec.poly])
        streak = streak + 1 if extended == current else 0
        current = extended
        if streak >= config.stabilization_window:
            handle = IdealHandle(shape, current.basis_elements(), howell=current)
            ideal_d = gb.ideal(augmentation_ideal_generators(shape), shape)
            return ChainResult(handle, gb.quotient_order(ideal_d, handle), used)
    raise BudgetExhausted(
        f"chain at M={shape.M} still moving after {config.prime_budget} primes"
    )


def step1(l, cell, config, ctx, cache=None):
    """Screening pass: stabilize the chain at modulus l in one cell."""
    return _stabilize_chain(ctx, cell.shape(l), config, cache)


def primitive_pair_rescreen(l, config, ctx_best, gcd_report, grid, cache=None):
    """Decide whether a flagged l survives a change of primitive roots.

    A prime dividing the best pair's index factor but not the gcd may be
    an artifact of that pair; the first pair whose factor it does not
    divide is the eliminator.  Returns (survived, eliminator context,
    rescreen record).  When the gcd itself carries l, or the best pair's
    factor is prime to l, no rescreen is needed and the best pair stands.
    """
    best = (ctx_best.g, ctx_best.h)
    v_best = gcd_report.per_pair[best].l_adic_valuation(l)
    if v_best == 0 or gcd_report.l_adic_valuation(l) > 0:
        return True, ctx_best, None
    eliminator = next(
        gh for gh in rescreen_sequence(gcd_report, best)
        if gcd_report.per_pair[gh].l_adic_valuation(l) == 0
    )
    ctx2 = EtaContext.standard(config.p, config.q, *eliminator)
    orders = {}
    for cell in grid:
        orders[cell.key] = step1(l, cell, config, ctx2, cache).order
    survived = any(o > 1 for o in orders.values())
    record = {
        "pair": list(eliminator),
        "orders": {f"{d1},{d2}": o for (d1, d2), o in sorted(orders.items())},
        "survived": survived,
    }
    return survived, ctx2, record


@dataclass
class EscalationResult:
    """Order history over rising powers of l, with the stable ideal."""

    stable_M: int
    ideal: IdealHandle
    order: int
    history: tuple
    ideals_by_M: dict


def step2(l, cell, config, ctx, cache=None, first=None):
    """Escalate the modulus until two consecutive orders agree.

    Each power of l gets a fresh chain from its own split primes; the
    history of orders never decreases, and the stable modulus is the
    first of the equal pair.
    """
    history = []
    by_M = {}
    last = None
    for k in range(1, config.m_cap + 1):
        M = l ** k
        if k == 1 and first is not None:
            res = first
        else:
            res = _stabilize_chain(ctx, cell.shape(M), config, cache)
        history.append(res.order)
        by_M[M] = res
        if last is not None:
            if res.order < last.order:
                raise OracleMismatch(
                    f"quotient order fell from {last.order} to {res.order} at M={M}"
                )
            if res.order == last.order:
                return EscalationResult(
                    stable_M=M // l, ideal=last.ideal, order=last.order,
                    history=tuple(history), ideals_by_M=by_M,
                )
        last = res
    raise MCapReached(f"orders still growing at M={l ** config.m_cap}")


@dataclass(frozen=True)
class PhiPair:
    """A linear factor pair with the order of its block of the quotient."""

    ell: int
    root_x: int
    root_y: int
    order: int

    @property
    def label(self):
        return f"({_phi_text('x', self.root_x, self.ell)}," \
               f"{_phi_text('y', self.root_y, self.ell)})"

    def serialize(self):
        return {
            "root_x": self.root_x, "root_y": self.root_y,
            "label": self.label, "order": self.order,
        }


def _phi_text(var, c, l):
    if c % l == 1:
        return f"{var}-1"
    return f"{var}+{l - (c % l)}"


def _unit_subgroup(l, d):
    return sorted(c for c in range(1, l) if pow(c, d, l) == 1)


def contributing_phi_pairs(J):
    """Split the quotient order over pairs of linear factors.

    Each pair (x - c, y - d) of roots cuts out a block of the quotient by
    adjoining the factor relations, Teichmueller-lifted to the working
    modulus; a pair contributes when its block is nontrivial.  Cells with
    factors of higher residue degree are reported in aggregate only, as
    an empty list.  The block orders must multiply to the total.
    """
    shape = J.shape
    l, k = shape.ell, shape.k
    if (l - 1) % shape.d1 or (l - 1) % shape.d2:
        return []
    ideal_d = gb.ideal(augmentation_ideal_generators(shape), shape)
    total = gb.quotient_order(ideal_d, J)
    if total == 1:
        return []
    e1 = l ** min(shape.a1, k - 1)
    e2 = l ** min(shape.a2, k - 1)
    aug = augmentation_ideal_generators(shape)
    out = []
    aggregate = 1
    for c in _unit_subgroup(l, shape.d1):
        fx = GroupRingElement(shape, {(e1, 0): 1, (0, 0): -pow(c, l ** (k - 1), shape.M)})
        for d in _unit_subgroup(l, shape.d2):
            fy = GroupRingElement(shape, {(0, e2): 1, (0, 0): -pow(d, l ** (k - 1), shape.M)})
            num = gb.ideal(aug + [fx, fy], shape)
            den = gb.ideal(list(J.generators) + [fx, fy], shape)
            order = gb.quotient_order(num, den)
            aggregate *= order
            if order > 1:
                out.append(PhiPair(ell=l, root_x=c, root_y=d, order=order))
    if aggregate != total:
        raise OracleMismatch(
            f"phi blocks multiply to {aggregate}, quotient has order {total}"
        )
    return out


def _tame_shape(shape):
    return RingShape(M=shape.M, D1=shape.d1, D2=shape.d2, p=shape.p,
                     q=shape.q, a1=0, a2=0, d1=shape.d1, d2=shape.d2)


def _cyclotomic_element(shape, ks, axis):
    """Product of cyclotomic polynomials in one ring variable."""
    out = GroupRingElement.constant(shape, 1)
    for k in ks:
        coeffs = cyclotomic_poly(k, polys=True).all_coeffs()[::-1]
        terms = {(i, 0) if axis == 0 else (0, i): c
                 for i, c in enumerate(coeffs) if c}
        out = out * GroupRingElement(shape, terms)
    return out


def _phi_candidates(ann, tame):
    """Annihilator elements carrying cyclotomic prefactors.

    Colon ideals against products of Phi_k yield elements divisible by
    partial norm maps down to subfields.  A bare annihilator generator
    is often provably not an M-th power, while the same class multiplied
    into a norm map certifies, so these structured elements are where
    the certificates usually come from.
    """
    subsets = lambda d: [(k,) for k in divisors(d)] + [
        (k1, k2) for k1 in divisors(d) for k2 in divisors(d) if k1 < k2
    ]
    out = []
    for sx in [()] + subsets(tame.d1):
        for sy in [()] + subsets(tame.d2):
            if not sx and not sy:
                continue
            prefactor = _cyclotomic_element(tame, sx, 0) * \
                _cyclotomic_element(tame, sy, 1)
            if prefactor.is_zero:
                continue
            colon = gb.ideal_quotient(ann, gb.ideal([prefactor], tame))
            for w in colon.groebner_basis().generators:
                e = prefactor * w
                if not e.is_zero:
                    out.append(e)
    return out


def step3_dispatch(l, cell, J, M, config, ctx, target_exponent):
    """Certificate pass for one stabilized cell.

    Descends the chain to the tame block, takes the colon by the
    augmentation ideal and then the annihilator, and proves membership
    of annihilator elements in the verified-power module.  Candidates
    are the annihilator generators together with their norm-structured
    multiples, certified cheapest first; the claim is proved once the
    certified span reaches the claimed order, or contains every
    generator of the annihilator.
    """
    shape = J.shape
    tame = _tame_shape(shape)
    lift = lambda f: scale_exponents(
        f, shape, l ** shape.a1, l ** shape.a2
    )
    tame_gens = [scale_exponents(f, tame, 1, 1) for f in J.generators]
    j_tame = gb.ideal(tame_gens, tame)
    colon = gb.ideal_quotient(
        j_tame, gb.ideal(augmentation_ideal_generators(tame), tame)
    )
    reduced = gb.ideal(list(colon.groebner_basis().generators), tame)
    ann = gb.annihilator(reduced)
    ann_gens = [g for g in ann.groebner_basis().generators if not g.is_zero]
    report = {
        "stable_M": M,
        "annihilator_generators": len(ann_gens),
        "certificates": [],
        "failures": [],
    }
    if not ann_gens:
        report["reason"] = "annihilator is zero"
        return False, report

    principal = next(
        (g for g in ann_gens if gb.ideal_equal(gb.ideal([g], tame), ann)),
        None,
    )
    targets = [principal] if principal is not None else ann_gens
    report["principal"] = principal is not None

    ranked = {}
    for is_gen, e in [(True, g) for g in ann_gens] + \
            [(False, e) for e in _phi_candidates(ann, tame)]:
        key = tuple(sorted(e.terms.items()))
        if key in ranked:
            continue
        try:
            _, cost = certificate_cost(ctx, lift(e))
        except HplusError:
            cost = float("inf")
        ranked[key] = (cost, key, e)
    span = SubmoduleForm.from_generators(shape, [])

    def settled():
        if span.log_size >= target_exponent:
            return True
        return all(span.contains(lift(g)) for g in targets)

    attempts = 0
    for cost, _, e in sorted(ranked.values()):
        if settled() or attempts >= MAX_CERT_ATTEMPTS:
            break
        lifted = lift(e)
        if span.contains(lifted):
            continue
        attempts += 1
        try:
            cert = step3_certificate(
                ctx, lifted, precision_cap=config.precision_cap
            )
        except HplusError as exc:
            report["failures"].append(str(exc))
            continue
        report["certificates"].append(cert.serialize())
        if cert.divides:
            span = span.extended([lifted])
        else:
            report["failures"].append("exact division left a remainder")

    report["span_log"] = span.log_size
    report["certified_generators"] = all(
        span.contains(lift(g)) for g in targets
    )
    if settled():
        return True, report
    report["reason"] = "certified span below the claimed order"
    return False, report


@dataclass
class LReport:
    """Everything the run learned about one prime l."""

    l: int
    status: str = STATUS_NOT_DIVIDING
    divides_conductor: bool = False
    flagged: bool = False
    pair_used: tuple = None
    gcd_valuation: int = 0
    P_valuation: int = 0
    valuation_gap: bool = False
    B_order_l: int = 1
    candidate_l_part: int = 1
    h_plus_l_part: int = None
    cells: list = field(default_factory=list)
    rescreen: dict = None
    escalation: dict = None
    phi_pairs: list = None
    step3: dict = None
    error: str = None

    def serialize(self):
        return {
            "l": self.l,
            "status": self.status,
            "divides_conductor": self.divides_conductor,
            "flagged": self.flagged,
            "pair_used": list(self.pair_used) if self.pair_used else None,
            "gcd_valuation": self.gcd_valuation,
            "P_valuation": self.P_valuation,
            "valuation_gap": self.valuation_gap,
            "B_order_l": self.B_order_l,
            "candidate_l_part": self.candidate_l_part,
            "h_plus_l_part": self.h_plus_l_part,
            "cells": self.cells,
            "rescreen": self.rescreen,
            "escalation": self.escalation,
            "phi_pairs": [p.serialize() for p in self.phi_pairs]
            if self.phi_pairs is not None else None,
            "step3": self.step3,
            "error": self.error,
        }


def _resolve_l(l, config, ctx_best, gcd_report, cache=None):
    """The full screen / rescreen / escalate / certify flow for one l."""
    rpt = LReport(l=l)
    rpt.divides_conductor = l in (config.p, config.q)
    rpt.gcd_valuation = gcd_report.l_adic_valuation(l)
    best = (ctx_best.g, ctx_best.h)

    grid = degree_grid(config.p, config.q, l)
    screen = {}
    for cell in grid:
        res = step1(l, cell, config, ctx_best, cache)
        screen[cell.key] = res
        entry = cell.serialize()
        entry["screen_order"] = res.order
        rpt.cells.append(entry)
    rpt.flagged = any(res.order > 1 for res in screen.values())
    if not rpt.flagged:
        if gcd_report.per_pair[best].l_adic_valuation(l) > 0:
            raise OracleMismatch(
                f"trivial screen at l={l} despite index valuation"
            )
        return rpt

    survived, ctx_used, record = primitive_pair_rescreen(
        l, config, ctx_best, gcd_report, grid, cache
    )
    rpt.rescreen = record
    if not survived:
        rpt.status = STATUS_NOT_DIVIDING
        return rpt
    pair = (ctx_used.g, ctx_used.h)
    rpt.pair_used = pair
    rpt.P_valuation = gcd_report.per_pair[pair].l_adic_valuation(l)
    rpt.valuation_gap = rpt.P_valuation > rpt.gcd_valuation

    if pair != best:
        screen = {cell.key: step1(l, cell, config, ctx_used, cache)
                  for cell in grid}

    escalations = {}
    for cell in grid:
        if screen[cell.key].order == 1:
            continue
        escalations[cell.key] = step2(
            l, cell, config, ctx_used, cache, first=screen[cell.key]
        )
    if not escalations:
        raise OracleMismatch(f"rescreen survivor l={l} lost all cells")
    rpt.B_order_l = max(esc.order for esc in escalations.values())
    rpt.escalation = {
        f"{d1},{d2}": {
            "stable_M": esc.stable_M,
            "orders": list(esc.history),
        }
        for (d1, d2), esc in sorted(escalations.items())
    }
    chosen_key = min(
        (key for key, esc in escalations.items()
         if esc.order == rpt.B_order_l),
        key=lambda t: (t[0] * t[1], t),
    )
    chosen_cell = next(c for c in grid if c.key == chosen_key)
    chosen = escalations[chosen_key]
    rpt.phi_pairs = contributing_phi_pairs(chosen.ideal)

    exponent = _val(rpt.B_order_l, l) - rpt.P_valuation
    if exponent < 0:
        raise OracleMismatch(
            f"order {rpt.B_order_l} below the index valuation at l={l}"
        )
    rpt.candidate_l_part = l ** exponent
    if exponent == 0:
        # the stable order is fully accounted for by the index factor
        rpt.status = STATUS_INDEX_ONLY
        rpt.h_plus_l_part = 1
        return rpt

    proved, detail = step3_dispatch(
        l, chosen_cell, chosen.ideal, chosen.stable_M, config, ctx_used,
        target_exponent=exponent,
    )
    rpt.step3 = detail
    if proved:
        rpt.status = STATUS_PROVED
        rpt.h_plus_l_part = rpt.candidate_l_part
    else:
        rpt.status = STATUS_INCONCLUSIVE
    return rpt


def resolve_l(l, config, ctx_best, gcd_report, cache=None):
    """One prime's report, with failures folded in instead of raised."""
    try:
        return _resolve_l(l, config, ctx_best, gcd_report, cache)
    except HplusError as exc:
        rpt = LReport(l=l, status=STATUS_INCONCLUSIVE)
        rpt.divides_conductor = l in (config.p, config.q)
        rpt.gcd_valuation = gcd_report.l_adic_valuation(l)
        rpt.error = f"{type(exc).__name__}: {exc}"
        return rpt


def _factored_text(n):
    if n == 1:
        return "1"
    return "*".join(
        f"{s}^{e}" if e > 1 else f"{s}"
        for s, e in sorted(factorint(n).items())
    )


def table_row(config, gcd_report, reports):
    """The summary row: conductor, odd gcd part, new primes, degrees, l-parts.

    The l column lists flagged survivors outside the gcd; the Degree
    column lists the cell degrees of every prime whose l-part exceeds 1,
    ascending in l; the last column multiplies the l-parts, proved or
    candidate.
    """
    gcd_odd = 1
    for s, e in gcd_report.gcd_odd_small:
        gcd_odd *= s ** e
    l_col = []
    degree_col = []
    h_parts = []
    unproved = False
    for rpt in sorted(reports, key=lambda r: r.l):
        part = rpt.h_plus_l_part
        if part is None:
            part = rpt.candidate_l_part
            if part > 1:
                unproved = True
        survived = rpt.status in (STATUS_INDEX_ONLY, STATUS_PROVED,
                                  STATUS_INCONCLUSIVE)
        if survived and rpt.gcd_valuation == 0:
            l_col.append(rpt.l)
        if part > 1:
            h_parts.append((rpt.l, part))
            cell = _smallest_nontrivial_cell(rpt)
            if cell is not None:
                degree_col.append(cell)
    h_value = math.prod(p for _, p in h_parts) if h_parts else 1
    return {
        "f": f"{config.p}*{config.q}",
        "GCD": _factored_text(gcd_odd),
        "l": " ".join(str(l) for l in l_col) if l_col else "-",
        "Degree": " ".join(f"({a},{b})" for a, b in degree_col)
        if degree_col else "-",
        "h+": _factored_text(h_value) + ("?" if unproved else ""),
    }


def _smallest_nontrivial_cell(rpt):
    best = None
    for entry in rpt.cells:
        if entry["screen_order"] > 1:
            degrees = tuple(entry["degrees"])
            if best is None or degrees[0] * degrees[1] < best[0] * best[1]:
                best = degrees
    return best


def run(config):
    """Full report for one conductor under one configuration."""
    gcd_report = gcd_over_pairs(config.p, config.q)
    best = best_pair(gcd_report)
    ctx = EtaContext.standard(config.p, config.q, *best)
    cache = FrobeniusCache(config.cache_path) if config.cache_path else None
    reports = [
        resolve_l(l, config, ctx, gcd_report, cache)
        for l in config.primes()
    ]
    return {
        "config": config.serialize(),
        "field": f"{config.p}*{config.q}",
        "best_pair": list(best),
        "index_gcd": gcd_report.serialize(),
        "reports": [r.serialize() for r in sorted(reports, key=lambda r: r.l)],
        "table_row": table_row(config, gcd_report, reports),
    }


def render_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_csv(report):
    row = report["table_row"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(row)
    writer.writerow(row.values())
    return buf.getvalue()


def render_table(report):
    """Human-oriented text: one line per reported prime, then the row."""
    lines = [f"field {report['field']}   best pair {tuple(report['best_pair'])}"]
    for rpt in report["reports"]:
        l = rpt["l"]
        status = rpt["status"]
        detail = ""
        if rpt["h_plus_l_part"] is not None:
            detail = f"  l-part {rpt['h_plus_l_part']}"
        elif rpt["candidate_l_part"] > 1:
            detail = f"  candidate {rpt['candidate_l_part']}"
        if rpt["error"]:
            detail += f"  [{rpt['error']}]"
        if status == STATUS_NOT_DIVIDING and not rpt["flagged"]:
            continue
        lines.append(f"l={l:<6} {status}{detail}")
    row = report["table_row"]
    lines.append(
        f"{row['f']}: GCD {row['GCD']}  l {row['l']}  "
        f"Degree {row['Degree']}  h+ {row['h+']}"
    )
    return "\n".join(lines) + "\n"
