"""Binomial-aware Buchberger engine over exact rationals.

Bases are lists of marked elements (polynomial + designated leading
exponent).  For a real monomial order the marks are just the order's
leading terms; for the sorting basis of the Segre kernel the marks are
designated by construction and audited, never assumed.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import _linalg
from .core import (
    GREATER,
    Grevlex,
    BlockOrder,
    MarkedOrder,
    MonomialOrder,
    Polynomial,
    VariableIndex,
    mono_coprime,
    mono_degree,
    mono_div,
    mono_divides,
    mono_is_squarefree,
    mono_lcm,
    mono_mul,
)

MAX_BASIS_SIZE = 20_000
MAX_DEGREE = 30
MAX_REDUCTION_STEPS = 2_000_000


class BudgetExceeded(RuntimeError):
    """A Groebner computation overran its configured budget."""


@dataclass(frozen=True)
class MarkedElement:
    """Monic polynomial with a designated leading exponent."""

    poly: Polynomial
    lead: tuple

    def __post_init__(self):
        if self.lead not in self.poly.terms:
            raise ValueError("designated lead is not a term")
        if self.poly.terms[self.lead] != 1:
            raise ValueError("marked elements must be monic on the lead")

    def tail(self):
        """lead_term - poly, i.e. what the lead rewrites to."""
        t = dict(self.poly.terms)
        t.pop(self.lead)
        out = Polynomial.zero(self.poly.nvars)
        out.terms = {e: -c for e, c in t.items()}
        return out


def make_monic(poly, lead):
    c = poly.terms[lead]
    return poly if c == 1 else poly.scale(Fraction(1) / c)


class GroebnerBasis:
    __slots__ = ("elements", "order", "variables", "reduced")

    def __init__(self, elements, order, variables, reduced=False):
        self.elements = tuple(elements)
        self.order = order
        self.variables = variables
        self.reduced = reduced

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def polynomials(self):
        return [e.poly for e in self.elements]

    def leads(self):
        return [e.lead for e in self.elements]

    def to_json(self):
        elements = []
        for e in self.elements:
            tail = e.tail()
            item = {"lead": self.variables.format_monomial(e.lead)}
            if len(tail.terms) == 1 and next(iter(tail.terms.values())) == 1:
                item["tail"] = self.variables.format_monomial(
                    next(iter(tail.terms)))
            else:
                aux = self.order if not isinstance(self.order, MarkedOrder) \
                    else Grevlex()
                item["tail"] = tail.text(self.variables, aux)
            elements.append(item)
        return {"order": self.order.describe(), "elements": elements,
                "reduced": self.reduced}


def _aux_order(order):
    return Grevlex() if isinstance(order, MarkedOrder) else order


class _Reducer:
    """Marked elements plus a divisor index, reusable across reductions.

    Leads are bucketed by the first variable in their support, so divisor
    lookups scan only leads sharing a variable with the query monomial.
    """

    def __init__(self, order, elements=()):
        self.order = _aux_order(order or Grevlex())
        self.key = self.order.key()
        self.elements = []
        self.tails = []
        self.buckets = {}
        self.constant = None
        for el in elements:
            self.add(el)

    def add(self, el):
        idx = len(self.elements)
        self.elements.append(el)
        tail = [(e, -c) for e, c in el.poly.terms.items() if e != el.lead]
        self.tails.append(tail)
        support = next((i for i, e in enumerate(el.lead) if e), None)
        if support is None:
            self.constant = idx
        else:
            self.buckets.setdefault(support, []).append((el.lead, idx))

    def find_divisor(self, mono):
        if self.constant is not None:
            return self.constant
        buckets = self.buckets
        for v, e in enumerate(mono):
            if not e:
                continue
            bucket = buckets.get(v)
            if not bucket:
                continue
            for lead, idx in bucket:
                ok = True
                for x, y in zip(lead, mono):
                    if x > y:
                        ok = False
                        break
                if ok:
                    return idx
        return None

    def normal_form(self, f, max_steps=MAX_REDUCTION_STEPS):
        remainder = {}
        work = dict(f.terms)
        key = self.key
        steps = 0
        while work:
            mono = max(work, key=key)
            coeff = work.pop(mono)
            i = self.find_divisor(mono)
            if i is None:
                acc = remainder.get(mono, Fraction(0)) + coeff
                if acc == 0:
                    remainder.pop(mono, None)
                else:
                    remainder[mono] = acc
                continue
            steps += 1
            if steps > max_steps:
                raise BudgetExceeded("reduction step budget exceeded")
            lead = self.elements[i].lead
            shift = tuple(x - y for x, y in zip(mono, lead))
            for e, c in self.tails[i]:
                e2 = tuple(x + y for x, y in zip(e, shift))
                acc = work.get(e2, Fraction(0)) + coeff * c
                if acc == 0:
                    work.pop(e2, None)
                else:
                    work[e2] = acc
        out = Polynomial.zero(f.nvars)
        out.terms = remainder
        return out


def normal_form(f, basis, order=None, max_steps=MAX_REDUCTION_STEPS):
    """Full remainder of f modulo marked elements.

    No monomial of the result is divisible by any designated lead.  The
    reduction strategy (largest reducible monomial first, earliest divisor)
    is fixed, so results are deterministic.  `basis` is a GroebnerBasis or a
    list of MarkedElement.
    """
    if isinstance(basis, GroebnerBasis):
        if order is None:
            order = basis.order
        elements = basis.elements
    else:
        elements = list(basis)
    return _Reducer(order, elements).normal_form(f, max_steps)


def s_polynomial(e1: MarkedElement, e2: MarkedElement):
    lcm = mono_lcm(e1.lead, e2.lead)
    return (e1.poly.term_mul(1, mono_div(lcm, e1.lead))
            - e2.poly.term_mul(1, mono_div(lcm, e2.lead)))


def buchberger(gens, order, variables=None, *, max_basis=MAX_BASIS_SIZE,
               max_degree=MAX_DEGREE, chain_criterion=False):
    """Reduced Groebner basis of the ideal generated by `gens`.

    Pair selection is the normal strategy: lowest lcm degree first, ties by
    the (i, j) index pair, so runs are deterministic.  Coprime-lead pairs
    are always skipped; the chain criterion is available behind a flag and
    must not change the result.
    """
    if isinstance(order, MarkedOrder):
        raise ValueError("buchberger needs a total order")
    if variables is None and gens:
        variables = VariableIndex([("x", i + 1) for i in range(gens[0].nvars)])
    nvars = len(variables) if variables is not None else 0

    prepared = []
    seen = set()
    for g in sorted((g for g in gens if g), key=lambda p: sorted(p.terms)):
        lead = g.leading_exponent(order)
        g = make_monic(g, lead)
        fingerprint = frozenset(g.terms.items())
        if fingerprint not in seen:
            seen.add(fingerprint)
            prepared.append(MarkedElement(g, lead))

    # interreduce the generating set first; the reduced basis of the ideal
    # is canonical, so this only trims the pair queue
    prepared.sort(key=lambda el: order.key()(el.lead))
    basis = []
    reducer = _Reducer(order)
    for el in prepared:
        remainder = reducer.normal_form(el.poly)
        if not remainder:
            continue
        lead = remainder.leading_exponent(order)
        if mono_degree(lead) > max_degree:
            raise BudgetExceeded(
                f"generator degree {mono_degree(lead)} exceeds {max_degree}")
        element = MarkedElement(make_monic(remainder, lead), lead)
        basis.append(element)
        reducer.add(element)
    pairs = []
    processed = set()
    for i, j in itertools.combinations(range(len(basis)), 2):
        lcm = mono_lcm(basis[i].lead, basis[j].lead)
        heapq.heappush(pairs, (mono_degree(lcm), i, j))

    def chain_skippable(i, j, lcm):
        for k in range(len(basis)):
            if k in (i, j) or not mono_divides(basis[k].lead, lcm):
                continue
            if (min(i, k), max(i, k)) in processed and \
               (min(j, k), max(j, k)) in processed:
                return True
        return False

    while pairs:
        _, i, j = heapq.heappop(pairs)
        processed.add((i, j))
        ei, ej = basis[i], basis[j]
        if mono_coprime(ei.lead, ej.lead):
            continue
        if chain_criterion and chain_skippable(i, j, mono_lcm(ei.lead, ej.lead)):
            continue
        remainder = reducer.normal_form(s_polynomial(ei, ej))
        if not remainder:
            continue
        lead = remainder.leading_exponent(order)
        if mono_degree(lead) > max_degree:
            raise BudgetExceeded(
                f"basis element degree {mono_degree(lead)} exceeds {max_degree}")
        if len(basis) + 1 > max_basis:
            raise BudgetExceeded(f"basis size exceeds {max_basis}")
        element = MarkedElement(make_monic(remainder, lead), lead)
        basis.append(element)
        reducer.add(element)
        new = len(basis) - 1
        for k in range(new):
            lcm = mono_lcm(basis[k].lead, basis[new].lead)
            heapq.heappush(pairs, (mono_degree(lcm), k, new))

    return _reduce_basis(basis, order, variables, nvars)


def _reduce_basis(basis, order, variables, nvars):
    # minimalize leads, then tail-reduce everything against everything
    basis = sorted(basis, key=lambda e: order.key()(e.lead))
    minimal = []
    for el in basis:
        if not any(mono_divides(kept.lead, el.lead) for kept in minimal):
            minimal.append(el)
    reduced = []
    for i, el in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        poly = normal_form(el.poly, others, order)
        if not poly:
            continue
        lead = poly.leading_exponent(order)
        reduced.append(MarkedElement(make_monic(poly, lead), lead))
    reduced.sort(key=lambda e: order.key()(e.lead))
    return GroebnerBasis(reduced, order, variables, reduced=True)


def confluence_audit(gb, max_steps=MAX_REDUCTION_STEPS):
    """Independent S-pair check: does every S-polynomial reduce to zero?

    Uses only normal_form against the marked elements, so it audits marked
    bases (like the sorting basis) the same way as computed ones.
    Returns (ok, failing_pairs).
    """
    failures = []
    elements = gb.elements if isinstance(gb, GroebnerBasis) else list(gb)
    order = gb.order if isinstance(gb, GroebnerBasis) else None
    for i, j in itertools.combinations(range(len(elements)), 2):
        s = s_polynomial(elements[i], elements[j])
        if normal_form(s, elements, order, max_steps=max_steps):
            failures.append((i, j))
    return (not failures), failures


@dataclass(frozen=True)
class MonomialIdeal:
    generators: tuple
    variables: VariableIndex

    def to_json(self):
        return {"generators": [self.variables.format_monomial(g)
                               for g in self.generators]}


def initial_ideal(gb: GroebnerBasis) -> MonomialIdeal:
    """Minimal generating set of the ideal of designated leading terms."""
    leads = sorted(set(gb.leads()), key=lambda m: (mono_degree(m), m))
    minimal = []
    for m in leads:
        if not any(mono_divides(g, m) for g in minimal):
            minimal.append(m)
    return MonomialIdeal(tuple(minimal), gb.variables)


def is_squarefree(ideal: MonomialIdeal) -> bool:
    return all(mono_is_squarefree(g) for g in ideal.generators)


# ---------------------------------------------------------------------------
# toric ideals by elimination


def configuration_vector(points):
    """Rational c with p . c = 1 for all points p, or None."""
    if not points:
        return None
    rows = [[Fraction(x) for x in p] for p in points]
    return _linalg.solve(rows, [Fraction(1)] * len(rows))


def toric_ideal_elimination(point_set, labels=None, *, max_basis=MAX_BASIS_SIZE,
                            max_degree=MAX_DEGREE, chain_criterion=False):
    """Reduced grevlex Groebner basis of the toric ideal of a configuration.

    Eliminates the auxiliary t-variables from <x_i - t^{p_i}> under a block
    order (weight 1 on the t-block, grevlex inside each block).  Duplicate
    points in the multiset yield linear binomials.  `labels` overrides the
    x-variable labels (default: position indices 1..N).
    """
    points = list(point_set.points)
    dim = point_set.dim
    npts = len(points)
    if labels is None:
        labels = [("x", i + 1) for i in range(npts)]
    else:
        labels = list(labels)
        if len(labels) != npts:
            raise ValueError("one label per point required")
    x_index = VariableIndex(labels)

    if all(all(c == 0 for c in p) for p in points):
        # degenerate polytope at the origin: homogenize so the point set is
        # a genuine configuration; only duplicate relations can arise
        points = [p + (1,) for p in points]
        dim += 1
    elif configuration_vector(set(points)) is None:
        raise ValueError("points do not lie on a common hyperplane c.x = 1")

    if npts == 0:
        return GroebnerBasis([], Grevlex(), x_index, reduced=True)

    total = dim + npts
    combined = VariableIndex([("t", k + 1) for k in range(dim)] + labels)
    weights = (1,) * dim + (0,) * npts
    order = BlockOrder(weights, [range(dim), range(dim, total)])
    gens = []
    for i, p in enumerate(points):
        x_exp = tuple(0 if k != dim + i else 1 for k in range(total))
        t_exp = tuple(p[k] if k < dim else 0 for k in range(total))
        gens.append(Polynomial.binomial(x_exp, t_exp, total))

    full = buchberger(gens, order, combined, max_basis=max_basis,
                      max_degree=max_degree, chain_criterion=chain_criterion)

    x_order = Grevlex()
    elements = []
    for el in full.elements:
        if any(any(e[k] for k in range(dim)) for e in el.poly.terms):
            continue
        poly = Polynomial({e[dim:]: c for e, c in el.poly.terms.items()}, npts)
        elements.append(MarkedElement(poly, el.lead[dim:]))
    elements.sort(key=lambda e: x_order.key()(e.lead))
    return GroebnerBasis(elements, x_order, x_index, reduced=True)


# ---------------------------------------------------------------------------
# graded minimal generators


def _sparse_rank(rows):
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col not in pivots:
                pivots[col] = row
                rank += 1
                break
            pivot = pivots[col]
            factor = row[col] / pivot[col]
            for c, v in pivot.items():
                acc = row.get(c, Fraction(0)) - factor * v
                if acc == 0:
                    row.pop(c, None)
                else:
                    row[c] = acc
        # empty row: linearly dependent
    return rank


def _monomials_of_degree(nvars, d):
    if d == 0:
        yield (0,) * nvars
        return
    for bars in itertools.combinations(range(d + nvars - 1), nvars - 1):
        exp = []
        prev = -1
        for b in bars:
            exp.append(b - prev - 1)
            prev = b
        exp.append(d + nvars - 2 - prev)
        yield tuple(exp)


def minimal_generator_degrees(gens_or_gb, max_degree=None):
    """Degrees of a minimal homogeneous generating set, as {degree: count}.

    Degree-by-degree graded ranks over Q: the number of minimal generators
    in degree d is dim I_d - dim (R_1 I_{d-1})_d.  Stops at `max_degree`
    (default: the largest generator degree, which bounds the answer when
    the input generates the ideal).
    """
    if isinstance(gens_or_gb, GroebnerBasis):
        gens = gens_or_gb.polynomials()
    else:
        gens = [g for g in gens_or_gb if g]
    if not gens:
        return {}
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("minimal generator degrees need a homogeneous ideal")
    nvars = gens[0].nvars
    degrees = sorted({g.degree() for g in gens})
    cap = max_degree if max_degree is not None else degrees[-1]

    def span_rows(d, extra_variable_factor):
        cols = {}
        rows = []
        for g in gens:
            dg = g.degree()
            budget = d - dg - (1 if extra_variable_factor else 0)
            if budget < 0:
                continue
            for m in _monomials_of_degree(nvars, budget):
                factors = [m]
                if extra_variable_factor:
                    factors = []
                    for v in range(nvars):
                        bumped = list(m)
                        bumped[v] += 1
                        factors.append(tuple(bumped))
                for f in factors:
                    row = {}
                    for e, c in g.terms.items():
                        key = mono_mul(e, f)
                        col = cols.setdefault(key, len(cols))
                        row[col] = row.get(col, Fraction(0)) + c
                    rows.append(row)
        return rows

    result = {}
    for d in range(degrees[0], cap + 1):
        dim_full = _sparse_rank(span_rows(d, False))
        dim_shifted = _sparse_rank(span_rows(d, True))
        fresh = dim_full - dim_shifted
        if fresh:
            result[d] = fresh
    return result


def align_variables(gb: GroebnerBasis, target: VariableIndex) -> GroebnerBasis:
    """Permute a basis onto another index over the same label set.

    Marked leads travel with the permutation; the order is downgraded to a
    marked descriptor since its comparison data was positional.
    """
    if set(gb.variables.labels) != set(target.labels):
        raise ValueError("variable label sets differ")
    perm = [target.position(lab) for lab in gb.variables.labels]
    n = len(target)

    def remap(exp):
        out = [0] * n
        for old, e in enumerate(exp):
            if e:
                out[perm[old]] = e
        return tuple(out)

    elements = [
        MarkedElement(
            Polynomial({remap(e): c for e, c in el.poly.terms.items()}, n),
            remap(el.lead))
        for el in gb.elements]
    order = MarkedOrder(f"relabeled {gb.order.describe().get('kind', '?')}")
    return GroebnerBasis(elements, order, target, reduced=gb.reduced)


def ideal_equal(g1: GroebnerBasis, g2: GroebnerBasis) -> bool:
    """True iff both bases generate the same ideal (cross normal forms)."""
    if g1.variables != g2.variables:
        raise ValueError("bases must share one variable index")
    for el in g1.elements:
        if normal_form(el.poly, g2):
            return False
    for el in g2.elements:
        if normal_form(el.poly, g1):
            return False
    return True
