"""Nested configurations and the contraction route to the toric ideal.

The composite monomial map on a summand family F = (S_1, ..., S_m) factors
as psi = phi_B . phi_A:

    phi_A : x_(j_1..j_m)  ->  y_{j_1}^{(1)} ... y_{j_m}^{(m)}
    phi_B : y_j^{(i)}     ->  z_j w_i

ker(phi_A) is the Segre kernel with its marked sorting basis; ker(phi_B)
is the toric ideal of the Cayley sum (even-cycle binomials); ker(psi) is
assembled from both, completed to a reduced basis under the contraction
order, and projected modulo the variable identifications J to give the
toric ideal of the Minkowski sum itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (
    EQUAL,
    GREATER,
    Grevlex,
    ImageOrder,
    MarkedOrder,
    Polynomial,
    VariableIndex,
    mono_degree,
    sort_tuple,
)
from .groebner import (
    BudgetExceeded,
    GroebnerBasis,
    MarkedElement,
    buchberger,
    initial_ideal,
    is_squarefree,
    normal_form,
    toric_ideal_elimination,
)
from .polytopes import (
    GuardExceeded,
    LatticePointSet,
    SubsetFamily,
    cayley_sum_points,
)

MAX_SEGRE_VARIABLES = 1000
MAX_LIFTS = 50_000


class SegreIndex:
    """Variable bookkeeping for one summand family.

    x-variables are indexed by the tuples of the product S_1 x ... x S_m in
    product order; y-variables by (copy, ground index) pairs, copy-major.
    """

    def __init__(self, family: SubsetFamily):
        self.family = family
        self.members = [sorted(s) for s in family.sets]
        self.m = len(self.members)
        self.tuples = [tuple(t) for t in itertools.product(*self.members)]
        self.x_index = VariableIndex([("x", t) for t in self.tuples])
        y_labels = [("y", (i, j)) for i, s in enumerate(self.members, start=1)
                    for j in s]
        self.y_index = VariableIndex(y_labels)
        self._copy_positions = []
        for i, s in enumerate(self.members, start=1):
            self._copy_positions.append(
                [self.y_index.position(("y", (i, j))) for j in s])

    def y_image_of_tuple(self, t):
        """Exponent of phi_A(x_t) over the y-variables."""
        exp = [0] * len(self.y_index)
        for i, j in enumerate(t, start=1):
            exp[self.y_index.position(("y", (i, j)))] += 1
        return tuple(exp)

    def image_vectors(self):
        return [self.y_image_of_tuple(t) for t in self.tuples]

    def multidegree(self, y_exp):
        """Per-copy degree vector of a y-monomial."""
        return tuple(sum(y_exp[p] for p in positions)
                     for positions in self._copy_positions)

    def apply_phi_a(self, x_poly):
        terms = {}
        for exp, c in x_poly.terms.items():
            img = [0] * len(self.y_index)
            for pos, e in enumerate(exp):
                if e:
                    for ypos, v in enumerate(self.y_image_of_tuple(self.tuples[pos])):
                        img[ypos] += e * v
            key = tuple(img)
            terms[key] = terms.get(key, 0) + c
        return Polynomial(terms, len(self.y_index))

    def psi_word(self, t):
        """Sorted ground-index word of a tuple; psi-images coincide iff equal."""
        return sort_tuple(t)


def contraction_order(segre: SegreIndex) -> ImageOrder:
    """Compare x-monomials by grevlex on their y-images, ties by grevlex.

    Equal-image monomials are exactly the Segre fibers, so the tie-break
    keeps the sorting basis marked on the componentwise-unsorted products.
    """
    return ImageOrder(segre.image_vectors())


# ---------------------------------------------------------------------------
# generalized nested configurations


def nested_configuration(a_config: LatticePointSet, b_configs, cap=10 ** 6):
    """Multiset {sum_i sum_j a_j^(i) b_j^(i)} with copy-degree vector in A.

    Provenance records, per element, the tuple of chosen b-indices per copy
    (weakly increasing within a copy).  For A = {(1,...,1)} this is the
    plain Minkowski sumset of the B_i.
    """
    s = a_config.dim
    if len(b_configs) != s:
        raise ValueError("need one B configuration per coordinate of A")
    dim = b_configs[0].dim
    for b in b_configs:
        if b.dim != dim:
            raise ValueError("B configurations must share one dimension")

    total = 0
    choices_per_a = []
    for a in a_config.points:
        if any(x < 0 for x in a):
            raise ValueError("A must lie in the nonnegative orthant")
        count = 1
        for i, ai in enumerate(a):
            k = len(b_configs[i].points)
            count *= _multiset_count(k, ai)
        choices_per_a.append(count)
        total += count
    if total > cap:
        raise GuardExceeded(f"nested enumeration size {total} exceeds cap {cap}")

    points = []
    provenance = []
    for a in a_config.points:
        per_copy = []
        for i, ai in enumerate(a):
            idx = range(len(b_configs[i].points))
            per_copy.append(list(itertools.combinations_with_replacement(idx, ai)))
        for pick in itertools.product(*per_copy):
            p = [0] * dim
            for i, chosen in enumerate(pick):
                for j in chosen:
                    for k, c in enumerate(b_configs[i].points[j]):
                        p[k] += c
            points.append(tuple(p))
            provenance.append(tuple(pick))
    return LatticePointSet(dim, points, provenance=provenance)


def _multiset_count(k, r):
    if r == 0:
        return 1
    num = 1
    for t in range(r):
        num = num * (k + t) // (t + 1)
    return num


# ---------------------------------------------------------------------------
# the Segre kernel and its sorting basis


def _comparable(a, b):
    return all(x <= y for x, y in zip(a, b)) or all(x >= y for x, y in zip(a, b))


def _meet_join(a, b):
    return (tuple(min(x, y) for x, y in zip(a, b)),
            tuple(max(x, y) for x, y in zip(a, b)))


def segre_sorting_gb(family: SubsetFamily,
                     max_variables=MAX_SEGRE_VARIABLES) -> GroebnerBasis:
    """Marked quadratic basis of ker(phi_A): sorting exchange relations.

    One element per componentwise-incomparable pair {a, b}, rewriting
    x_a x_b to x_(a^b) x_(avb) (componentwise min / max); the designated
    lead is the unsorted product.  Confluence is audited in the tests, not
    assumed.
    """
    segre = SegreIndex(family)
    nv = len(segre.x_index)
    if nv > max_variables:
        raise GuardExceeded(f"{nv} Segre variables exceed cap {max_variables}")
    elements = []
    for a, b in itertools.combinations(segre.tuples, 2):
        if _comparable(a, b):
            continue
        lo, hi = _meet_join(a, b)
        lead = segre.x_index.monomial([(("x", a), 1), (("x", b), 1)])
        tail = segre.x_index.monomial([(("x", lo), 1), (("x", hi), 1)])
        elements.append(MarkedElement(Polynomial.binomial(lead, tail, nv), lead))
    return GroebnerBasis(elements, MarkedOrder("sorting"), segre.x_index,
                         reduced=True)


def sort_monomial_factors(factors):
    """Sorting normal form of a product of tuples: rewrite until a chain.

    Each rewrite replaces an incomparable pair by its meet and join; this
    is exactly reduction modulo the sorting basis, factor by factor.
    """
    work = sorted(factors)
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                if not _comparable(work[i], work[j]):
                    lo, hi = _meet_join(work[i], work[j])
                    work[i], work[j] = lo, hi
                    changed = True
        if changed:
            work.sort()
    return tuple(work)


# ---------------------------------------------------------------------------
# the Cayley-sum kernel (even cycles)


def even_cycle_gb(family: SubsetFamily, order=None) -> GroebnerBasis:
    """Reduced Groebner basis of ker(phi_B) over the y-variables.

    Computed by elimination from the Cayley-sum configuration; every
    element is an even-cycle binomial of the bipartite summand graph (the
    tests cross-check against independent cycle enumeration).
    """
    segre = SegreIndex(family)
    config = cayley_sum_points(family)
    labels = [("y", pair) for pair in config.provenance]
    gb = toric_ideal_elimination(config, labels=labels)
    if order is None or isinstance(order, Grevlex):
        return gb
    return buchberger(gb.polynomials(), order, gb.variables)


# ---------------------------------------------------------------------------
# Gamma: multiplier monomials that make cycle binomials liftable


def _semigroup_levels(a_points, bound):
    """Multidegrees reachable as nonnegative sums of A, componentwise <= bound."""
    s = len(a_points[0])
    reachable = {(0,) * s}
    frontier = {(0,) * s}
    while frontier:
        nxt = set()
        for w in frontier:
            for a in a_points:
                cand = tuple(x + y for x, y in zip(w, a))
                if cand not in reachable and all(c <= b for c, b in zip(cand, bound)):
                    reachable.add(cand)
                    nxt.add(cand)
        frontier = nxt
    return reachable


def gamma_generators(v, family: SubsetFamily, a_points=None, max_level=None,
                     max_lifts=MAX_LIFTS, audit_cap=512):
    """Minimal monomial generators of the multiplier module for multidegree v.

    Returns y-exponent tuples a such that multideg(a) + v lands in the
    multidegree semigroup of the composite ring, minimal under division by
    image monomials.  Candidates are enumerated at the minimal liftable
    multidegrees and minimalized by the divisibility rule; redundancy of
    the next level up is machine-audited on up to `audit_cap` monomials
    per degree rather than trusted.  For the pipeline case A = {(1,...,1)}
    the result is all products of one y-variable per copy outside the
    support of v.
    """
    segre = SegreIndex(family)
    m = segre.m
    v = tuple(v)
    if len(v) != m:
        raise ValueError("multidegree length mismatch")
    if a_points is None:
        a_points = [(1,) * m]
    else:
        a_points = [tuple(a) for a in a_points]

    if max_level is None:
        max_level = max(v, default=0) + 2 if a_points == [(1,) * m] \
            else max(v, default=0) + 3
    bound = tuple(max_level for _ in range(m))
    semigroup = _semigroup_levels(a_points, bound)
    liftable = sorted(
        (tuple(x - y for x, y in zip(w, v))
         for w in semigroup
         if all(x >= y for x, y in zip(w, v))),
        key=lambda u: (sum(u), u))
    if not liftable:
        raise GuardExceeded(
            "no liftable multidegree within bound; unsupported A or bound too small")

    # multidegrees not above a smaller liftable one can carry minimal
    # generators; anything else is covered by the audit below
    minimal_degrees = []
    for u in liftable:
        if not any(all(x >= y for x, y in zip(u, k)) and u != k
                   for k in minimal_degrees):
            minimal_degrees.append(u)

    kept = []
    for u in minimal_degrees:
        count = _count_monomials_of_multidegree(segre, u)
        if len(kept) + count > max_lifts:
            raise GuardExceeded(f"Gamma enumeration exceeds {max_lifts}")
        for c in _monomials_of_multidegree(segre, u):
            if not _gamma_redundant(c, kept, segre, semigroup):
                kept.append(c)

    # audit: the non-minimal liftable degrees must contribute nothing new
    audited = 0
    for u in liftable:
        if u in minimal_degrees or audited >= audit_cap:
            continue
        for c in _monomials_of_multidegree(segre, u):
            if not _gamma_redundant(c, kept, segre, semigroup):
                raise GuardExceeded(
                    f"non-minimal multidegree {u} carries a fresh generator; "
                    "enumeration bound too small")
            audited += 1
            if audited >= audit_cap:
                break
    return kept


def _gamma_redundant(c, kept, segre, semigroup):
    mdeg_c = segre.multidegree(c)
    for k in kept:
        if all(x <= y for x, y in zip(k, c)):
            quotient = tuple(x - y for x, y in zip(mdeg_c, segre.multidegree(k)))
            if any(quotient) and quotient in semigroup:
                return True
    return False


def _count_monomials_of_multidegree(segre, u):
    total = 1
    for positions, need in zip(segre._copy_positions, u):
        total *= _multiset_count(len(positions), need)
    return total


def _monomials_of_multidegree(segre: SegreIndex, u):
    """All y-exponent tuples with the given per-copy degrees."""
    per_copy = []
    for positions, need in zip(segre._copy_positions, u):
        copy_choices = []
        for combo in itertools.combinations_with_replacement(positions, need):
            exp = {}
            for p in combo:
                exp[p] = exp.get(p, 0) + 1
            copy_choices.append(exp)
        per_copy.append(copy_choices)
    out = []
    for pick in itertools.product(*per_copy):
        exp = [0] * len(segre.y_index)
        for chunk in pick:
            for p, e in chunk.items():
                exp[p] += e
        out.append(tuple(exp))
    return sorted(out)


# ---------------------------------------------------------------------------
# lift


def lift(q: Polynomial, segre: SegreIndex, segre_gb: GroebnerBasis = None):
    """Unique standard preimage of q under phi_A.

    Every monomial of q must have constant multidegree (k, ..., k).  The
    result has no monomial in the initial ideal of the sorting basis; when
    `segre_gb` is given the reduction runs through it, otherwise through
    the direct factor-sorting rewrite.
    """
    terms = {}
    nv = len(segre.x_index)
    for y_exp, coeff in q.terms.items():
        mdeg = segre.multidegree(y_exp)
        if len(set(mdeg)) > 1:
            raise ValueError(f"monomial multidegree {mdeg} is not constant; "
                             "not in the image of the composite map")
        k = mdeg[0] if mdeg else 0
        factors = _factor_preimage(segre, y_exp, k)
        if segre_gb is None:
            factors = sort_monomial_factors(factors)
        x_exp = [0] * nv
        for t in factors:
            x_exp[segre.x_index.position(("x", t))] += 1
        key = tuple(x_exp)
        terms[key] = terms.get(key, 0) + coeff
    result = Polynomial(terms, nv)
    if segre_gb is not None:
        result = normal_form(result, segre_gb)
    return result


def _factor_preimage(segre: SegreIndex, y_exp, k):
    """Some factorization of a constant-multidegree y-monomial into tuples."""
    remaining = list(y_exp)
    factors = []
    for _ in range(k):
        t = []
        for positions, members in zip(segre._copy_positions, segre.members):
            for p, j in zip(positions, members):
                if remaining[p] > 0:
                    remaining[p] -= 1
                    t.append(j)
                    break
            else:
                raise ValueError("exponent not factorable; multidegree broken")
        factors.append(tuple(t))
    return factors


# ---------------------------------------------------------------------------
# fibers, canonical representatives and J


def _fibers(segre: SegreIndex):
    """Map sorted word -> list of product tuples realizing it."""
    fibers = {}
    for t in segre.tuples:
        fibers.setdefault(sort_tuple(t), []).append(t)
    return fibers


def _assignment_feasible(values, position_sets):
    """Can the multiset `values` fill the positions, one value per slot?

    Bipartite matching by augmenting paths; slots are positions, items are
    the multiset entries.
    """
    items = list(values)
    match_of_slot = {}

    def augment(item_idx, visited):
        for slot, allowed in enumerate(position_sets):
            if slot in visited or items[item_idx] not in allowed:
                continue
            visited.add(slot)
            if slot not in match_of_slot or augment(match_of_slot[slot], visited):
                match_of_slot[slot] = item_idx
                return True
        return False

    for idx in range(len(items)):
        if not augment(idx, set()):
            return False
    return True


def canonical_tuple(word, family: SubsetFamily):
    """Lexicographically smallest tuple with sorted word `word`, j_k in S_k.

    Greedy choice per position, validated by a matching feasibility check
    on the remaining positions.
    """
    members = [sorted(s) for s in family.sets]
    remaining = list(word)
    out = []
    for k in range(len(members)):
        placed = False
        for j in sorted(set(remaining)):
            if j not in family.sets[k]:
                continue
            rest = list(remaining)
            rest.remove(j)
            if _assignment_feasible(rest, [family.sets[t]
                                           for t in range(k + 1, len(members))]):
                out.append(j)
                remaining = rest
                placed = True
                break
        if not placed:
            raise ValueError(f"no feasible tuple realizes word {word}")
    return tuple(out)


# ---------------------------------------------------------------------------
# the assembled basis of ker(psi)


@dataclass
class Projection:
    """I_{P_F} data after substituting canonical fiber representatives."""

    basis: GroebnerBasis
    initial_monomials: tuple
    squarefree: bool
    dropped: int
    rep_of_word: dict
    point_of_rep: dict

    def as_point_basis(self):
        """Same basis with variables relabeled by lattice point."""
        labels = [("x", self.point_of_rep[rep])
                  for _, rep in self.basis.variables.labels]
        return GroebnerBasis(self.basis.elements, self.basis.order,
                             VariableIndex(labels), self.basis.reduced)

    def to_json(self):
        return {
            "generators": [self.basis.variables.format_monomial(e.lead)
                           + " - "
                           + self.basis.variables.format_monomial(
                               next(iter(e.tail().terms)))
                           for e in self.basis.elements],
            "initial_monomials": [self.basis.variables.format_monomial(m)
                                  for m in self.initial_monomials],
            "squarefree": self.squarefree,
            "dropped_relations": self.dropped,
        }


@dataclass
class ShibutaResult:
    family: SubsetFamily
    basis: GroebnerBasis
    segre_size: int
    cycle_basis: GroebnerBasis
    gamma_sizes: list
    lift_count: int
    lifts: list
    nonlinear_lift_seen: bool
    completion_added: int
    projection: Projection
    assembly: list = field(default=None)

    def report(self):
        return {
            "segre_basis_size": self.segre_size,
            "cycle_basis_size": len(self.cycle_basis),
            "gamma_sizes": list(self.gamma_sizes),
            "lift_count": self.lift_count,
            "nonlinear_lift_seen": self.nonlinear_lift_seen,
            "completion_added": self.completion_added,
            "projected_generators": len(self.projection.basis),
            "squarefree": self.projection.squarefree,
        }


def shibuta_pipeline(family: SubsetFamily, *, max_variables=MAX_SEGRE_VARIABLES,
                     max_lifts=MAX_LIFTS, keep_assembly=None) -> ShibutaResult:
    """ker(psi) via the contraction route, plus the projected polytope ideal.

    Assembles the sorting basis and the Gamma-multiplied cycle lifts (which
    generate ker(psi)), then completes to the reduced basis under the
    contraction order.  The reduced basis splits into the fiber linear part
    (the ideal J of variable identifications) and a completion carried out
    in the representative variables; `completion_added` counts elements the
    completion had to add beyond the assembled relations.
    """
    segre = SegreIndex(family)
    nv = len(segre.x_index)
    if nv > max_variables:
        raise GuardExceeded(f"{nv} Segre variables exceed cap {max_variables}")
    order = contraction_order(segre)
    grev = Grevlex()

    cycle_basis = even_cycle_gb(family)

    # Gamma lifts of the cycle binomials; with A = {(1,..,1)} these are all
    # linear (their multidegrees complete to (1,..,1)), which the report
    # records rather than assumes.
    gamma_sizes = []
    lifts = []
    nonlinear = False
    for el in cycle_basis.elements:
        v = segre.multidegree(el.lead)
        gamma = gamma_generators(v, family, max_lifts=max_lifts)
        gamma_sizes.append(len(gamma))
        for a_exp in gamma:
            multiplier = Polynomial.monomial(a_exp, len(segre.y_index))
            lifted = lift(multiplier * el.poly, segre)
            if lifted.degree() > 1:
                nonlinear = True
            lifts.append(lifted)
            if len(lifts) > max_lifts:
                raise GuardExceeded(f"lift count exceeds {max_lifts}")

    # fibers of psi: identify variables with equal sorted words
    fibers = _fibers(segre)
    rep_of_word = {}
    for word, tuples in fibers.items():
        rep = min(tuples, key=lambda t: _image_key(segre, t))
        rep_of_word[word] = rep

    # linear part of the reduced basis: every non-representative variable
    # rewrites to its representative
    linear_elements = []
    for word in sorted(fibers):
        rep = rep_of_word[word]
        for t in fibers[word]:
            if t == rep:
                continue
            lead = segre.x_index.variable(("x", t))
            tail = segre.x_index.variable(("x", rep))
            linear_elements.append(
                MarkedElement(Polynomial.binomial(lead, tail, nv), lead))

    # representative-space generators: substituted sorting relations.
    # Representatives keep their relative product order so the rep-space
    # order is exactly the restriction of the full contraction order.
    position = {t: k for k, t in enumerate(segre.tuples)}
    rep_tuples = sorted(rep_of_word.values(), key=position.get)
    rep_index = VariableIndex([("x", t) for t in rep_tuples])
    rep_order = ImageOrder([segre.y_image_of_tuple(t) for t in rep_tuples])
    rep_pos = {t: k for k, t in enumerate(rep_tuples)}

    def to_rep_exp(pairs):
        exp = [0] * len(rep_tuples)
        for t, e in pairs:
            exp[rep_pos[rep_of_word[sort_tuple(t)]]] += e
        return tuple(exp)

    segre_size = 0
    rep_gens = {}
    for a, b in itertools.combinations(segre.tuples, 2):
        if _comparable(a, b):
            continue
        segre_size += 1
        lo, hi = _meet_join(a, b)
        left = to_rep_exp([(a, 1), (b, 1)])
        right = to_rep_exp([(lo, 1), (hi, 1)])
        if left == right:
            continue
        poly = Polynomial.binomial(left, right, len(rep_tuples))
        rep_gens[frozenset(poly.terms.items())] = poly

    rep_gb = buchberger(sorted(rep_gens.values(), key=lambda p: sorted(p.terms)),
                        rep_order, rep_index)
    # leads the completion had to introduce beyond the assembled relations:
    # a nonzero count means the raw assembly was not already a Groebner
    # basis of ker(psi) for this instance
    assembled_leads = {max(p.terms, key=rep_order.key()) for p in rep_gens.values()}
    completion_added = sum(1 for el in rep_gb.elements
                           if el.lead not in assembled_leads)

    # assemble the reduced basis of ker(psi) over the full variable set
    full_elements = list(linear_elements)
    for el in rep_gb.elements:
        terms = {}
        for exp, c in el.poly.terms.items():
            full = [0] * nv
            for k, e in enumerate(exp):
                if e:
                    full[segre.x_index.position(("x", rep_tuples[k]))] += e
            terms[tuple(full)] = c
        poly = Polynomial(terms, nv)
        lead_full = [0] * nv
        for k, e in enumerate(el.lead):
            if e:
                lead_full[segre.x_index.position(("x", rep_tuples[k]))] += e
        full_elements.append(MarkedElement(poly, tuple(lead_full)))
    full_elements.sort(key=lambda e: order.key()(e.lead))
    basis = GroebnerBasis(full_elements, order, segre.x_index, reduced=True)

    projection = project_out_J(basis, family)

    if keep_assembly is None:
        keep_assembly = nv <= 60
    assembly = None
    if keep_assembly:
        assembly = [el.poly for el in
                    segre_sorting_gb(family, max_variables).elements] + lifts

    return ShibutaResult(
        family=family, basis=basis, segre_size=segre_size,
        cycle_basis=cycle_basis, gamma_sizes=gamma_sizes,
        lift_count=len(lifts), lifts=lifts, nonlinear_lift_seen=nonlinear,
        completion_added=completion_added, projection=projection,
        assembly=assembly)


def _image_key(segre: SegreIndex, t):
    img = segre.y_image_of_tuple(t)
    return Grevlex().key()(img)


def shibuta_gb(family: SubsetFamily, **kwargs) -> GroebnerBasis:
    """Reduced Groebner basis of ker(psi) under the contraction order."""
    return shibuta_pipeline(family, **kwargs).basis


def project_out_J(basis: GroebnerBasis, family: SubsetFamily) -> Projection:
    """Substitute canonical representatives and drop the J relations.

    Every x-variable is replaced by the lexicographically smallest tuple
    realizing its sorted word; binomials that collapse to zero (exactly the
    J part) are dropped.  Survivors, their induced initial monomials and
    the squarefreeness verdict make up the result.
    """
    segre = SegreIndex(family)
    fibers = _fibers(segre)
    rep_of_word = {word: canonical_tuple(word, family) for word in fibers}
    ordermin_of_word = {
        word: min(tuples, key=lambda t: _image_key(segre, t))
        for word, tuples in fibers.items()}

    # renamed variables keep the internal (order-minimal representative)
    # comparison order, so the designated leads stay the order's leads
    # after renaming
    position = {t: k for k, t in enumerate(segre.tuples)}
    words_sorted = sorted(fibers, key=lambda w: position[ordermin_of_word[w]])
    rep_labels = [("x", rep_of_word[w]) for w in words_sorted]
    rep_index = VariableIndex(rep_labels)
    rep_order = ImageOrder(
        [segre.y_image_of_tuple(ordermin_of_word[w]) for w in words_sorted])
    word_pos = {w: k for k, w in enumerate(words_sorted)}

    def substitute(exp):
        out = [0] * len(words_sorted)
        for pos, e in enumerate(exp):
            if e:
                word = sort_tuple(segre.tuples[pos])
                out[word_pos[word]] += e
        return tuple(out)

    survivors = []
    seen = set()
    dropped = 0
    for el in basis.elements:
        terms = {}
        for exp, c in el.poly.terms.items():
            key = substitute(exp)
            terms[key] = terms.get(key, 0) + c
        poly = Polynomial(terms, len(words_sorted))
        if not poly:
            dropped += 1
            continue
        fingerprint = frozenset(poly.terms.items())
        mirror = frozenset((-poly).terms.items())
        if fingerprint in seen or mirror in seen:
            dropped += 1
            continue
        seen.add(fingerprint)
        survivors.append(MarkedElement(poly, substitute(el.lead)))

    survivors.sort(key=lambda e: rep_order.key()(e.lead))
    projected = GroebnerBasis(survivors, rep_order, rep_index, reduced=True)
    leads = tuple(e.lead for e in survivors)
    point_of_rep = {rep_of_word[w]: _word_point(w, family.n)
                    for w in words_sorted}
    return Projection(
        basis=projected, initial_monomials=leads,
        squarefree=all(all(e <= 1 for e in m) for m in leads),
        dropped=dropped, rep_of_word=dict(rep_of_word),
        point_of_rep=point_of_rep)


def _word_point(word, n):
    p = [0] * n
    for j in word:
        p[j - 1] += 1
    return tuple(p)


# ---------------------------------------------------------------------------
# the exchange rewriting of quadratic generation


@dataclass
class ExchangeTrace:
    steps: list
    residual: Polynomial
    residual_in_j: bool

    def __len__(self):
        return len(self.steps)


def exchange_reduce(binomial: Polynomial, family: SubsetFamily,
                    max_steps=None) -> ExchangeTrace:
    """Rewrite a lifted binomial by exchange quadrics down to a J-residual.

    Each step swaps one coordinate position between two factors of one side
    (an application of an exchange quadric in ker(phi_A)); matched factors
    are cancelled.  The trace certifies membership in <quadrics> + J: the
    residual is zero or a binomial whose factor words match as multisets.
    """
    segre = SegreIndex(family)
    sides = _binomial_sides(binomial, segre)
    if sides is None:
        raise ValueError("exchange_reduce expects a +/-1 binomial")
    x_factors, y_factors = sides
    if max_steps is None:
        max_steps = max(4, 2 * len(x_factors) * max(1, segre.m) + 8)

    steps = []
    x_work, y_work = list(x_factors), list(y_factors)
    _cancel_common(x_work, y_work)
    while x_work and len(x_work) > 1:
        built = False
        for target in sorted(set(x_work)):
            carrier_idx = _best_carrier(y_work, target)
            if carrier_idx is None:
                continue
            ok = True
            for pos in range(segre.m):
                if y_work[carrier_idx][pos] == target[pos]:
                    continue
                donor_idx = next(
                    (d for d in range(len(y_work))
                     if d != carrier_idx and y_work[d][pos] == target[pos]),
                    None)
                if donor_idx is None:
                    ok = False
                    break
                before = (y_work[carrier_idx], y_work[donor_idx])
                y_work[carrier_idx], y_work[donor_idx] = _swap_position(
                    y_work[carrier_idx], y_work[donor_idx], pos)
                steps.append({"position": pos + 1, "before": before,
                              "after": (y_work[carrier_idx], y_work[donor_idx])})
                if len(steps) > max_steps:
                    raise BudgetExceeded(
                        "exchange rewrite budget exceeded; this signals a bug")
            if ok:
                x_work.remove(target)
                y_work.remove(target)
                _cancel_common(x_work, y_work)
                built = True
                break
        if not built:
            break

    residual = _sides_binomial(x_work, y_work, segre)
    in_j = _words_match(x_work, y_work)
    return ExchangeTrace(steps=steps, residual=residual, residual_in_j=in_j)


def _binomial_sides(b: Polynomial, segre: SegreIndex):
    if len(b.terms) != 2:
        return None
    (e1, c1), (e2, c2) = sorted(b.terms.items(), key=lambda t: -t[1])
    if (c1, c2) != (1, -1):
        return None
    return (_exp_factors(e1, segre), _exp_factors(e2, segre))


def _exp_factors(exp, segre):
    out = []
    for pos, e in enumerate(exp):
        out.extend([segre.tuples[pos]] * e)
    return sorted(out)


def _sides_binomial(x_factors, y_factors, segre):
    nv = len(segre.x_index)

    def exp_of(factors):
        e = [0] * nv
        for t in factors:
            e[segre.x_index.position(("x", t))] += 1
        return tuple(e)

    return Polynomial({exp_of(x_factors): 1, exp_of(y_factors): -1}, nv)


def _cancel_common(xs, ys):
    for t in list(xs):
        if t in ys:
            xs.remove(t)
            ys.remove(t)


def _best_carrier(factors, target):
    best, best_score = None, -1
    for i, f in enumerate(factors):
        score = sum(1 for a, b in zip(f, target) if a == b)
        if score > best_score:
            best, best_score = i, score
    return best


def _swap_position(a, b, pos):
    a2, b2 = list(a), list(b)
    a2[pos], b2[pos] = b[pos], a[pos]
    return tuple(a2), tuple(b2)


def _words_match(x_factors, y_factors):
    return sorted(sort_tuple(t) for t in x_factors) == \
        sorted(sort_tuple(t) for t in y_factors)
