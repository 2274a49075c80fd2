"""Instance-level verification of the main theorem and its supports.

Each check is machine-decided from scratch: integer decomposition by
sumset comparison, squarefreeness through the contraction pipeline,
quadratic generation by graded rank counts, and unimodularity by an exact
placing triangulation.  Reports carry every verdict plus the data needed
to reproduce it.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import _linalg
from .groebner import (
    BudgetExceeded,
    GroebnerBasis,
    align_variables,
    ideal_equal,
    initial_ideal,
    is_squarefree,
    minimal_generator_degrees,
    toric_ideal_elimination,
)
from .nested import shibuta_pipeline
from .polytopes import (
    BuildingSet,
    GuardExceeded,
    LatticePointSet,
    SubsetFamily,
    YParameters,
    building_set_check,
    cayley_sum_points,
    dilate_family,
    family_from_y,
    minkowski_distinct_points,
    minkowski_lattice_points,
    y_to_z,
    z_lattice_points,
)

MAX_SUMSET = 2_000_000


def _sumset(a, b, cap=MAX_SUMSET):
    if len(a) * len(b) > cap:
        raise GuardExceeded("sumset enumeration exceeds cap")
    out = set()
    for p in a:
        for q in b:
            out.add(tuple(x + y for x, y in zip(p, q)))
    return out


def _decompose(point, parts, base, memo):
    """Per-point witness search: point as a sum of `parts` base points."""
    key = (point, parts)
    if key in memo:
        return memo[key]
    if parts == 1:
        result = [point] if point in base else None
        memo[key] = result
        return result
    for b in base:
        rest = tuple(x - y for x, y in zip(point, b))
        if any(c < 0 for c in rest):
            continue
        sub = _decompose(rest, parts - 1, base, memo)
        if sub is not None:
            memo[key] = [b] + sub
            return memo[key]
    memo[key] = None
    return None


def idp_check_raw(base_points, dilate_points, witness=False):
    """Integer decomposition check on explicit point data.

    `dilate_points` maps k to the lattice points of the k-th dilate.  For
    each k the k-fold sumset of the base points must reproduce them; the
    first missing point is the counterexample.  With `witness=True` the
    failure is confirmed by an independent per-point decomposition search.
    """
    base = {tuple(p) for p in base_points}
    report = {"k_max": max(dilate_points), "pass": True, "counterexample": None,
              "failed_k": None, "mode": "witness" if witness else "sumset"}
    sumset = set(base)
    level = 1
    for k in sorted(dilate_points):
        if k == 1:
            continue
        while level < k:
            sumset = _sumset(sumset, base)
            level += 1
        expected = {tuple(p) for p in dilate_points[k]}
        if not sumset <= expected:
            raise ValueError(f"claimed dilate points at k={k} miss actual sums")
        missing = expected - sumset
        if missing:
            counterexample = min(missing)
            if witness:
                memo = {}
                assert _decompose(counterexample, k, base, memo) is None
            report["pass"] = False
            report["counterexample"] = list(counterexample)
            report["failed_k"] = k
            return report
        if witness:
            memo = {}
            for p in sorted(expected):
                if _decompose(p, k, base, memo) is None:
                    report["pass"] = False
                    report["counterexample"] = list(p)
                    report["failed_k"] = k
                    return report
    return report


def idp_check(family: SubsetFamily, k_max=3, witness=False):
    """Theorem check (a): dilates decompose into sums of base points.

    The k-th dilate's points come from the dilated family enumeration, the
    k-fold sumset from the base points; equality is exactly the integer
    decomposition property for these polytopes.
    """
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    base = minkowski_distinct_points(family)
    dilates = {k: minkowski_distinct_points(dilate_family(family, k))
               if family.sets else base
               for k in range(2, k_max + 1)}
    dilates[1] = base
    return idp_check_raw(base, dilates, witness=witness)


def cross_check_prop63(y: YParameters):
    """Support-function enumeration agrees with the Minkowski enumeration.

    The family expansion keeps singleton summands, so both sides enumerate
    the same translated polytope and no shift is needed.
    """
    if y.n > 5:
        raise GuardExceeded("cross-check guarded to n <= 5")
    family = family_from_y(y)
    minkowski = set(minkowski_distinct_points(family))
    inequalities = set(z_lattice_points(y_to_z(y)).points)
    return minkowski == inequalities


# ---------------------------------------------------------------------------
# exact placing triangulation


def _lattice_embed(points):
    """Full-dimensional integer coordinates of a configuration.

    Translates by the first point and rewrites in a basis of the saturated
    difference lattice, so normalized simplex volumes are plain integer
    determinants.
    """
    pts = [tuple(p) for p in points]
    origin = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, origin)) for p in pts]
    basis = _linalg.saturated_lattice_basis(diffs, len(origin))
    embedded = []
    for d in diffs:
        coords = _linalg.lattice_coordinates(basis, d)
        if coords is None:
            raise ValueError("point outside the difference lattice")
        embedded.append(tuple(coords))
    return embedded, len(basis)


def placing_triangulation(points):
    """Placing (beneath-beyond) triangulation, points in lexicographic order.

    Returns (simplices, volumes): index tuples into `points` and the
    normalized volume of each maximal cell, computed exactly in the
    configuration's own lattice.  Every input point must end up a vertex;
    a point inside the hull of its predecessors is reported.
    """
    embedded, dim = _lattice_embed(points)
    order = sorted(range(len(embedded)), key=lambda i: embedded[i])
    if dim == 0:
        return [tuple(order[:1])], [1]

    def orientation(facet, apex):
        base = embedded[facet[0]]
        rows = [[embedded[i][k] - base[k] for k in range(dim)]
                for i in facet[1:]]
        rows.append([embedded[apex][k] - base[k] for k in range(dim)])
        return _linalg.bareiss_det(rows)

    # seed simplex: first affinely independent dim+1 points in placing order
    seed = [order[0]]
    rest = []
    for i in order[1:]:
        if len(seed) <= dim and orientation_rank(embedded, seed + [i]) > len(seed) - 1:
            seed.append(i)
        else:
            rest.append(i)

    if len(seed) != dim + 1:
        raise ValueError("configuration is not full-dimensional in its lattice")

    simplices = [tuple(sorted(seed))]
    facet_count = {}

    def add_facets(simplex):
        for drop in simplex:
            facet = tuple(sorted(set(simplex) - {drop}))
            facet_count[facet] = facet_count.get(facet, [0, None])
            facet_count[facet][0] += 1
            facet_count[facet][1] = drop

    add_facets(simplices[0])

    for p in rest:
        visible = []
        for facet, (count, apex) in list(facet_count.items()):
            if count != 1:
                continue
            s_apex = orientation(list(facet), apex)
            s_p = orientation(list(facet), p)
            if s_p != 0 and (s_p > 0) != (s_apex > 0):
                visible.append(facet)
        if not visible:
            raise ValueError(
                f"point index {p} lies inside the hull of its predecessors")
        for facet in visible:
            simplex = tuple(sorted(facet + (p,)))
            simplices.append(simplex)
            add_facets(simplex)

    volumes = []
    for s in simplices:
        base = embedded[s[0]]
        rows = [[embedded[i][k] - base[k] for k in range(dim)] for i in s[1:]]
        volumes.append(abs(_linalg.bareiss_det(rows)))
    return simplices, volumes


def orientation_rank(embedded, indices):
    """Affine rank of the chosen points."""
    if len(indices) <= 1:
        return 0
    base = embedded[indices[0]]
    rows = [[embedded[i][k] - base[k] for k in range(len(base))]
            for i in indices[1:]]
    return _linalg.rank(rows)


def unimodular_triangulation_probe(family: SubsetFamily):
    """One placing triangulation of the Cayley-sum configuration.

    Probes (does not prove) unimodularity: every maximal simplex must have
    normalized volume 1 in the configuration's lattice.
    """
    config = cayley_sum_points(family)
    distinct = sorted(set(config.points))
    simplices, volumes = placing_triangulation(distinct)
    max_volume = max(volumes) if volumes else 1
    return {
        "points": len(distinct),
        "simplices": len(simplices),
        "max_volume": max_volume,
        "pass": max_volume == 1,
    }


# ---------------------------------------------------------------------------
# the end-to-end theorem verifier


@dataclass
class VerificationReport:
    instance: dict
    idp: dict = field(default_factory=dict)
    squarefree: dict = field(default_factory=dict)
    quadratic: dict = field(default_factory=dict)
    cross_check: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def all_pass(self):
        return all(section.get("pass", False)
                   for section in (self.idp, self.squarefree, self.quadratic,
                                   self.cross_check))

    def has_budget_error(self):
        return any("error" in section
                   for section in (self.idp, self.squarefree, self.quadratic,
                                   self.cross_check))

    def to_json(self):
        return {
            "instance": self.instance,
            "idp": self.idp,
            "squarefree": self.squarefree,
            "quadratic": self.quadratic,
            "cross_check": self.cross_check,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
            "pass": self.all_pass(),
        }


def verify_theorem_main(instance, k_max=3, cross_check=True,
                        **pipeline_kwargs) -> VerificationReport:
    """Run the (a)/(b)/(c) checks on one family or y-parameter instance.

    (a) integer decomposition up to k_max, (b) squarefree initial ideal of
    the projected contraction basis, (c) minimal generators concentrated
    in degree at most 2, plus the elimination cross-check.  Budget errors
    are reported inside the failing sub-check.
    """
    if isinstance(instance, YParameters):
        family = family_from_y(instance)
        descriptor = instance.to_json()
    else:
        family = instance
        descriptor = family.to_json()
    report = VerificationReport(instance=descriptor)

    t0 = time.perf_counter()
    try:
        report.idp = idp_check(family, k_max=k_max)
    except (GuardExceeded, BudgetExceeded) as exc:
        report.idp = {"pass": False, "error": str(exc)}
    report.timings["idp"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    result = None
    try:
        result = shibuta_pipeline(family, **pipeline_kwargs)
        projection = result.projection
        report.squarefree = {
            "order": projection.basis.order.describe(),
            "pass": projection.squarefree,
            "offending": None if projection.squarefree else next(
                projection.basis.variables.format_monomial(m)
                for m in projection.initial_monomials
                if any(e > 1 for e in m)),
            "pipeline": result.report(),
        }
    except (GuardExceeded, BudgetExceeded) as exc:
        report.squarefree = {"pass": False, "error": str(exc)}
    report.timings["squarefree"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if result is None:
        report.quadratic = {"pass": False, "error": "pipeline unavailable"}
    else:
        try:
            histogram = minimal_generator_degrees(result.projection.basis)
            report.quadratic = {
                "histogram": {str(d): c for d, c in sorted(histogram.items())},
                "pass": max(histogram, default=0) <= 2,
            }
        except (GuardExceeded, BudgetExceeded) as exc:
            report.quadratic = {"pass": False, "error": str(exc)}
    report.timings["quadratic"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if not cross_check:
        report.cross_check = {"pass": True, "skipped": True}
    elif result is None:
        report.cross_check = {"pass": False, "error": "pipeline unavailable"}
    else:
        try:
            report.cross_check = {"pass": _elimination_agrees(family, result)}
        except (GuardExceeded, BudgetExceeded) as exc:
            report.cross_check = {"pass": False, "error": str(exc)}
    report.timings["cross_check"] = time.perf_counter() - t0
    return report


def _elimination_agrees(family, pipeline_result):
    """ideal_equal between the projected pipeline basis and elimination."""
    distinct = minkowski_distinct_points(family)
    config = LatticePointSet(family.n, distinct)
    elimination = toric_ideal_elimination(
        config, labels=[("x", p) for p in distinct])
    points_basis = pipeline_result.projection.as_point_basis()
    return ideal_equal(align_variables(points_basis, elimination.variables),
                       elimination)


# ---------------------------------------------------------------------------
# instance generators for batch verification


def building_sets_on_3():
    """All building sets on [3] (closure under intersecting unions)."""
    singletons = [frozenset((i,)) for i in (1, 2, 3)]
    optional = [frozenset(s) for s in ((1, 2), (1, 3), (2, 3), (1, 2, 3))]
    out = []
    for mask in range(16):
        blocks = set(singletons)
        blocks.update(b for k, b in enumerate(optional) if mask >> k & 1)
        candidate = BuildingSet(3, blocks)
        ok, _ = building_set_check(candidate)
        if ok:
            out.append(candidate)
    return out


def exhaustive_families_n3(values=(0, 1, 2)):
    """Families from every building set on [3] with y drawn from `values`.

    Deduplicated by summand multiset; the all-zero family is included once
    (the degenerate origin polytope).
    """
    seen = {}
    for bset in building_sets_on_3():
        blocks = sorted((b for b in bset.blocks if len(b) > 1),
                        key=lambda b: (len(b), sorted(b)))
        for combo in itertools.product(values, repeat=len(blocks)):
            y = YParameters(3, {tuple(sorted(b)): v
                                for b, v in zip(blocks, combo)})
            family = family_from_y(y)
            seen.setdefault(family.canonical_key(), family)
    return [seen[k] for k in sorted(seen)]


def random_family(rng: random.Random, n, m_max, min_size=1):
    """Seeded random summand family: m subsets of [n], sizes >= min_size."""
    m = rng.randint(1, m_max)
    sets = []
    for _ in range(m):
        size = rng.randint(min_size, n)
        sets.append(sorted(rng.sample(range(1, n + 1), size)))
    return SubsetFamily(n, sets)


def sample_families(seed, count, n, m_max, max_product=None, min_size=1):
    """Deterministic batch of random families, optionally capped by size."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        family = random_family(rng, n, m_max, min_size=min_size)
        if max_product is not None and family.product_size() > max_product:
            continue
        out.append(family)
    return out
