"""Buchberger engine, elimination toric ideals, graded generator counts."""

import itertools
import random
from fractions import Fraction

import pytest

from oracles import kernel_binomials_up_to_degree, monomial_image
from permutoric.core import Grevlex, Lex, Polynomial, VariableIndex
from permutoric.groebner import (
    BudgetExceeded,
    GroebnerBasis,
    MarkedElement,
    align_variables,
    buchberger,
    confluence_audit,
    ideal_equal,
    initial_ideal,
    is_squarefree,
    minimal_generator_degrees,
    normal_form,
    s_polynomial,
    toric_ideal_elimination,
)
from permutoric.polytopes import LatticePointSet, SubsetFamily, named_family
from permutoric.polytopes import minkowski_lattice_points


def _vars(n):
    return VariableIndex([("x", i) for i in range(1, n + 1)])


def _binomial(lead, tail, n):
    return Polynomial.binomial(lead, tail, n)


PS_GENS = [
    _binomial((1, 0, 0, 1, 0), (0, 2, 0, 0, 0), 5),   # x1 x4 - x2^2
    _binomial((1, 0, 0, 0, 1), (0, 1, 1, 0, 0), 5),   # x1 x5 - x2 x3
    _binomial((0, 1, 0, 0, 1), (0, 0, 1, 1, 0), 5),   # x2 x5 - x3 x4
]


def test_buchberger_pitman_stanley_fixture():
    """The three binomials are already a reduced grevlex basis."""
    gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    assert len(gb) == 3
    polys = {frozenset(el.poly.terms.items()) for el in gb.elements}
    for g in PS_GENS:
        assert frozenset(g.terms.items()) in polys or \
            frozenset((-g).terms.items()) in polys
    assert gb.reduced
    ok, failures = confluence_audit(gb)
    assert ok, failures
    # two S-pairs reduce via the third element, one by coprimality
    leads = set(gb.leads())
    assert leads == {(0, 2, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 1, 1, 0)}


def test_buchberger_single_binomial_and_empty():
    g = _binomial((1, 0, 0, 1), (0, 1, 1, 0), 4)
    gb = buchberger([g], Grevlex(), _vars(4))
    assert len(gb) == 1
    assert buchberger([], Grevlex(), _vars(3)).elements == ()


def test_normal_form_single_step():
    basis = GroebnerBasis(
        [MarkedElement(_binomial((0, 2, 0), (1, 0, 1), 3), (0, 2, 0))],
        Grevlex(), _vars(3), reduced=True)
    f = Polynomial.monomial((0, 2, 0), 3)
    assert normal_form(f, basis) == Polynomial.monomial((1, 0, 1), 3)


def test_normal_form_of_basis_elements_is_zero():
    gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    for el in gb.elements:
        assert not normal_form(el.poly, gb)


def test_normal_form_single_division_step():
    """Reducing x1*x2*x5 by x2*x5 - x3*x4 (marked on x2*x5) gives x1*x3*x4.

    Under the full grevlex basis the marks point the other way, so there
    x1*x3*x4 reduces back to x1*x2*x5 and x1*x2*x5 is already a remainder.
    """
    step = GroebnerBasis(
        [MarkedElement(_binomial((0, 1, 0, 0, 1), (0, 0, 1, 1, 0), 5),
                       (0, 1, 0, 0, 1))],
        Lex(), _vars(5), reduced=True)
    f = Polynomial.monomial((1, 1, 0, 0, 1), 5)       # x1 x2 x5
    assert normal_form(f, step) == Polynomial.monomial((1, 0, 1, 1, 0), 5)

    grevlex_gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    g = Polynomial.monomial((1, 0, 1, 1, 0), 5)       # x1 x3 x4
    assert normal_form(g, grevlex_gb) == f
    assert normal_form(f, grevlex_gb) == f


def test_normal_form_idempotent():
    rng = random.Random(17)
    gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    for _ in range(100):
        f = Polynomial(
            {tuple(rng.randint(0, 2) for _ in range(5)):
             Fraction(rng.randint(-3, 3)) for _ in range(3)}, 5)
        r = normal_form(f, gb)
        assert normal_form(r, gb) == r


def test_initial_ideal_and_squarefree():
    gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    ii = initial_ideal(gb)
    assert set(ii.generators) == {
        (0, 2, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 1, 1, 0)}
    assert not is_squarefree(ii)

    single = buchberger([_binomial((1, 0, 0, 1), (0, 1, 1, 0), 4)],
                        Grevlex(), _vars(4))
    assert len(initial_ideal(single).generators) == 1

    empty = buchberger([], Grevlex(), _vars(2))
    assert initial_ideal(empty).generators == ()
    assert is_squarefree(initial_ideal(empty))
    assert is_squarefree(initial_ideal(single))


def test_toric_elimination_twisted_segment():
    config = LatticePointSet(2, [(2, 0), (1, 1), (0, 2)])
    gb = toric_ideal_elimination(config)
    assert len(gb) == 1
    el = gb.elements[0]
    assert el.lead == (0, 2, 0)
    assert el.poly == _binomial((0, 2, 0), (1, 0, 1), 3)
    # oracle: the only primitive relation in degree <= 2
    oracle = kernel_binomials_up_to_degree(config.points, 2)
    assert oracle == {frozenset({(0, 2, 0), (1, 0, 1)})}


def test_toric_elimination_four_cycle():
    config = LatticePointSet(4, [(1, 0, 1, 0), (1, 0, 0, 1),
                                 (0, 1, 1, 0), (0, 1, 0, 1)])
    gb = toric_ideal_elimination(config)
    assert len(gb) == 1
    terms = set(gb.elements[0].poly.terms)
    assert terms == {(1, 0, 0, 1), (0, 1, 1, 0)}


def test_toric_elimination_duplicate_point():
    config = LatticePointSet(2, [(1, 1), (1, 1)])
    gb = toric_ideal_elimination(config)
    assert len(gb) == 1
    assert gb.elements[0].poly == _binomial((1, 0), (0, 1), 2)


def test_toric_elimination_rejects_non_configuration():
    with pytest.raises(ValueError):
        toric_ideal_elimination(LatticePointSet(2, [(1, 0), (2, 0)]))


def test_toric_elimination_degenerate_origin():
    gb = toric_ideal_elimination(LatticePointSet(2, [(0, 0)]))
    assert gb.elements == ()
    gb = toric_ideal_elimination(LatticePointSet(2, [(0, 0), (0, 0)]))
    assert len(gb) == 1


def test_elimination_output_is_binomial_and_map_consistent():
    """Every basis element has two terms with equal monomial image."""
    fam = named_family("pitman_stanley", 3)
    points = minkowski_lattice_points(fam).distinct()
    gb = toric_ideal_elimination(LatticePointSet(3, points))
    for el in gb.elements:
        assert el.poly.is_binomial()
        assert el.poly.is_homogeneous()
        e1, e2 = el.poly.terms
        assert monomial_image(e1, points) == monomial_image(e2, points)


def _random_configuration(rng, npts, dim, total):
    """Distinct nonnegative points with a common coordinate sum."""
    candidates = [p for p in itertools.product(range(total + 1), repeat=dim)
                  if sum(p) == total]
    rng.shuffle(candidates)
    return sorted(candidates[:npts], reverse=True)


def test_elimination_contains_bruteforce_kernel():
    """Degree <= 3 kernel binomials all reduce to zero mod the basis."""
    rng = random.Random(29)
    for _ in range(10):
        points = _random_configuration(rng, rng.randint(2, 8),
                                       rng.randint(2, 3), rng.randint(1, 3))
        config = LatticePointSet(len(points[0]), points)
        gb = toric_ideal_elimination(config)
        for pair in kernel_binomials_up_to_degree(points, 3):
            u, v = sorted(pair)
            b = Polynomial.binomial(u, v, len(points))
            assert not normal_form(b, gb)


def test_minimal_generator_degrees_pitman_stanley():
    fam = named_family("pitman_stanley", 3)
    points = minkowski_lattice_points(fam).distinct()
    gb = toric_ideal_elimination(LatticePointSet(3, points))
    # graded oracle: 15 quadratic monomials minus 12 distinct pairwise sums
    quad_monos = len(list(itertools.combinations_with_replacement(range(5), 2)))
    sums = {tuple(a + b for a, b in zip(p, q))
            for p, q in itertools.combinations_with_replacement(points, 2)}
    assert quad_monos == 15 and len(sums) == 12
    assert minimal_generator_degrees(gb, max_degree=3) == {2: 3}
    assert minimal_generator_degrees(gb) == {2: 3}


def test_minimal_generator_degrees_basics():
    principal = [_binomial((1, 0, 0, 1), (0, 1, 1, 0), 4)]
    assert minimal_generator_degrees(principal) == {2: 1}
    assert minimal_generator_degrees([]) == {}
    with pytest.raises(ValueError):
        minimal_generator_degrees(
            [Polynomial({(1, 0): 1, (0, 0): 1}, 2)])


def test_minimal_generator_degrees_with_linear_part():
    gens = [_binomial((1, 0, 0), (0, 1, 0), 3),
            _binomial((2, 0, 0), (0, 0, 2), 3)]
    assert minimal_generator_degrees(gens) == {1: 1, 2: 1}


def test_ideal_equal():
    gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    assert ideal_equal(gb, gb)
    g1 = buchberger([_binomial((1, 0), (0, 1), 2)], Grevlex(), _vars(2))
    g2 = buchberger([_binomial((0, 1), (1, 0), 2)], Grevlex(), _vars(2))
    assert ideal_equal(g1, g2)
    g3 = buchberger([], Grevlex(), _vars(2))
    assert not ideal_equal(g1, g3)


def test_align_variables_permutes():
    gb = buchberger([_binomial((1, 0), (0, 1), 2)], Grevlex(),
                    VariableIndex([("x", 1), ("x", 2)]))
    flipped = align_variables(gb, VariableIndex([("x", 2), ("x", 1)]))
    assert flipped.elements[0].poly.terms == \
        {(0, 1): Fraction(1), (1, 0): Fraction(-1)}


def _random_binomial_ideal(rng, nvars, max_degree, count):
    gens = []
    for _ in range(count):
        u = tuple(rng.randint(0, max_degree) for _ in range(nvars))
        v = tuple(rng.randint(0, max_degree) for _ in range(nvars))
        if u != v:
            gens.append(Polynomial.binomial(u, v, nvars))
    return gens


def test_engine_soundness_sample():
    """Seeded random binomial ideals: confluence audit + NF idempotence."""
    rng = random.Random(2026)
    for _ in range(60):
        nvars = rng.randint(2, 4)
        gens = _random_binomial_ideal(rng, nvars, 3, rng.randint(1, 3))
        gb = buchberger(gens, Grevlex(), _vars(nvars), max_degree=40)
        ok, failures = confluence_audit(gb)
        assert ok, failures
        f = Polynomial(
            {tuple(rng.randint(0, 3) for _ in range(nvars)):
             Fraction(rng.randint(1, 4)) for _ in range(2)}, nvars)
        r = normal_form(f, gb)
        assert normal_form(r, gb) == r


def test_chain_criterion_gives_identical_basis():
    rng = random.Random(99)
    for _ in range(25):
        nvars = rng.randint(2, 4)
        gens = _random_binomial_ideal(rng, nvars, 3, rng.randint(1, 3))
        plain = buchberger(gens, Grevlex(), _vars(nvars), max_degree=40)
        chained = buchberger(gens, Grevlex(), _vars(nvars), max_degree=40,
                             chain_criterion=True)
        assert [el.poly for el in plain.elements] == \
            [el.poly for el in chained.elements]


def test_budget_errors():
    gens = [_binomial((3, 0), (0, 3), 2)]
    with pytest.raises(BudgetExceeded):
        buchberger(gens, Grevlex(), _vars(2), max_degree=2)


def test_gb_json_shape():
    gb = buchberger(PS_GENS, Grevlex(), _vars(5))
    data = gb.to_json()
    assert data["reduced"] is True
    assert data["order"] == {"kind": "grevlex"}
    pairs = {(e["lead"], e["tail"]) for e in data["elements"]}
    assert ("x[2]^2", "x[1]*x[4]") in pairs
    assert ("x[2]*x[3]", "x[1]*x[5]") in pairs
    assert ("x[3]*x[4]", "x[2]*x[5]") in pairs
