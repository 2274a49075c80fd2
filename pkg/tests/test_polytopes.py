"""Families, building sets, lattice point enumeration, Y/Z translation."""

import itertools
import random

import pytest

from permutoric.polytopes import (
    BuildingSet,
    Graph,
    GuardExceeded,
    SubsetFamily,
    YParameters,
    building_set_check,
    cayley_sum_points,
    complete_graph,
    dilate_family,
    edge_polytope_points,
    family_from_y,
    family_graph,
    graphical_building_set,
    minkowski_distinct_points,
    minkowski_lattice_points,
    named_family,
    path_graph,
    y_to_z,
    z_lattice_points,
)


def test_family_from_y_expansion():
    y = YParameters(3, {(1, 2): 1, (1, 2, 3): 1})
    assert family_from_y(y).sorted_members() == [[1, 2], [1, 2, 3]]
    y = YParameters(3, {(1, 2): 2})
    assert family_from_y(y).sorted_members() == [[1, 2], [1, 2]]
    assert family_from_y(YParameters(3, {})).sets == ()


def test_family_json_round_trip():
    fam = SubsetFamily(3, [[1, 2], [1, 2, 3]])
    assert SubsetFamily.from_json(fam.to_json()) == fam


def test_building_set_check():
    ok, witness = building_set_check(
        BuildingSet(3, [[1], [2], [3], [1, 2], [2, 3], [1, 2, 3]]))
    assert ok and witness is None

    ok, witness = building_set_check(
        BuildingSet(3, [[1], [2], [3], [1, 2], [2, 3]]))
    assert not ok
    assert witness == ("union_missing", (1, 2), (2, 3))

    ok, witness = building_set_check(BuildingSet(3, [[1, 2], [1], [2]]))
    assert not ok
    assert witness == ("missing_singleton", 3)


def test_graphical_building_set():
    path = graphical_building_set(path_graph(3))
    assert {tuple(sorted(b)) for b in path.blocks} == {
        (1,), (2,), (3,), (1, 2), (2, 3), (1, 2, 3)}
    k3 = graphical_building_set(complete_graph(3))
    assert len(k3.blocks) == 7
    edgeless = graphical_building_set(Graph(2, []))
    assert {tuple(sorted(b)) for b in edgeless.blocks} == {(1,), (2,)}


def test_graphical_building_set_always_checks():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 5)
        edges = [e for e in itertools.combinations(range(1, n + 1), 2)
                 if rng.random() < 0.5]
        bset = graphical_building_set(Graph(n, edges))
        ok, _ = building_set_check(bset)
        assert ok


def test_named_families():
    assert named_family("pitman_stanley", 3).sorted_members() == \
        [[1, 2], [1, 2, 3]]
    assert named_family("associahedron", 3).sorted_members() == \
        [[1, 2], [2, 3], [1, 2, 3]]
    assert named_family("permutohedron", 3).sorted_members() == \
        [[1, 2], [1, 3], [2, 3], [1, 2, 3]]
    assert named_family("cyclohedron", 3).sorted_members() == \
        named_family("permutohedron", 3).sorted_members()
    with pytest.raises(ValueError):
        named_family("permutohedron", 1)
    with pytest.raises(ValueError):
        named_family("megahedron", 3)


def test_minkowski_lattice_points_pitman_stanley():
    fam = SubsetFamily(3, [[1, 2], [1, 2, 3]])
    points = minkowski_lattice_points(fam)
    # oracle: enumerate all |S_1| * |S_2| sums directly
    expected = []
    for j1 in (1, 2):
        for j2 in (1, 2, 3):
            p = [0, 0, 0]
            p[j1 - 1] += 1
            p[j2 - 1] += 1
            expected.append(tuple(p))
    assert sorted(points.points) == sorted(expected)
    assert len(points) == 6
    assert set(points.distinct()) == {
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1)}
    assert points.points.count((1, 1, 0)) == 2
    assert points.provenance[points.points.index((1, 0, 1))] in {(1, 3)}


def test_minkowski_single_simplex_and_point():
    assert set(minkowski_lattice_points(SubsetFamily(3, [[1, 2, 3]])).points) \
        == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert minkowski_lattice_points(SubsetFamily(1, [[1], [1]])).points \
        == ((2,),)
    assert minkowski_lattice_points(SubsetFamily(3, [])).points == ((0, 0, 0),)


def test_minkowski_distinct_matches_product_enumeration():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.randint(1, 4)
        m = rng.randint(0, 4)
        fam = SubsetFamily(
            n, [sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
                for _ in range(m)])
        assert minkowski_distinct_points(fam) == \
            minkowski_lattice_points(fam).distinct()


def test_minkowski_guard():
    fam = SubsetFamily(4, [[1, 2, 3, 4]] * 4)
    with pytest.raises(GuardExceeded):
        minkowski_lattice_points(fam, cap=100)


def test_dilate_family():
    fam = SubsetFamily(2, [[1, 2]])
    assert dilate_family(fam, 2).sorted_members() == [[1, 2], [1, 2]]
    assert dilate_family(fam, 1) == fam
    with pytest.raises(ValueError):
        dilate_family(fam, 0)
    ps = SubsetFamily(3, [[1, 2], [1, 2, 3]])
    doubled = dilate_family(ps, 2)
    assert len(doubled) == 4
    assert len(minkowski_lattice_points(doubled).distinct()) == 12


def test_permutation_invariance_of_distinct_points():
    rng = random.Random(23)
    for _ in range(20):
        n = rng.randint(2, 4)
        sets = [sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
                for _ in range(rng.randint(1, 4))]
        fam = SubsetFamily(n, sets)
        shuffled = list(sets)
        rng.shuffle(shuffled)
        fam2 = SubsetFamily(n, shuffled)
        assert minkowski_distinct_points(fam) == minkowski_distinct_points(fam2)


def test_hyperplane_invariant():
    fam = SubsetFamily(4, [[1, 2], [2, 3, 4], [1, 4]])
    points = minkowski_lattice_points(fam)
    assert points.coordinate_sums() == {3}


def test_cayley_sum_points():
    fam = SubsetFamily(2, [[1, 2], [1, 2]])
    points = cayley_sum_points(fam)
    assert set(points.points) == {
        (1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)}
    assert cayley_sum_points(SubsetFamily(1, [[1]])).points == ((1, 1),)
    fam = SubsetFamily(3, [[1, 2], [1, 2, 3]])
    assert len(cayley_sum_points(fam)) == 5
    assert cayley_sum_points(fam).dim == 5


def test_cayley_count_is_sum_of_sizes():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(2, 4)
        sets = [sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
                for _ in range(rng.randint(1, 4))]
        fam = SubsetFamily(n, sets)
        assert len(cayley_sum_points(fam)) == sum(len(s) for s in sets)


def test_edge_polytope_points():
    square = Graph(4, [(1, 3), (1, 4), (2, 3), (2, 4)])
    points = edge_polytope_points(square)
    assert set(points.points) == {
        (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)}
    single = edge_polytope_points(Graph(2, [(1, 2)]))
    assert single.points == ((1, 1),)


def test_edge_polytope_matches_cayley():
    fam = SubsetFamily(3, [[1, 2], [1, 2, 3]])
    graph = family_graph(fam)
    assert set(edge_polytope_points(graph).points) == \
        set(cayley_sum_points(fam).points)


def test_edge_polytope_rejects_odd_cycle():
    triangle = Graph(3, [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(ValueError, match="odd cycle"):
        edge_polytope_points(triangle)


def test_y_to_z():
    y = YParameters(2, {(1,): 1, (2,): 2, (1, 2): 3})
    z = y_to_z(y)
    assert z.value((1,)) == 1
    assert z.value((2,)) == 2
    assert z.value((1, 2)) == 6

    z = y_to_z(YParameters(2, {}))
    assert z.value((1, 2)) == 0

    y = YParameters(3, {(1, 2): 1, (1, 2, 3): 1})
    z = y_to_z(y)
    assert z.value((1, 2)) == 1
    assert z.value((1, 2, 3)) == 2
    assert z.value((1,)) == 0
    assert z.value((1, 3)) == 0


def test_z_lattice_points():
    y = YParameters(2, {(1,): 1, (2,): 2, (1, 2): 3})
    pts = z_lattice_points(y_to_z(y))
    assert set(pts.points) == {(1, 5), (2, 4), (3, 3), (4, 2)}

    assert z_lattice_points(y_to_z(YParameters(2, {}))).points == ((0, 0),)

    y = YParameters(3, {(1, 2): 1, (1, 2, 3): 1})
    pts = z_lattice_points(y_to_z(y))
    fam = family_from_y(y)
    assert set(pts.points) == set(minkowski_distinct_points(fam))
    assert len(pts) == 5


def test_prop_63_small_instances():
    """Minkowski and inequality enumerations agree for n <= 3 samples."""
    rng = random.Random(41)
    subsets3 = [s for r in range(1, 4)
                for s in itertools.combinations((1, 2, 3), r)]
    for _ in range(25):
        y = YParameters(3, {s: rng.randint(0, 2) for s in subsets3})
        fam = family_from_y(y)
        assert set(minkowski_distinct_points(fam)) == \
            set(z_lattice_points(y_to_z(y)).points)
