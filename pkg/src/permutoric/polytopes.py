"""Generalized permutohedra as Minkowski sums of unit simplices.

Families of subsets of [n] play the role of summand tuples: the subset S
contributes the unit simplex conv{e_i : i in S}.  Everything is enumerated
exactly over the integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_ENUM_CAP = 10 ** 6


class GuardExceeded(RuntimeError):
    """An enumeration would exceed its configured size cap."""


def _subset(xs, n, what="subset"):
    s = frozenset(int(x) for x in xs)
    if not s:
        raise ValueError(f"empty {what}")
    if not all(1 <= x <= n for x in s):
        raise ValueError(f"{what} {sorted(s)} not within [{n}]")
    return s


@dataclass(frozen=True)
class SubsetFamily:
    """Ordered tuple (S_1, ..., S_m) of nonempty subsets of [n]."""

    n: int
    sets: tuple

    def __init__(self, n, sets):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "sets",
                           tuple(_subset(s, n, "summand") for s in sets))

    def __len__(self):
        return len(self.sets)

    def sorted_members(self):
        return [sorted(s) for s in self.sets]

    def to_json(self):
        return {"n": self.n, "sets": self.sorted_members()}

    @classmethod
    def from_json(cls, data):
        return cls(data["n"], data["sets"])

    def canonical_key(self):
        """Order-insensitive key: multiset of summands."""
        return (self.n, tuple(sorted(tuple(sorted(s)) for s in self.sets)))

    def product_size(self):
        size = 1
        for s in self.sets:
            size *= len(s)
        return size


@dataclass(frozen=True)
class BuildingSet:
    n: int
    blocks: frozenset

    def __init__(self, n, blocks):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "blocks",
                           frozenset(_subset(b, n, "block") for b in blocks))

    def to_json(self):
        return {"n": self.n,
                "blocks": sorted((sorted(b) for b in self.blocks),
                                 key=lambda b: (len(b), b))}


@dataclass(frozen=True)
class YParameters:
    """Nonnegative integer multiplicity y_I per nonempty subset I of [n]."""

    n: int
    y: tuple

    def __init__(self, n, y):
        n = int(n)
        items = []
        for subset, value in (y.items() if isinstance(y, dict) else y):
            value = int(value)
            if value < 0:
                raise ValueError("y values must be nonnegative integers")
            if value > 0:
                items.append((_subset(subset, n, "index set"), value))
        items.sort(key=lambda kv: (len(kv[0]), sorted(kv[0])))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "y", tuple(items))

    def value(self, subset):
        s = frozenset(subset)
        for k, v in self.y:
            if k == s:
                return v
        return 0

    def to_json(self):
        return {"n": self.n,
                "y": {",".join(map(str, sorted(k))): v for k, v in self.y}}

    @classmethod
    def from_json(cls, data):
        y = {tuple(int(i) for i in key.split(",")): v
             for key, v in data["y"].items()}
        return cls(data["n"], y)


@dataclass(frozen=True)
class ZParameters:
    """Support-function values z_I per nonempty subset I of [n]."""

    n: int
    z: tuple

    def __init__(self, n, z):
        n = int(n)
        items = [(_subset(k, n, "index set"), Fraction(v))
                 for k, v in (z.items() if isinstance(z, dict) else z)]
        items.sort(key=lambda kv: (len(kv[0]), sorted(kv[0])))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "z", tuple(items))

    def value(self, subset):
        s = frozenset(subset)
        for k, v in self.z:
            if k == s:
                return v
        return Fraction(0)

    def to_json(self):
        return {"n": self.n,
                "z": {",".join(map(str, sorted(k))): str(v) for k, v in self.z}}


class LatticePointSet:
    """Multiset of lattice points, optionally with provenance tuples.

    Points are kept in enumeration order; `distinct()` returns the
    deduplicated set sorted descending lexicographically (the canonical
    variable order for toric ideals).
    """

    __slots__ = ("dim", "points", "provenance")

    def __init__(self, dim, points, provenance=None):
        self.dim = int(dim)
        self.points = tuple(tuple(int(c) for c in p) for p in points)
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError("point dimension mismatch")
        self.provenance = None if provenance is None else tuple(
            tuple(t) for t in provenance)
        if self.provenance is not None and len(self.provenance) != len(self.points):
            raise ValueError("provenance length mismatch")

    def __len__(self):
        return len(self.points)

    def distinct(self):
        return sorted(set(self.points), reverse=True)

    def coordinate_sums(self):
        return {sum(p) for p in self.points}

    def to_json(self):
        data = {"dim": self.dim, "points": [list(p) for p in self.points]}
        if self.provenance is not None:
            data["provenance"] = [list(t) for t in self.provenance]
        return data


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertex set [n]."""

    n: int
    edges: frozenset

    def __init__(self, n, edges):
        n = int(n)
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"bad edge ({u},{v})")
            es.add(frozenset((u, v)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(es))

    def neighbors(self, v):
        return {next(iter(e - {v})) for e in self.edges if v in e}

    def induced_connected(self, subset):
        subset = set(subset)
        if not subset:
            return False
        start = min(subset)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w in subset and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == subset

    def bipartition(self):
        """(colors, None) on success, (None, odd_cycle) otherwise."""
        color = {}
        for start in range(1, self.n + 1):
            if start in color:
                continue
            color[start] = 0
            parent = {start: None}
            queue = [start]
            while queue:
                v = queue.pop(0)
                for w in self.neighbors(v):
                    if w not in color:
                        color[w] = 1 - color[v]
                        parent[w] = v
                        queue.append(w)
                    elif color[w] == color[v]:
                        # reconstruct an odd closed walk through the tree paths
                        path_v, path_w = [v], [w]
                        while parent[path_v[-1]] is not None:
                            path_v.append(parent[path_v[-1]])
                        while parent[path_w[-1]] is not None:
                            path_w.append(parent[path_w[-1]])
                        common = (set(path_v) & set(path_w))
                        meet = next(x for x in path_v if x in common)
                        cycle = path_v[:path_v.index(meet) + 1]
                        cycle += list(reversed(path_w[:path_w.index(meet)]))
                        return None, tuple(cycle)
        return color, None


# ---------------------------------------------------------------------------
# constructors


def family_from_y(y: YParameters) -> SubsetFamily:
    """Expand y into the summand tuple: each I appears y_I times.

    Summands are ordered by size then lexicographically; the all-zero y
    gives the empty family (the polytope degenerates to the origin).
    """
    sets = []
    for subset, value in y.y:
        sets.extend([sorted(subset)] * value)
    return SubsetFamily(y.n, sets)


def building_set_check(b: BuildingSet):
    """(True, None) if b is a building set, else (False, witness).

    The witness is either ("missing_singleton", i) or
    ("union_missing", I, J).
    """
    for i in range(1, b.n + 1):
        if frozenset((i,)) not in b.blocks:
            return False, ("missing_singleton", i)
    blocks = sorted(b.blocks, key=lambda s: (len(s), sorted(s)))
    for x, y in itertools.combinations(blocks, 2):
        if x & y and (x | y) not in b.blocks:
            return False, ("union_missing", tuple(sorted(x)), tuple(sorted(y)))
    return True, None


def graphical_building_set(g: Graph) -> BuildingSet:
    """All subsets of [n] inducing a connected subgraph of g."""
    blocks = []
    vertices = list(range(1, g.n + 1))
    for r in range(1, g.n + 1):
        for subset in itertools.combinations(vertices, r):
            if g.induced_connected(subset):
                blocks.append(subset)
    return BuildingSet(g.n, blocks)


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n):
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete_graph(n):
    return Graph(n, itertools.combinations(range(1, n + 1), 2))


NAMED_FAMILIES = ("permutohedron", "associahedron", "cyclohedron", "pitman_stanley")


def named_family(name, n) -> SubsetFamily:
    """Summand family of a named nestohedron, singleton blocks dropped.

    Singleton summands only translate the polytope, so the named
    constructors omit them.
    """
    if n < 2:
        raise ValueError("named families need n >= 2")
    if name == "permutohedron":
        blocks = graphical_building_set(complete_graph(n)).blocks
    elif name == "associahedron":
        blocks = graphical_building_set(path_graph(n)).blocks
    elif name == "cyclohedron":
        blocks = graphical_building_set(cycle_graph(n)).blocks
    elif name == "pitman_stanley":
        blocks = [frozenset(range(1, i + 1)) for i in range(2, n + 1)]
    else:
        raise ValueError(f"unknown family name: {name}")
    sets = sorted((sorted(b) for b in blocks if len(b) > 1),
                  key=lambda b: (len(b), b))
    return SubsetFamily(n, sets)


# ---------------------------------------------------------------------------
# lattice point enumeration


def minkowski_lattice_points(family: SubsetFamily, cap=DEFAULT_ENUM_CAP):
    """Multiset {e_{j_1} + ... + e_{j_m} : j_k in S_k} with provenance.

    The distinct points are exactly the lattice points of the Minkowski sum.
    The empty family yields the single point at the origin.
    """
    n = family.n
    if not family.sets:
        return LatticePointSet(n, [(0,) * n], provenance=[()])
    size = family.product_size()
    if size > cap:
        raise GuardExceeded(f"enumeration size {size} exceeds cap {cap}")
    points = []
    provenance = []
    members = [sorted(s) for s in family.sets]
    for combo in itertools.product(*members):
        p = [0] * n
        for j in combo:
            p[j - 1] += 1
        points.append(tuple(p))
        provenance.append(combo)
    return LatticePointSet(n, points, provenance=provenance)


def minkowski_distinct_points(family: SubsetFamily):
    """Distinct lattice points of the sum, by incremental sumsets.

    Summing one simplex at a time keeps intermediate sets at the size of the
    partial polytope's lattice points, so dilated families stay cheap where
    the full product enumeration would blow past any cap.
    """
    n = family.n
    current = {(0,) * n}
    for s in family.sets:
        nxt = set()
        for p in current:
            for j in s:
                q = list(p)
                q[j - 1] += 1
                nxt.add(tuple(q))
        current = nxt
    return sorted(current, reverse=True)


def dilate_family(family: SubsetFamily, k) -> SubsetFamily:
    """Family of the k-th dilate: every summand repeated k times."""
    if k < 1:
        raise ValueError("dilation factor must be >= 1")
    sets = []
    for s in family.sets:
        sets.extend([sorted(s)] * k)
    return SubsetFamily(family.n, sets)


def cayley_sum_points(family: SubsetFamily):
    """Points (e_j, e_i) in Z^{n+m} for j in S_i; ground coordinates first."""
    if not family.sets:
        raise ValueError("Cayley sum needs a nonempty family")
    n, m = family.n, len(family.sets)
    points = []
    provenance = []
    for i, s in enumerate(family.sets, start=1):
        for j in sorted(s):
            p = [0] * (n + m)
            p[j - 1] = 1
            p[n + i - 1] = 1
            points.append(tuple(p))
            provenance.append((i, j))
    return LatticePointSet(n + m, points, provenance=provenance)


def family_graph(family: SubsetFamily) -> Graph:
    """Bipartite graph on [n] + copy vertices: j ~ (n+i) iff j in S_i."""
    n, m = family.n, len(family.sets)
    edges = [(j, n + i) for i, s in enumerate(family.sets, start=1)
             for j in sorted(s)]
    return Graph(n + m, edges)


def edge_polytope_points(g: Graph):
    """One point e_u + e_v per edge of a bipartite graph.

    Raises ValueError carrying an odd-cycle witness if g is not bipartite.
    """
    _, odd_cycle = g.bipartition()
    if odd_cycle is not None:
        raise ValueError(f"graph is not bipartite; odd cycle {odd_cycle}")
    points = []
    provenance = []
    for e in sorted(g.edges, key=sorted):
        u, v = sorted(e)
        p = [0] * g.n
        p[u - 1] = 1
        p[v - 1] = 1
        points.append(tuple(p))
        provenance.append((u, v))
    return LatticePointSet(g.n, points, provenance=provenance)


# ---------------------------------------------------------------------------
# Y / Z parameter translation


def _nonempty_subsets(n):
    for r in range(1, n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


def y_to_z(y: YParameters) -> ZParameters:
    """z_I = sum of y_J over nonempty J contained in I."""
    values = {}
    for subset in _nonempty_subsets(y.n):
        s = set(subset)
        total = sum(v for k, v in y.y if k <= s)
        values[subset] = total
    return ZParameters(y.n, values)


def z_lattice_points(z: ZParameters):
    """All integer t with sum(t) = z_[n] and sum_{i in I} t_i >= z_I.

    Bounded search over compositions of z_[n]; only meaningful for z
    produced from integer y-parameters.
    """
    n = z.n
    total = z.value(range(1, n + 1))
    if total.denominator != 1:
        raise ValueError("z_[n] must be an integer")
    total = int(total)
    constraints = [(k, v) for k, v in z.z if len(k) < n]
    points = []

    def extend(prefix, remaining):
        if len(prefix) == n - 1:
            candidate = prefix + (remaining,)
            for subset, bound in constraints:
                if sum(candidate[i - 1] for i in subset) < bound:
                    return
            points.append(candidate)
            return
        for value in range(remaining + 1):
            extend(prefix + (value,), remaining - value)

    extend((), total)
    return LatticePointSet(n, sorted(points, reverse=True))
