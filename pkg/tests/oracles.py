"""Independent test oracles.

Everything here is deliberately written against the definitions, not the
library's algorithms: kernel binomials by monomial-image grouping, cycles
by direct graph search, simplex membership by barycentric coordinates.
"""

import itertools
from fractions import Fraction


def monomial_image(exponent, points):
    """Image exponent of x^e under x_i -> t^{p_i}."""
    dim = len(points[0]) if points else 0
    img = [0] * dim
    for e, p in zip(exponent, points):
        if e:
            for k, c in enumerate(p):
                img[k] += e * c
    return tuple(img)


def kernel_binomials_up_to_degree(points, max_degree):
    """All binomials x^u - x^v of the toric ideal with deg <= max_degree.

    Groups monomials by image; distinct monomials with equal images give
    kernel binomials.  Returns frozensets {u, v} of exponent tuples.
    """
    n = len(points)
    out = set()
    for d in range(1, max_degree + 1):
        groups = {}
        for combo in itertools.combinations_with_replacement(range(n), d):
            exp = [0] * n
            for i in combo:
                exp[i] += 1
            groups.setdefault(monomial_image(exp, points), set()).add(tuple(exp))
        for monos in groups.values():
            for u, v in itertools.combinations(sorted(monos), 2):
                out.add(frozenset((u, v)))
    return out


def even_cycles_of_family(family):
    """All simple cycles of the bipartite summand graph, by brute force.

    A cycle of length 2r is the pair (grounds, copies) of distinct vertex
    sequences (q_1..q_r), (p_1..p_r) with q_k and q_{k+1} both members of
    S_{p_k} (cyclically).  Copies are 1-based; deduplicated up to rotation
    and reflection.
    """
    members = [set(s) for s in family.sets]
    m = len(members)
    n = family.n
    cycles = set()
    for r in range(2, min(m, n) + 1):
        for copies in itertools.permutations(range(1, m + 1), r):
            if copies[0] != min(copies):
                continue  # rotations
            for grounds in itertools.permutations(range(1, n + 1), r):
                ok = all(
                    grounds[k] in members[copies[k] - 1]
                    and grounds[(k + 1) % r] in members[copies[k] - 1]
                    for k in range(r))
                if ok:
                    cycles.add(_canonical_cycle(grounds, copies))
    return sorted(cycles)


def _canonical_cycle(grounds, copies):
    r = len(copies)
    variants = []
    for shift in range(r):
        g = grounds[shift:] + grounds[:shift]
        p = copies[shift:] + copies[:shift]
        variants.append((g, p))
        # reflection: reverse orientation, q_1 stays first
        rg = (g[0],) + tuple(reversed(g[1:]))
        rp = tuple(reversed(p))
        variants.append((rg, rp))
    return min(variants)


def cycle_binomial_exponents(cycle, y_index):
    """The two exponent tuples of a cycle binomial over a y VariableIndex."""
    grounds, copies = cycle
    r = len(copies)
    top = [0] * len(y_index)
    bottom = [0] * len(y_index)
    for k in range(r):
        top[y_index.position(("y", (copies[k], grounds[k])))] += 1
        bottom[y_index.position(("y", (copies[k], grounds[(k + 1) % r])))] += 1
    return tuple(top), tuple(bottom)


def simplex_lattice_points(vertices, scale, box):
    """Lattice points of scale * conv(vertices), by exact barycentric solve."""
    from permutoric._linalg import solve

    dim = len(vertices[0])
    out = []
    for p in itertools.product(*[range(b + 1) for b in box]):
        rows = [[Fraction(v[i]) for v in vertices] for i in range(dim)]
        rows.append([Fraction(1)] * len(vertices))
        sol = solve(rows, [Fraction(c) for c in p] + [Fraction(scale)])
        if sol is not None and all(weight >= 0 for weight in sol):
            out.append(tuple(p))
    return out


REEVE_VERTICES = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)]


def reeve_points(scale):
    box = tuple(scale * b for b in (1, 1, 2))
    return simplex_lattice_points(REEVE_VERTICES, scale, box)
