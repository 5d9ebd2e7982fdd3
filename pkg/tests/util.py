"""Shared helpers for the test suite: seeded random generators for fans,
cones and unimodular matrices, plus brute-force oracles kept independent
of the library code paths they check."""

from functools import cmp_to_key
from itertools import permutations

from toricaut.fan import Fan
from toricaut.lattice import (
    det,
    identity_matrix,
    mat,
    mat_is_integral,
    mat_to_int,
    primitive,
    rank_of,
    solve_left,
    vec_mat,
)


def random_primitive(rng, rank, bound=4):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(rank))
        if any(v):
            return primitive(v)


def _half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def random_complete_fan_rank2(rng, extra=3):
    """Random complete rank-2 fan: the axis rays plus a few random ones,
    sorted by exact angle, with consecutive pairs as maximal cones."""
    rays = {(1, 0), (0, 1), (-1, 0), (0, -1)}
    for _ in range(extra):
        rays.add(random_primitive(rng, 2))
    ordered = sorted(rays, key=cmp_to_key(_angle_cmp))
    k = len(ordered)
    return Fan(2, ordered, [(i, (i + 1) % k) for i in range(k)])


def random_unimodular(rng, n, steps=8):
    m = [list(r) for r in identity_matrix(n)]
    for _ in range(steps):
        op = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if op == 0 and i != j:
            c = rng.choice([-2, -1, 1, 2])
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
        elif op == 1 and i != j:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-x for x in m[i]]
    result = mat(m)
    assert abs(det(result)) == 1
    return result


def random_pointed_cone_rays(rng, rank, count):
    """Ray sets guaranteed strictly convex: all rays in an open halfspace."""
    rays = []
    while len(rays) < count:
        v = random_primitive(rng, rank)
        if v[-1] > 0 or (v[-1] == 0 and sum(v) > 0):
            rays.append(v)
    return rays


def automorphism_order_oracle(fan):
    """Count fan automorphisms by exhausting all ray bijections.

    Independent of the library's pruned backtracking search: for every
    permutation of the rays, solve for the matrix from a spanning subset,
    then verify integrality, unimodularity, the full ray correspondence
    and cone-set preservation.
    """
    rays = fan.rays
    n = fan.rank
    anchors = []
    rows = []
    for i in range(len(rays)):
        if rank_of(rows + [rays[i]]) > len(anchors):
            anchors.append(i)
            rows.append(rays[i])
    assert len(anchors) == n
    count = 0
    for perm in permutations(range(len(rays))):
        a = mat([rays[i] for i in anchors])
        b = mat([rays[perm[i]] for i in anchors])
        x = solve_left(a, b)
        if x is None or not mat_is_integral(x):
            continue
        u = mat_to_int(x)
        if abs(det(u)) != 1:
            continue
        if any(vec_mat(rays[i], u) != rays[perm[i]] for i in range(len(rays))):
            continue
        mapped = {tuple(sorted(perm[i] for i in c)) for c in fan.max_cones}
        if mapped == set(fan.max_cones):
            count += 1
    return count
