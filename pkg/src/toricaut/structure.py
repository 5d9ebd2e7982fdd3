"""Fan isomorphisms and automorphisms, indecomposable factorization, and
the product/wreath structure of the automorphism group.

The isomorphism search assigns images to a spanning set of rays,
backtracking with combinatorial pruning (cone-incidence profiles of rays
and ray pairs, which are preserved by any lattice isomorphism), solves the
resulting linear system exactly and keeps a candidate only if it is
unimodular and carries the whole cone set bijectively onto the target's.

Decomposition seeds blocks with the connected components of the ray
configuration's linear matroid (a circuit can never split across direct
factors), then exhausts bipartitions of those blocks; each split is
verified by three independent criteria and each leaf keeps the failed
bipartitions as its indecomposability certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .fan import (
    Fan,
    IncompleteFanError,
    is_complete,
    is_simplicial,
    is_smooth,
    product_fan,
    transform_fan,
)
from .lattice import (
    Mat,
    Vec,
    det,
    identity_matrix,
    invert_unimodular,
    mat,
    mat_is_integral,
    mat_mul,
    mat_to_int,
    rank_of,
    solve_left,
    span_saturation_basis,
    sublattice_direct_sum,
    transpose,
    vec_mat,
)
from .roots import demazure_roots


@dataclass(frozen=True)
class FanIsomorphism:
    """A unimodular lattice map carrying one fan bijectively onto another.

    ray_permutation[i] is the target index of source ray i.
    """

    matrix: Mat
    ray_permutation: tuple


def invariant_vector(fan: Fan) -> tuple:
    """Cheap isomorphism invariants used to short-circuit searches."""
    fan.require_valid()
    counts = tuple(len(fan.cones_of_dim(d)) for d in range(fan.rank + 1))
    complete = is_complete(fan)
    nroots = len(demazure_roots(fan)) if complete else -1
    return (fan.rank, len(fan.rays), counts, is_smooth(fan), is_simplicial(fan),
            complete, nroots)


def _ray_profiles(fan: Fan):
    nrays = len(fan.rays)
    single = []
    for i in range(nrays):
        dims = sorted(fan.all_cones[c] for c in fan.all_cones if i in c)
        single.append(tuple(dims))
    pair = [[None] * nrays for _ in range(nrays)]
    for i in range(nrays):
        for j in range(nrays):
            if i != j:
                dims = sorted(fan.all_cones[c] for c in fan.all_cones
                              if i in c and j in c)
                pair[i][j] = tuple(dims)
    return single, pair


def _spanning_anchor_indices(fan: Fan) -> list:
    anchors = []
    rows = []
    for i in range(len(fan.rays)):
        if rank_of(rows + [fan.rays[i]]) > len(anchors):
            anchors.append(i)
            rows.append(fan.rays[i])
    return anchors


def _extend_span_map(anchors: Mat, images: Mat, n: int) -> Optional[Mat]:
    """Unimodular U with anchors*U = images when the anchors span a proper
    subspace; None when no lattice-compatible extension exists."""
    d = len(anchors)
    basis1 = span_saturation_basis(anchors, n)
    basis2 = span_saturation_basis(images, n)
    if len(basis1) != d or len(basis2) != d:
        return None
    coeff1 = solve_left(mat_mul(basis1, transpose(basis1)),
                        mat_mul(basis1, transpose(anchors)))
    coeff2 = solve_left(mat_mul(basis2, transpose(basis2)),
                        mat_mul(basis2, transpose(images)))
    if coeff1 is None or coeff2 is None:
        return None
    pa = transpose(coeff1)  # anchors = pa * basis1
    pb = transpose(coeff2)
    if not (mat_is_integral(pa) and mat_is_integral(pb)):
        return None
    q = solve_left(mat_to_int(pa), mat_to_int(pb))
    if q is None or not mat_is_integral(q):
        return None
    q = mat_to_int(q)
    if abs(det(q)) != 1:
        return None
    from .lattice import complete_to_unimodular
    v1 = complete_to_unimodular(basis1, n)
    v2 = complete_to_unimodular(basis2, n)
    top = mat_mul(q, v2[:d])
    u = mat_mul(invert_unimodular(v1), mat(tuple(top) + tuple(v2[d:])))
    return u


def _candidate_matrix(f1: Fan, anchors_idx, images_idx, f2: Fan) -> Optional[Mat]:
    anchors = mat([f1.rays[i] for i in anchors_idx])
    images = mat([f2.rays[i] for i in images_idx])
    n = f1.rank
    if len(anchors) == n:
        x = solve_left(anchors, images)
        if x is None or not mat_is_integral(x):
            return None
        u = mat_to_int(x)
        if abs(det(u)) != 1:
            return None
        return u
    return _extend_span_map(anchors, images, n)


def _check_iso(f1: Fan, f2: Fan, u: Mat) -> Optional[FanIsomorphism]:
    index2 = {r: i for i, r in enumerate(f2.rays)}
    perm = []
    for r in f1.rays:
        img = vec_mat(r, u)
        if img not in index2:
            return None
        perm.append(index2[img])
    if len(set(perm)) != len(perm) or len(perm) != len(f2.rays):
        return None
    mapped = {tuple(sorted(perm[i] for i in c)) for c in f1.max_cones}
    if mapped != set(f2.max_cones):
        return None
    return FanIsomorphism(matrix=u, ray_permutation=tuple(perm))


def _isomorphism_search(f1: Fan, f2: Fan, find_all: bool) -> list:
    if f1.rank != f2.rank:
        return []
    f1.require_valid()
    f2.require_valid()
    if invariant_vector(f1) != invariant_vector(f2):
        return []
    n = f1.rank
    if not f1.rays:
        if f1.max_cones == f2.max_cones:
            return [FanIsomorphism(matrix=identity_matrix(n), ray_permutation=())]
        return []
    single1, pair1 = _ray_profiles(f1)
    single2, pair2 = _ray_profiles(f2)
    anchors = _spanning_anchor_indices(f1)
    results = []
    seen = set()

    def backtrack(pos: int, chosen: list):
        if pos == len(anchors):
            u = _candidate_matrix(f1, anchors, chosen, f2)
            if u is None or u in seen:
                return False
            iso = _check_iso(f1, f2, u)
            if iso is None:
                return False
            seen.add(u)
            results.append(iso)
            return True
        a = anchors[pos]
        for b in range(len(f2.rays)):
            if b in chosen or single2[b] != single1[a]:
                continue
            if any(pair2[c][b] != pair1[anchors[k]][a] for k, c in enumerate(chosen)):
                continue
            chosen.append(b)
            done = backtrack(pos + 1, chosen)
            chosen.pop()
            if done and not find_all:
                return True
        return False

    backtrack(0, [])
    return sorted(results, key=lambda iso: iso.matrix)


def fan_isomorphism(f1: Fan, f2: Fan) -> Optional[FanIsomorphism]:
    """Some isomorphism f1 -> f2, or None; first hit in canonical order."""
    found = _isomorphism_search(f1, f2, find_all=False)
    return found[0] if found else None


@lru_cache(maxsize=None)
def fan_automorphisms(fan: Fan) -> tuple:
    """The full finite group Aut(fan) in GL(n, Z), canonically sorted.

    Completeness guarantees finiteness and is required.
    """
    fan.require_valid()
    if not is_complete(fan):
        raise IncompleteFanError("automorphism groups of non-complete fans may be infinite")
    return tuple(_isomorphism_search(fan, fan, find_all=True))


def compose(a: FanIsomorphism, b: FanIsomorphism) -> FanIsomorphism:
    """First apply a, then b (matrices act on row vectors from the right)."""
    return FanIsomorphism(
        matrix=mat_mul(a.matrix, b.matrix),
        ray_permutation=tuple(b.ray_permutation[i] for i in a.ray_permutation))


def inverse(a: FanIsomorphism) -> FanIsomorphism:
    inv = invert_unimodular(a.matrix)
    perm = [0] * len(a.ray_permutation)
    for i, j in enumerate(a.ray_permutation):
        perm[j] = i
    return FanIsomorphism(matrix=inv, ray_permutation=tuple(perm))


def generating_subset(autos: Sequence[FanIsomorphism], rank: int) -> tuple:
    """Small deterministic generating set, grown greedily in sorted order."""
    identity = identity_matrix(rank)
    generated = {identity}
    gens = []
    matrices = [a.matrix for a in autos]
    target = set(matrices)
    for a in autos:
        if a.matrix in generated:
            continue
        gens.append(a)
        frontier = {a.matrix}
        while frontier:
            new = set()
            for m1 in frontier:
                for m2 in list(generated) + [m1]:
                    for prod in (mat_mul(m1, m2), mat_mul(m2, m1)):
                        if prod not in generated and prod not in new and prod not in frontier:
                            new.add(prod)
            generated |= frontier
            frontier = new
        generated.add(a.matrix)
        if target <= generated:
            break
    return tuple(gens)


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class BipartitionFailure:
    block_a: tuple
    block_b: tuple
    failed_criterion: str


@dataclass(frozen=True)
class DecompositionFactor:
    """An indecomposable factor fan with the lattice basis of its summand
    (rows in the coordinates of the original fan)."""

    fan: Fan
    basis: Mat
    certified_indecomposable: bool
    certificate: tuple


@dataclass(frozen=True)
class Decomposition:
    factors: tuple

    @property
    def factor_fans(self) -> tuple:
        return tuple(f.fan for f in self.factors)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _ray_blocks(fan: Fan) -> list:
    """Connected components of the linear matroid on the ray vectors.

    Components are computed from fundamental circuits with respect to a
    greedy basis; a circuit always lies inside a single component, and a
    direct-sum split of the fan can only separate whole components.
    """
    rays = fan.rays
    n = fan.rank
    basis_idx = _spanning_anchor_indices(fan)
    assert len(basis_idx) == n, "rays of a complete fan span N_R"
    basis = mat([rays[i] for i in basis_idx])
    uf = _UnionFind(len(rays))
    for i in range(len(rays)):
        if i in basis_idx:
            continue
        coeffs = solve_left(transpose(basis), transpose([rays[i]], n))
        assert coeffs is not None
        support = [basis_idx[k] for k in range(n) if coeffs[k][0] != 0]
        for b in support:
            uf.union(i, b)
    groups: dict = {}
    for i in range(len(rays)):
        groups.setdefault(uf.find(i), []).append(i)
    blocks = sorted(tuple(g) for g in groups.values())
    assert sum(rank_of([rays[i] for i in b]) for b in blocks) == n
    return blocks


def _bipartitions(blocks: list):
    k = len(blocks)
    for mask in range(1, 1 << (k - 1)):
        part_a = [blocks[0]]
        part_b = []
        for j in range(1, k):
            (part_b if (mask >> (j - 1)) & 1 else part_a).append(blocks[j])
        yield (tuple(sorted(i for b in part_a for i in b)),
               tuple(sorted(i for b in part_b for i in b)))


def _coords_in_basis(v: Vec, basis: Mat) -> Vec:
    gram = mat_mul(basis, transpose(basis))
    rhs = mat_mul(basis, transpose([v], len(v)))
    sol = solve_left(gram, rhs)
    assert sol is not None and mat_is_integral(sol)
    return tuple(int(row[0]) for row in sol)


def _try_split(fan: Fan, part_a: tuple, part_b: tuple):
    """Either ((fan_a, basis_a), (fan_b, basis_b)) or a failure string."""
    n = fan.rank
    basis_a = span_saturation_basis([fan.rays[i] for i in part_a], n)
    basis_b = span_saturation_basis([fan.rays[i] for i in part_b], n)
    if not sublattice_direct_sum([basis_a, basis_b], n):
        return "direct_sum"
    closure = fan.all_cones
    set_a, set_b, pairs = set(), set(), set()
    for c in fan.max_cones:
        ca = tuple(i for i in c if i in part_a)
        cb = tuple(i for i in c if i in part_b)
        if ca not in closure or cb not in closure:
            return "cone_split"
        set_a.add(ca)
        set_b.add(cb)
        pairs.add((ca, cb))
    if pairs != {(ca, cb) for ca in set_a for cb in set_b}:
        return "product_equality"

    def build(part, basis, cone_set):
        local = {g: k for k, g in enumerate(part)}
        rays = [_coords_in_basis(fan.rays[i], basis) for i in part]
        cones = [tuple(local[i] for i in c) for c in cone_set]
        return Fan(len(basis), rays, cones)

    return (build(part_a, basis_a, set_a), basis_a), (build(part_b, basis_b, set_b), basis_b)


def _decompose_rec(fan: Fan) -> list:
    blocks = _ray_blocks(fan)
    failures = []
    for part_a, part_b in _bipartitions(blocks):
        result = _try_split(fan, part_a, part_b)
        if isinstance(result, str):
            failures.append(BipartitionFailure(part_a, part_b, result))
            continue
        (fan_a, basis_a), (fan_b, basis_b) = result
        out = []
        for sub, basis in ((fan_a, basis_a), (fan_b, basis_b)):
            for factor in _decompose_rec(sub):
                out.append(DecompositionFactor(
                    fan=factor.fan,
                    basis=mat_mul(factor.basis, basis),
                    certified_indecomposable=factor.certified_indecomposable,
                    certificate=factor.certificate))
        return out
    return [DecompositionFactor(fan=fan, basis=identity_matrix(fan.rank),
                                certified_indecomposable=True,
                                certificate=tuple(failures))]


def decompose(fan: Fan) -> Decomposition:
    """Finest factorization of a complete fan into indecomposable factors.

    Each factor comes with the basis of its lattice summand; stacking the
    bases gives a unimodular change of coordinates under which the product
    of the factors reproduces the input exactly.
    """
    fan.require_valid()
    if not is_complete(fan):
        raise IncompleteFanError("only complete fans are decomposed")
    if fan.rank == 0:
        return Decomposition(factors=())
    factors = _decompose_rec(fan)
    factors.sort(key=lambda f: (f.fan.rank, len(f.fan.rays), f.fan.rays, f.basis))
    return Decomposition(factors=tuple(factors))


def reconstruct(dec: Decomposition, rank: int) -> Fan:
    """Product of the factors mapped through the recorded bases."""
    if not dec.factors:
        return Fan(0, [], [])
    prod = dec.factors[0].fan
    for factor in dec.factors[1:]:
        prod = product_fan(prod, factor.fan)
    stacked = mat([row for factor in dec.factors for row in factor.basis])
    assert len(stacked) == rank
    return transform_fan(prod, stacked)


# ---------------------------------------------------------------------------
# wreath-product structure


@dataclass(frozen=True)
class FactorClass:
    label: str
    representative: Fan
    multiplicity: int
    member_indices: tuple
    root_count: int
    dim_aut0: int
    fan_automorphism_order: int


@dataclass(frozen=True)
class AutStructureReport:
    torus_rank: int
    roots: tuple
    root_count: int
    dim_aut0: int
    fan_automorphism_order: int
    fan_automorphism_generators: tuple
    factor_classes: tuple
    structure_string: str

    @property
    def factor_multiset(self) -> tuple:
        return tuple((c.label, c.multiplicity) for c in self.factor_classes)


def _group_factors(dec: Decomposition) -> list:
    classes: list = []
    for idx, factor in enumerate(dec.factors):
        for cls in classes:
            if fan_isomorphism(factor.fan, cls[0]) is not None:
                cls[1].append(idx)
                break
        else:
            classes.append([factor.fan, [idx]])
    classes.sort(key=lambda cls: (invariant_vector(cls[0]), cls[0].rays))
    return classes


def aut_structure_report(fan: Fan) -> AutStructureReport:
    """Full structure report: roots, neutral-component dimension, fan
    automorphisms and the product/wreath decomposition."""
    from .symbolic import lie_dimension

    fan.require_valid()
    if not is_complete(fan):
        raise IncompleteFanError("structure reports need a complete fan")
    dec = decompose(fan)
    roots = demazure_roots(fan)
    autos = fan_automorphisms(fan)
    classes = _group_factors(dec)
    factor_classes = []
    pieces = []
    for k, (rep, members) in enumerate(classes):
        label = f"X{k + 1}"
        r = len(members)
        factor_classes.append(FactorClass(
            label=label, representative=rep, multiplicity=r,
            member_indices=tuple(members),
            root_count=len(demazure_roots(rep)),
            dim_aut0=lie_dimension(rep),
            fan_automorphism_order=len(fan_automorphisms(rep))))
        piece = f"Aut_{{{label}}}"
        if r > 1:
            piece = f"{piece}^{r} ⋊ S_{r}"
        pieces.append(piece)
    structure = " × ".join(pieces) if pieces else "1"
    dim = lie_dimension(fan)
    assert dim == fan.rank + len(roots)
    return AutStructureReport(
        torus_rank=fan.rank, roots=roots, root_count=len(roots),
        dim_aut0=dim, fan_automorphism_order=len(autos),
        fan_automorphism_generators=generating_subset(autos, fan.rank),
        factor_classes=tuple(factor_classes), structure_string=structure)


def _block_ranges(dec: Decomposition) -> list:
    ranges = []
    start = 0
    for factor in dec.factors:
        d = factor.fan.rank
        ranges.append(range(start, start + d))
        start += d
    return ranges


def wreath_order_check(fan: Fan) -> bool:
    """Fan-level identity of the wreath decomposition.

    Checks |Aut(fan)| = prod |Aut(factor_i)|^(r_i) * r_i! and that, in
    decomposition coordinates, every fan automorphism is a block
    permutation of isomorphic factors composed with block-wise factor
    automorphisms.
    """
    fan.require_valid()
    if not is_complete(fan):
        raise IncompleteFanError("theorem check needs a complete fan")
    dec = decompose(fan)
    autos = fan_automorphisms(fan)
    classes = _group_factors(dec)
    expected = 1
    for rep, members in classes:
        r = len(members)
        expected *= len(fan_automorphisms(rep)) ** r * math.factorial(r)
    if len(autos) != expected:
        return False
    if not dec.factors:
        return len(autos) == 1
    ranges = _block_ranges(dec)
    class_of = {}
    for k, (_, members) in enumerate(classes):
        for i in members:
            class_of[i] = k
    stacked = mat([row for factor in dec.factors for row in factor.basis])
    inv = invert_unimodular(stacked)
    for auto in autos:
        b = mat_mul(mat_mul(stacked, auto.matrix), inv)
        image = {}
        for i, rows in enumerate(ranges):
            cols = {c for r in rows for c, x in enumerate(b[r]) if x}
            target = next((j for j, rng in enumerate(ranges) if cols <= set(rng)), None)
            if target is None or class_of[target] != class_of[i]:
                return False
            image[i] = target
        if len(set(image.values())) != len(dec.factors):
            return False
    return True
