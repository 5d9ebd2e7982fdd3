"""Rational polyhedral cones and complete fans.

Cones carry both a generator description (extremal primitive rays) and an
inequality description (facet normals; for a cone of less than full
dimension the normals include +/- pairs cutting out its linear span, so the
inequality system always defines the cone exactly).  Fans are immutable
after construction and every query is pure, so concurrent reads are safe.

Dual descriptions are computed exactly by the double description method
(constraints inserted one at a time, adjacent ray pairs combined, with a
purely combinatorial adjacency test); a rank (n-1) subset-enumeration
variant is kept alongside as an independent reference for the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence, Union

from .lattice import (
    Mat,
    Vec,
    identity_matrix,
    is_primitive,
    mat,
    minors_gcd,
    pairing,
    primitive,
    rank_of,
    right_kernel_basis,
    solve_left,
    vec,
    vec_mat,
    vec_neg,
)


class NotStrictlyConvexError(ValueError):
    """Raised when a generator set spans a cone containing a line."""


class FanValidationError(ValueError):
    """Raised when an operation requires a valid fan but validation failed."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"invalid fan: {report.summary()}")


class IncompleteFanError(ValueError):
    """Raised when an operation requires a complete fan."""


@dataclass(frozen=True)
class Cone:
    """Strictly convex rational polyhedral cone in N_R.

    rays: primitive extremal generators, sorted.
    facet_normals: vectors in M with cone = {x : <x, g> >= 0 for all g};
        includes +/- pairs spanning the annihilator of the cone's span when
        the cone is not full dimensional.
    """

    rank: int
    rays: Mat
    facet_normals: Mat
    dim: int

    def contains(self, v: Sequence[int]) -> bool:
        return all(pairing(v, g) >= 0 for g in self.facet_normals)

    def dual_contains(self, m: Sequence[int]) -> bool:
        """Membership of m in the dual cone (all generators pair >= 0)."""
        return all(pairing(r, m) >= 0 for r in self.rays)


@dataclass(frozen=True)
class DualCone:
    """Dual of a non-full-dimensional cone: full space or has lineality.

    generators span the pointed part; the lineality basis spans the
    largest linear subspace contained in the dual.
    """

    rank: int
    generators: Mat
    lineality: Mat

    @property
    def is_full_space(self) -> bool:
        return len(self.lineality) == self.rank


def _initial_simplex_rays(a0: Mat, d: int) -> list:
    """Extreme rays of {y : A0 y >= 0} for invertible d x d A0: the scaled
    columns of the inverse (A0 r_i is a positive multiple of e_i)."""
    inv = solve_left(a0, identity_matrix(d))
    assert inv is not None
    rays = []
    for i in range(d):
        col = [inv[r][i] for r in range(d)]
        denom = 1
        for x in col:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
        rays.append(primitive(tuple(int(x * denom) for x in col)))
    return rays


def _pointed_extreme_rays(rows: Sequence[Vec], d: int) -> list:
    """Double description: extreme rays of a pointed cone {y : <a,y> >= 0}.

    Starts from a simplicial subcone cut out by d independent constraints
    and inserts the remaining constraints one at a time, combining only
    adjacent positive/negative ray pairs (exact combinatorial adjacency:
    no third ray is active on the common active set).
    """
    if d == 0:
        return []
    idx: list = []
    cur: list = []
    for i, a in enumerate(rows):
        if len(idx) == d:
            break
        if rank_of(cur + [a]) > len(cur):
            idx.append(i)
            cur.append(a)
    assert len(idx) == d, "constraint rows of a pointed cone span the space"
    order = idx + [i for i in range(len(rows)) if i not in idx]

    def mask_of(ray: Vec, upto: int) -> int:
        m = 0
        for j in range(upto):
            if pairing(rows[order[j]], ray) == 0:
                m |= 1 << j
        return m

    current = [(r, mask_of(r, d)) for r in _initial_simplex_rays(mat(cur), d)]
    for step in range(d, len(order)):
        a = rows[order[step]]
        vals = [(r, m, pairing(a, r)) for r, m in current]
        neg = [(r, m, v) for r, m, v in vals if v < 0]
        if not neg:
            current = [(r, m | ((1 << step) if v == 0 else 0)) for r, m, v in vals]
            continue
        pos = [(r, m, v) for r, m, v in vals if v > 0]
        new = [(r, m) for r, m, v in vals if v > 0]
        new += [(r, m | (1 << step)) for r, m, v in vals if v == 0]
        seen = {r for r, _ in new}
        for rp, mp, vp in pos:
            for rn, mn, vn in neg:
                common = mp & mn
                adjacent = not any((mr & common) == common
                                   for r, mr, _ in vals if r is not rp and r is not rn)
                if not adjacent:
                    continue
                w = primitive(tuple(vp * x - vn * y for x, y in zip(rn, rp)))
                if w not in seen:
                    seen.add(w)
                    new.append((w, mask_of(w, step + 1)))
        current = new
    return sorted(r for r, _ in current)


def halfspace_cone_generators(normals: Sequence[Sequence[int]], n: int) -> tuple[Mat, Mat]:
    """Generators of {x in R^n : <a, x> >= 0 for every a in normals}.

    Returns (extreme_rays, lineality_basis); the cone equals the sum of
    cone(extreme_rays) and span(lineality_basis).  Extreme rays are
    primitive, deduplicated and sorted.  When the cone is not pointed the
    pointed part is computed inside the orthogonal complement of the
    lineality space, which keeps every step in exact lattice coordinates.
    """
    rows = []
    seen = set()
    for a in normals:
        a = vec(a)
        if any(a) and a not in seen:
            seen.add(a)
            rows.append(a)
    lin = right_kernel_basis(rows, n)
    d = n - len(lin)
    if d == 0:
        return (), lin
    if lin:
        basis = right_kernel_basis(lin, n)
        assert len(basis) == d
        proj = [tuple(pairing(b, a) for b in basis) for a in rows]
        ext = [primitive(vec_mat(y, basis)) for y in _pointed_extreme_rays(proj, d)]
        return tuple(sorted(ext)), lin
    return tuple(_pointed_extreme_rays(rows, n)), lin


def extreme_rays_by_subset_enumeration(normals: Sequence[Sequence[int]], n: int) -> tuple[Mat, Mat]:
    """Reference implementation of halfspace_cone_generators that kernels
    every rank n-1 constraint subsystem; kept as an independent oracle."""
    rows = []
    seen = set()
    for a in normals:
        a = vec(a)
        if any(a) and a not in seen:
            seen.add(a)
            rows.append(a)
    lin = right_kernel_basis(rows, n)
    need = n - 1 - len(lin)
    if need < 0:
        return (), lin
    found = set()
    for sub in combinations(rows, need):
        ker = right_kernel_basis(list(sub) + list(lin), n)
        if len(ker) != 1:
            continue
        v = primitive(ker[0])
        for cand in (v, vec_neg(v)):
            if cand not in found and all(pairing(a, cand) >= 0 for a in rows):
                found.add(cand)
    return tuple(sorted(found)), lin


def cone_from_rays(rays: Iterable[Sequence[int]], rank: int) -> Cone:
    """Build a cone from generators, computing its dual description.

    Non-extremal generators are discarded; the empty set gives the zero
    cone.  Raises NotStrictlyConvexError if the generators span a line.
    """
    prim = []
    seen = set()
    for r in rays:
        r = vec(r)
        if len(r) != rank:
            raise ValueError("ray of wrong rank")
        if not any(r):
            continue
        p = primitive(r)
        if p not in seen:
            seen.add(p)
            prim.append(p)
    dual_gens, dual_lin = halfspace_cone_generators(prim, rank)
    if rank_of(list(dual_gens) + list(dual_lin)) < rank:
        raise NotStrictlyConvexError("not strictly convex: cone contains a line")
    normals = set(dual_gens)
    for b in dual_lin:
        normals.add(b)
        normals.add(vec_neg(b))
    normals = tuple(sorted(normals))
    ext, ext_lin = halfspace_cone_generators(normals, rank)
    assert not ext_lin and set(ext) <= seen
    return Cone(rank=rank, rays=tuple(sorted(ext)), facet_normals=normals,
                dim=rank - len(dual_lin))


def dual_cone(c: Cone) -> Union[Cone, DualCone]:
    """Dual cone in M.

    For a full-dimensional cone the dual is strictly convex and is
    returned as a Cone whose generators are the facet normals of the
    input.  Otherwise the dual contains the annihilator of the input's
    span and a DualCone marker is returned (for the zero cone this is all
    of M_R).
    """
    if c.dim == c.rank:
        return cone_from_rays(c.facet_normals, c.rank)
    gens, lin = halfspace_cone_generators(c.rays, c.rank)
    return DualCone(rank=c.rank, generators=gens, lineality=lin)


@dataclass(frozen=True)
class ValidationEntry:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[ValidationEntry, ...]

    @property
    def ok(self) -> bool:
        return not self.entries

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(e.message for e in self.entries)


class Fan:
    """A fan in N_R, stored as global rays plus maximal cones by ray index.

    Construction normalizes to a canonical form: rays sorted
    lexicographically, cone index tuples sorted, cones contained in other
    listed cones absorbed.  Ray indices out of range are a hard error;
    everything mathematical (primitivity, strict convexity, the fan
    axioms) is checked by validate() and reported, not raised.
    """

    def __init__(self, rank: int, rays: Iterable[Sequence[int]],
                 max_cones: Iterable[Iterable[int]]):
        self.rank = int(rank)
        ray_list = [vec(r) for r in rays]
        for r in ray_list:
            if len(r) != self.rank:
                raise ValueError(f"ray {r} does not have rank {self.rank}")
        cones = []
        for c in max_cones:
            idx = tuple(sorted({int(i) for i in c}))
            for i in idx:
                if not 0 <= i < len(ray_list):
                    raise ValueError(f"ray index {i} out of range")
            cones.append(idx)
        order = sorted(range(len(ray_list)), key=lambda i: (ray_list[i], i))
        relabel = {old: new for new, old in enumerate(order)}
        self.rays: Mat = tuple(ray_list[i] for i in order)
        remapped = sorted({tuple(sorted(relabel[i] for i in c)) for c in cones})
        maximal = [c for c in remapped if not any(set(c) < set(d) for d in remapped)]
        self.max_cones: tuple = tuple(maximal) if maximal else ((),)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Fan) and self.rank == other.rank
                and self.rays == other.rays and self.max_cones == other.max_cones)

    def __hash__(self) -> int:
        return hash((self.rank, self.rays, self.max_cones))

    def __repr__(self) -> str:
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    def cone(self, idx: Sequence[int]) -> Cone:
        """The cone spanned by the given ray indices."""
        idx = tuple(sorted(idx))
        cache = self._cone_cache
        if idx not in cache:
            cache[idx] = cone_from_rays([self.rays[i] for i in idx], self.rank)
        return cache[idx]

    @cached_property
    def _cone_cache(self) -> dict:
        return {}

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_fan(self)

    def require_valid(self) -> None:
        if not self.validation.ok:
            raise FanValidationError(self.validation)

    @cached_property
    def all_cones(self) -> dict:
        """Face closure: map from sorted ray-index tuple to cone dimension."""
        out = {(): 0}
        for c in self.max_cones:
            for f in self._faces_of(c):
                if f not in out:
                    out[f] = rank_of([self.rays[i] for i in f])
        return out

    def _faces_of(self, cidx: tuple) -> set:
        cone = self.cone(cidx)
        local = [self.rays[i] for i in cidx]
        k = len(cidx)
        faces = set()
        for size in range(k + 1):
            for sub in combinations(range(k), size):
                chosen = [local[i] for i in sub]
                active = [g for g in cone.facet_normals
                          if all(pairing(r, g) == 0 for r in chosen)]
                closure = tuple(i for i in range(k)
                                if all(pairing(local[i], g) == 0 for g in active))
                if closure == sub:
                    faces.add(tuple(cidx[i] for i in sub))
        return faces

    @cached_property
    def faces_by_max_cone(self) -> dict:
        return {c: self._faces_of(c) for c in self.max_cones}

    def cones_of_dim(self, d: int) -> tuple:
        return tuple(sorted(c for c, dim in self.all_cones.items() if dim == d))

    def contains_point(self, v: Sequence[int]) -> bool:
        """Does the support of the fan contain v?"""
        return any(self.cone(c).contains(v) for c in self.max_cones)


def validate_fan(fan: Fan) -> ValidationReport:
    """Check the fan axioms; violations become report entries, not errors."""
    entries = []
    for i, r in enumerate(fan.rays):
        if not any(r):
            entries.append(ValidationEntry("zero_ray", f"ray {i} is the zero vector"))
        elif not is_primitive(r):
            entries.append(ValidationEntry("ray_not_primitive",
                                           f"ray {i} = {list(r)} is not primitive"))
    by_value = {}
    for i, r in enumerate(fan.rays):
        by_value.setdefault(r, []).append(i)
    for r, idxs in by_value.items():
        if len(idxs) > 1:
            entries.append(ValidationEntry("duplicate_ray",
                                           f"rays {idxs} duplicate {list(r)}"))
    used = {i for c in fan.max_cones for i in c}
    for i in range(len(fan.rays)):
        if i not in used:
            entries.append(ValidationEntry("unused_ray",
                                           f"ray {i} lies in no maximal cone"))
    if entries:
        return ValidationReport(tuple(entries))

    cones = {}
    for c in fan.max_cones:
        try:
            cone = fan.cone(c)
        except NotStrictlyConvexError:
            entries.append(ValidationEntry("cone_not_strictly_convex",
                                           f"cone {list(c)} contains a line"))
            continue
        listed = {fan.rays[i] for i in c}
        if set(cone.rays) != listed:
            extra = sorted(listed - set(cone.rays))
            entries.append(ValidationEntry(
                "cone_ray_not_extremal",
                f"cone {list(c)}: rays {extra} are not extremal"))
            continue
        cones[c] = cone
    if entries:
        return ValidationReport(tuple(entries))

    for a, b in combinations(fan.max_cones, 2):
        inter, lin = halfspace_cone_generators(
            cones[a].facet_normals + cones[b].facet_normals, fan.rank)
        assert not lin
        for c in (a, b):
            if not _is_face_of(inter, cones[c]):
                entries.append(ValidationEntry(
                    "intersection_not_face",
                    f"intersection of cones {list(a)} and {list(b)} is not a face of {list(c)}"))
    return ValidationReport(tuple(entries))


def _is_face_of(face_rays: Sequence[Vec], cone: Cone) -> bool:
    """Is the cone spanned by face_rays (a subset of cone) a face of cone?"""
    active = [g for g in cone.facet_normals
              if all(pairing(r, g) == 0 for r in face_rays)]
    minimal = {r for r in cone.rays if all(pairing(r, g) == 0 for g in active)}
    return minimal == set(face_rays)


def is_complete(fan: Fan) -> bool:
    """Support equals N_R, by the facet-pairing criterion.

    All maximal cones must be full dimensional, every (n-1)-dimensional
    face of a maximal cone must be a face of exactly two maximal cones,
    and the facet-adjacency graph must be connected.
    """
    fan.require_valid()
    n = fan.rank
    for c in fan.max_cones:
        if fan.cone(c).dim != n:
            return False
    if n == 0:
        return True
    ridge_owners: dict = {}
    for c in fan.max_cones:
        for f in fan.faces_by_max_cone[c]:
            if fan.all_cones[f] == n - 1:
                ridge_owners.setdefault(f, []).append(c)
    if any(len(owners) != 2 for owners in ridge_owners.values()):
        return False
    adj = {c: set() for c in fan.max_cones}
    for owners in ridge_owners.values():
        a, b = owners
        adj[a].add(b)
        adj[b].add(a)
    seen = {fan.max_cones[0]}
    frontier = [fan.max_cones[0]]
    while frontier:
        seen.update(nxt := [b for c in frontier for b in adj[c] if b not in seen])
        frontier = nxt
    return len(seen) == len(fan.max_cones)


def is_simplicial(fan: Fan) -> bool:
    """Every cone's rays are linearly independent."""
    fan.require_valid()
    return all(len(c) == fan.cone(c).dim for c in fan.max_cones)


def is_smooth(fan: Fan) -> bool:
    """Every cone's rays extend to a Z-basis of N."""
    fan.require_valid()
    for c in fan.max_cones:
        rays = [fan.rays[i] for i in c]
        if len(c) != fan.cone(c).dim or minors_gcd(mat(rays), len(c)) != 1:
            return False
    return True


def product_fan(f1: Fan, f2: Fan) -> Fan:
    """Fan of the product: rays embed block-wise, cones are all products."""
    f1.require_valid()
    f2.require_valid()
    n1, n2 = f1.rank, f2.rank
    rays = [r + (0,) * n2 for r in f1.rays] + [(0,) * n1 + r for r in f2.rays]
    k1 = len(f1.rays)
    cones = [tuple(c1) + tuple(i + k1 for i in c2)
             for c1 in f1.max_cones for c2 in f2.max_cones]
    return Fan(n1 + n2, rays, cones)


def skeleton(fan: Fan, i: int) -> tuple[Cone, ...]:
    """All i-dimensional cones of the face closure, canonically sorted."""
    fan.require_valid()
    if not 0 <= i <= fan.rank:
        raise ValueError(f"skeleton index {i} out of range 0..{fan.rank}")
    return tuple(fan.cone(c) for c in fan.cones_of_dim(i))


def transform_fan(fan: Fan, u: Mat) -> Fan:
    """Image fan under a unimodular lattice map (rays act on the right)."""
    u = mat(u)
    from .lattice import is_unimodular
    if not is_unimodular(u):
        raise ValueError("fan transforms must be unimodular")
    return Fan(fan.rank, [vec_mat(r, u) for r in fan.rays], fan.max_cones)
