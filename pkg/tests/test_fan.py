import random

import pytest

from toricaut.fan import (
    Cone,
    DualCone,
    Fan,
    NotStrictlyConvexError,
    cone_from_rays,
    dual_cone,
    is_complete,
    is_simplicial,
    is_smooth,
    product_fan,
    skeleton,
    transform_fan,
    validate_fan,
)
from toricaut.lattice import pairing

from util import random_complete_fan_rank2, random_pointed_cone_rays, random_primitive


class TestConeFromRays:
    def test_first_orthant_self_dual(self):
        c = cone_from_rays([(1, 0), (0, 1)], 2)
        assert set(c.facet_normals) == {(1, 0), (0, 1)}
        assert c.dim == 2

    def test_skew_cone_normals(self):
        c = cone_from_rays([(1, 0), (1, 2)], 2)
        assert set(c.facet_normals) == {(0, 1), (2, -1)}
        for r in c.rays:
            assert sorted(pairing(r, g) for g in c.facet_normals)[0] == 0

    def test_line_rejected(self):
        with pytest.raises(NotStrictlyConvexError):
            cone_from_rays([(1, 0), (-1, 0)], 2)

    def test_zero_cone(self):
        c = cone_from_rays([], 2)
        assert c.rays == () and c.dim == 0
        assert set(c.facet_normals) == {(1, 0), (-1, 0), (0, 1), (0, -1)}

    def test_non_extremal_dropped(self):
        c = cone_from_rays([(1, 0), (1, 1), (0, 1)], 2)
        assert c.rays == ((0, 1), (1, 0))

    def test_imprimitive_normalized(self):
        c = cone_from_rays([(2, 4)], 2)
        assert c.rays == ((1, 2),) and c.dim == 1


class TestDualCone:
    def test_first_orthant(self):
        c = cone_from_rays([(1, 0), (0, 1)], 2)
        d = dual_cone(c)
        assert isinstance(d, Cone) and d.rays == c.rays

    def test_generators_exchange(self):
        d = dual_cone(cone_from_rays([(2, -1), (0, 1)], 2))
        assert set(d.rays) == {(1, 0), (1, 2)}

    def test_zero_cone_marker(self):
        d = dual_cone(cone_from_rays([], 3))
        assert isinstance(d, DualCone) and d.is_full_space

    def test_ray_dual_has_lineality(self):
        d = dual_cone(cone_from_rays([(1, 0)], 2))
        assert isinstance(d, DualCone)
        assert not d.is_full_space and len(d.lineality) == 1

    def test_dual_dual_identity_randomized(self):
        rng = random.Random(11)
        cases = 0
        while cases < 200:
            rank = rng.choice((2, 3))
            rays = random_pointed_cone_rays(rng, rank, rng.randint(rank, rank + 2))
            c = cone_from_rays(rays, rank)
            if c.dim != rank:
                continue
            assert dual_cone(dual_cone(c)).rays == c.rays
            cases += 1


class TestHalfspaceGenerators:
    def test_matches_subset_oracle_randomized(self):
        from toricaut.fan import extreme_rays_by_subset_enumeration, halfspace_cone_generators
        rng = random.Random(271828)
        for _ in range(300):
            n = rng.randint(1, 4)
            rows = []
            for _ in range(rng.randint(0, 6)):
                v = tuple(rng.randint(-3, 3) for _ in range(n))
                if any(v):
                    rows.append(v)
            assert halfspace_cone_generators(rows, n) == \
                extreme_rays_by_subset_enumeration(rows, n), (n, rows)

    def test_matches_subset_oracle_degenerate(self):
        # systems with opposite pairs force implicit equalities, the
        # delicate case for the double description adjacency test
        from toricaut.fan import extreme_rays_by_subset_enumeration, halfspace_cone_generators
        rng = random.Random(161803)
        for _ in range(200):
            n = rng.randint(2, 4)
            rows = []
            for _ in range(rng.randint(1, 2)):
                v = random_primitive(rng, n, bound=2)
                rows += [v, tuple(-x for x in v)]
            for _ in range(rng.randint(0, 4)):
                rows.append(random_primitive(rng, n, bound=3))
            assert halfspace_cone_generators(rows, n) == \
                extreme_rays_by_subset_enumeration(rows, n), (n, rows)


class TestValidateFan:
    def test_p2_valid(self, fans):
        assert validate_fan(fans["P2"]).ok

    def test_intersection_not_face(self):
        fan = Fan(2, [(1, 0), (0, 1), (1, 1), (-1, 2)], [(0, 1), (2, 3)])
        report = validate_fan(fan)
        assert not report.ok
        assert {e.code for e in report.entries} == {"intersection_not_face"}

    def test_trivial_fan_valid(self):
        assert validate_fan(Fan(2, [], [])).ok

    def test_imprimitive_ray_reported(self):
        report = validate_fan(Fan(2, [(2, 4), (0, 1), (-1, -3)], [(0, 1), (1, 2), (2, 0)]))
        assert any(e.code == "ray_not_primitive" for e in report.entries)

    def test_duplicate_ray_reported(self):
        report = validate_fan(Fan(1, [(1,), (1,), (-1,)], [(0,), (1,), (2,)]))
        assert any(e.code == "duplicate_ray" for e in report.entries)

    def test_line_cone_reported(self):
        report = validate_fan(Fan(2, [(1, 0), (-1, 0)], [(0, 1)]))
        assert any(e.code == "cone_not_strictly_convex" for e in report.entries)

    def test_non_extremal_cone_ray_reported(self):
        report = validate_fan(Fan(2, [(1, 0), (1, 1), (0, 1)], [(0, 1, 2)]))
        assert any(e.code == "cone_ray_not_extremal" for e in report.entries)

    def test_unused_ray_reported(self):
        report = validate_fan(Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1)]))
        assert any(e.code == "unused_ray" for e in report.entries)


class TestCompleteness:
    def test_p1_complete(self, fans):
        assert is_complete(fans["P1"])

    def test_affine_plane_not_complete(self):
        assert not is_complete(Fan(2, [(1, 0), (0, 1)], [(0, 1)]))

    def test_f1_complete(self, fans):
        assert is_complete(fans["F1"])

    def test_corpus_complete(self, fans):
        for fan in fans.values():
            assert is_complete(fan)

    def test_sampling_cross_check(self, fans):
        rng = random.Random(23)
        for name in ("P2", "F2", "P112", "P3"):
            fan = fans[name]
            for _ in range(100):
                assert fan.contains_point(random_primitive(rng, fan.rank))
        half = Fan(2, [(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
        assert not is_complete(half)
        assert any(not half.contains_point(random_primitive(rng, 2))
                   for _ in range(100))

    def test_rank0_trivial_fan_complete(self):
        assert is_complete(Fan(0, [], []))


class TestSmoothSimplicial:
    def test_p2_smooth(self, fans):
        assert is_smooth(fans["P2"]) and is_simplicial(fans["P2"])

    def test_p112_simplicial_not_smooth(self, fans):
        assert is_simplicial(fans["P112"])
        assert not is_smooth(fans["P112"])

    def test_trivial_smooth(self):
        assert is_smooth(Fan(2, [], []))

    def test_hirzebruch_smooth(self, fans):
        for a in range(4):
            assert is_smooth(fans[f"F{a}"])


class TestProductFan:
    def test_p1_squared(self, fans):
        fan = product_fan(fans["P1"], fans["P1"])
        assert len(fan.rays) == 4 and len(fan.max_cones) == 4
        assert set(fan.rays) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
        assert fan == fans["F0"]

    def test_product_with_incomplete_rank1(self, fans):
        fan = product_fan(fans["P1"], Fan(1, [], []))
        assert len(fan.rays) == 2
        assert all(len(c) == 1 for c in fan.max_cones)
        assert not is_complete(fan)

    def test_p1_times_p2(self, fans):
        fan = product_fan(fans["P1"], fans["P2"])
        assert len(fan.rays) == 5 and len(fan.max_cones) == 6
        assert all(fan.cone(c).dim == 3 for c in fan.max_cones)

    def test_completeness_iff_factors(self, fans):
        rng = random.Random(5)
        complete = random_complete_fan_rank2(rng)
        incomplete = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
        assert is_complete(product_fan(complete, fans["P1"]))
        assert not is_complete(product_fan(complete, incomplete))
        assert not is_complete(product_fan(incomplete, incomplete))

    def test_rank0_product_is_identity(self, fans):
        assert product_fan(fans["P2"], Fan(0, [], [])) == fans["P2"]


class TestSkeleton:
    def test_p2(self, fans):
        assert len(skeleton(fans["P2"], 1)) == 3
        assert len(skeleton(fans["P2"], 2)) == 3
        assert len(skeleton(fans["P2"], 0)) == 1

    def test_product_rays_not_products(self, fans):
        fan = product_fan(fans["P1"], fans["P1"])
        rays = skeleton(fan, 1)
        assert len(rays) == 4
        for c in rays:
            (r,) = c.rays
            assert r[:1] == (0,) or r[1:] == (0,)

    def test_out_of_range(self, fans):
        with pytest.raises(ValueError):
            skeleton(fans["P2"], 3)


class TestInvariants:
    def test_cones_pass_own_invariants(self, fans):
        from toricaut.lattice import is_primitive
        for fan in fans.values():
            for idx in fan.all_cones:
                cone = fan.cone(idx)
                assert all(is_primitive(r) for r in cone.rays)
                assert all(pairing(r, g) >= 0
                           for r in cone.rays for g in cone.facet_normals)

    def test_transform_roundtrip(self, fans):
        from util import random_unimodular
        from toricaut.lattice import invert_unimodular
        rng = random.Random(3)
        for name in ("P2", "F1", "P1xP2"):
            fan = fans[name]
            u = random_unimodular(rng, fan.rank)
            assert transform_fan(transform_fan(fan, u), invert_unimodular(u)) == fan
