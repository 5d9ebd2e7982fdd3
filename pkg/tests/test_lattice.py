import random

import pytest
from hypothesis import given, strategies as st

from toricaut.lattice import (
    det,
    hermite_normal_form,
    identity_matrix,
    is_unimodular,
    mat,
    mat_mul,
    pairing,
    primitive,
    sublattice_direct_sum,
    vec_add,
)


def int_matrix(max_dim=4, bound=9):
    dims = st.tuples(st.integers(1, max_dim), st.integers(1, max_dim))
    return dims.flatmap(lambda d: st.lists(
        st.lists(st.integers(-bound, bound), min_size=d[1], max_size=d[1]),
        min_size=d[0], max_size=d[0]).map(mat))


def assert_hnf_shape(h):
    pivot_cols = []
    seen_zero_row = False
    for r in h:
        nonzero = [j for j, x in enumerate(r) if x]
        if not nonzero:
            seen_zero_row = True
            continue
        assert not seen_zero_row, "zero rows must come last"
        j = nonzero[0]
        assert r[j] > 0, "pivots must be positive"
        assert not pivot_cols or j > pivot_cols[-1], "pivot columns must increase"
        pivot_cols.append(j)
    for i, j in enumerate(pivot_cols):
        for r_above in range(i):
            assert 0 <= h[r_above][j] < h[i][j], "entries above pivots must be reduced"


class TestPairing:
    def test_examples(self):
        assert pairing((1, 0), (-1, 2)) == -1
        assert pairing((0, 0), (5, 7)) == 0
        assert pairing((-1, -1), (2, 1)) == -3

    def test_rank_mismatch(self):
        with pytest.raises(ValueError):
            pairing((1, 0), (1, 2, 3))

    @given(st.integers(1, 5).flatmap(lambda n: st.tuples(
        *[st.lists(st.integers(-50, 50), min_size=n, max_size=n)] * 3)))
    def test_bilinear(self, triple):
        p, m1, m2 = map(tuple, triple)
        assert pairing(p, vec_add(m1, m2)) == pairing(p, m1) + pairing(p, m2)


class TestPrimitive:
    def test_examples(self):
        assert primitive((2, 4, -6)) == (1, 2, -3)
        assert primitive((1, 0)) == (1, 0)
        assert primitive((-3, -6)) == (-1, -2)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            primitive((0, 0))

    @given(st.lists(st.integers(-40, 40), min_size=1, max_size=5).filter(any))
    def test_idempotent_and_gcd_one(self, v):
        p = primitive(v)
        assert primitive(p) == p
        from math import gcd
        g = 0
        for x in p:
            g = gcd(g, x)
        assert g == 1


class TestHermiteNormalForm:
    def test_identity(self):
        ident = identity_matrix(3)
        assert hermite_normal_form(ident) == (ident, ident)

    def test_row_swap(self):
        h, u = hermite_normal_form(mat([[0, 1], [1, 0]]))
        assert h == mat([[1, 0], [0, 1]])
        assert u == mat([[0, 1], [1, 0]])

    def test_recompute(self):
        a = mat([[2, 4], [0, 3]])
        h, u = hermite_normal_form(a)
        assert h[0][0] == 2
        assert mat_mul(u, a) == h
        assert abs(det(u)) == 1

    @given(int_matrix())
    def test_identity_and_shape(self, a):
        h, u = hermite_normal_form(a)
        assert mat_mul(u, a) == h
        assert abs(det(u)) == 1
        assert_hnf_shape(h)

    def test_many_seeded_cases(self):
        rng = random.Random(7)
        for _ in range(200):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            a = mat([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
            h, u = hermite_normal_form(a)
            assert mat_mul(u, a) == h
            assert abs(det(u)) == 1
            assert_hnf_shape(h)


class TestUnimodular:
    def test_examples(self):
        assert is_unimodular(((1, 1), (0, 1)))
        assert not is_unimodular(((2, 0), (0, 1)))
        assert is_unimodular(((3, 2), (4, 3)))

    def test_non_square(self):
        with pytest.raises(ValueError):
            is_unimodular(((1, 0, 0), (0, 1, 0)))


class TestSublatticeDirectSum:
    def test_examples(self):
        assert sublattice_direct_sum([[(1, 0)], [(0, 1)]], 2)
        # det of the stacked matrix is 2: an index-2 sublattice, not a split
        assert not sublattice_direct_sum([[(1, 0)], [(1, 2)]], 2)
        assert not sublattice_direct_sum([[(2, 0)], [(0, 1)]], 2)

    def test_wrong_count_is_false(self):
        assert not sublattice_direct_sum([[(1, 0)]], 2)
        assert not sublattice_direct_sum([[(1, 0)], [(0, 1)], [(1, 1)]], 2)
