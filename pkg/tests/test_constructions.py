"""Generator tests with enumeration oracles.

The concyclicity oracle used against sphere_condition_check is independent
of the implementation: four points lie on a circle iff they span a 2-flat
and satisfy Ptolemy's equality for some diagonal pairing.  With squared
distances rational, sqrt(z) = sqrt(x) + sqrt(y) is decided exactly via
z - x - y >= 0 and (z - x - y)^2 == 4xy.
"""

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incidence_lab._linalg import matrix_rank
from incidence_lab.constructions import (
    GENERATORS,
    GeneratorSpec,
    hyperplane_dual,
    orthogonal_circles_R4,
    sphere_condition_check,
    st_grid,
    unit_distance_instance,
    unit_pair_count,
)
from incidence_lab.predicates import edge_count, edges, is_kkk_free


def dist2(p, q):
    return sum((a - b) ** 2 for a, b in zip(p, q))


def sqrt_sum_equals(z, x, y):
    """Exact test of sqrt(z) == sqrt(x) + sqrt(y) for rationals >= 0."""
    gap = z - x - y
    return gap >= 0 and gap * gap == 4 * x * y


def concyclic4(points):
    """Ptolemy oracle: do these four points lie on a common circle?"""
    base = points[0]
    spans = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    if matrix_rank(spans) != 2:
        return False
    a, b, c, d = points
    pairings = [
        (dist2(a, c) * dist2(b, d), dist2(a, b) * dist2(c, d), dist2(a, d) * dist2(b, c)),
        (dist2(a, b) * dist2(c, d), dist2(a, c) * dist2(b, d), dist2(a, d) * dist2(b, c)),
        (dist2(a, d) * dist2(b, c), dist2(a, b) * dist2(c, d), dist2(a, c) * dist2(b, d)),
    ]
    return any(sqrt_sum_equals(z, x, y) for z, x, y in pairings)


class TestStGrid:
    def test_smallest_grid(self):
        inst = st_grid(1)
        assert (inst.m, inst.n) == (2, 1)
        assert edges(inst) == [(1, 0)]  # point (1,2) on line y = x + 1

    def test_edge_count_matches_hand_loop(self):
        inst = st_grid(2)
        manual = sum(
            1 for (x, y) in inst.P for (s, t) in inst.Q if y == s * x + t
        )
        assert manual == 16
        assert edge_count(inst) == 16

    @given(st.integers(min_value=1, max_value=4))
    @settings(max_examples=8, deadline=None)
    def test_fourth_power_law(self, N):
        inst = st_grid(N)
        assert inst.m == 2 * N ** 3
        assert inst.n == N ** 3
        assert edge_count(inst) == N ** 4

    def test_every_line_meets_exactly_N_points(self):
        N = 3
        inst = st_grid(N)
        per_line = {}
        for i, j in edges(inst):
            per_line[j] = per_line.get(j, 0) + 1
        assert all(v == N for v in per_line.values())
        assert len(per_line) == inst.n

    def test_k22_free(self):
        verdict = is_kkk_free(st_grid(3), 2)
        assert verdict.is_true()

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            st_grid(0)


class TestHyperplaneDual:
    def test_two_edges(self):
        inst = hyperplane_dual([(1, 0), (0, 1)], [(1, 1)], 2)
        assert edge_count(inst) == 2

    def test_zero_vectors_give_no_edges(self):
        inst = hyperplane_dual([(1, 0), (0, 1)], [(0, 0), (0, 0)], 2)
        assert edge_count(inst) == 0

    def test_random_d3_matches_dot_product_loop(self):
        rng = random.Random(314)
        pts = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(25)]
        planes = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(25)]
        inst = hyperplane_dual(pts, planes, 3)
        manual = sum(
            1
            for p in pts
            for h in planes
            if sum(Fraction(a) * b for a, b in zip(p, h)) == 1
        )
        assert edge_count(inst) == manual
        assert manual > 0  # the box is small enough to hit pairings


class TestOrthogonalCircles:
    def test_points_live_on_the_two_circles(self):
        P = orthogonal_circles_R4(10)
        half = len(P) // 2
        for p in P[:half]:
            assert p[0] ** 2 + p[1] ** 2 == Fraction(1, 2)
            assert p[2] == p[3] == 0
        for p in P[half:]:
            assert p[2] ** 2 + p[3] ** 2 == Fraction(1, 2)
            assert p[0] == p[1] == 0
        assert len(set(P)) == 10

    def test_cross_pairs_all_unit(self):
        P = orthogonal_circles_R4(12)
        half = len(P) // 2
        for p in P[:half]:
            for q in P[half:]:
                assert dist2(p, q) == 1

    def test_cross_pair_count_quarter_square(self):
        # paper-anchored count: at least n^2/4, met with equality by cross pairs
        for n in (2, 8):
            P = orthogonal_circles_R4(n)
            half = n // 2
            cross = sum(
                1 for p in P[:half] for q in P[half:] if dist2(p, q) == 1
            )
            assert cross == (n // 2) ** 2
            assert unit_pair_count(P) >= n * n // 4

    def test_odd_or_tiny_rejected(self):
        with pytest.raises(ValueError):
            orthogonal_circles_R4(7)
        with pytest.raises(ValueError):
            orthogonal_circles_R4(0)


class TestUnitDistanceInstance:
    def test_single_pair(self):
        inst = unit_distance_instance([(0, 0), (1, 0)])
        assert edge_count(inst) == 2  # both orientations

    def test_three_by_three_grid(self):
        pts = [(x, y) for x in range(3) for y in range(3)]
        inst = unit_distance_instance(pts)
        assert unit_pair_count(pts) == 12
        assert edge_count(inst) == 24

    def test_symmetry(self):
        pts = [(0, 0), (1, 0), (Fraction(1, 2), Fraction(1, 2))]
        got = set(edges(unit_distance_instance(pts)))
        assert got == {(j, i) for i, j in got}

    def test_circle_corpus_count(self):
        inst = unit_distance_instance(orthogonal_circles_R4(8))
        assert edge_count(inst) >= 32  # 2 * (n/2)^2 directed cross pairs

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            unit_distance_instance([])


class TestSphereCondition:
    def test_zero_sphere_holds_two_points(self):
        # d = 3: a 0-sphere is a point pair, so k = 3 never violated
        verdict = sphere_condition_check([(0, 0, 0), (1, 0, 0), (5, 3, 2)], 3)
        assert verdict.is_true()

    def test_orthogonal_circles_violate_k4(self):
        P = orthogonal_circles_R4(8)
        verdict = sphere_condition_check(P, 4)
        assert verdict.is_false()
        assert len(verdict.witness) >= 4
        witness_points = [P[i] for i in verdict.witness[:4]]
        assert concyclic4(witness_points)

    def test_small_circle_count_passes_k4(self):
        # n = 4 puts only two points on each circle; no four concyclic
        P = orthogonal_circles_R4(4)
        assert sphere_condition_check(P, 4).is_true()
        for quad in combinations(P, 4):
            assert not concyclic4(list(quad))

    def test_random_d4_agrees_with_ptolemy_oracle(self):
        rng = random.Random(2718)
        P = [tuple(Fraction(rng.randint(-6, 6), 2) for _ in range(4)) for _ in range(9)]
        P = list(dict.fromkeys(P))
        verdict = sphere_condition_check(P, 4)
        brute = any(concyclic4(list(quad)) for quad in combinations(P, 4))
        assert verdict.exact
        assert verdict.value == (not brute)

    def test_planted_circle_detected(self):
        ring = orthogonal_circles_R4(8)[:4]
        shifted = [(x + 3, y - 2, Fraction(1, 3), 7) for (x, y, _, _) in ring]
        noise = [(0, 0, 0, 0), (1, 2, 3, 4), (2, 2, 0, 1)]
        verdict = sphere_condition_check(shifted + noise, 4)
        assert verdict.is_false()
        assert set(verdict.witness) == {0, 1, 2, 3}

    def test_budget_exhaustion_is_undecided(self):
        rng = random.Random(11)
        P = [tuple(rng.randint(-9, 9) for _ in range(4)) for _ in range(9)]
        verdict = sphere_condition_check(P, 4, subset_budget=3)
        assert verdict.is_undecided()
        assert verdict.explored == 3

    def test_validation(self):
        with pytest.raises(ValueError, match="dimension"):
            sphere_condition_check([(1, 2), (3, 4)], 3)
        with pytest.raises(ValueError, match="k >= d-1"):
            sphere_condition_check([(0, 0, 0, 0)], 2)
        assert sphere_condition_check([], 5).is_true()
        assert sphere_condition_check([(0, 0, 0)] * 2 + [(1, 1, 1)], 9).is_true()


class TestGeneratorSpec:
    def test_registry_covers_documented_names(self):
        assert {"st_grid", "unit_r4", "unit_grid", "hyperplane_dual"} <= set(GENERATORS)

    def test_build_st_grid(self):
        inst = GeneratorSpec("st_grid", {"N": 3}).build()
        assert inst.m == 54

    def test_build_unit_r4(self):
        inst = GeneratorSpec("unit_r4", {"n": 8}).build()
        assert inst.m == 8
        assert edge_count(inst) >= 32

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError, match="unknown generator"):
            GeneratorSpec("perpetual_motion", {})

    def test_nonpositive_param_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            GeneratorSpec("st_grid", {"N": 0})

    def test_hyperplane_dual_seeded_determinism(self):
        a = GeneratorSpec("hyperplane_dual", {"m": 10, "n": 10, "d": 3}, seed=5)
        b = GeneratorSpec("hyperplane_dual", {"m": 10, "n": 10, "d": 3}, seed=5)
        assert a.build().P == b.build().P
        assert a.build().Q == b.build().Q

    def test_with_params(self):
        spec = GeneratorSpec("st_grid", {"N": 2}).with_params(N=4)
        assert spec.build().m == 2 * 4 ** 3
