"""Cutting tests: exact quadratic numbers, trapezoid structure, crossing counts.

Frozen cell counts (6 for two crossing lines, 5 for one circle, 14 for two
overlapping circles) were derived by hand from the trapezoidal decomposition:
pieces per slab, then merges across unblocked boundaries with equal arc pairs.
"""

import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incidence_lab.cutting import (
    Circle,
    Line,
    QNum,
    _build_decomposition,
    _mark_curve,
    as_qnum,
    default_sample_size,
    planar_cutting,
    q_cmp,
    rational_above,
    rational_below,
    rational_between,
    sqrt_fraction,
)

getcontext().prec = 60


def decimal_value(q):
    return (
        Decimal(q.rat.numerator) / Decimal(q.rat.denominator)
        + Decimal(q.coef.numerator) / Decimal(q.coef.denominator)
        * Decimal(q.rad).sqrt()
    )


def curve_points(curve, xs):
    """Exact points of the curve at the given rational abscissae."""
    pts = []
    for x in xs:
        if isinstance(curve, Line):
            if curve.is_vertical:
                continue
            pts.append((x, as_qnum(curve.y_at(x))))
        else:
            depth = curve.r2 - (x - curve.cx) ** 2
            if depth <= 0:
                continue
            root = sqrt_fraction(depth)
            pts.append((x, QNum(curve.cy) - root))
            pts.append((x, QNum(curve.cy) + root))
    return pts


def assert_probe_complete(result, curves, xs):
    """Every on-curve probe point must land in a cell counted as crossed."""
    dec = result.decomposition
    marks = []
    for curve in curves:
        hit = set()
        _mark_curve(curve, dec, hit)
        marks.append(hit)
    for ci, curve in enumerate(curves):
        for x, y in curve_points(curve, xs):
            cell = dec.locate(x, y)
            if cell is None:
                continue  # on a wall or a sampled curve
            assert cell in marks[ci], (ci, x)
    return marks


class TestQNum:
    def test_perfect_square_folds_to_rational(self):
        q = QNum(1, 2, 9)
        assert q.is_rational and q.rat == 7
        assert sqrt_fraction(Fraction(9, 4)) == Fraction(3, 2)

    def test_zero_coef_drops_radical(self):
        assert QNum(3, 0, 7).rad == 0

    def test_negative_radicand_rejected(self):
        with pytest.raises(ValueError):
            QNum(0, 1, -2)

    def test_equal_values_in_unlike_form(self):
        assert q_cmp(sqrt_fraction(8), sqrt_fraction(2) * 2) == 0
        assert sqrt_fraction(8) == sqrt_fraction(2) * 2

    def test_cross_radical_ordering(self):
        # sqrt2 + 1 = 2.4142... < sqrt3 + 7/10 = 2.4320...
        assert q_cmp(sqrt_fraction(2) + 1, sqrt_fraction(3) + Fraction(7, 10)) < 0
        assert q_cmp(sqrt_fraction(3), sqrt_fraction(2)) > 0
        assert q_cmp(-sqrt_fraction(2), QNum(-1)) < 0

    def test_same_radical_arithmetic(self):
        a = QNum(1, 2, 5)
        b = QNum(-3, 1, 5)
        assert q_cmp(a + b, QNum(-2, 3, 5)) == 0
        # (1 + 2 sqrt5)(-3 + sqrt5) = -3 + sqrt5 - 6 sqrt5 + 10 = 7 - 5 sqrt5
        assert q_cmp(a * b, QNum(7, -5, 5)) == 0

    def test_unlike_radical_sum_rejected(self):
        with pytest.raises(ArithmeticError):
            sqrt_fraction(2) + sqrt_fraction(3)
        with pytest.raises(ArithmeticError):
            sqrt_fraction(2) * sqrt_fraction(3)

    def test_division_by_rational(self):
        q = QNum(3, 2, 7) / 2
        assert q.rat == Fraction(3, 2) and q.coef == 1 and q.rad == 7

    def test_sign_with_cancellation(self):
        # 7 - 4 sqrt3 = 0.0718 > 0 while 7 - 5 sqrt2 = -0.0711 < 0
        assert QNum(7, -4, 3).sign() > 0
        assert QNum(7, -5, 2).sign() < 0
        assert QNum(2, -1, 4).sign() == 0

    def test_bounds_enclose(self):
        q = QNum(Fraction(1, 3), Fraction(-2, 7), 11)
        lo, hi = q.bounds(20)
        val = decimal_value(q)
        assert Decimal(lo.numerator) / Decimal(lo.denominator) <= val
        assert val <= Decimal(hi.numerator) / Decimal(hi.denominator)
        assert hi - lo == Fraction(2, 7) / 2 ** 20

    @given(
        st.fractions(max_denominator=8),
        st.fractions(max_denominator=8),
        st.integers(min_value=0, max_value=30),
        st.fractions(max_denominator=8),
        st.fractions(max_denominator=8),
        st.integers(min_value=0, max_value=30),
    )
    @settings(max_examples=120, deadline=None)
    def test_cmp_matches_decimal_oracle(self, a, b, d, e, f, g):
        u = QNum(a, b, d)
        v = QNum(e, f, g)
        diff = decimal_value(u) - decimal_value(v)
        got = q_cmp(u, v)
        if abs(diff) > Decimal("1e-40"):
            assert got == (1 if diff > 0 else -1)
        else:
            assert got == 0

    def test_rational_between_tight_endpoints(self):
        # 665857/470832 is a close continued-fraction convergent of sqrt2
        near = Fraction(665857, 470832)
        root = sqrt_fraction(2)
        mid = rational_between(root, near)
        assert q_cmp(root, QNum(mid)) < 0 < q_cmp(near, mid)
        lo = rational_below(root)
        hi = rational_above(root)
        assert q_cmp(QNum(lo), root) < 0 < q_cmp(QNum(hi), root)

    def test_rational_between_rejects_bad_order(self):
        with pytest.raises(ValueError):
            rational_between(QNum(2), QNum(2))


class TestCurves:
    def test_line_normalized_equality(self):
        assert Line(2, 4, 6) == Line(1, 2, 3)
        assert Line(0, -3, 6) == Line(0, 1, -2)

    def test_line_vertical(self):
        v = Line(2, 0, -6)
        assert v.is_vertical and v.vertical_x == 3
        with pytest.raises(ZeroDivisionError):
            v.y_at(0)
        with pytest.raises(ValueError):
            Line(1, 1, 0).vertical_x

    def test_line_degenerate_rejected(self):
        with pytest.raises(ValueError):
            Line(0, 0, 1)

    def test_circle_radius_positive(self):
        with pytest.raises(ValueError):
            Circle(0, 0, 0)
        with pytest.raises(ValueError):
            Circle(0, 0, -1)

    def test_circle_extent(self):
        lo, hi = Circle(1, 0, 4).x_extent()
        assert q_cmp(lo, QNum(-1)) == 0 and q_cmp(hi, QNum(3)) == 0


class TestWholePlane:
    def test_single_line_r_one(self):
        res = planar_cutting([Line(0, 1, -1)], 1, seed=9)
        assert res.cell_count == 1
        assert res.crossing_counts == (1,)
        assert res.max_crossing == 1
        assert res.accepted
        assert res.sample_size == 0
        assert res.threshold == 8

    def test_mixed_curves_r_one(self):
        curves = [Line(1, 0, 0), Line(0, 1, 2), Circle(0, 0, 1)]
        res = planar_cutting(curves, 1, seed=0)
        assert res.crossing_counts == (3,)
        assert res.accepted


class TestParallelLines:
    def test_all_sampled_slabs(self):
        lines = [Line(0, 1, -i) for i in range(6)]
        res = planar_cutting(lines, 6, seed=1, sample_size=6)
        assert res.cell_count == 7
        assert res.max_crossing == 0
        assert res.accepted and res.attempts == 1

    def test_vertical_stack_all_sampled(self):
        lines = [Line(1, 0, -i) for i in range(5)]
        res = planar_cutting(lines, 5, seed=1, sample_size=5)
        assert res.cell_count == 6
        assert res.max_crossing == 0

    def test_partial_sample_matches_interval_oracle(self):
        lines = [Line(0, 1, -3 * i) for i in range(9)]  # y = 0, 3, ..., 24
        res = planar_cutting(lines, 3, seed=4, sample_size=3)
        sampled_heights = sorted(Fraction(3 * i) for i in res.sampled_indices)
        # one slab, s+1 bands; band k holds heights strictly between
        expected = []
        bounds = [None] + sampled_heights + [None]
        for k in range(len(sampled_heights) + 1):
            lo, hi = bounds[k], bounds[k + 1]
            n_inside = sum(
                1
                for i in range(9)
                if (lo is None or 3 * i > lo) and (hi is None or 3 * i < hi)
            )
            expected.append(n_inside)
        assert res.cell_count == len(expected)
        assert sorted(res.crossing_counts) == sorted(expected)
        assert res.max_crossing == max(expected)


class TestFrozenArrangements:
    def test_two_crossing_lines_make_six_trapezoids(self):
        res = planar_cutting([Line(1, -1, 0), Line(1, 1, 0)], 2, seed=0, sample_size=2)
        assert res.cell_count == 6
        assert res.crossing_counts == (0,) * 6
        assert res.accepted

    def test_single_circle_five_cells(self):
        dec = _build_decomposition([Circle(0, 0, 4)])
        assert dec.cell_count == 5
        # horizontal diameter: left outside, inside, right outside
        hit = set()
        _mark_curve(Line(0, 1, 0), dec, hit)
        assert len(hit) == 3
        # horizontal tangent at the top: left outside, band above, right outside
        tangent = set()
        _mark_curve(Line(0, 1, -2), dec, tangent)
        assert len(tangent) == 3
        assert tangent != hit
        # the sampled circle itself crosses nothing
        own = set()
        _mark_curve(Circle(0, 0, 4), dec, own)
        assert own == set()

    def test_two_overlapping_circles_fourteen_cells(self):
        # radical axis is vertical (x = 1/2); lens, two lunes, outside
        dec = _build_decomposition([Circle(0, 0, 4), Circle(1, 0, 4)])
        assert dec.cell_count == 14

    def test_vertical_line_on_wall_crosses_nothing(self):
        dec = _build_decomposition([Line(1, -1, 0), Line(1, 1, 0)])
        on_wall = set()
        _mark_curve(Line(1, 0, 0), dec, on_wall)  # x = 0 through the crossing
        assert on_wall == set()
        inside = set()
        _mark_curve(Line(1, 0, -5), dec, inside)  # x = 5, open slab
        assert len(inside) == 3


class TestCellLocation:
    def test_locate_on_boundary_returns_none(self):
        dec = _build_decomposition([Line(0, 1, 0), Line(1, 0, 0)])
        assert dec.locate(Fraction(0), Fraction(5)) is None  # wall x=0
        assert dec.locate(Fraction(3), Fraction(0)) is None  # on the line y=0
        assert dec.locate(Fraction(3), Fraction(2)) is not None

    def test_locate_separates_circle_sides(self):
        dec = _build_decomposition([Circle(0, 0, 4)])
        inside = dec.locate(Fraction(0), Fraction(0))
        below = dec.locate(Fraction(0), Fraction(-3))
        above = dec.locate(Fraction(0), Fraction(3))
        left = dec.locate(Fraction(-3), Fraction(0))
        right = dec.locate(Fraction(3), Fraction(0))
        assert len({inside, below, above, left, right}) == 5


class TestRandomFamilies:
    def test_fifty_random_lines_r_five(self):
        rng = random.Random(20240815)
        lines = []
        while len(lines) < 50:
            a = Fraction(rng.randint(-9, 9))
            b = Fraction(rng.randint(-9, 9))
            if a == 0 and b == 0:
                continue
            candidate = Line(a, b, Fraction(rng.randint(-30, 30), rng.randint(1, 3)))
            lines.append(candidate)
        res = planar_cutting(lines, 5, seed=3)
        assert res.accepted
        assert res.max_crossing <= Fraction(8 * 50, 5)
        assert 1 <= res.cell_count
        xs = [Fraction(k, 3) for k in range(-60, 61)]
        assert_probe_complete(res, lines, xs)

    def test_mixed_lines_and_circles_probe(self):
        rng = random.Random(99)
        curves = []
        for _ in range(14):
            if rng.random() < 0.5:
                a = Fraction(rng.randint(-4, 4))
                b = Fraction(rng.randint(-4, 4))
                if a == 0 and b == 0:
                    b = Fraction(1)
                curves.append(Line(a, b, Fraction(rng.randint(-9, 9), rng.randint(1, 3))))
            else:
                curves.append(
                    Circle(
                        Fraction(rng.randint(-6, 6), 2),
                        Fraction(rng.randint(-6, 6), 2),
                        Fraction(rng.randint(1, 30), rng.randint(1, 2)),
                    )
                )
        res = planar_cutting(curves, 4, seed=12, sample_size=6)
        assert res.cell_count == len(res.crossing_counts)
        xs = [Fraction(k, 7) for k in range(-84, 85)]
        marks = assert_probe_complete(res, curves, xs)
        assert res.crossing_counts == tuple(
            sum(1 for m in marks if cls in m) for cls in range(res.cell_count)
        )

    def test_duplicate_curves_count_separately(self):
        line = Line(0, 1, -1)
        res = planar_cutting([line, Line(0, 1, -1), Line(0, 1, -4)], 1, seed=0)
        assert res.crossing_counts == (3,)


class TestDriver:
    def test_deterministic_rerun(self):
        rng = random.Random(5)
        curves = [
            Circle(Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5)), rng.randint(1, 9))
            for _ in range(12)
        ]
        first = planar_cutting(curves, 3, seed=21)
        second = planar_cutting(curves, 3, seed=21)
        assert first.sampled_indices == second.sampled_indices
        assert first.crossing_counts == second.crossing_counts
        assert first.cell_count == second.cell_count
        assert first.attempts == second.attempts

    def test_undersampled_family_reports_failure_flag(self):
        rng = random.Random(8)
        lines = []
        while len(lines) < 30:
            a, b = rng.randint(-9, 9), rng.randint(-9, 9)
            if a == 0 and b == 0:
                continue
            lines.append(Line(a, b, Fraction(rng.randint(-40, 40), rng.randint(1, 4))))
        res = planar_cutting(lines, 10, seed=2, sample_size=1, max_retries=2)
        # one sampled line splits the plane in two; nearly every line crosses both
        assert not res.accepted
        assert res.attempts == 3
        assert res.max_crossing > res.threshold
        assert res.cell_count >= 2

    def test_default_sample_size_formula(self):
        assert default_sample_size(1, 50) == 0
        assert default_sample_size(5, 50) == 36
        assert default_sample_size(5, 10) == 10
        res = planar_cutting([Line(0, 1, -i) for i in range(4)], 2, seed=0)
        assert res.sample_size == 4  # default 9 capped at n

    def test_validation_errors(self):
        with pytest.raises(ValueError, match="at least one curve"):
            planar_cutting([], 1)
        with pytest.raises(ValueError, match="at least 1"):
            planar_cutting([Line(1, 0, 0)], 0)
        with pytest.raises(TypeError):
            planar_cutting([(1, 2)], 1)
        with pytest.raises(ValueError, match="acceptance_factor"):
            planar_cutting([Line(1, 0, 0)], 1, acceptance_factor=0)
        with pytest.raises(ValueError, match="sample_size"):
            planar_cutting([Line(1, 0, 0)], 1, sample_size=-1)
        with pytest.raises(ValueError, match="max_retries"):
            planar_cutting([Line(1, 0, 0)], 1, max_retries=-1)


@given(st.integers(min_value=2, max_value=60))
@settings(max_examples=40, deadline=None)
def test_sqrt_bounds_shrink(n):
    root = sqrt_fraction(n)
    lo8, hi8 = root.bounds(8)
    lo20, hi20 = root.bounds(20)
    assert lo8 <= lo20 <= hi20 <= hi8
    assert lo20 * lo20 <= n <= hi20 * hi20
