"""Trapezoidal cuttings of the plane by lines and circles.

All geometry runs in exact arithmetic.  Coordinates of interest are either
rational or of the form q + t*sqrt(d) with rational q, t and a nonnegative
integer d, so every comparison made while building the decomposition is a
sign computation on such numbers.  No floats enter any decision.

The construction samples a subset of the input curves, builds the vertical
(trapezoidal) decomposition of the sampled arrangement, and counts, for each
cell, how many input curves cross the cell's interior.  Cell boundaries
(sampled curves and the vertical walls through their intersections and
extrema) belong to no cell, so a curve that coincides with a sampled curve
crosses nothing.  An attempt is accepted when the worst cell is crossed by
at most acceptance_factor * n / r curves; otherwise the sample is redrawn
from a derived seed, up to max_retries extra attempts, and the best attempt
seen is reported.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import isqrt


# ---------------------------------------------------------------------------
# exact numbers of the form rat + coef*sqrt(rad)


class QNum:
    """Exact number rat + coef*sqrt(rad), rat/coef rational, rad integer >= 0.

    Perfect-square radicands are folded into the rational part on
    construction, so a QNum with coef != 0 is irrational.  Instances are
    unhashable on purpose; compare with the rich comparisons or q_cmp.
    """

    __slots__ = ("rat", "coef", "rad", "_approx_cache")
    __hash__ = None

    def __init__(self, rat, coef=0, rad=0):
        rat = Fraction(rat)
        coef = Fraction(coef)
        rad = int(rad)
        if rad < 0:
            raise ValueError("radicand must be nonnegative")
        if coef == 0 or rad == 0:
            coef, rad = Fraction(0), 0
        else:
            s = isqrt(rad)
            if s * s == rad:
                rat += coef * s
                coef, rad = Fraction(0), 0
        self.rat = rat
        self.coef = coef
        self.rad = rad
        self._approx_cache = None

    @property
    def is_rational(self):
        return self.coef == 0

    def _approx(self):
        """(float value, magnitude scale); scale bounds the absolute error by
        2**-50 * scale, since float(Fraction) is correctly rounded."""
        cached = self._approx_cache
        if cached is None:
            try:
                root = math.sqrt(self.rad)
                value = float(self.rat) + float(self.coef) * root
                scale = abs(float(self.rat)) + abs(float(self.coef)) * root + 1.0
            except OverflowError:
                value, scale = math.nan, math.inf
            cached = (value, scale)
            self._approx_cache = cached
        return cached

    def sign(self):
        if self.coef == 0:
            return 0 if self.rat == 0 else (1 if self.rat > 0 else -1)
        cs = 1 if self.coef > 0 else -1
        if self.rat == 0:
            return cs
        rs = 1 if self.rat > 0 else -1
        if rs == cs:
            return rs
        # opposite signs: compare rat^2 against coef^2 * rad
        t = self.rat * self.rat - self.coef * self.coef * self.rad
        if t == 0:
            return 0
        return rs if t > 0 else cs

    def __add__(self, other):
        other = as_qnum(other)
        if self.rad == 0:
            return QNum(self.rat + other.rat, other.coef, other.rad)
        if other.rad == 0:
            return QNum(self.rat + other.rat, self.coef, self.rad)
        if self.rad != other.rad:
            raise ArithmeticError("sum of unlike radicals leaves the field")
        return QNum(self.rat + other.rat, self.coef + other.coef, self.rad)

    __radd__ = __add__

    def __neg__(self):
        return QNum(-self.rat, -self.coef, self.rad)

    def __sub__(self, other):
        return self + (-as_qnum(other))

    def __rsub__(self, other):
        return as_qnum(other) + (-self)

    def __mul__(self, other):
        other = as_qnum(other)
        if self.rad == 0 or other.rad == 0 or self.rad == other.rad:
            rad = self.rad or other.rad
            rat = self.rat * other.rat + self.coef * other.coef * rad
            coef = self.rat * other.coef + self.coef * other.rat
            return QNum(rat, coef, rad)
        raise ArithmeticError("product of unlike radicals leaves the field")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Fraction(other)
        return QNum(self.rat / other, self.coef / other, self.rad)

    def __eq__(self, other):
        return q_cmp(self, other) == 0

    def __ne__(self, other):
        return q_cmp(self, other) != 0

    def __lt__(self, other):
        return q_cmp(self, other) < 0

    def __le__(self, other):
        return q_cmp(self, other) <= 0

    def __gt__(self, other):
        return q_cmp(self, other) > 0

    def __ge__(self, other):
        return q_cmp(self, other) >= 0

    def bounds(self, precision):
        """Rational enclosure (lo, hi) with hi - lo == |coef| / 2**precision."""
        if self.coef == 0:
            return self.rat, self.rat
        s = isqrt(self.rad * 4 ** precision)
        lo = Fraction(s, 2 ** precision)
        hi = Fraction(s + 1, 2 ** precision)
        if self.coef > 0:
            return self.rat + self.coef * lo, self.rat + self.coef * hi
        return self.rat + self.coef * hi, self.rat + self.coef * lo

    def __float__(self):
        return float(self.rat) + float(self.coef) * math.sqrt(self.rad)

    def __repr__(self):
        if self.coef == 0:
            return f"QNum({self.rat})"
        return f"QNum({self.rat} + {self.coef}*sqrt({self.rad}))"


def as_qnum(x):
    if isinstance(x, QNum):
        return x
    return QNum(Fraction(x))


def q_cmp(u, v):
    """Exact three-way comparison of QNum/rational values."""
    u = as_qnum(u)
    v = as_qnum(v)
    fu, su = u._approx()
    fv, sv = v._approx()
    diff = fu - fv
    if diff == diff:  # not nan
        margin = (su + sv) * 1e-12  # >> the 2**-50 rounding bound
        if diff > margin:
            return 1
        if diff < -margin:
            return -1
    if u.rad == v.rad or u.coef == 0 or v.coef == 0:
        return (u - v).sign()
    # u - v = (u.rat - v.rat + u.coef*sqrt(u.rad)) - v.coef*sqrt(v.rad)
    left = QNum(u.rat - v.rat, u.coef, u.rad)
    sl = left.sign()
    sr = 1 if v.coef > 0 else -1
    if sl != sr:
        if sl == 0:
            return -sr
        return sl
    # same nonzero sign: compare squares (left^2 stays a single radical)
    diff = left * left - QNum(v.coef * v.coef * v.rad)
    return sl * diff.sign()


def sqrt_fraction(value):
    """Exact sqrt of a nonnegative Fraction as a QNum."""
    value = Fraction(value)
    if value < 0:
        raise ValueError("square root of a negative value")
    return QNum(0, Fraction(1, value.denominator), value.numerator * value.denominator)


def rational_between(a, b):
    """A Fraction strictly between a < b (exact algebraic endpoints)."""
    a = as_qnum(a)
    b = as_qnum(b)
    if a.coef == 0 and b.coef == 0:
        if not a.rat < b.rat:
            raise ValueError("endpoints are not in increasing order")
        return (a.rat + b.rat) / 2
    precision = 2
    while precision <= 2048:
        _, ah = a.bounds(precision)
        bl, _ = b.bounds(precision)
        if ah < bl:
            return (ah + bl) / 2
        precision *= 2
    raise ValueError("endpoints are not in increasing order")


def rational_below(a):
    lo, _ = as_qnum(a).bounds(2)
    return lo - 1


def rational_above(a):
    _, hi = as_qnum(a).bounds(2)
    return hi + 1


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class Line:
    """Line a*x + b*y + c = 0, stored with leading coefficient 1.

    The first nonzero entry of (a, b) is scaled to 1, so equal lines compare
    equal.  b == 0 marks a vertical line at x = -c.
    """

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a = Fraction(self.a)
        b = Fraction(self.b)
        c = Fraction(self.c)
        if a == 0 and b == 0:
            raise ValueError("line coefficients a and b cannot both be zero")
        scale = a if a != 0 else b
        object.__setattr__(self, "a", a / scale)
        object.__setattr__(self, "b", b / scale)
        object.__setattr__(self, "c", c / scale)

    @property
    def is_vertical(self):
        return self.b == 0

    @property
    def vertical_x(self):
        if not self.is_vertical:
            raise ValueError("line is not vertical")
        return -self.c

    def y_at(self, x):
        if self.is_vertical:
            raise ZeroDivisionError("vertical line has no y(x)")
        if isinstance(x, QNum):
            return x * (-self.a / self.b) + QNum(-self.c / self.b)
        return (-self.a * Fraction(x) - self.c) / self.b


@dataclass(frozen=True)
class Circle:
    """Circle (x - cx)^2 + (y - cy)^2 = r2 with rational squared radius."""

    cx: Fraction
    cy: Fraction
    r2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cx", Fraction(self.cx))
        object.__setattr__(self, "cy", Fraction(self.cy))
        r2 = Fraction(self.r2)
        if r2 <= 0:
            raise ValueError("squared radius must be positive")
        object.__setattr__(self, "r2", r2)

    def x_extent(self):
        root = sqrt_fraction(self.r2)
        return QNum(self.cx) - root, QNum(self.cx) + root


# ---------------------------------------------------------------------------
# pairwise intersection abscissae


def _line_line_x(u, v):
    det = u.a * v.b - v.a * u.b
    if det == 0:
        return []
    x = (u.b * v.c - v.b * u.c) / det
    return [QNum(x)]


def _line_circle_xs(line, circle):
    # substitute y = -(a x + c)/b into the circle; vertical lines never reach here
    a, b, c = line.a, line.b, line.c
    shift = c + b * circle.cy
    qa = b * b + a * a
    qb = -2 * b * b * circle.cx + 2 * a * shift
    qc = b * b * circle.cx ** 2 + shift ** 2 - b * b * circle.r2
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return []
    if disc == 0:
        return [QNum(-qb / (2 * qa))]
    root = sqrt_fraction(disc)
    lo = (QNum(-qb) - root) / (2 * qa)
    hi = (QNum(-qb) + root) / (2 * qa)
    return [lo, hi]


def _radical_line(u, v):
    a = 2 * (v.cx - u.cx)
    b = 2 * (v.cy - u.cy)
    c = (u.cx ** 2 + u.cy ** 2 - u.r2) - (v.cx ** 2 + v.cy ** 2 - v.r2)
    if a == 0 and b == 0:
        return None
    return Line(a, b, c)


def _circle_circle_xs(u, v):
    """Intersection abscissae of two distinct circles.

    Returns (radical, xs).  radical is None for concentric circles; a
    vertical radical line contributes a single x carrying both points.
    """
    radical = _radical_line(u, v)
    if radical is None:
        return None, []
    if radical.is_vertical:
        x0 = radical.vertical_x
        depth = u.r2 - (x0 - u.cx) ** 2
        if depth < 0:
            return radical, []
        return radical, [QNum(x0)]
    return radical, _line_circle_xs(radical, u)


# ---------------------------------------------------------------------------
# decomposition structures


_BOTTOM = "bottom"
_TOP = "top"


@dataclass(frozen=True)
class Slab:
    """Vertical strip between consecutive event abscissae.

    arcs lists the sampled non-vertical branches alive in the strip, sorted
    bottom to top at the witness; values are their heights at the witness.
    Arc ids are (sampled index, branch) with branch 0 for a line, -1 / +1
    for the lower / upper half of a circle.
    """

    left: object
    right: object
    witness: Fraction
    arcs: tuple
    values: tuple

    def pair_of(self, k):
        bot = self.arcs[k - 1] if k > 0 else _BOTTOM
        top = self.arcs[k] if k < len(self.arcs) else _TOP
        return bot, top

    @property
    def interval_count(self):
        return len(self.arcs) + 1


class Decomposition:
    """Trapezoidal decomposition of a sampled sub-arrangement.

    Cells are unions of open trapezoids glued across unblocked slab
    boundaries; walls and sampled curves belong to no cell.
    """

    def __init__(self, sampled_curves, boundaries, slabs, parent):
        self.sampled_curves = tuple(sampled_curves)
        self.boundaries = tuple(boundaries)
        self.slabs = tuple(slabs)
        self._parent = parent
        roots = sorted({self._find(piece) for piece in parent})
        self.class_roots = tuple(roots)
        self._class_index = {root: i for i, root in enumerate(roots)}

    def _find(self, piece):
        parent = self._parent
        while parent[piece] != piece:
            parent[piece] = parent[parent[piece]]
            piece = parent[piece]
        return piece

    def class_of_piece(self, slab_index, interval_index):
        return self._class_index[self._find((slab_index, interval_index))]

    @property
    def cell_count(self):
        return len(self.class_roots)

    def arc_value(self, arc_id, x):
        curve_index, branch = arc_id
        curve = self.sampled_curves[curve_index]
        if branch == 0:
            return as_qnum(curve.y_at(x))
        depth = curve.r2 - (Fraction(x) - curve.cx) ** 2
        if depth <= 0:
            raise ValueError("arc is not alive at this abscissa")
        root = sqrt_fraction(depth)
        if branch < 0:
            return QNum(curve.cy) - root
        return QNum(curve.cy) + root

    def slab_at(self, x):
        """Index of the open slab containing rational x, None on a boundary."""
        x = Fraction(x)
        lo, hi = 0, len(self.boundaries)
        while lo < hi:
            mid = (lo + hi) // 2
            s = q_cmp(QNum(x), self.boundaries[mid][0])
            if s == 0:
                return None
            if s < 0:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def locate(self, x, y):
        """Cell index containing (x, y) for rational x, None on a boundary."""
        j = self.slab_at(x)
        if j is None:
            return None
        slab = self.slabs[j]
        y = as_qnum(y)
        lo, hi = 0, len(slab.arcs)
        while lo < hi:
            mid = (lo + hi) // 2
            s = q_cmp(y, self.arc_value(slab.arcs[mid], x))
            if s == 0:
                return None
            if s < 0:
                hi = mid
            else:
                lo = mid + 1
        return self.class_of_piece(j, lo)


def _collect_events(sampled):
    """Event abscissae with the arc ids walled off at each one.

    blocked None means the boundary is a full wall (sampled vertical line).
    """
    raw = []
    for i, curve in enumerate(sampled):
        if isinstance(curve, Line):
            if curve.is_vertical:
                raw.append((QNum(curve.vertical_x), None))
        else:
            lo, hi = curve.x_extent()
            pair = {(i, -1), (i, 1)}
            raw.append((lo, set(pair)))
            raw.append((hi, set(pair)))
    for i in range(len(sampled)):
        for j in range(i + 1, len(sampled)):
            u, v = sampled[i], sampled[j]
            u_line = isinstance(u, Line)
            v_line = isinstance(v, Line)
            if (u_line and u.is_vertical) or (v_line and v.is_vertical):
                continue
            if u_line and v_line:
                for x in _line_line_x(u, v):
                    raw.append((x, {(i, 0), (j, 0)}))
            elif u_line or v_line:
                line_idx, line = (i, u) if u_line else (j, v)
                circ_idx, circ = (j, v) if u_line else (i, u)
                for x in _line_circle_xs(line, circ):
                    y0 = line.y_at(x)
                    blocked = {(line_idx, 0)}
                    blocked.update(_branches_at(circ_idx, y0, circ.cy))
                    raw.append((x, blocked))
            else:
                radical, xs = _circle_circle_xs(u, v)
                if not xs:
                    continue
                if radical.is_vertical:
                    raw.append((xs[0], {(i, -1), (i, 1), (j, -1), (j, 1)}))
                    continue
                for x in xs:
                    y0 = radical.y_at(x)
                    blocked = set()
                    blocked.update(_branches_at(i, y0, u.cy))
                    blocked.update(_branches_at(j, y0, v.cy))
                    raw.append((x, blocked))
    raw.sort(key=cmp_to_key(lambda p, q: q_cmp(p[0], q[0])))
    events = []
    pos = 0
    while pos < len(raw):
        end = pos
        while end + 1 < len(raw) and q_cmp(raw[pos][0], raw[end + 1][0]) == 0:
            end += 1
        blocked = set()
        for k in range(pos, end + 1):
            if raw[k][1] is None:
                blocked = None
                break
            blocked.update(raw[k][1])
        events.append((raw[pos][0], None if blocked is None else frozenset(blocked)))
        pos = end + 1
    return events


def _branches_at(circle_index, y0, cy):
    s = q_cmp(y0, QNum(cy))
    if s < 0:
        return {(circle_index, -1)}
    if s > 0:
        return {(circle_index, 1)}
    return {(circle_index, -1), (circle_index, 1)}


def _slab_witnesses(events):
    if not events:
        return [Fraction(0)]
    witnesses = [rational_below(events[0][0])]
    for k in range(len(events) - 1):
        witnesses.append(rational_between(events[k][0], events[k + 1][0]))
    witnesses.append(rational_above(events[-1][0]))
    return witnesses


def _build_slab(sampled, left, right, witness):
    arcs = []
    for i, curve in enumerate(sampled):
        if isinstance(curve, Line):
            if curve.is_vertical:
                continue
            arcs.append(((i, 0), QNum(curve.y_at(witness))))
        else:
            depth = curve.r2 - (witness - curve.cx) ** 2
            if depth > 0:
                root = sqrt_fraction(depth)
                arcs.append(((i, -1), QNum(curve.cy) - root))
                arcs.append(((i, 1), QNum(curve.cy) + root))
    arcs.sort(key=cmp_to_key(lambda p, q: q_cmp(p[1], q[1])))
    for k in range(len(arcs) - 1):
        if q_cmp(arcs[k][1], arcs[k + 1][1]) == 0:
            raise ArithmeticError("coincident arcs inside a slab; missed event")
    return Slab(
        left=left,
        right=right,
        witness=witness,
        arcs=tuple(a for a, _ in arcs),
        values=tuple(v for _, v in arcs),
    )


def _build_decomposition(sampled):
    events = _collect_events(sampled)
    witnesses = _slab_witnesses(events)
    slabs = []
    for j, witness in enumerate(witnesses):
        left = events[j - 1][0] if j > 0 else None
        right = events[j][0] if j < len(events) else None
        slabs.append(_build_slab(sampled, left, right, witness))
    parent = {}
    for j, slab in enumerate(slabs):
        for k in range(slab.interval_count):
            parent[(j, k)] = (j, k)

    def find(piece):
        while parent[piece] != piece:
            parent[piece] = parent[parent[piece]]
            piece = parent[piece]
        return piece

    for j in range(len(events)):
        blocked = events[j][1]
        if blocked is None:
            continue
        left_slab, right_slab = slabs[j], slabs[j + 1]
        right_pairs = {
            right_slab.pair_of(k): k for k in range(right_slab.interval_count)
        }
        for k in range(left_slab.interval_count):
            pair = left_slab.pair_of(k)
            other = right_pairs.get(pair)
            if other is None:
                continue
            bot, top = pair
            if bot in blocked or top in blocked:
                continue
            ra, rb = find((j, k)), find((j + 1, other))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return Decomposition(sampled, events, slabs, parent)


# ---------------------------------------------------------------------------
# crossing counts


def _interval_of(slab, decomposition, y, x):
    """Interval index of y in a slab at abscissa x, None when y lies on an arc."""
    lo, hi = 0, len(slab.arcs)
    if x == slab.witness:
        values = slab.values
        while lo < hi:
            mid = (lo + hi) // 2
            s = q_cmp(y, values[mid])
            if s == 0:
                return None
            if s < 0:
                hi = mid
            else:
                lo = mid + 1
        return lo
    while lo < hi:
        mid = (lo + hi) // 2
        s = q_cmp(y, decomposition.arc_value(slab.arcs[mid], x))
        if s == 0:
            return None
        if s < 0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _input_event_xs(curve, sampled):
    xs = []
    for other in sampled:
        if isinstance(other, Line) and other.is_vertical:
            continue
        if isinstance(curve, Line):
            if isinstance(other, Line):
                xs.extend(_line_line_x(curve, other))
            else:
                xs.extend(_line_circle_xs(curve, other))
        else:
            if isinstance(other, Line):
                xs.extend(_line_circle_xs(other, curve))
            else:
                _, pts = _circle_circle_xs(other, curve)
                xs.extend(pts)
    xs.sort(key=cmp_to_key(q_cmp))
    unique = []
    for x in xs:
        if not unique or q_cmp(unique[-1], x) != 0:
            unique.append(x)
    return unique


def _branch_heights(curve, x):
    if isinstance(curve, Line):
        return [QNum(curve.y_at(x))]
    depth = curve.r2 - (x - curve.cx) ** 2
    if depth <= 0:
        return []
    root = sqrt_fraction(depth)
    return [QNum(curve.cy) - root, QNum(curve.cy) + root]


def _clip(left, right, lo, hi):
    """Intersection of open intervals with None for unbounded ends."""
    new_left = left
    if lo is not None and (new_left is None or q_cmp(lo, new_left) > 0):
        new_left = lo
    new_right = right
    if hi is not None and (new_right is None or q_cmp(hi, new_right) < 0):
        new_right = hi
    if new_left is not None and new_right is not None:
        if q_cmp(new_left, new_right) >= 0:
            return None
    return new_left, new_right


def _sub_witnesses(slab, active_left, active_right, event_xs):
    """Rational sample abscissae for every sub-interval of the active range."""
    inside = [
        x
        for x in event_xs
        if (active_left is None or q_cmp(x, active_left) > 0)
        and (active_right is None or q_cmp(x, active_right) < 0)
    ]
    if not inside and active_left is slab.left and active_right is slab.right:
        return [slab.witness]
    stops = [active_left] + inside + [active_right]
    out = []
    for a, b in zip(stops, stops[1:]):
        if a is None and b is None:
            out.append(slab.witness)
        elif a is None:
            out.append(rational_below(b))
        elif b is None:
            out.append(rational_above(a))
        else:
            out.append(rational_between(a, b))
    return out


def _mark_vertical_line(x0, decomposition, hits):
    x0 = QNum(x0)
    boundary_index = None
    slab_index = 0
    for j, (bx, _) in enumerate(decomposition.boundaries):
        s = q_cmp(x0, bx)
        if s == 0:
            boundary_index = j
            break
        if s > 0:
            slab_index = j + 1
        else:
            break
    if boundary_index is None:
        slab = decomposition.slabs[slab_index]
        for k in range(slab.interval_count):
            hits.add(decomposition.class_of_piece(slab_index, k))
        return
    blocked = decomposition.boundaries[boundary_index][1]
    if blocked is None:
        return
    left_slab = decomposition.slabs[boundary_index]
    right_slab = decomposition.slabs[boundary_index + 1]
    right_pairs = {right_slab.pair_of(k): k for k in range(right_slab.interval_count)}
    for k in range(left_slab.interval_count):
        pair = left_slab.pair_of(k)
        if pair not in right_pairs:
            continue
        bot, top = pair
        if bot in blocked or top in blocked:
            continue
        hits.add(decomposition.class_of_piece(boundary_index, k))


def _mark_curve(curve, decomposition, hits):
    if isinstance(curve, Line) and curve.is_vertical:
        _mark_vertical_line(curve.vertical_x, decomposition, hits)
        return
    if isinstance(curve, Circle):
        extent_lo, extent_hi = curve.x_extent()
    else:
        extent_lo = extent_hi = None
    event_xs = _input_event_xs(curve, decomposition.sampled_curves)
    for j, slab in enumerate(decomposition.slabs):
        clipped = _clip(slab.left, slab.right, extent_lo, extent_hi)
        if clipped is None:
            continue
        active_left, active_right = clipped
        for w in _sub_witnesses(slab, active_left, active_right, event_xs):
            for y in _branch_heights(curve, w):
                k = _interval_of(slab, decomposition, y, w)
                if k is None:
                    continue
                hits.add(decomposition.class_of_piece(j, k))


# ---------------------------------------------------------------------------
# public driver


@dataclass(frozen=True)
class CuttingResult:
    """Outcome of one planar_cutting call (best attempt kept)."""

    curve_count: int
    r: int
    seed: int
    sample_size: int
    acceptance_factor: Fraction
    threshold: Fraction
    attempts: int
    accepted: bool
    sampled_indices: tuple
    cell_count: int
    max_crossing: int
    crossing_counts: tuple
    decomposition: Decomposition


def default_sample_size(r, curve_count):
    """Theta(r log r) sample default, capped by the number of curves."""
    if r <= 1:
        return 0
    return min(curve_count, max(1, math.ceil(4 * r * math.log(r + 1))))


def _dedup_curves(curves):
    unique = []
    for curve in curves:
        if curve not in unique:
            unique.append(curve)
    return unique


def planar_cutting(
    curves,
    r,
    *,
    seed=0,
    sample_size=None,
    acceptance_factor=8,
    max_retries=3,
):
    """Cut the plane into cells each crossed by few of the given curves.

    Samples sample_size curves (default Theta(r log r)), builds their exact
    trapezoidal decomposition, and counts crossings of every input curve
    with every cell interior.  Accepts when max crossing <= acceptance_factor
    * n / r, retrying with derived seeds otherwise; the best attempt is
    returned either way with accepted set accordingly.  r == 1 keeps the
    whole plane as a single cell.
    """
    curves = list(curves)
    n = len(curves)
    if n == 0:
        raise ValueError("at least one curve is required")
    if r < 1:
        raise ValueError("r must be at least 1")
    for curve in curves:
        if not isinstance(curve, (Line, Circle)):
            raise TypeError("curves must be Line or Circle instances")
    acceptance_factor = Fraction(acceptance_factor)
    if acceptance_factor <= 0:
        raise ValueError("acceptance_factor must be positive")
    if sample_size is None:
        sample_size = default_sample_size(r, n)
    if sample_size < 0:
        raise ValueError("sample_size must be nonnegative")
    sample_size = min(sample_size, n)
    if r <= 1:
        sample_size = 0
    threshold = acceptance_factor * Fraction(n, r)
    if max_retries < 0:
        raise ValueError("max_retries must be nonnegative")

    best = None
    attempts = 0
    for attempt in range(max_retries + 1):
        attempts += 1
        rng = random.Random(seed * 1000003 + attempt)
        indices = tuple(sorted(rng.sample(range(n), sample_size)))
        sampled = _dedup_curves(curves[i] for i in indices)
        decomposition = _build_decomposition(sampled)
        per_class = [set() for _ in decomposition.class_roots]
        for curve_index, curve in enumerate(curves):
            hits = set()
            _mark_curve(curve, decomposition, hits)
            for cls in hits:
                per_class[cls].add(curve_index)
        counts = tuple(len(s) for s in per_class)
        max_crossing = max(counts) if counts else 0
        candidate = (max_crossing, attempt, indices, decomposition, counts)
        if best is None or candidate[0] < best[0]:
            best = candidate
        if Fraction(max_crossing) <= threshold:
            break

    max_crossing, _, indices, decomposition, counts = best
    accepted = Fraction(max_crossing) <= threshold
    return CuttingResult(
        curve_count=n,
        r=r,
        seed=seed,
        sample_size=sample_size,
        acceptance_factor=acceptance_factor,
        threshold=threshold,
        attempts=attempts,
        accepted=accepted,
        sampled_indices=indices,
        cell_count=decomposition.cell_count,
        max_crossing=max_crossing,
        crossing_counts=counts,
        decomposition=decomposition,
    )
