"""Instance generators: incidence grids, dual pairings, unit-distance sets."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Mapping

from .budgeted import Budgeted
from ._linalg import matrix_rank, solve_square
from .poly import Polynomial
from .predicates import BipartiteInstance, EdgePredicate, atom


def _var(dim, index):
    return Polynomial.variable(dim, index)


def st_grid(N):
    """Grid-against-lines instance with m = 2N^3, n = N^3, edges = N^4.

    Left points (x, y) range over [1..N] x [1..2N^2]; right points (a, b)
    encode lines y = a*x + b with a in [1..N], b in [1..N^2].  Every line
    meets exactly N grid points, and two points determine at most one line,
    so the instance is K_{2,2}-free.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    P = tuple((x, y) for x in range(1, N + 1) for y in range(1, 2 * N * N + 1))
    Q = tuple((a, b) for a in range(1, N + 1) for b in range(1, N * N + 1))
    f = _var(4, 1) - _var(4, 0) * _var(4, 2) - _var(4, 3)
    predicate = EdgePredicate(d1=2, d2=2, polynomials=(f,), formula=atom("eq", 1))
    return BipartiteInstance(predicate, P, Q)


def hyperplane_dual(P, H, d):
    """Point/hyperplane incidence via the pairing sum(p_i * q_i) = 1."""
    if d < 1:
        raise ValueError("dimension must be positive")
    P = tuple(tuple(Fraction(c) for c in p) for p in P)
    H = tuple(tuple(Fraction(c) for c in h) for h in H)
    f = Polynomial.zero(2 * d)
    for i in range(d):
        f = f + _var(2 * d, i) * _var(2 * d, d + i)
    f = f - Polynomial.constant(2 * d, 1)
    predicate = EdgePredicate(d1=d, d2=d, polynomials=(f,), formula=atom("eq", 1))
    return BipartiteInstance(predicate, P, Q=H)


def orthogonal_circles_R4(n):
    """n points split over two orthogonal circles of squared radius 1/2.

    The circles live in the (x1, x2) and (x3, x4) coordinate planes, so any
    cross pair has squared distance exactly 1/2 + 1/2 = 1.  Points come from
    the chord parametrization through (1/2, 1/2): rational slope t sends the
    base point to (1/2 + u, 1/2 + t*u) with u = -(1 + t)/(1 + t^2), which is
    injective over t >= 0, so arbitrarily many exact rational points exist.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("n must be even and at least 2")
    half = n // 2
    plane_points = []
    for t in range(half):
        u = Fraction(-(1 + t), 1 + t * t)
        x = Fraction(1, 2) + u
        y = Fraction(1, 2) + t * u
        plane_points.append((x, y))
    first = [(x, y, Fraction(0), Fraction(0)) for x, y in plane_points]
    second = [(Fraction(0), Fraction(0), x, y) for x, y in plane_points]
    return tuple(first + second)


def unit_distance_instance(P):
    """Bipartite instance on two copies of P with edges at |p - q| = 1."""
    P = tuple(tuple(Fraction(c) for c in p) for p in P)
    if not P:
        raise ValueError("point set is empty")
    d = len(P[0])
    f = Polynomial.constant(2 * d, -1)
    for i in range(d):
        diff = _var(2 * d, i) - _var(2 * d, d + i)
        f = f + diff * diff
    predicate = EdgePredicate(d1=d, d2=d, polynomials=(f,), formula=atom("eq", 1))
    return BipartiteInstance(predicate, P, Q=P)


def unit_pair_count(P):
    """Unordered pairs at exact unit distance."""
    P = [tuple(Fraction(c) for c in p) for p in P]
    count = 0
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            dist2 = sum((a - b) ** 2 for a, b in zip(P[i], P[j]))
            if dist2 == 1:
                count += 1
    return count


def sphere_condition_check(P, k, subset_budget=200_000):
    """Whether no (d-3)-sphere contains k or more of the given points.

    A (d-3)-sphere is fitted through each affinely independent subset of
    d-1 points (the subset spans a (d-2)-flat; the sphere is the flat's
    circumsphere through them), then all points are tested for exact
    membership.  Complete for k >= d-1 because any k points on a common
    sphere include an affinely independent (d-1)-subset.  Returns a
    Budgeted verdict; an exhausted subset budget leaves it undecided.
    """
    P = [tuple(Fraction(c) for c in p) for p in P]
    if not P:
        return Budgeted(value=True, exact=True, explored=0)
    d = len(P[0])
    if any(len(p) != d for p in P):
        raise ValueError("points must share one dimension")
    if d < 3:
        raise ValueError("dimension must be at least 3")
    if k < d - 1:
        raise ValueError(f"subset fitting needs k >= d-1 = {d - 1}")
    if len(P) < k:
        return Budgeted(value=True, exact=True, explored=0)

    explored = 0
    for subset in combinations(range(len(P)), d - 1):
        if explored >= subset_budget:
            return Budgeted(value=None, exact=False, explored=explored)
        explored += 1
        base = P[subset[0]]
        spans = [
            tuple(P[i][c] - base[c] for c in range(d)) for i in subset[1:]
        ]
        if matrix_rank(spans) != d - 2:
            continue
        # circumcenter base + sum(alpha_j v_j): 2 <v_i, c - base> = |v_i|^2
        gram = [
            [2 * sum(a * b for a, b in zip(vi, vj)) for vj in spans]
            for vi in spans
        ]
        rhs = [sum(a * a for a in vi) for vi in spans]
        alphas = solve_square(gram, rhs)
        if alphas is None:  # unreachable: Gram of independent vectors
            continue
        center = list(base)
        for alpha, v in zip(alphas, spans):
            for c in range(d):
                center[c] += alpha * v[c]
        radius2 = sum((a - b) ** 2 for a, b in zip(base, center))
        on_sphere = []
        for idx, point in enumerate(P):
            shifted = tuple(point[c] - base[c] for c in range(d))
            if matrix_rank(spans + [shifted]) != d - 2:
                continue
            if sum((a - b) ** 2 for a, b in zip(point, center)) == radius2:
                on_sphere.append(idx)
        if len(on_sphere) >= k:
            return Budgeted(
                value=False,
                exact=True,
                witness=tuple(on_sphere),
                explored=explored,
            )
    return Budgeted(value=True, exact=True, explored=explored)


@dataclass(frozen=True)
class GeneratorSpec:
    """Named generator with integer size parameters and a seed."""

    name: str
    params: Mapping[str, int] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.name not in GENERATORS:
            known = ", ".join(sorted(GENERATORS))
            raise ValueError(f"unknown generator {self.name!r} (known: {known})")
        for key, value in self.params.items():
            if int(value) <= 0:
                raise ValueError(f"parameter {key} must be positive")

    def build(self):
        return GENERATORS[self.name](self)

    def with_params(self, **params):
        merged = dict(self.params)
        merged.update(params)
        return GeneratorSpec(self.name, merged, self.seed)


# exact unit vectors: signed permutations of a few Pythagorean quadruples
_UNIT_DIRECTION_SEEDS = (
    (Fraction(1), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(3, 5), Fraction(4, 5), Fraction(0), Fraction(0)),
    (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
    (Fraction(2, 3), Fraction(2, 3), Fraction(1, 3), Fraction(0)),
    (Fraction(1, 9), Fraction(4, 9), Fraction(8, 9), Fraction(0)),
)


def _unit_directions():
    seen = set()
    dirs = []
    for base in _UNIT_DIRECTION_SEEDS:
        for perm in permutations(base):
            for signs in product((1, -1), repeat=4):
                v = tuple(s * c for s, c in zip(signs, perm))
                if v not in seen:
                    seen.add(v)
                    dirs.append(v)
    return dirs


def scattered_unit_r4(n, seed=0):
    """n random points in R^4, planted in pairs exactly one unit apart.

    Each of the n/2 base points gets a partner one rational unit vector
    away, so the set carries at least n/2 unit distances while staying
    generic enough that no four points share a circle.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("n must be even and at least 2")
    rng = random.Random(seed)
    dirs = _unit_directions()
    points = []
    for _ in range(n // 2):
        base = tuple(Fraction(rng.randint(-350, 350), 7) for _ in range(4))
        step = rng.choice(dirs)
        points.append(base)
        points.append(tuple(b + s for b, s in zip(base, step)))
    return points


def _gen_st_grid(spec):
    return st_grid(int(spec.params["N"]))


def _gen_unit_r4(spec):
    return unit_distance_instance(orthogonal_circles_R4(int(spec.params["n"])))


def _gen_unit_grid(spec):
    N = int(spec.params["N"])
    points = [(x, y) for x in range(N) for y in range(N)]
    return unit_distance_instance(points)


def _gen_hyperplane_dual(spec):
    m = int(spec.params["m"])
    n = int(spec.params["n"])
    d = int(spec.params.get("d", 3))
    rng = random.Random(spec.seed)
    # small integer boxes keep exact pairings hittable
    pts = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(m)]
    planes = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(n)]
    return hyperplane_dual(pts, planes, d)


def _gen_scattered_unit_r4(spec):
    return unit_distance_instance(scattered_unit_r4(int(spec.params["n"]), seed=spec.seed))


GENERATORS = {
    "st_grid": _gen_st_grid,
    "unit_r4": _gen_unit_r4,
    "unit_grid": _gen_unit_grid,
    "hyperplane_dual": _gen_hyperplane_dual,
    "scattered_unit_r4": _gen_scattered_unit_r4,
}
