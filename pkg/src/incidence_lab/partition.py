"""Grid-certified r-partitioning polynomials.

The construction iterates ceil(log2 r) rounds.  Each round takes the
grid components of the current nonzero set that still hold too many
points and multiplies in a ham-sandwich bisector for them; verification
then recounts components on the grid and checks that the new components
refine the old ones.  Everything a round asserts is literally true of
the grid at construction resolution, or the round fails loudly.

Connected components here always mean: maximal groups of axis-adjacent
lattice cells whose centers give g the same nonzero sign.  Components
narrower than a cell can merge; that is the documented price of a grid,
and the per-round verification converts it into an explicit error
instead of a silently wrong count.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, log2
from typing import Mapping, Sequence

from ._fasteval import compile_sign, demote_point
from .hamsandwich import (
    DegenerateConfiguration,
    SearchBudgetExceeded,
    polynomial_ham_sandwich,
)
from .ideals import Ideal, not_in_ideal
from .poly import Point, Polynomial, as_point, sign_at

Box = tuple[tuple[Fraction, Fraction], ...]


class ResolutionTooCoarse(RuntimeError):
    """The grid cannot certify the partition claims at this resolution."""


@dataclass(frozen=True, eq=True)
class GridDecomposition:
    """Sign grid of a polynomial over a box, with flood-fill component labels.

    signs maps every lattice cell to the sign of g at its center; labels
    maps each nonzero-sign cell to its component id.  Ids are assigned in
    lexicographic discovery order, so equal inputs give equal labelings.
    """

    box: Box
    resolution: int
    signs: Mapping[tuple[int, ...], int]
    labels: Mapping[tuple[int, ...], int]

    @property
    def dim(self) -> int:
        return len(self.box)

    def component_count(self) -> int:
        return len(set(self.labels.values()))

    def cell_of(self, point: Sequence) -> tuple[int, ...]:
        idx = []
        for (lo, hi), x in zip(self.box, point):
            x = Fraction(x)
            if not lo <= x <= hi:
                raise ValueError(f"coordinate {x} outside box [{lo}, {hi}]")
            j = floor((x - lo) * self.resolution / (hi - lo))
            idx.append(min(j, self.resolution - 1))
        return tuple(idx)


@dataclass(frozen=True)
class CellAssignment:
    """cells() output: the decomposition, one label (or None, meaning the
    point sits on the zero set) per input point, and the indices of points
    that could not be certified into a component.

    A point is unresolved when its own sign is nonzero but its cell is
    unlabeled, or when its sign disagrees with its cell's center sign;
    either way the zero set cuts through the cell and the grid is too
    coarse to place the point."""

    decomposition: GridDecomposition
    assignment: tuple[int | None, ...]
    unresolved: tuple[int, ...]

    def component_points(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, lab in enumerate(self.assignment):
            if lab is not None:
                out.setdefault(lab, []).append(i)
        return out


def bounding_box(points: Sequence[Point], margin: Fraction = Fraction(1)) -> Box:
    if not points:
        raise ValueError("no points to bound")
    dim = len(points[0])
    los = [min(Fraction(p[j]) for p in points) - margin for j in range(dim)]
    his = [max(Fraction(p[j]) for p in points) + margin for j in range(dim)]
    return tuple((lo, hi) for lo, hi in zip(los, his))


def _sign_grid(g: Polynomial, box: Box, resolution: int) -> dict[tuple[int, ...], int]:
    sign = compile_sign(g)
    dim = len(box)
    centers_per_axis = []
    for lo, hi in box:
        step = (hi - lo) / resolution
        centers_per_axis.append(
            [demote_point((lo + step * Fraction(2 * i + 1, 2),))[0] for i in range(resolution)]
        )
    signs: dict[tuple[int, ...], int] = {}

    def rec(axis: int, prefix_idx: tuple[int, ...], prefix_val: tuple) -> None:
        if axis == dim:
            signs[prefix_idx] = sign(prefix_val)
            return
        for i, c in enumerate(centers_per_axis[axis]):
            rec(axis + 1, prefix_idx + (i,), prefix_val + (c,))

    rec(0, (), ())
    return signs


def _flood_fill(
    signs: Mapping[tuple[int, ...], int], resolution: int, dim: int
) -> dict[tuple[int, ...], int]:
    labels: dict[tuple[int, ...], int] = {}
    next_label = 0
    for cell in sorted(signs):
        s = signs[cell]
        if s == 0 or cell in labels:
            continue
        labels[cell] = next_label
        queue = deque([cell])
        while queue:
            cur = queue.popleft()
            for axis in range(dim):
                for delta in (-1, 1):
                    j = cur[axis] + delta
                    if not 0 <= j < resolution:
                        continue
                    nb = cur[:axis] + (j,) + cur[axis + 1 :]
                    if nb in labels or signs[nb] != s:
                        continue
                    labels[nb] = next_label
                    queue.append(nb)
        next_label += 1
    return labels


def cells(
    g: Polynomial, points: Sequence[Point], box: Box, resolution: int
) -> CellAssignment:
    """Sign grid, flood-fill components, and a per-point assignment.

    A point on an interior lattice wall belongs to the upper cell (cells
    are half-open below the top edge); membership is decided with exact
    rational arithmetic.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    points = [as_point(p) for p in points]
    for p in points:
        if len(p) != len(box):
            raise ValueError("point and box dimensions differ")
    signs = _sign_grid(g, box, resolution)
    labels = _flood_fill(signs, resolution, len(box))
    grid = GridDecomposition(box, resolution, signs, labels)
    assignment: list[int | None] = []
    unresolved: list[int] = []
    for i, p in enumerate(points):
        s = sign_at(g, p)
        if s == 0:
            assignment.append(None)
            continue
        cell = grid.cell_of(p)
        lab = labels.get(cell)
        if lab is None or signs[cell] != s:
            unresolved.append(i)
            assignment.append(None)
        else:
            assignment.append(lab)
    return CellAssignment(grid, tuple(assignment), tuple(unresolved))


@dataclass(frozen=True)
class RoundReport:
    index: int
    threshold: Fraction
    heavy_components: int
    bisector_degree: int
    batches: int
    component_counts: tuple[int, ...]


@dataclass(frozen=True)
class PartitionPolynomial:
    g: Polynomial
    r: int
    rounds: int
    grid: GridDecomposition
    per_component_counts: dict[int, int]
    degree_certificate: int
    per_round_degrees: tuple[int, ...]
    round_reports: tuple[RoundReport, ...]
    box: Box
    resolution: int


def _bisect_heavy(
    heavy_sets: list[list[Point]],
    dim: int,
    ideal: Ideal | None,
    hs_max_degree: int,
    candidate_budget: int | None,
) -> tuple[Polynomial, int]:
    """Simultaneous bisector for all sets when the budgeted search finds
    one; otherwise the set list is split in half and the sub-bisectors
    multiplied.  Every set still gets halved by its own factor.  Returns
    (polynomial, number of batches)."""
    try:
        h = polynomial_ham_sandwich(
            heavy_sets,
            dim=dim,
            ideal=ideal,
            max_degree=hs_max_degree,
            candidate_budget=candidate_budget,
        )
        return h, 1
    except (SearchBudgetExceeded, DegenerateConfiguration):
        if len(heavy_sets) == 1:
            raise
    half = (len(heavy_sets) + 1) // 2
    left, lb = _bisect_heavy(
        heavy_sets[:half], dim, ideal, hs_max_degree, candidate_budget
    )
    right, rb = _bisect_heavy(
        heavy_sets[half:], dim, ideal, hs_max_degree, candidate_budget
    )
    return left * right, lb + rb


def partitioning_polynomial(
    points: Sequence[Point],
    r: int,
    ideal: Ideal | None = None,
    box: Box | None = None,
    resolution: int = 16,
    auto_refine: bool = False,
    max_refinements: int = 3,
    hs_max_degree: int = 12,
    hs_candidate_budget: int | None = 2000,
) -> PartitionPolynomial:
    """Polynomial g whose grid components each hold at most ceil(m/r)
    points of the input.

    Round i bisects every component still holding more than m/2^i points,
    then recounts and checks refinement on the grid; a failed check raises
    ResolutionTooCoarse (or doubles the resolution and restarts, at most
    max_refinements times, when auto_refine is set).
    """
    points = [as_point(p) for p in points]
    if points:
        dims = {len(p) for p in points}
        if len(dims) != 1:
            raise ValueError("mixed point dimensions")
        dim = dims.pop()
    elif box is not None:
        dim = len(box)
    else:
        raise ValueError("empty input needs an explicit box")
    if ideal is not None:
        if ideal.dim != dim:
            raise ValueError("ideal dimension mismatch")
        for p in points:
            for gen in ideal.generators:
                if gen.evaluate(p) != 0:
                    raise ValueError(f"point {p} is off the ideal's variety")
    m0 = len(points)
    if r > max(m0, 1):
        raise ValueError(f"r={r} exceeds the number of points {m0}")
    if box is None:
        box = bounding_box(points)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")

    if m0 < 2 or r <= 1:
        # vacuous partition: constant 1 has no zero set, one component
        one = Polynomial.constant(dim, 1)
        return _finalize(
            one, cells(one, points, box, resolution), r, 0, (), (), box, resolution
        )

    rounds = ceil(log2(r))
    res = resolution
    refinements = 0
    while True:
        try:
            return _construct(
                points,
                r,
                rounds,
                ideal,
                box,
                res,
                hs_max_degree,
                hs_candidate_budget,
            )
        except ResolutionTooCoarse:
            if not auto_refine or refinements >= max_refinements:
                raise
            refinements += 1
            res *= 2


def _construct(
    points: list[Point],
    r: int,
    rounds: int,
    ideal: Ideal | None,
    box: Box,
    resolution: int,
    hs_max_degree: int,
    hs_candidate_budget: int | None,
) -> PartitionPolynomial:
    dim = len(box)
    m0 = len(points)
    g = Polynomial.constant(dim, 1)
    current = cells(g, points, box, resolution)
    per_round_degrees: list[int] = []
    reports: list[RoundReport] = []

    for i in range(1, rounds + 1):
        threshold = Fraction(m0, 2**i)
        comps = current.component_points()
        heavy = [lab for lab in sorted(comps) if len(comps[lab]) > threshold]
        if heavy:
            heavy_sets = [[points[j] for j in comps[lab]] for lab in heavy]
            h, batches = _bisect_heavy(
                heavy_sets, dim, ideal, hs_max_degree, hs_candidate_budget
            )
            g = g * h
            round_degree = int(h.degree)
        else:
            batches = 0
            round_degree = 0
        per_round_degrees.append(round_degree)

        new = cells(g, points, box, resolution)
        if new.unresolved:
            raise ResolutionTooCoarse(
                f"round {i}: {len(new.unresolved)} points fall in cells whose "
                f"center sign vanishes at resolution {resolution}"
            )
        _check_refinement(current, new, i)
        new_comps = new.component_points()
        for lab, members in new_comps.items():
            if len(members) > threshold:
                raise ResolutionTooCoarse(
                    f"round {i}: component {lab} holds {len(members)} points, "
                    f"allowed {threshold} at resolution {resolution}"
                )
        if ideal is not None and not not_in_ideal(ideal, g):
            raise ArithmeticError(
                "partition polynomial collapsed into the ideal"
            )
        reports.append(
            RoundReport(
                index=i,
                threshold=threshold,
                heavy_components=len(heavy),
                bisector_degree=round_degree,
                batches=batches,
                component_counts=tuple(
                    len(new_comps[lab]) for lab in sorted(new_comps)
                ),
            )
        )
        current = new

    return _finalize(
        g, current, r, rounds, tuple(per_round_degrees), tuple(reports), box, resolution
    )


def _check_refinement(
    old: CellAssignment, new: CellAssignment, round_index: int
) -> None:
    # every new component must live inside a single old component
    old_labels = old.decomposition.labels
    parents: dict[int, int] = {}
    for cell, lab in new.decomposition.labels.items():
        parent = old_labels.get(cell)
        if parent is None:
            raise ResolutionTooCoarse(
                f"round {round_index}: cell {cell} gained a nonzero sign"
            )
        if parents.setdefault(lab, parent) != parent:
            raise ResolutionTooCoarse(
                f"round {round_index}: component {lab} straddles two parents"
            )


def _finalize(
    g: Polynomial,
    final: CellAssignment,
    r: int,
    rounds: int,
    per_round_degrees: tuple[int, ...],
    reports: tuple[RoundReport, ...],
    box: Box,
    resolution: int,
) -> PartitionPolynomial:
    counts = dict.fromkeys(sorted(set(final.decomposition.labels.values())), 0)
    for lab in final.assignment:
        if lab is not None:
            counts[lab] += 1
    return PartitionPolynomial(
        g=g,
        r=r,
        rounds=rounds,
        grid=final.decomposition,
        per_component_counts=counts,
        degree_certificate=sum(per_round_degrees),
        per_round_degrees=per_round_degrees,
        round_reports=reports,
        box=box,
        resolution=resolution,
    )


def verify_partition(pp: PartitionPolynomial, points: Sequence[Point]) -> bool:
    """Independent recount: every grid component of {g != 0} at the stored
    resolution holds at most ceil(m/r) points."""
    points = [as_point(p) for p in points]
    allowed = ceil(len(points) / max(pp.r, 1))
    recount = cells(pp.g, points, pp.box, pp.resolution)
    if recount.unresolved:
        return False
    tally: dict[int, int] = {}
    for lab in recount.assignment:
        if lab is not None:
            tally[lab] = tally.get(lab, 0) + 1
    return all(c <= allowed for c in tally.values())
