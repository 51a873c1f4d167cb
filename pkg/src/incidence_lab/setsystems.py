"""Finite set systems as bit sets: shatter functions, VC dimension,
unit-distance pairs, separation, duality, and sign-pattern censuses.

Sets are ints used as bit masks over ground elements 0..ground_size-1.
Enumeration budgets count (subset, member-set) work units; a search cut
short returns a Budgeted with exact=False and its best bound so far.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .budgeted import Budgeted
from .poly import Point, Polynomial
from ._fasteval import compile_sign, demote_point

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class SetSystem:
    ground_size: int
    sets: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ground_size < 0:
            raise ValueError("ground size must be nonnegative")
        full = (1 << self.ground_size) - 1
        for s in self.sets:
            if s < 0 or s & ~full:
                raise ValueError(f"set {bin(s)} is not a subset of the ground set")

    @staticmethod
    def from_iterables(ground_size: int, members: Iterable[Iterable[int]]) -> "SetSystem":
        masks = []
        for elems in members:
            mask = 0
            for e in elems:
                if not 0 <= e < ground_size:
                    raise ValueError(f"element {e} outside ground set")
                mask |= 1 << e
            masks.append(mask)
        return SetSystem(ground_size, tuple(masks))

    def has_duplicates(self) -> bool:
        return len(set(self.sets)) < len(self.sets)

    def deduplicated(self) -> "SetSystem":
        seen: dict[int, None] = {}
        for s in self.sets:
            seen.setdefault(s)
        return SetSystem(self.ground_size, tuple(seen))

    def as_elements(self) -> list[frozenset[int]]:
        return [
            frozenset(i for i in range(self.ground_size) if s >> i & 1)
            for s in self.sets
        ]


def _subset_masks(indices: Sequence[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def shatter_function(
    system: SetSystem, z: int, budget: int = DEFAULT_BUDGET
) -> Budgeted:
    """Max number of distinct traces over z-element subsets of the ground set.

    Exact when the full enumeration fits in the budget; otherwise the value
    is the best lower bound seen before the cutoff.
    """
    if not 0 <= z <= system.ground_size:
        raise ValueError(f"subset size {z} out of range")
    n_subsets = comb(system.ground_size, z)
    work = n_subsets * max(1, len(system.sets))
    if work <= budget and system.ground_size <= 30:
        return Budgeted(_shatter_full(system, z), True, explored=work)
    best = 0
    explored = 0
    limit = max(1, budget // max(1, len(system.sets)))
    for combo in itertools.combinations(range(system.ground_size), z):
        if explored >= limit:
            return Budgeted(best, False, explored=explored * max(1, len(system.sets)))
        mask = _subset_masks(combo)
        best = max(best, len({s & mask for s in system.sets}))
        explored += 1
    return Budgeted(best, True, explored=explored * max(1, len(system.sets)))


def _shatter_full(system: SetSystem, z: int) -> int:
    if not system.sets:
        return 0
    masks = [
        _subset_masks(c) for c in itertools.combinations(range(system.ground_size), z)
    ]
    arr_masks = np.array(masks, dtype=np.uint32)
    arr_sets = np.array(system.sets, dtype=np.uint32)
    traces = arr_masks[:, None] & arr_sets[None, :]
    traces.sort(axis=1)
    distinct = (np.diff(traces, axis=1) != 0).sum(axis=1) + 1
    return int(distinct.max())


def vc_dimension(system: SetSystem, budget: int = DEFAULT_BUDGET) -> Budgeted:
    """Largest z such that some z-subset of the ground set is fully shattered.

    On budget exhaustion the reported value is a certified lower bound with
    exact=False.
    """
    if not system.sets:
        # an empty family realizes no traces at all, not even on the empty set
        return Budgeted(-1, True)
    best = -1
    spent = 0
    n_sets = len(system.sets)
    cap = min(system.ground_size, max(0, n_sets.bit_length() - 1))
    for z in range(0, cap + 1):
        found = False
        target = 1 << z
        for combo in itertools.combinations(range(system.ground_size), z):
            spent += n_sets
            if spent > budget:
                return Budgeted(best, False, explored=spent)
            mask = _subset_masks(combo)
            traces = set()
            for s in system.sets:
                traces.add(s & mask)
                if len(traces) == target:
                    break
            if len(traces) == target:
                found = True
                best = z
                break
        if not found:
            return Budgeted(best, True, explored=spent)
    return Budgeted(best, True, explored=spent)


def unit_distance_graph(system: SetSystem) -> list[tuple[int, int]]:
    """Pairs of member sets whose symmetric difference has exactly one element."""
    edges = []
    sets = system.sets
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            diff = sets[i] ^ sets[j]
            if diff and diff & (diff - 1) == 0:
                edges.append((i, j))
    return edges


def is_k_delta_separated(
    system: SetSystem, k: int, delta: int, budget: int = DEFAULT_BUDGET
) -> Budgeted:
    """Every k of the member sets have |union minus intersection| >= delta."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > len(system.sets):
        return Budgeted(True, True)
    explored = 0
    for combo in itertools.combinations(range(len(system.sets)), k):
        explored += 1
        if explored > budget:
            return Budgeted(None, False, explored=explored - 1)
        union = 0
        inter = (1 << system.ground_size) - 1
        for i in combo:
            union |= system.sets[i]
            inter &= system.sets[i]
        if bin(union ^ inter).count("1") < delta:
            return Budgeted(False, True, witness=combo, explored=explored)
    return Budgeted(True, True, explored=explored)


def dual_system(system: SetSystem) -> SetSystem:
    """One dual set per ground element p: the indices of member sets containing p.

    Kept in ground order without deduplication, so dualizing twice returns
    the original list of sets exactly.
    """
    n = len(system.sets)
    duals = []
    for p in range(system.ground_size):
        mask = 0
        for i, s in enumerate(system.sets):
            if s >> p & 1:
                mask |= 1 << i
        duals.append(mask)
    return SetSystem(n, tuple(duals))


def sauer_shelah_bound(z: int, d0: int) -> int:
    """Binomial sum bounding the shatter function of a VC-dim-d0 system."""
    return sum(comb(z, i) for i in range(0, min(z, d0) + 1))


# -- sign patterns ------------------------------------------------------


def sign_pattern_census(
    polynomials: Sequence[Polynomial], probes: Iterable[Point]
) -> set[tuple[int, ...]]:
    """Distinct sign vectors realized by the probe points, evaluated exactly.

    A probe census is a lower bound on the true number of sign patterns.
    """
    signs = [compile_sign(f) for f in polynomials]
    seen: set[tuple[int, ...]] = set()
    for p in probes:
        x = demote_point(p)
        seen.add(tuple(s(x) for s in signs))
    return seen


def milnor_thom_bound(n_polys: int, dim: int, degree_bound: int) -> Fraction:
    """Upper bound (50*t*l/d)^d on sign patterns of l polynomials of degree <= t
    in d variables; only stated for l >= d >= 2."""
    if dim < 2 or n_polys < dim:
        raise ValueError(
            "bound not applicable: needs at least as many polynomials as variables "
            "and dimension at least 2"
        )
    if degree_bound < 1:
        raise ValueError("degree bound must be positive")
    return Fraction(50 * degree_bound * n_polys, dim) ** dim
