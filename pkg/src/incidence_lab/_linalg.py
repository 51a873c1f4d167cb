"""Exact rational linear algebra used by the ideal and geometry modules.

Row spaces are kept sparse (column index -> Fraction) with one pivot row
per column; pivots are chosen at each row's largest column so that rows
with distinct leading columns insert without any elimination work.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

SparseRow = dict[int, Fraction]


class RowSpace:
    """Incremental span of sparse rational rows, supporting rank and membership."""

    def __init__(self) -> None:
        self.pivots: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: Mapping[int, Fraction]) -> SparseRow:
        work: SparseRow = {c: v for c, v in row.items() if v != 0}
        while work:
            lead = max(work)
            pivot_row = self.pivots.get(lead)
            if pivot_row is None:
                return work
            factor = work.pop(lead)
            for c, v in pivot_row.items():
                if c == lead:
                    continue
                nv = work.get(c, _ZERO) - factor * v
                if nv:
                    work[c] = nv
                else:
                    work.pop(c, None)
        return work

    def contains(self, row: Mapping[int, Fraction]) -> bool:
        return not self._reduce(row)

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert a row; returns True when it enlarged the span."""
        reduced = self._reduce(row)
        if not reduced:
            return False
        lead = max(reduced)
        inv = Fraction(1) / reduced[lead]
        self.pivots[lead] = {c: v * inv for c, v in reduced.items()}
        return True


_ZERO = Fraction(0)


def nullspace(rows: Sequence[Sequence[Fraction]], width: int) -> list[list[Fraction]]:
    """Basis of the right nullspace of the given dense matrix."""
    echelon: list[list[Fraction]] = [list(r) for r in rows]
    pivot_cols: list[int] = []
    r = 0
    for c in range(width):
        pivot = None
        for i in range(r, len(echelon)):
            if echelon[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        echelon[r], echelon[pivot] = echelon[pivot], echelon[r]
        inv = Fraction(1) / echelon[r][c]
        echelon[r] = [v * inv for v in echelon[r]]
        for i in range(len(echelon)):
            if i != r and echelon[i][c] != 0:
                f = echelon[i][c]
                echelon[i] = [a - f * b for a, b in zip(echelon[i], echelon[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(echelon):
            break
    free_cols = [c for c in range(width) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivot_cols):
            vec[pc] = -echelon[row_idx][fc]
        basis.append(vec)
    return basis


def solve_square(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve A x = b exactly; returns None when A is singular."""
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if aug[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = Fraction(1) / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def matrix_rank(rows: Iterable[Sequence[Fraction]]) -> int:
    space = RowSpace()
    for row in rows:
        space.add({i: Fraction(v) for i, v in enumerate(row) if v != 0})
    return space.rank
