"""Discrete and polynomial ham-sandwich bisectors over exact rationals.

The discrete search enumerates hyperplanes spanned by D affinely
independent points of the input union, in lexicographic order of point
indices, each tried unshifted and with a symbolic shift of the constant
term to either side.  The first candidate where every open halfspace
holds at most half of every set wins.  Inputs in general position always
contain such a candidate; degenerate inputs fail loudly.

Polynomial bisectors come from the same search after a Veronese-style
lift: coordinates are the non-constant monomials of a degree-m basis, or
the non-constant quotient-basis representatives when an ideal restricts
the ambient variety.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

import numpy as np

from ._linalg import nullspace
from .ideals import Ideal, not_in_ideal, quotient_basis
from .poly import Monomial, Point, Polynomial, as_point, monomial_basis, sign_at

PointSet = Sequence[Point]


class DegenerateConfiguration(ValueError):
    """No candidate-spanned hyperplane bisects the given sets."""


class SearchBudgetExceeded(RuntimeError):
    """Candidate scan hit its cap before finding a bisector or exhausting."""


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane a0 + a1*y1 + ... + aD*yD = 0."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) < 2:
            raise ValueError("need a constant term and at least one linear term")
        if all(c == 0 for c in self.coefficients[1:]):
            raise ValueError("linear part must be nonzero")
        object.__setattr__(
            self, "coefficients", tuple(Fraction(c) for c in self.coefficients)
        )

    @property
    def dim(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, point: Sequence) -> Fraction:
        a = self.coefficients
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        return a[0] + sum((ai * Fraction(x) for ai, x in zip(a[1:], point)), Fraction(0))

    def side(self, point: Sequence) -> int:
        v = self.evaluate(point)
        return 1 if v > 0 else (-1 if v < 0 else 0)


def side_counts(h: Hyperplane, points: PointSet) -> tuple[int, int, int]:
    """(strictly positive, strictly negative, on the hyperplane)."""
    pos = neg = on = 0
    for p in points:
        s = h.side(p)
        if s > 0:
            pos += 1
        elif s < 0:
            neg += 1
        else:
            on += 1
    return pos, neg, on


def bisects(h: Hyperplane, sets: Sequence[PointSet]) -> bool:
    for s in sets:
        pos, neg, _ = side_counts(h, s)
        if 2 * pos > len(s) or 2 * neg > len(s):
            return False
    return True


def _scaled_union(sets: Sequence[PointSet]) -> tuple[list[tuple[int, ...]], int]:
    denom = 1
    for s in sets:
        for p in s:
            for c in p:
                denom = lcm(denom, Fraction(c).denominator)
    scaled = [
        tuple(int(Fraction(c) * denom) for c in p) for s in sets for p in s
    ]
    return scaled, denom


def _primitive_int_vector(vec: Sequence[Fraction]) -> list[int]:
    mult = 1
    for v in vec:
        mult = lcm(mult, v.denominator)
    ints = [int(v * mult) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints[1:]:
        if v != 0:
            if v < 0:
                ints = [-x for x in ints]
            break
    return ints


_INT64_SAFE = 1 << 62


def _candidate_coefficients(
    rows: list[list[int]], dim: int
) -> list[int] | None:
    # nullspace of the D x (D+1) system [1 p_i] . (a0, a) = 0; a unique
    # solution direction means the points are affinely independent
    basis = nullspace([[Fraction(v) for v in row] for row in rows], dim + 1)
    if len(basis) != 1:
        return None
    return _primitive_int_vector(basis[0])


def discrete_ham_sandwich(
    sets: Sequence[PointSet],
    dim: int | None = None,
    candidate_budget: int | None = None,
) -> Hyperplane:
    """Hyperplane leaving at most |S|/2 points of every set strictly on
    each side.

    Candidates are scanned in index order over the concatenated input;
    per candidate the unshifted plane is tried first, then the two
    symbolic constant-term shifts.  Raises DegenerateConfiguration when
    the whole candidate set fails (possible only off general position),
    SearchBudgetExceeded when a candidate_budget cap stops the scan early.
    """
    sets = [tuple(as_point(p) for p in s) for s in sets]
    if not sets:
        raise ValueError("need at least one point set")
    dims = {len(p) for s in sets for p in s}
    if len(dims) > 1:
        raise ValueError(f"mixed point dimensions {sorted(dims)}")
    if dim is None:
        if not dims:
            raise ValueError("cannot infer dimension from empty sets")
        dim = dims.pop()
    elif dims and dims.pop() != dim:
        raise ValueError("points do not match the requested dimension")
    if dim < 1:
        raise ValueError("dimension must be positive")
    if len(sets) > dim:
        raise ValueError(f"{len(sets)} sets exceed the ambient dimension {dim}")
    if all(len(s) == 0 for s in sets):
        return Hyperplane((Fraction(0),) * dim + (Fraction(1),))

    scaled, denom = _scaled_union(sets)
    sizes = [len(s) for s in sets]
    offsets = [0]
    for sz in sizes:
        offsets.append(offsets[-1] + sz)
    union = len(scaled)

    max_coord = max((max(abs(c) for c in p) for p in scaled if p), default=0)
    homog = (
        np.array([[1, *p] for p in scaled], dtype=np.int64)
        if max_coord < _INT64_SAFE
        else None
    )

    scanned = 0
    for combo in combinations(range(union), dim):
        scanned += 1
        if candidate_budget is not None and scanned > candidate_budget:
            raise SearchBudgetExceeded(
                f"no bisector among the first {candidate_budget} candidates"
            )
        rows = [[1, *scaled[i]] for i in combo]
        coeffs = _candidate_coefficients(rows, dim)
        if coeffs is None:
            continue
        max_coeff = max(abs(v) for v in coeffs)
        if homog is not None and max_coeff * max(1, max_coord) * (dim + 1) < _INT64_SAFE:
            evals = homog @ np.array(coeffs, dtype=np.int64)
            evals = evals.tolist()
        else:
            evals = [
                coeffs[0] + sum(c * x for c, x in zip(coeffs[1:], p))
                for p in scaled
            ]
        shift = _accepting_shift(evals, sizes, offsets)
        if shift is None:
            continue
        nonzero = [abs(e) for e in evals if e]
        eps = Fraction(min(nonzero), 2) if nonzero else Fraction(1)
        a0 = Fraction(coeffs[0]) + shift * eps
        final = Hyperplane(
            _normalized((a0,) + tuple(Fraction(c * denom) for c in coeffs[1:]))
        )
        if not bisects(final, sets):  # exact re-check in original coordinates
            raise AssertionError("internal: scaled-space acceptance did not transfer")
        return final
    raise DegenerateConfiguration(
        f"no spanned hyperplane bisects sets of sizes {sizes} in R^{dim}"
    )


def _accepting_shift(
    evals: Sequence[int], sizes: Sequence[int], offsets: Sequence[int]
) -> int | None:
    """Shift s in {0, +1, -1} of the constant term (by an infinitesimal)
    under which every open halfspace holds at most half of each set."""
    per_set = []
    for idx, size in enumerate(sizes):
        pos = neg = on = 0
        for e in evals[offsets[idx] : offsets[idx + 1]]:
            if e > 0:
                pos += 1
            elif e < 0:
                neg += 1
            else:
                on += 1
        per_set.append((pos, neg, on, size))
    for s in (0, 1, -1):
        ok = True
        for pos, neg, on, size in per_set:
            p = pos + (on if s > 0 else 0)
            q = neg + (on if s < 0 else 0)
            if 2 * p > size or 2 * q > size:
                ok = False
                break
        if ok:
            return s
    return None


def _normalized(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    for c in coeffs[1:]:
        if c != 0:
            return tuple(v / c for v in coeffs)
    return coeffs


# -- polynomial lift -----------------------------------------------------


def polynomial_ham_sandwich(
    sets: Sequence[PointSet],
    dim: int,
    ideal: Ideal | None = None,
    max_degree: int = 12,
    candidate_budget: int | None = None,
) -> Polynomial:
    """Nonzero polynomial g with at most |S|/2 points of every set in
    {g > 0} and in {g < 0}.

    Uses the smallest degree m whose monomial count (quotient-basis size
    when an ideal is given) leaves enough lifted dimensions for the
    discrete search; bumps m when the candidate set degenerates.  With an
    ideal the result additionally avoids the ideal's Macaulay span.
    """
    sets = [tuple(as_point(p) for p in s) for s in sets]
    if not sets:
        raise ValueError("need at least one point set")
    if dim < 1:
        raise ValueError("dimension must be positive")
    for s in sets:
        for p in s:
            if len(p) != dim:
                raise ValueError("point dimension mismatch")
    if ideal is not None:
        if ideal.dim != dim:
            raise ValueError("ideal lives in a different ambient dimension")
        for s in sets:
            for p in s:
                for g in ideal.generators:
                    if g.evaluate(p) != 0:
                        raise ValueError(
                            f"point {p} does not lie on the ideal's variety"
                        )
    if all(len(s) == 0 for s in sets):
        return Polynomial.constant(dim, 1)

    k = len(sets)
    m = 1
    while m <= max_degree:
        reps = _lift_basis(dim, m, ideal)
        if len(reps) >= k + 1:
            lifted_dim = len(reps) - 1
            lifted = [
                tuple(tuple(mono.evaluate(p) for mono in reps[1:]) for p in s)
                for s in sets
            ]
            try:
                h = discrete_ham_sandwich(
                    lifted, dim=lifted_dim, candidate_budget=candidate_budget
                )
            except DegenerateConfiguration:
                m += 1
                continue
            g = _assemble(dim, reps, h.coefficients)
            if ideal is not None and not not_in_ideal(ideal, g):
                m += 1
                continue
            return g.normalize_sign()
        m += 1
    raise DegenerateConfiguration(
        f"no bisecting polynomial of degree <= {max_degree} for {k} sets"
    )


def _lift_basis(dim: int, m: int, ideal: Ideal | None) -> list[Monomial]:
    if ideal is None:
        reps = monomial_basis(dim, m)
    else:
        reps = list(quotient_basis(ideal, m).representatives)
    if not reps or reps[0].degree != 0:
        raise DegenerateConfiguration(
            "constant monomial missing from the lift basis (unit ideal?)"
        )
    return reps


def _assemble(
    dim: int, reps: Sequence[Monomial], coefficients: Sequence[Fraction]
) -> Polynomial:
    # hyperplane constant multiplies the constant representative
    terms: dict[Monomial, Fraction] = {}
    for mono, c in zip(reps, coefficients):
        if c != 0:
            terms[mono] = Fraction(c)
    g = Polynomial(dim, terms)
    if g.is_zero():
        raise AssertionError("internal: hyperplane produced the zero polynomial")
    return g


def polynomial_side_counts(
    g: Polynomial, points: PointSet
) -> tuple[int, int, int]:
    pos = neg = on = 0
    for p in points:
        s = sign_at(g, p)
        if s > 0:
            pos += 1
        elif s < 0:
            neg += 1
        else:
            on += 1
    return pos, neg, on


def polynomial_bisects(g: Polynomial, sets: Sequence[PointSet]) -> bool:
    for s in sets:
        pos, neg, _ = polynomial_side_counts(g, s)
        if 2 * pos > len(s) or 2 * neg > len(s):
            return False
    return True
