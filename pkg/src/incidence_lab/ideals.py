"""Hilbert functions of polynomial ideals via exact Macaulay-matrix ranks.

The degree-m slice of an ideal is approximated from below by the row
space of all generator multiples g * mu with deg(g * mu) <= m, expressed
in the graded-lex monomial basis.  For the ideals this package ships
(zero, coordinate, principal, circle, sphere) that row space is the full
slice at every tested degree, so the reported values are exact there;
for general ideals it is a lower bound on the slice and hence an upper
bound on h_I(m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._linalg import RowSpace
from .poly import (
    Monomial,
    Polynomial,
    basis_size,
    format_polynomial,
    monomial_basis,
    parse_polynomial,
)


class NonStabilizingRange(ValueError):
    """The observed degree range is too small to pin down the Hilbert polynomial."""


@dataclass(frozen=True)
class Ideal:
    """An ideal given by generators, with optional declared variety data."""

    dim: int
    generators: tuple[Polynomial, ...]
    declared_variety_dim: int | None = None
    declared_degree: int | None = None

    def __post_init__(self) -> None:
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if g.dim != self.dim:
                raise ValueError(
                    f"generator dimension {g.dim} does not match ideal dimension {self.dim}"
                )
        object.__setattr__(self, "generators", gens)
        if self.declared_variety_dim is not None and not (
            0 <= self.declared_variety_dim <= self.dim
        ):
            raise ValueError("declared variety dimension out of range")


@dataclass(frozen=True)
class QuotientBasis:
    """Monomial representatives of the degree-bounded quotient slice."""

    degree_bound: int
    representatives: tuple[Monomial, ...]
    macaulay_rank: int


@dataclass(frozen=True)
class HilbertEstimate:
    degree: int
    leading_coefficient: Fraction
    stabilization_m: int


def ideal(dim: int, *generator_texts: str, **kwargs) -> Ideal:
    """Convenience constructor from polynomial text."""
    gens = tuple(parse_polynomial(t, dim) for t in generator_texts)
    return Ideal(dim, gens, **kwargs)


def _macaulay_rows(I: Ideal, m: int, column_of: dict[Monomial, int]):
    """Sparse coefficient rows of every generator multiple of degree <= m."""
    for g in I.generators:
        deg_g = g.degree
        if deg_g > m:
            continue
        for mu in monomial_basis(I.dim, m - int(deg_g)):
            row: dict[int, Fraction] = {}
            for mono, coeff in g.terms.items():
                row[column_of[mono * mu]] = coeff
            yield row


def _macaulay_space(I: Ideal, m: int) -> tuple[RowSpace, dict[Monomial, int]]:
    column_of = {mono: j for j, mono in enumerate(monomial_basis(I.dim, m))}
    space = RowSpace()
    for row in _macaulay_rows(I, m, column_of):
        space.add(row)
    return space, column_of

def hilbert_function(I: Ideal, m: int) -> int:
    """dim of degree-<=m polynomials modulo the generated slice, exact over Q."""
    if m < 0:
        raise ValueError("degree bound must be nonnegative")
    space, _ = _macaulay_space(I, m)
    return basis_size(I.dim, m) - space.rank


def quotient_basis(I: Ideal, m: int) -> QuotientBasis:
    """Greedy graded-lex monomial representatives of the quotient slice.

    A monomial joins the basis exactly when its coefficient vector is
    independent of the Macaulay rows plus all previously chosen monomials.
    """
    if m < 0:
        raise ValueError("degree bound must be nonnegative")
    space, column_of = _macaulay_space(I, m)
    macaulay_rank = space.rank
    reps: list[Monomial] = []
    for mono, col in column_of.items():
        if space.add({col: Fraction(1)}):
            reps.append(mono)
    return QuotientBasis(m, tuple(reps), macaulay_rank)


def not_in_ideal(I: Ideal, f: Polynomial) -> bool:
    """True when f is independent of the generated slice at degree deg(f)."""
    if f.dim != I.dim:
        raise ValueError("polynomial dimension does not match ideal")
    if f.is_zero():
        return False
    m = int(f.degree)
    space, column_of = _macaulay_space(I, m)
    row = {column_of[mono]: coeff for mono, coeff in f.terms.items()}
    return not space.contains(row)


def _factorial(j: int) -> int:
    out = 1
    for i in range(2, j + 1):
        out *= i
    return out


def _falling_binomial(x: int, j: int) -> Fraction:
    """C(x, j) as a polynomial in x, valid for any integer x."""
    num = 1
    for i in range(j):
        num *= x - i
    den = 1
    for i in range(1, j + 1):
        den *= i
    return Fraction(num, den)


def estimate_hilbert_polynomial(I: Ideal, m_lo: int, m_hi: int) -> HilbertEstimate:
    """Fit the eventual polynomial of m -> hilbert_function(I, m) by finite differences.

    Fits from the tail of the observed range, requires the fit to match at
    least the two values preceding the fitting window (or all of them when
    fewer exist), and reports the smallest observed m from which the fit
    matches every later value.
    """
    if m_lo < 0 or m_hi < m_lo:
        raise ValueError("need 0 <= m_lo <= m_hi")
    ms = list(range(m_lo, m_hi + 1))
    vals = [Fraction(hilbert_function(I, m)) for m in ms]
    n = len(vals)

    for t in range(0, n - 1):
        window = vals[n - 1 - t :]
        diffs = [list(window)]
        while len(diffs[-1]) > 1:
            prev = diffs[-1]
            diffs.append([b - a for a, b in zip(prev, prev[1:])])
        newton = [level[0] for level in diffs]
        base_m = ms[n - 1 - t]

        def fitted(m: int) -> Fraction:
            return sum(
                (c * _falling_binomial(m - base_m, j) for j, c in enumerate(newton)),
                Fraction(0),
            )

        guard = min(2, n - 1 - t)
        if guard == 0:
            continue
        if any(fitted(ms[n - 2 - t - j]) != vals[n - 2 - t - j] for j in range(guard)):
            continue

        true_degree = max((j for j, c in enumerate(newton) if c != 0), default=0)
        lead = newton[true_degree] / _factorial(true_degree)
        stabilization = m_lo
        for idx in range(n - 1, -1, -1):
            if fitted(ms[idx]) != vals[idx]:
                stabilization = ms[idx + 1]
                break
        return HilbertEstimate(true_degree, lead, stabilization)

    raise NonStabilizingRange(
        f"Hilbert values over m in [{m_lo}, {m_hi}] do not stabilize; range too small"
    )


# -- ideal text format --------------------------------------------------


def format_ideal(I: Ideal) -> str:
    lines = [f"dim={I.dim}"]
    if I.declared_variety_dim is not None:
        lines.append(f"variety_dim={I.declared_variety_dim}")
    if I.declared_degree is not None:
        lines.append(f"degree={I.declared_degree}")
    for g in I.generators:
        lines.append(format_polynomial(g))
    return "\n".join(lines) + "\n"


def parse_ideal(text: str) -> Ideal:
    dim: int | None = None
    variety_dim: int | None = None
    degree: int | None = None
    gens: list[Polynomial] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        # headers are "name=value"; "name value" is tolerated
        head, sep, rest = line.partition("=")
        if not sep:
            head, _, rest = line.partition(" ")
        head = head.strip()
        if head == "dim" and dim is None:
            dim = int(rest)
        elif head == "variety_dim" and not gens:
            variety_dim = int(rest)
        elif head == "degree" and not gens:
            degree = int(rest)
        else:
            if dim is None:
                raise ValueError("ideal file must declare 'dim' before generators")
            gens.append(parse_polynomial(line, dim))
    if dim is None:
        raise ValueError("ideal file missing 'dim' header")
    return Ideal(dim, tuple(gens), declared_variety_dim=variety_dim, declared_degree=degree)
