"""Exact multivariate polynomial arithmetic over the rationals.

Polynomials are sparse: a mapping from monomials (dense exponent tuples)
to nonzero Fraction coefficients.  All arithmetic, evaluation, and sign
decisions are exact; nothing in this module touches floating point.

Monomials are ordered graded-lexicographically: first by total degree,
ties broken by the exponent tuple.  Under this order the degree-one
monomials ascend as x_d < ... < x_2 < x_1, so for two variables the
first few basis elements read 1, x2, x1, x2^2, x1 x2, x1^2.

The text format for a polynomial is a signed sum of terms, each term a
rational coefficient followed by optional variable powers:

    1 * x1^2 x2 - 2/3 * x2 + 5

Printing always emits the coefficient (even when it is 1) and orders
terms by descending graded-lex monomial, so print -> parse -> print is
bit-exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Scalar = Fraction
Point = tuple[Fraction, ...]

#: degree of the zero polynomial
NEG_INF = float("-inf")

Rationalish = Union[int, str, Fraction]


def as_scalar(value: Rationalish) -> Fraction:
    """Coerce ints, 'p/q' strings, or Fractions to an exact Scalar."""
    if isinstance(value, float):
        raise TypeError("refusing float input; pass int, Fraction, or 'p/q' string")
    return Fraction(value)


def as_point(coords: Iterable[Rationalish]) -> Point:
    return tuple(as_scalar(c) for c in coords)


@total_ordering
@dataclass(frozen=True, slots=True)
class Monomial:
    """A power product x1^a1 ... xd^ad, stored as a dense exponent tuple."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def _key(self) -> tuple[int, tuple[int, ...]]:
        return (self.degree, self.exponents)

    def __lt__(self, other: "Monomial") -> bool:
        return self._key() < other._key()

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(self.exponents) != len(other.exponents):
            raise ValueError("monomial dimensions differ")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        if len(x) != len(self.exponents):
            raise ValueError(f"point has {len(x)} coordinates, monomial expects {len(self.exponents)}")
        v = Fraction(1)
        for c, e in zip(x, self.exponents):
            if e:
                v *= Fraction(c) ** e
        return v

    def __str__(self) -> str:
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{i + 1}")
            elif e > 1:
                parts.append(f"x{i + 1}^{e}")
        return " ".join(parts) if parts else "1"


class Polynomial:
    """Immutable sparse polynomial in ``dim`` variables over the rationals."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Union[Monomial, tuple[int, ...]], Rationalish]):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            if not isinstance(mono, Monomial):
                mono = Monomial(tuple(mono))
            if mono.dim != dim:
                raise ValueError(f"monomial {mono} has dimension {mono.dim}, expected {dim}")
            c = as_scalar(coeff)
            if c == 0:
                continue
            if mono in clean:
                raise ValueError(f"duplicate monomial {mono}")
            clean[mono] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "Polynomial":
        return Polynomial(dim, {})

    @staticmethod
    def constant(dim: int, value: Rationalish) -> "Polynomial":
        return Polynomial(dim, {Monomial((0,) * dim): as_scalar(value)})

    @staticmethod
    def variable(dim: int, index: int) -> "Polynomial":
        """The polynomial x_{index+1} in ``dim`` variables (0-based index)."""
        if not 0 <= index < dim:
            raise ValueError(f"variable index {index} out of range for dimension {dim}")
        exps = [0] * dim
        exps[index] = 1
        return Polynomial(dim, {Monomial(tuple(exps)): 1})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(m.degree for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def normalize_sign(self) -> "Polynomial":
        """Scale by -1 if needed so the leading coefficient is positive."""
        if not self.terms or self.leading_coefficient() > 0:
            return self
        return -self

    def items(self):
        """Terms in ascending graded-lex order."""
        return sorted(self.terms.items())

    # -- arithmetic ---------------------------------------------------

    def _check_dim(self, other: "Polynomial") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_dim(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s == 0:
                acc.pop(m, None)
            else:
                acc[m] = s
        return Polynomial(self.dim, acc)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_dim(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                s = acc.get(m, Fraction(0)) + c1 * c2
                if s == 0:
                    acc.pop(m, None)
                else:
                    acc[m] = s
        return Polynomial(self.dim, acc)

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor: Rationalish) -> "Polynomial":
        f = as_scalar(factor)
        if f == 0:
            return Polynomial.zero(self.dim)
        return Polynomial(self.dim, {m: c * f for m, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.dim, 1)
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.dim == other.dim
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.terms.items())))

    # -- evaluation ---------------------------------------------------

    def evaluate(self, x: Sequence[Rationalish]) -> Fraction:
        if len(x) != self.dim:
            raise ValueError(f"point has {len(x)} coordinates, polynomial expects {self.dim}")
        pt = [as_scalar(c) for c in x]
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for c, e in zip(pt, mono.exponents):
                if e:
                    term *= c**e
            total += term
        return total

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.dim}, {format_polynomial(self)!r})"


# -- spec operations ---------------------------------------------------


def evaluate(f: Polynomial, x: Sequence[Rationalish]) -> Fraction:
    return f.evaluate(x)


def sign_at(f: Polynomial, x: Sequence[Rationalish]) -> int:
    """Exact sign of f at a rational point: -1, 0, or +1."""
    v = f.evaluate(x)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def monomial_basis(dim: int, max_degree: int) -> list[Monomial]:
    """All monomials of total degree <= max_degree, ascending graded-lex."""
    if dim < 0 or max_degree < 0:
        raise ValueError("dimension and degree bound must be nonnegative")
    out: list[Monomial] = []
    for deg in range(max_degree + 1):
        level = [
            Monomial(exps)
            for exps in itertools.product(range(deg + 1), repeat=dim)
            if sum(exps) == deg
        ]
        level.sort()
        out.extend(level)
    if dim == 0:
        out = [Monomial(())]
    return out


def basis_size(dim: int, max_degree: int) -> int:
    """Number of monomials of degree <= max_degree in dim variables."""
    return comb(dim + max_degree, max_degree)


def veronese_lift(x: Sequence[Rationalish], basis: Sequence[Union[Monomial, Polynomial]]) -> Point:
    """Evaluate each basis element at x, producing the lifted point."""
    pt = as_point(x)
    return tuple(b.evaluate(pt) for b in basis)


# -- text format -------------------------------------------------------


def format_scalar(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_point(x: Sequence[Fraction]) -> str:
    return " ".join(format_scalar(Fraction(c)) for c in x)


def parse_point(text: str, dim: int) -> Point:
    parts = text.split()
    if len(parts) != dim:
        raise ValueError(f"expected {dim} coordinates, got {len(parts)}: {text!r}")
    return tuple(Fraction(p) for p in parts)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    pieces: list[str] = []
    for mono, coeff in sorted(f.terms.items(), reverse=True):
        mono_str = str(mono)
        if mono_str == "1":
            body = format_scalar(abs(coeff))
        else:
            body = f"{format_scalar(abs(coeff))} * {mono_str}"
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def parse_polynomial(text: str, dim: int) -> Polynomial:
    """Parse the term format back to a Polynomial; inverse of format_polynomial."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty polynomial text")
    if tokens == ["0"]:
        return Polynomial.zero(dim)
    terms: dict[Monomial, Fraction] = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        tok = tokens[i]
        if not first and tok in ("+", "-"):
            sign = -1 if tok == "-" else 1
            i += 1
            if i >= len(tokens):
                raise ValueError("dangling sign at end of polynomial")
            tok = tokens[i]
        first = False
        if tok.startswith("-") and tok != "-":
            sign = -sign
            tok = tok[1:]
        coeff, i = _parse_coeff(tok, tokens, i)
        exps = [0] * dim
        saw_var = False
        if i < len(tokens) and tokens[i] == "*":
            i += 1
            if i >= len(tokens) or not tokens[i].startswith("x"):
                raise ValueError("expected variable after '*'")
            while i < len(tokens) and tokens[i].startswith("x"):
                _apply_varpow(tokens[i], exps, dim)
                saw_var = True
                i += 1
        if i < len(tokens) and tokens[i].startswith("x") and not saw_var:
            raise ValueError(f"missing '*' before {tokens[i]!r}")
        mono = Monomial(tuple(exps))
        if mono in terms:
            raise ValueError(f"duplicate monomial {mono} in input")
        value = sign * coeff
        if value != 0:
            terms[mono] = value
    return Polynomial(dim, terms)


def _parse_coeff(tok: str, tokens: list[str], i: int) -> tuple[Fraction, int]:
    try:
        return Fraction(tok), i + 1
    except ValueError:
        raise ValueError(f"bad coefficient {tok!r}") from None


def _apply_varpow(tok: str, exps: list[int], dim: int) -> None:
    body = tok[1:]
    if "^" in body:
        idx_str, _, exp_str = body.partition("^")
    else:
        idx_str, exp_str = body, "1"
    if not idx_str.isdigit() or not exp_str.lstrip("-").isdigit():
        raise ValueError(f"bad variable power {tok!r}")
    idx, exp = int(idx_str), int(exp_str)
    if not 1 <= idx <= dim:
        raise ValueError(f"variable index {idx} out of range for dimension {dim}")
    if exp < 1:
        raise ValueError(f"exponent must be positive in {tok!r}")
    exps[idx - 1] += exp
