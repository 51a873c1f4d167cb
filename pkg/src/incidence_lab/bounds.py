"""Right-hand sides of the Zarankiewicz-type incidence bounds.

Every evaluator returns an exact Fraction when all powers involved have
perfect rational roots (always the case for integer exponents, often for
cube-root laws on grid sizes) and a float otherwise.  The caller supplies
the multiplicative constant; defaults to 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Union

Number = Union[int, Fraction, float]


def _inth_root(x: int, q: int) -> int | None:
    # exact floor check: returns r with r**q == x, else None
    if x < 0:
        return None
    if x < 2:
        return x
    r = 1 << -(-x.bit_length() // q)
    while True:
        nr = ((q - 1) * r + x // r ** (q - 1)) // q
        if nr >= r:
            break
        r = nr
    return r if r**q == x else None


def rational_power(base: Number, exponent: Number) -> Fraction | float:
    """base**exponent, exact when the result is rational."""
    if isinstance(base, float) or isinstance(exponent, float):
        return float(base) ** float(exponent)
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base < 0:
        raise ValueError("negative base")
    if base == 0:
        if exponent < 0:
            raise ValueError("0 to a negative power")
        return Fraction(1) if exponent == 0 else Fraction(0)
    p = exponent.numerator
    q = exponent.denominator
    base_bits = base.numerator.bit_length() + base.denominator.bit_length()
    # refuse astronomically wide exact intermediates; the result is almost
    # surely irrational there anyway
    if q > 64 or abs(p) * base_bits > 1 << 16:
        return float(base) ** float(exponent)
    powed = base**p
    if q == 1:
        return powed
    rn = _inth_root(powed.numerator, q)
    rd = _inth_root(powed.denominator, q)
    if rn is not None and rd is not None:
        return Fraction(rn, rd)
    return float(powed) ** (1.0 / q)


def _combine(c: Number, *terms: Fraction | float) -> Fraction | float:
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    if isinstance(total, Fraction) and isinstance(c, (int, Fraction)):
        return Fraction(c) * total
    return float(c) * float(total)


def _check_sizes(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise ValueError("vertex counts must be nonnegative")


def _check_eps(eps: Number) -> None:
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")


def kst(m: int, n: int, k: int, c: Number = 1) -> Fraction | float:
    """Classical forbidden-K_{k,k} bound c*(m*n^(1-1/k) + n)."""
    _check_sizes(m, n)
    if k < 1:
        raise ValueError("k must be positive")
    return _combine(c, m * rational_power(n, Fraction(k - 1, k)), Fraction(n))


def dual_shatter_refinement(m: int, n: int, d2: int, c: Number = 1) -> Fraction | float:
    """KST-shaped bound whose exponent uses only the right side's ambient
    dimension d2: c*(m*n^(1-1/d2) + n)."""
    _check_sizes(m, n)
    if d2 < 1:
        raise ValueError("d2 must be positive")
    return _combine(c, m * rational_power(n, Fraction(d2 - 1, d2)), Fraction(n))


def planar(m: int, n: int, c: Number = 1) -> Fraction | float:
    """Planar-by-planar instances: c*((mn)^(2/3) + m + n)."""
    _check_sizes(m, n)
    return _combine(c, rational_power(m * n, Fraction(2, 3)), Fraction(m + n))


def equal_dimension(
    m: int, n: int, d: int, eps: Number = 0, c: Number = 1
) -> Fraction | float:
    """Both sides in R^d: c*((mn)^(d/(d+1)+eps) + m + n)."""
    _check_sizes(m, n)
    _check_eps(eps)
    if d < 1:
        raise ValueError("d must be positive")
    expo = Fraction(d, d + 1) + Fraction(eps) if not isinstance(eps, float) else None
    if expo is None:
        return _combine(c, float(m * n) ** (d / (d + 1) + eps), Fraction(m + n))
    return _combine(c, rational_power(m * n, expo), Fraction(m + n))


def mixed_dimension(
    m: int, n: int, d1: int, d2: int, eps: Number = 0, c: Number = 1
) -> Fraction | float:
    """Sides in R^d1 and R^d2:
    c*(m^(d2(d1-1)/(d1d2-1)+eps) * n^(d1(d2-1)/(d1d2-1)) + m + n)."""
    _check_sizes(m, n)
    _check_eps(eps)
    if d1 < 1 or d2 < 1:
        raise ValueError("dimensions must be positive")
    if d1 * d2 == 1:
        raise ValueError("exponent undefined at d1 = d2 = 1")
    denom = d1 * d2 - 1
    alpha = Fraction(d2 * (d1 - 1), denom)
    beta = Fraction(d1 * (d2 - 1), denom)
    return _power_product_bound(m, n, alpha, beta, eps, c)


def variety_restricted(
    m: int, n: int, d: int, s: int, eps: Number = 0, c: Number = 1
) -> Fraction | float:
    """Right side on an s-dimensional variety in R^d:
    c*(m^((d-1)s/(ds-1)+eps) * n^(d(s-1)/(ds-1)) + m + n)."""
    _check_sizes(m, n)
    _check_eps(eps)
    if d < 1 or s < 1:
        raise ValueError("dimensions must be positive")
    if d * s == 1:
        raise ValueError("exponent undefined at d = s = 1")
    denom = d * s - 1
    alpha = Fraction((d - 1) * s, denom)
    beta = Fraction(d * (s - 1), denom)
    return _power_product_bound(m, n, alpha, beta, eps, c)


def tube_point(
    m: int, n: int, d: int, eps: Number = 0, c: Number = 1
) -> Fraction | float:
    """m unit tubes against n points in R^d:
    c*(m^((2d-2)(d-1)/(d(2d-2)-1)+eps) * n^(d(2d-3)/(d(2d-2)-1)) + m + n)."""
    _check_sizes(m, n)
    _check_eps(eps)
    if d < 2:
        raise ValueError("tube bound needs d >= 2")
    denom = d * (2 * d - 2) - 1
    alpha = Fraction((2 * d - 2) * (d - 1), denom)
    beta = Fraction(d * (2 * d - 3), denom)
    return _power_product_bound(m, n, alpha, beta, eps, c)


def _power_product_bound(
    m: int, n: int, alpha: Fraction, beta: Fraction, eps: Number, c: Number
) -> Fraction | float:
    if isinstance(eps, float):
        main = float(m) ** (float(alpha) + eps) * float(n) ** float(beta)
    else:
        main_m = rational_power(m, alpha + Fraction(eps))
        main_n = rational_power(n, beta)
        main = (
            main_m * main_n
            if isinstance(main_m, Fraction) and isinstance(main_n, Fraction)
            else float(main_m) * float(main_n)
        )
    return _combine(c, main, Fraction(m + n))


def unit_distance_r4(n: int, eps: Number = 0, c: Number = 1) -> Fraction | float:
    """Unit-distance pairs in R^4: c*n^(8/5+eps)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    if isinstance(eps, float):
        return _combine(c, float(n) ** (8 / 5 + eps))
    return _combine(c, rational_power(n, Fraction(8, 5) + Fraction(eps)))


def unit_distance_general(
    n: int, d: int, eps: Number = 0, c: Number = 1
) -> Fraction | float:
    """Unit-distance pairs in R^d: c*n^(2d/(d+1)+eps)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if d < 2:
        raise ValueError("d must be at least 2")
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    if isinstance(eps, float):
        return _combine(c, float(n) ** (2 * d / (d + 1) + eps))
    return _combine(c, rational_power(n, Fraction(2 * d, d + 1) + Fraction(eps)))


# registry for the harness and CLI; values are (callable, required params)
BOUND_REGISTRY: Mapping[str, tuple[Callable[..., Fraction | float], tuple[str, ...]]] = {
    "kst": (kst, ("m", "n", "k")),
    "dual-shatter": (dual_shatter_refinement, ("m", "n", "d2")),
    "planar": (planar, ("m", "n")),
    "equal-dim": (equal_dimension, ("m", "n", "d")),
    "mixed-dim": (mixed_dimension, ("m", "n", "d1", "d2")),
    "variety": (variety_restricted, ("m", "n", "d", "s")),
    "tubes": (tube_point, ("m", "n", "d")),
    "unit-r4": (unit_distance_r4, ("n",)),
    "unit-rd": (unit_distance_general, ("n", "d")),
}


def evaluate_bound(name: str, params: Mapping[str, Number]) -> Fraction | float:
    """Look up a bound by registry name and evaluate it on params.

    Unknown names and missing required parameters raise ValueError; the
    optional `eps` and `c` parameters pass through when present.
    """
    if name not in BOUND_REGISTRY:
        raise ValueError(f"unknown bound {name!r}; known: {sorted(BOUND_REGISTRY)}")
    fn, required = BOUND_REGISTRY[name]
    missing = [p for p in required if p not in params]
    if missing:
        raise ValueError(f"bound {name!r} missing parameters {missing}")
    allowed = set(required) | {"eps", "c"}
    extra = [p for p in params if p not in allowed]
    if extra:
        raise ValueError(f"bound {name!r} got unexpected parameters {extra}")
    return fn(**{k: v for k, v in params.items()})
