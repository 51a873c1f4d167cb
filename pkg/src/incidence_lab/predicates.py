"""Semi-algebraic edge predicates and bipartite instances.

An edge predicate over point pairs (p, q) in R^d1 x R^d2 is a Boolean
formula whose atoms constrain the signs of polynomials in d1 + d2
variables (p coordinates first).  Edges are decided by exact sign
evaluation on every pair; there is no approximate path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .budgeted import Budgeted, BudgetExceeded
from .poly import (
    Point,
    Polynomial,
    as_point,
    format_polynomial,
    format_scalar,
    parse_polynomial,
)
from .setsystems import SetSystem
from ._fasteval import compile_sign, demote_point

RELATIONS = {
    "geq": lambda s: s >= 0,
    "gt": lambda s: s > 0,
    "eq": lambda s: s == 0,
    "leq": lambda s: s <= 0,
    "lt": lambda s: s < 0,
    "neq": lambda s: s != 0,
}


@dataclass(frozen=True)
class SignCondition:
    """Atom: the sign of polynomial number `index` (1-based) satisfies `relation`."""

    index: int
    relation: str

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.index < 1:
            raise ValueError("polynomial index is 1-based")

    def holds(self, signs: Sequence[int]) -> bool:
        return RELATIONS[self.relation](signs[self.index - 1])


@dataclass(frozen=True)
class Formula:
    """AND/OR/NOT tree over sign-condition leaves."""

    op: str  # "and" | "or" | "not" | "atom"
    children: tuple["Formula", ...] = ()
    atom: SignCondition | None = None

    def __post_init__(self) -> None:
        if self.op == "atom":
            if self.atom is None or self.children:
                raise ValueError("atom node needs a condition and no children")
        elif self.op == "not":
            if len(self.children) != 1 or self.atom is not None:
                raise ValueError("not node needs exactly one child")
        elif self.op in ("and", "or"):
            if not self.children or self.atom is not None:
                raise ValueError(f"{self.op} node needs at least one child")
        else:
            raise ValueError(f"unknown operator {self.op!r}")

    def evaluate(self, signs: Sequence[int]) -> bool:
        if self.op == "atom":
            return self.atom.holds(signs)
        if self.op == "not":
            return not self.children[0].evaluate(signs)
        if self.op == "and":
            return all(c.evaluate(signs) for c in self.children)
        return any(c.evaluate(signs) for c in self.children)

    def max_index(self) -> int:
        if self.op == "atom":
            return self.atom.index
        return max(c.max_index() for c in self.children)

    def compile(self) -> Callable[[Sequence[int]], bool]:
        if self.op == "atom":
            rel = RELATIONS[self.relation_name()]
            idx = self.atom.index - 1
            return lambda signs: rel(signs[idx])
        kids = [c.compile() for c in self.children]
        if self.op == "not":
            inner = kids[0]
            return lambda signs: not inner(signs)
        if self.op == "and":
            return lambda signs: all(k(signs) for k in kids)
        return lambda signs: any(k(signs) for k in kids)

    def relation_name(self) -> str:
        assert self.op == "atom"
        return self.atom.relation


def atom(relation: str, index: int) -> Formula:
    return Formula("atom", atom=SignCondition(index, relation))


def f_and(*children: Formula) -> Formula:
    return Formula("and", tuple(children))


def f_or(*children: Formula) -> Formula:
    return Formula("or", tuple(children))


def f_not(child: Formula) -> Formula:
    return Formula("not", (child,))


def format_formula(f: Formula) -> str:
    if f.op == "atom":
        return f"({f.atom.relation} {f.atom.index})"
    inner = " ".join(format_formula(c) for c in f.children)
    return f"({f.op} {inner})"


def parse_formula(text: str) -> Formula:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse() -> Formula:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != "(":
            raise ValueError(f"expected '(' at token {pos} of {text!r}")
        pos += 1
        head = tokens[pos]
        pos += 1
        if head in RELATIONS:
            idx = tokens[pos]
            pos += 1
            if tokens[pos] != ")":
                raise ValueError("sign condition takes exactly one index")
            pos += 1
            return atom(head, int(idx))
        if head not in ("and", "or", "not"):
            raise ValueError(f"unknown operator {head!r}")
        children = []
        while pos < len(tokens) and tokens[pos] == "(":
            children.append(parse())
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("unbalanced parentheses")
        pos += 1
        return Formula(head, tuple(children))

    out = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens after formula")
    return out


@dataclass(frozen=True)
class EdgePredicate:
    """Sign formula over polynomials in d1 + d2 variables, with a declared
    description complexity bounding both the polynomial count and degrees."""

    d1: int
    d2: int
    polynomials: tuple[Polynomial, ...]
    formula: Formula
    complexity: int = 0

    def __post_init__(self) -> None:
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError("side dimensions must be positive")
        for f in self.polynomials:
            if f.dim != self.d1 + self.d2:
                raise ValueError(
                    f"predicate polynomial has {f.dim} variables, expected {self.d1 + self.d2}"
                )
        if not self.polynomials:
            raise ValueError("predicate needs at least one polynomial")
        if self.formula.max_index() > len(self.polynomials):
            raise ValueError("formula references a missing polynomial")
        max_deg = max(
            (int(f.degree) for f in self.polynomials if not f.is_zero()), default=1
        )
        implied = max(len(self.polynomials), max_deg, 1)
        if self.complexity == 0:
            object.__setattr__(self, "complexity", implied)
        elif self.complexity < implied:
            raise ValueError(
                f"declared complexity {self.complexity} below implied {implied}"
            )

    def holds(self, p: Sequence, q: Sequence) -> bool:
        x = tuple(p) + tuple(q)
        signs = [_sign(f.evaluate(x)) for f in self.polynomials]
        return self.formula.evaluate(signs)


def _sign(v: Fraction) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


@dataclass(frozen=True)
class BipartiteInstance:
    predicate: EdgePredicate
    P: tuple[Point, ...]
    Q: tuple[Point, ...]

    def __post_init__(self) -> None:
        for p in self.P:
            if len(p) != self.predicate.d1:
                raise ValueError("left point dimension mismatch")
        for q in self.Q:
            if len(q) != self.predicate.d2:
                raise ValueError("right point dimension mismatch")

    @property
    def m(self) -> int:
        return len(self.P)

    @property
    def n(self) -> int:
        return len(self.Q)


DEFAULT_PAIR_BUDGET = 20_000_000


def _pair_evaluator(inst: BipartiteInstance):
    signs = [compile_sign(f) for f in inst.predicate.polynomials]
    formula = inst.predicate.formula.compile()
    left = [demote_point(p) for p in inst.P]
    right = [demote_point(q) for q in inst.Q]
    return signs, formula, left, right


def edges(
    inst: BipartiteInstance, pair_budget: int = DEFAULT_PAIR_BUDGET
) -> list[tuple[int, int]]:
    """All edge index pairs (i, j), by exact evaluation on every pair."""
    out = []
    for i, j, ok in _edge_scan(inst, pair_budget):
        if ok:
            out.append((i, j))
    return out


def edge_count(inst: BipartiteInstance, pair_budget: int = DEFAULT_PAIR_BUDGET) -> int:
    return sum(1 for _, _, ok in _edge_scan(inst, pair_budget) if ok)


def _edge_scan(inst: BipartiteInstance, pair_budget: int):
    if inst.m * inst.n > pair_budget:
        raise BudgetExceeded(
            f"{inst.m} x {inst.n} pairs exceed the pair budget {pair_budget}"
        )
    signs, formula, left, right = _pair_evaluator(inst)
    single = len(signs) == 1
    sign0 = signs[0]
    for i, p in enumerate(left):
        for j, q in enumerate(right):
            x = p + q
            if single:
                ok = formula((sign0(x),))
            else:
                ok = formula([s(x) for s in signs])
            yield i, j, ok


def neighborhood_system(
    inst: BipartiteInstance,
    side: str,
    edge_list: Sequence[tuple[int, int]] | None = None,
) -> SetSystem:
    """Neighborhoods of the chosen side's vertices over the opposite ground set."""
    if side not in ("P", "Q"):
        raise ValueError("side must be 'P' or 'Q'")
    if edge_list is None:
        edge_list = edges(inst)
    if side == "Q":
        masks = [0] * inst.n
        for i, j in edge_list:
            masks[j] |= 1 << i
        return SetSystem(inst.m, tuple(masks))
    masks = [0] * inst.m
    for i, j in edge_list:
        masks[i] |= 1 << j
    return SetSystem(inst.n, tuple(masks))


def is_kkk_free(
    inst: BipartiteInstance,
    k: int,
    budget: int = 2_000_000,
    edge_list: Sequence[tuple[int, int]] | None = None,
) -> Budgeted:
    """Decide whether the instance has no K_{k,k}: no k vertices on one side
    sharing k common neighbors.

    Searches over groups of identical neighborhoods on the side with fewer
    vertices; a group may supply up to its multiplicity many vertices, and
    adding a group ANDs its neighborhood into the running intersection.
    Branches whose intersection drops below k points are pruned.  A found
    K_{k,k} is reported as (side, k vertex indices, k common neighbors).
    """
    if k < 1:
        raise ValueError("k must be positive")
    if min(inst.m, inst.n) < k:
        return Budgeted(True, True)
    side = "Q" if inst.n <= inst.m else "P"
    system = neighborhood_system(inst, side, edge_list)
    groups: dict[int, list[int]] = {}
    for v, hood in enumerate(system.sets):
        groups.setdefault(hood, []).append(v)
    masks = list(groups)
    members = [groups[h] for h in masks]
    n_groups = len(masks)
    spent = 0

    def first_k_bits(mask: int) -> tuple[int, ...]:
        out = []
        i = 0
        while mask and len(out) < k:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return tuple(out)

    def witness_vertices(chosen: tuple[int, ...]) -> tuple[int, ...]:
        picked: list[int] = []
        for g in chosen:
            picked.extend(members[g][: k - len(picked)])
        return tuple(sorted(picked[:k]))

    full = (1 << system.ground_size) - 1
    stack: list[tuple[int, tuple[int, ...], int, int]] = [(0, (), full, 0)]
    while stack:
        start, chosen, inter, mult = stack.pop()
        spent += 1
        if spent > budget:
            return Budgeted(None, False, explored=spent - 1)
        if mult >= k:
            witness = (side, witness_vertices(chosen), first_k_bits(inter))
            return Budgeted(False, True, witness=witness, explored=spent)
        # reversed push order so groups are explored in ascending index order
        for g in range(n_groups - 1, start - 1, -1):
            new_inter = inter & masks[g]
            if bin(new_inter).count("1") >= k:
                stack.append((g + 1, chosen + (g,), new_inter, mult + len(members[g])))
    return Budgeted(True, True, explored=spent)


# -- instance file format ------------------------------------------------

INSTANCE_FORMAT = "semialg_graph/v1"


def instance_to_json(inst: BipartiteInstance) -> str:
    pred = inst.predicate
    doc = {
        "format": INSTANCE_FORMAT,
        "d1": pred.d1,
        "d2": pred.d2,
        "complexity": pred.complexity,
        "polynomials": [format_polynomial(f) for f in pred.polynomials],
        "formula": format_formula(pred.formula),
        "P": [[format_scalar(c) for c in p] for p in inst.P],
        "Q": [[format_scalar(c) for c in q] for q in inst.Q],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def instance_from_json(text: str) -> BipartiteInstance:
    doc = json.loads(text)
    fmt = doc.get("format")
    if fmt != INSTANCE_FORMAT:
        raise ValueError(f"unsupported instance format {fmt!r}")
    d1, d2 = int(doc["d1"]), int(doc["d2"])
    polys = tuple(parse_polynomial(t, d1 + d2) for t in doc["polynomials"])
    pred = EdgePredicate(
        d1,
        d2,
        polys,
        parse_formula(doc["formula"]),
        complexity=int(doc.get("complexity", 0)),
    )
    P = tuple(as_point(p) for p in doc["P"])
    Q = tuple(as_point(q) for q in doc["Q"])
    return BipartiteInstance(pred, P, Q)
