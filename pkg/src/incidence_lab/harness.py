"""Experiment orchestration: size sweeps, exponent fits, bound verification.

A sweep builds one instance per size, counts edges exactly, evaluates the
selected bound formulas, and runs the hypothesis gates (forbidden-K_{k,k}
for the Zarankiewicz bounds, the sphere condition for unit-distance
bounds).  Everything is deterministic given the config, and wall times are
kept out of serialized reports unless explicitly requested so reruns are
bit-identical.
"""

from __future__ import annotations

import inspect
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bounds import BOUND_REGISTRY
from .budgeted import BudgetExceeded
from .constructions import GeneratorSpec, sphere_condition_check
from .poly import format_scalar
from .predicates import edges as edge_pairs
from .predicates import is_kkk_free

SWEEP_SCHEMA = "incidence-sweep/v1"

# which size parameter each generator sweeps over
SIZE_BINDINGS = {
    "st_grid": lambda s: {"N": s},
    "unit_r4": lambda s: {"n": s},
    "unit_grid": lambda s: {"N": s},
    "hyperplane_dual": lambda s: {"m": s, "n": s},
    "scattered_unit_r4": lambda s: {"n": s},
}

KKK_GATED = frozenset({"kst", "dual-shatter", "planar", "equal-dim", "mixed-dim", "variety"})
SPHERE_GATED = frozenset({"unit-r4", "unit-rd"})


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep description; validated on construction."""

    generator: GeneratorSpec
    sizes: tuple = ()
    k: int = 2
    epsilon: Fraction = Fraction(1, 10)
    bounds: tuple = ("planar",)
    seed: int = 0
    grid_resolution: int = 16
    pair_budget: int = 20_000_000
    kkk_budget: int = 2_000_000
    sphere_budget: int = 200_000
    bound_params: Mapping = field(default_factory=dict)
    output_path: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "bounds", tuple(self.bounds))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        for a, b in zip(self.sizes, self.sizes[1:]):
            if b <= a:
                raise ValueError("sizes must be strictly increasing")
        if any(s < 1 for s in self.sizes):
            raise ValueError("sizes must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        for name in self.bounds:
            if name not in BOUND_REGISTRY:
                known = ", ".join(sorted(BOUND_REGISTRY))
                raise ValueError(f"unknown bound {name!r} (known: {known})")
        if self.grid_resolution < 2:
            raise ValueError("grid resolution must be at least 2")
        for label, budget in (
            ("pair_budget", self.pair_budget),
            ("kkk_budget", self.kkk_budget),
            ("sphere_budget", self.sphere_budget),
        ):
            if budget < 1:
                raise ValueError(f"{label} must be positive")
        if self.generator.name not in SIZE_BINDINGS:
            raise ValueError(f"generator {self.generator.name!r} has no size binding")


@dataclass(frozen=True)
class SweepRow:
    size: int
    m: int
    n: int
    edges: object  # int, or None when the pair budget refused the count
    gates: tuple  # ((bound name, status), ...) in config bound order
    bound_values: tuple  # ((bound name, Fraction | float | None), ...)
    wall_time: float


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    stderr: object  # float, or None when degrees of freedom are exhausted


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: tuple
    fit: object  # FitResult | None
    aborted: object  # str | None


def fit_exponent(rows):
    """Least-squares fit of log(value) against log(size).

    rows is a sequence of (size, value) pairs; a non-positive entry is an
    error naming the offending row.  The slope standard error is reported
    when more than two rows leave a degree of freedom.
    """
    rows = list(rows)
    if len(rows) < 2:
        raise ValueError("need at least 2 rows to fit an exponent")
    for i, (size, value) in enumerate(rows):
        if size <= 0:
            raise ValueError(f"row {i} has non-positive size {size}")
        if value <= 0:
            raise ValueError(f"row {i} has non-positive value {value}")
    xs = np.log([float(s) for s, _ in rows])
    ys = np.log([float(v) for _, v in rows])
    design = np.column_stack([xs, np.ones(len(rows))])
    coeffs, _, _, _ = np.linalg.lstsq(design, ys, rcond=None)
    slope, intercept = float(coeffs[0]), float(coeffs[1])
    dof = len(rows) - 2
    if dof <= 0:
        return FitResult(slope, intercept, None)
    residuals = ys - design @ coeffs
    spread = float(np.sum((xs - xs.mean()) ** 2))
    if spread == 0:
        return FitResult(slope, intercept, None)
    sigma2 = float(residuals @ residuals) / dof
    return FitResult(slope, intercept, math.sqrt(sigma2 / spread))


def _bound_value(name, m, n, inst, cfg):
    fn, required = BOUND_REGISTRY[name]
    pool = {"m": m, "n": n, "k": cfg.k, "d1": inst.predicate.d1, "d2": inst.predicate.d2}
    if inst.predicate.d1 == inst.predicate.d2:
        pool["d"] = inst.predicate.d1
    pool.update(cfg.bound_params)
    try:
        params = {p: pool[p] for p in required}
    except KeyError as missing:
        raise ValueError(
            f"bound {name!r} needs parameter {missing.args[0]!r}; "
            f"pass it via bound_params"
        ) from None
    if "eps" in inspect.signature(fn).parameters:
        params["eps"] = cfg.epsilon
    return fn(**params)


def _gate_status(name, inst, cfg, edge_list):
    if name in KKK_GATED:
        if edge_list is None:
            return "undecided"
        verdict = is_kkk_free(inst, cfg.k, cfg.kkk_budget, edge_list=edge_list)
        if verdict.is_true():
            return "pass"
        if verdict.is_false():
            return "fail"
        return "undecided"
    if name in SPHERE_GATED:
        d = inst.predicate.d1
        if cfg.k < d - 1:
            return "skipped"  # subset fitting cannot decide this k
        verdict = sphere_condition_check(inst.P, cfg.k, cfg.sphere_budget)
        if verdict.is_true():
            return "pass"
        if verdict.is_false():
            return "fail"
        return "undecided"
    return "none"


def _sweep_point(cfg, size):
    started = time.perf_counter()
    binding = SIZE_BINDINGS[cfg.generator.name]
    spec = GeneratorSpec(cfg.generator.name, binding(size), seed=cfg.seed)
    inst = spec.build()
    try:
        edge_list = edge_pairs(inst, cfg.pair_budget)
        n_edges = len(edge_list)
    except BudgetExceeded:
        edge_list = None
        n_edges = None
    gates = tuple((b, _gate_status(b, inst, cfg, edge_list)) for b in cfg.bounds)
    values = tuple((b, _bound_value(b, inst.m, inst.n, inst, cfg)) for b in cfg.bounds)
    return SweepRow(
        size=size,
        m=inst.m,
        n=inst.n,
        edges=n_edges,
        gates=gates,
        bound_values=values,
        wall_time=time.perf_counter() - started,
    )


def run_sweep(cfg):
    """Generate, count, gate, and evaluate bounds for every configured size.

    Sweep points run on a thread pool; assembly is sequential by size, so a
    generator failure keeps the rows of every smaller size and flags the
    abort.  The report is a deterministic function of the config.
    """
    if not cfg.sizes:
        return SweepResult(config=cfg, rows=(), fit=None, aborted=None)
    rows = []
    aborted = None
    with ThreadPoolExecutor(max_workers=min(8, len(cfg.sizes))) as pool:
        futures = [(size, pool.submit(_sweep_point, cfg, size)) for size in cfg.sizes]
        for size, fut in futures:
            if aborted is not None:
                fut.cancel()
                continue
            try:
                rows.append(fut.result())
            except Exception as exc:  # generator failure aborts with partial rows
                aborted = f"size {size}: {exc}"
    fit = None
    fit_rows = [(row.m, row.edges) for row in rows if row.edges]
    if len(fit_rows) >= 4:
        fit = fit_exponent(fit_rows)
    return SweepResult(config=cfg, rows=tuple(rows), fit=fit, aborted=aborted)


@dataclass(frozen=True)
class BoundCheck:
    row_index: int
    size: int
    bound: str
    edges: object
    allowed: object
    status: str  # pass | fail | hypothesis failed | undecided | skipped


@dataclass(frozen=True)
class BoundReport:
    constant: Fraction
    checks: tuple

    @property
    def overall_pass(self):
        return all(c.status != "fail" for c in self.checks)

    def failures(self):
        return tuple(c for c in self.checks if c.status == "fail")


def fit_constant(result, bound=None):
    """Smallest corpus-wide constant c making every decided row pass.

    Rows with an uncounted edge set or a failed hypothesis gate do not
    constrain c (the bound does not apply to them).  Exact where the bound
    value is exact.
    """
    best = Fraction(0)
    for row in result.rows:
        if row.edges is None:
            continue
        gate_of = dict(row.gates)
        for name, value in row.bound_values:
            if bound is not None and name != bound:
                continue
            if value is None or gate_of.get(name) == "fail":
                continue
            if isinstance(value, (int, Fraction)):
                ratio = Fraction(row.edges) / Fraction(value)
            else:
                # two ulps absorb the division and re-multiplication roundings
                ratio = row.edges / value
                ratio = math.nextafter(math.nextafter(ratio, math.inf), math.inf)
            if ratio > best:
                best = ratio
    return best


def verify_bounds(result, constant):
    """Check edges <= constant * bound per row, honoring hypothesis gates.

    A row whose gate failed reports "hypothesis failed" instead of a bound
    verdict; an undecided or skipped gate, or an uncounted row, reports
    "undecided" and never counts as a bound failure.
    """
    constant = Fraction(constant)
    checks = []
    for idx, row in enumerate(result.rows):
        gate_of = dict(row.gates)
        for bound, value in row.bound_values:
            if value is None:
                allowed = None
            elif isinstance(value, (int, Fraction)):
                allowed = constant * Fraction(value)
            else:
                allowed = float(constant) * value
            gate = gate_of.get(bound, "none")
            if row.edges is None or gate in ("undecided", "skipped"):
                status = "undecided"
            elif gate == "fail":
                status = "hypothesis failed"
            elif allowed is None:
                status = "skipped"
            else:
                status = "pass" if row.edges <= allowed else "fail"
            checks.append(
                BoundCheck(
                    row_index=idx,
                    size=row.size,
                    bound=bound,
                    edges=row.edges,
                    allowed=allowed,
                    status=status,
                )
            )
    return BoundReport(constant=constant, checks=tuple(checks))


# ---------------------------------------------------------------------------
# partition degree envelope


@dataclass(frozen=True)
class PartitionRunStats:
    m: int
    r: int
    dprime: int
    degree: int
    first_round_degree: int


@dataclass(frozen=True)
class EnvelopeFit:
    """Corpus-wide constants for deg g <= c_2(d') r^(1/d') + c_D log2 m.

    c_2(d') = c1 / (1 - 2^(-1/d')) comes from summing the per-round bisector
    degree law as a geometric series; c_D absorbs the log-many rounds each
    contributing at most the first-round degree.
    """

    c1: float
    c_d: float

    def c2(self, dprime):
        return self.c1 / (1 - 2 ** (-1 / dprime))

    def allowed_degree(self, m, r, dprime):
        return self.c2(dprime) * r ** (1 / dprime) + self.c_d * math.log2(max(m, 2))

    def holds(self, run):
        return run.degree <= self.allowed_degree(run.m, run.r, run.dprime) + 1e-9


def fit_partition_envelope(runs):
    """Smallest (c1, c_D) pair covering every run, c_D fixed first."""
    runs = list(runs)
    if not runs:
        raise ValueError("no partition runs to fit")
    c_d = float(max(run.first_round_degree for run in runs))
    needed = []
    for run in runs:
        geometric = run.r ** (1 / run.dprime) / (1 - 2 ** (-1 / run.dprime))
        slack = run.degree - c_d * math.log2(max(run.m, 2))
        needed.append(slack / geometric)
    return EnvelopeFit(c1=max(needed), c_d=c_d)


# ---------------------------------------------------------------------------
# serialization


def _value_text(v):
    if v is None:
        return ""
    if isinstance(v, (int, Fraction)):
        return format_scalar(v)
    return repr(v)


def sweep_csv(result, timings=False):
    """Fixed-column CSV; wall times only on request to keep reruns identical."""
    bounds = result.config.bounds
    header = ["generator", "size", "m", "n", "edges"]
    header += [f"gate_{b}" for b in bounds]
    header += [f"bound_{b}" for b in bounds]
    if timings:
        header.append("wall_time")
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in result.rows:
        gate_of = dict(row.gates)
        value_of = dict(row.bound_values)
        cells = [
            result.config.generator.name,
            str(row.size),
            str(row.m),
            str(row.n),
            "" if row.edges is None else str(row.edges),
        ]
        cells += [gate_of[b] for b in bounds]
        cells += [_value_text(value_of[b]) for b in bounds]
        if timings:
            cells.append(repr(row.wall_time))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def sweep_json(result, timings=False):
    cfg = result.config
    doc = {
        "schema": SWEEP_SCHEMA,
        "config": {
            "generator": cfg.generator.name,
            "generator_params": {k: int(v) for k, v in cfg.generator.params.items()},
            "sizes": list(cfg.sizes),
            "k": cfg.k,
            "epsilon": format_scalar(cfg.epsilon),
            "bounds": list(cfg.bounds),
            "seed": cfg.seed,
            "grid_resolution": cfg.grid_resolution,
            "pair_budget": cfg.pair_budget,
            "kkk_budget": cfg.kkk_budget,
            "sphere_budget": cfg.sphere_budget,
            "bound_params": {k: int(v) for k, v in sorted(cfg.bound_params.items())},
        },
        "rows": [
            {
                "size": row.size,
                "m": row.m,
                "n": row.n,
                "edges": row.edges,
                "gates": {b: s for b, s in row.gates},
                "bounds": {b: _value_text(v) for b, v in row.bound_values},
                **({"wall_time": row.wall_time} if timings else {}),
            }
            for row in result.rows
        ],
        "fit": None
        if result.fit is None
        else {
            "slope": result.fit.slope,
            "intercept": result.fit.intercept,
            "stderr": result.fit.stderr,
        },
        "aborted": result.aborted,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def sweep_dat(result):
    """gnuplot-ready columns: size m n edges."""
    lines = ["# size m n edges"]
    for row in result.rows:
        edges_text = "nan" if row.edges is None else str(row.edges)
        lines.append(f"{row.size} {row.m} {row.n} {edges_text}")
    return "\n".join(lines) + "\n"


def _parse_value_text(text):
    if text == "":
        return None
    if "/" in text:
        return Fraction(text)
    try:
        return Fraction(int(text))
    except ValueError:
        return float(text)


def sweep_result_from_json(text):
    """Rebuild a SweepResult from its versioned JSON report."""
    doc = json.loads(text)
    schema = doc.get("schema")
    if schema != SWEEP_SCHEMA:
        raise ValueError(f"unsupported sweep schema {schema!r}")
    c = doc["config"]
    cfg = ExperimentConfig(
        generator=GeneratorSpec(c["generator"], c["generator_params"], seed=c["seed"]),
        sizes=tuple(c["sizes"]),
        k=c["k"],
        epsilon=Fraction(c["epsilon"]),
        bounds=tuple(c["bounds"]),
        seed=c["seed"],
        grid_resolution=c["grid_resolution"],
        pair_budget=c["pair_budget"],
        kkk_budget=c["kkk_budget"],
        sphere_budget=c["sphere_budget"],
        bound_params=c["bound_params"],
    )
    rows = tuple(
        SweepRow(
            size=r["size"],
            m=r["m"],
            n=r["n"],
            edges=r["edges"],
            gates=tuple((b, r["gates"][b]) for b in cfg.bounds),
            bound_values=tuple((b, _parse_value_text(r["bounds"][b])) for b in cfg.bounds),
            wall_time=r.get("wall_time", 0.0),
        )
        for r in doc["rows"]
    )
    fit = None
    if doc["fit"] is not None:
        fit = FitResult(doc["fit"]["slope"], doc["fit"]["intercept"], doc["fit"]["stderr"])
    return SweepResult(config=cfg, rows=rows, fit=fit, aborted=doc["aborted"])
