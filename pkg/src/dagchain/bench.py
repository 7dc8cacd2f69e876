"""Experiment harness: heuristic sweeps, width curves, stability and scaling runs.

Results are plain CSV.  Every row carries its model, size, degree and seed,
so any single row can be replayed with :func:`run_cell`.
"""

from __future__ import annotations

import csv
import io
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .concat import concatenate, decompose_h3_conc
from .decompose import decompose_co, decompose_h3, decompose_no
from .exceptions import ParamError
from .generators import MODELS, GenSpec, generate
from .graph import Dag, TopoOrder, sort_adjacency, topo_sort
from .index import build_index
from .oracles import tc_dfs, width_fulkerson

logger = logging.getLogger(__name__)

__all__ = [
    "ALGORITHMS",
    "CSV_FIELDS",
    "RunRecord",
    "Grid",
    "run_pipeline",
    "run_cell",
    "sweep",
    "write_csv",
    "load_grid",
    "width_curve",
    "stability_report",
    "scaling_run",
]

ALGORITHMS = ("co", "no", "h3", "co-conc", "no-conc", "h3-conc")

CSV_FIELDS = (
    "model", "n", "avg_degree", "seed", "algo", "k", "width", "e_tr", "e_red", "tr_ratio",
    "t_decompose_ms", "t_index_ms", "t_total_ms", "t_tc_ms", "c", "sum_path_len", "l",
)

# published deviation figures for comparison only
PUBLISHED_DEVIATION_PCT = {"er": 5.0, "pb": 5.0, "ba": 10.0}


def run_pipeline(g: Dag, t: TopoOrder, algo: str):
    """Run one named decomposition pipeline; returns ``(decomposition, stats or None)``."""
    if algo == "co":
        return decompose_co(g, t), None
    if algo == "no":
        return decompose_no(g, t), None
    if algo == "h3":
        return decompose_h3(g, t), None
    if algo == "co-conc":
        return concatenate(g, decompose_co(g, t), t)
    if algo == "no-conc":
        return concatenate(g, decompose_no(g, t), t)
    if algo == "h3-conc":
        return decompose_h3_conc(g, t)
    raise ParamError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")


def _best_of(fn: Callable, repeats: int):
    best = float("inf")
    out = None
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        out = fn()
        best = min(best, (time.perf_counter() - start) * 1000.0)
    return out, best


@dataclass
class RunRecord:
    model: str
    n: int
    avg_degree: float
    seed: int
    algo: str
    k: int | None = None
    width: int | None = None
    e_tr: int | None = None
    e_red: int | None = None
    tr_ratio: float | None = None
    t_decompose_ms: float | None = None
    t_index_ms: float | None = None
    t_total_ms: float | None = None
    t_tc_ms: float | None = None
    c: int | None = None
    sum_path_len: int | None = None
    l: int | None = None
    error: str | None = field(default=None, compare=False)

    def as_row(self) -> dict:
        row = asdict(self)
        row.pop("error")
        return {k: ("" if v is None else (round(v, 3) if isinstance(v, float) else v)) for k, v in row.items()}


def run_cell(spec: GenSpec, algos: Sequence[str], *, oracle_cap: int = 2000, repeats: int = 3,
             tc_method: str = "dfs", with_index: bool = True) -> list[RunRecord]:
    """Generate one graph and run every requested algorithm on it."""
    base = dict(model=spec.model, n=spec.n, avg_degree=spec.avg_degree, seed=spec.seed)
    try:
        g = generate(spec)
        t = topo_sort(g)
        width = t_tc = None
        if g.n <= oracle_cap:
            closure, t_tc = _best_of(lambda: tc_dfs(g, cap=None, method=tc_method), 1)
            width = width_fulkerson(g, closure, cap=None).width
        stacks = sort_adjacency(g, t) if with_index else None
    except Exception as exc:  # reported per row, the sweep continues
        logger.warning("cell %s failed: %s", spec, exc)
        return [RunRecord(**base, algo=a, error=repr(exc)) for a in algos]

    records = []
    for algo in algos:
        rec = RunRecord(**base, algo=algo, width=width, t_tc_ms=t_tc)
        try:
            (d, stats), t_dec = _best_of(lambda: run_pipeline(g, t, algo), repeats)
            rec.k = d.k
            rec.t_decompose_ms = t_dec
            if stats is not None:
                rec.c, rec.sum_path_len, rec.l = stats.c, stats.sum_path_len, stats.l
            if with_index:
                ix, t_idx = _best_of(lambda: build_index(g, t, d, stacks), repeats)
                rec.e_tr = ix.stats.e_tr
                rec.e_red = ix.stats.e_red
                rec.tr_ratio = ix.stats.tr_ratio
                rec.t_index_ms = t_idx
                rec.t_total_ms = t_dec + t_idx
        except Exception as exc:
            logger.warning("algo %s on %s failed: %s", algo, spec, exc)
            rec.error = repr(exc)
        records.append(rec)
    return records


@dataclass
class Grid:
    models: list[str]
    n: list[int]
    avg_degree: list[float]
    algos: list[str] = field(default_factory=lambda: ["h3-conc"])
    seeds: int = 1
    seed_base: int = 0
    oracle_cap: int = 2000
    repeats: int = 3
    tc_method: str = "dfs"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.models and self.n and self.avg_degree and self.algos):
            raise ParamError("grid must name at least one model, size, degree and algorithm")
        for m in self.models:
            if m not in MODELS:
                raise ParamError(f"unknown model {m!r}")
        for a in self.algos:
            if a not in ALGORITHMS:
                raise ParamError(f"unknown algorithm {a!r}")

    def specs(self) -> list[GenSpec]:
        return [GenSpec(model, n, d, self.seed_base + rep, dict(self.params.get(model, {})))
                for model in self.models for n in self.n for d in self.avg_degree for rep in range(self.seeds)]


def load_grid(path: str | Path) -> Grid:
    """Read a grid from a TOML file whose keys mirror :class:`Grid` fields."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    known = {f.name for f in fields(Grid)}
    unknown = set(raw) - known
    if unknown:
        raise ParamError(f"unknown grid keys: {sorted(unknown)}")
    for key in ("models", "n", "avg_degree", "algos"):
        if key in raw and not isinstance(raw[key], list):
            raw[key] = [raw[key]]
    return Grid(**raw)


def _cell_job(args):
    spec, grid = args
    return run_cell(spec, grid.algos, oracle_cap=grid.oracle_cap, repeats=grid.repeats, tc_method=grid.tc_method)


def sweep(grid: Grid, *, workers: int = 1) -> list[RunRecord]:
    """Run every cell of ``grid``; rows come back in grid order."""
    jobs = [(spec, grid) for spec in grid.specs()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_cell_job, jobs))
    else:
        chunks = [_cell_job(j) for j in jobs]
    return [rec for chunk in chunks for rec in chunk]


def write_csv(records: Iterable[RunRecord], out) -> None:
    """Write records with the fixed header to a path or an open text stream."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_csv(records, fh)
        return
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.as_row())


def records_to_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def width_curve(model: str, n: int, degrees: Sequence[float], seeds: Sequence[int], params: dict | None = None):
    """Median Fulkerson width per degree, with its ratio to ``n / d``.

    Returns ``(rows, summary)``: one row per graph and one summary entry per degree.
    """
    rows, summary = [], []
    for d in degrees:
        widths = []
        for seed in seeds:
            g = generate(GenSpec(model, n, d, seed, dict(params or {})))
            w = width_fulkerson(g, cap=None).width
            widths.append(w)
            rows.append({"model": model, "n": n, "avg_degree": d, "seed": seed, "m": g.m, "width": w})
        med = statistics.median(widths)
        summary.append({"model": model, "n": n, "avg_degree": d, "median_width": med,
                        "n_over_d": n / d if d else float("inf"), "ratio": med * d / n if d else float("nan")})
    return rows, summary


@dataclass(frozen=True)
class StabilityReport:
    model: str
    widths: tuple[int, ...]
    median: float
    max_dev_pct: float
    cv_pct: float
    published_pct: float | None


def stability_report(spec: GenSpec, seeds: Sequence[int]) -> StabilityReport:
    """Spread of the width over seeds.

    ``max_dev_pct`` is the largest distance from the median as a percentage
    of the median; ``cv_pct`` is the population coefficient of variation.
    """
    if len(seeds) < 5:
        raise ParamError("stability needs at least 5 seeds")
    widths = tuple(width_fulkerson(generate(spec.with_seed(s)), cap=None).width for s in seeds)
    med = statistics.median(widths)
    mean = statistics.fmean(widths)
    max_dev = max(abs(w - med) for w in widths) / med * 100.0 if med else 0.0
    cv = statistics.pstdev(widths) / mean * 100.0 if mean else 0.0
    return StabilityReport(spec.model, widths, med, max_dev, cv, PUBLISHED_DEVIATION_PCT.get(spec.model))


def scaling_run(sizes: Sequence[int], avg_degree: float = 10.0, *, seed: int = 0, repeats: int = 3,
                algo: str = "h3-conc") -> list[dict]:
    """Decomposition time on ER graphs of growing size at a fixed degree."""
    out = []
    prev = None
    for n in sizes:
        g = generate(GenSpec("er", n, avg_degree, seed))
        t = topo_sort(g)
        (d, _), ms = _best_of(lambda: run_pipeline(g, t, algo), repeats)
        out.append({"n": n, "m": g.m, "k": d.k, "ms": ms, "growth": ms / prev if prev else None})
        prev = ms
    return out
