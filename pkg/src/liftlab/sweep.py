"""Experiment sweeps over instance grids, with CSV emission.

A sweep runs a set of modes over a grid of instances and levels, one
result row per grid point. Exact modes reproduce byte-identically
across runs (the runtime column aside); the approximate mode
reproduces within printed precision since iteration budgets are fixed
and nothing is randomized.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .decomposition import big_items, decompose, verify_decomposition
from .hierarchy import (certificate_alpha, convex_combination,
                        integer_to_moment, sa_gap_certificate, sa_membership)
from .knapsack import (KnapsackInstance, Solution, instance_from_json,
                       opt_bruteforce, uniform_gap_instance)
from .rationals import Q, rat, rat_str
from .solvers import lasserre_value, sa_value

MODES = ("sa-cert", "sa-lp", "lasserre", "decompose")

CSV_HEADER = ("instance", "n", "eps", "t", "mode", "value", "ratio",
              "status", "runtime_ms")


@dataclass
class SweepConfig:
    """Grid description: uniform family (n x eps) or explicit files, levels, modes."""

    family: str = "uniform"          # "uniform" | "files"
    files: tuple = ()
    n_values: tuple = ()
    eps_values: tuple = ()           # rationals or strings like "1/10"
    t_values: tuple = ()
    modes: tuple = ("sa-cert",)
    output: str | None = None
    tol: float = 1e-4
    threads: int = 1

    @classmethod
    def from_dict(cls, obj: dict) -> "SweepConfig":
        known = {f for f in cls.__dataclass_fields__}
        bad = set(obj) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        cfg = cls(**{k: tuple(v) if isinstance(v, list) else v
                     for k, v in obj.items()})
        return cfg

    def validate(self) -> "SweepConfig":
        if self.family not in ("uniform", "files"):
            raise ValueError("family must be 'uniform' or 'files'")
        if self.family == "uniform" and (not self.n_values or not self.eps_values):
            raise ValueError("uniform family needs non-empty n and eps ranges")
        if self.family == "files" and not self.files:
            raise ValueError("files family needs at least one instance file")
        if not self.t_values:
            raise ValueError("empty t range")
        if any(t < 1 for t in self.t_values):
            raise ValueError("levels must be >= 1")
        if not self.modes:
            raise ValueError("no modes requested")
        for m in self.modes:
            if m not in MODES:
                raise ValueError(f"unknown mode {m!r} (choose from {MODES})")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        return self


@dataclass(frozen=True)
class ResultRow:
    instance: str
    n: int
    eps: str                 # "p/q" for uniform instances, "" otherwise
    t: int
    mode: str
    value: str               # rational "p/q" or 10-significant-digit decimal
    ratio: str
    status: str              # "exact" | "approx" | "error"
    runtime_ms: int
    residual: float = 0.0    # approx modes only; not part of the CSV contract

    def csv_fields(self) -> tuple:
        return (self.instance, str(self.n), self.eps, str(self.t), self.mode,
                self.value, self.ratio, self.status, str(self.runtime_ms))


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return rat_str(v)


def _instances(cfg: SweepConfig):
    """Ordered (id, instance, eps-string) triples for the grid."""
    out = []
    if cfg.family == "uniform":
        for n in cfg.n_values:
            for eps in cfg.eps_values:
                eps = rat(eps)
                out.append((f"uniform-n{n}-e{rat_str(eps)}",
                            uniform_gap_instance(n, eps), rat_str(eps)))
    else:
        for path in cfg.files:
            with open(path, encoding="utf-8") as fh:
                inst = instance_from_json(fh.read())
            name = os.path.splitext(os.path.basename(path))[0]
            out.append((name, inst, ""))
    return out


def _enforce_caps(cfg: SweepConfig, grid):
    # fail the whole sweep up front rather than mid-run
    from .solvers import LASSERRE_DIM_CAP, SA_VARIABLE_CAP, _comb_count
    for _, inst, _, t, mode in grid:
        if mode == "sa-lp" and _comb_count(inst.n, t) > SA_VARIABLE_CAP:
            raise ValueError(f"sa-lp over the variable cap at n={inst.n}, t={t}")
        if mode == "lasserre" and _comb_count(inst.n, t) > LASSERRE_DIM_CAP:
            raise ValueError(f"lasserre over the dimension cap at n={inst.n}, t={t}")


def _decompose_parts(inst: KnapsackInstance, t: int) -> int:
    """Run the decomposition on a canonical exact mixture and verify it.

    The mixture blends the empty solution with feasible singletons
    (outside S when k=1), so the vanishing condition holds by
    construction. Returns the number of parts.
    """
    if t < 2:
        raise ValueError("decompose mode needs t >= 2")
    k = 1 if t == 2 else 2
    s_mask = big_items(inst, t - 1)
    points = [0]
    for i in range(inst.n):
        m = 1 << i
        if inst.is_feasible(m) and (k > 1 or not m & s_mask):
            points.append(m)
    w = Q(1, len(points))
    y = convex_combination(
        [(w, integer_to_moment(inst, Solution(m), 2 * t)) for m in points])
    result = decompose(y, inst, s_mask, k, t)
    report = verify_decomposition(result, y, inst, t, k)
    if not report.accepted:
        raise ValueError("decomposition verification failed: "
                         + report.describe())
    return len(result.parts)


def _run_point(inst_id, inst, eps_str, t, mode, tol):
    start = time.perf_counter()
    status = "exact"
    residual = 0.0
    try:
        if mode == "sa-cert":
            if not inst.is_uniform():
                raise ValueError("sa-cert applies to uniform instances only")
            eps = 1 - inst.capacity / 2
            cert = sa_gap_certificate(inst.n, eps, t)
            report = sa_membership(cert, inst, t, families="maximal")
            if not report.accepted:
                raise ValueError("certificate rejected: " + report.describe())
            value = inst.n * certificate_alpha(inst.n, eps, t)
        elif mode == "sa-lp":
            value = sa_value(inst, t)
        elif mode == "lasserre":
            est = lasserre_value(inst, t, tol=tol)
            value = est.value
            residual = est.residual
            status = "approx"
        else:  # decompose
            value = _decompose_parts(inst, t)
        ratio = "" if mode == "decompose" else \
            _fmt(value / (float(opt_bruteforce(inst)) if isinstance(value, float)
                          else opt_bruteforce(inst)))
        value_str = _fmt(value)
    except Exception:
        status = "error"
        value_str = ""
        ratio = ""
    ms = int(round((time.perf_counter() - start) * 1000))
    return ResultRow(inst_id, inst.n, eps_str, t, mode, value_str, ratio,
                     status, ms, residual)


def run_sweep(cfg: SweepConfig) -> list[ResultRow]:
    """Execute the grid; per-row errors become status=error, never aborts.

    Rows come back ordered by (instance, t, mode) position in the config,
    regardless of worker scheduling.
    """
    cfg.validate()
    grid = [(inst_id, inst, eps_str, t, mode)
            for inst_id, inst, eps_str in _instances(cfg)
            for t in cfg.t_values
            for mode in cfg.modes]
    _enforce_caps(cfg, grid)
    if cfg.threads == 1:
        return [_run_point(*point, cfg.tol) for point in grid]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = [pool.submit(_run_point, *point, cfg.tol) for point in grid]
        return [f.result() for f in futures]


def emit_csv(rows: list[ResultRow], path: str) -> None:
    """Write rows under the fixed header, UTF-8 with LF line endings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.csv_fields())


def rows_to_csv_text(rows: list[ResultRow]) -> str:
    lines = [",".join(CSV_HEADER)]
    lines += [",".join(r.csv_fields()) for r in rows]
    return "\n".join(lines) + "\n"
