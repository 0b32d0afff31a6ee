"""Result serialization: delimited rows, JSON summaries, SVG figures.

Floats are written with 17 significant digits so parsed rows reproduce the
solver output exactly; data files carry no timestamps, keeping repeated
runs byte-identical apart from measured wall times.
"""

from __future__ import annotations

import csv
import json
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import ResultRow, fit_eps_exponent, fit_log_linear

CSV_COLUMNS = (
    "experiment",
    "dim_a",
    "dim_b",
    "dim_c",
    "eps",
    "trial",
    "seed",
    "iterations",
    "oracle_calls",
    "final_gap",
    "converged",
    "wall_time_s",
)


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def write_csv(path, rows):
    """Write result rows in the fixed column order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.experiment,
                    r.dim_a,
                    r.dim_b,
                    r.dim_c,
                    fmt_float(r.eps),
                    r.trial,
                    r.seed,
                    r.iterations,
                    r.oracle_calls,
                    fmt_float(r.final_gap),
                    "true" if r.converged else "false",
                    fmt_float(r.wall_time_s),
                ]
            )


def load_rows(path):
    """Parse rows written by write_csv back into ResultRow values."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                ResultRow(
                    experiment=rec["experiment"],
                    dim_a=int(rec["dim_a"]),
                    dim_b=int(rec["dim_b"]),
                    dim_c=int(rec["dim_c"]),
                    eps=float(rec["eps"]),
                    trial=int(rec["trial"]),
                    seed=int(rec["seed"]),
                    iterations=int(rec["iterations"]),
                    oracle_calls=int(rec["oracle_calls"]),
                    final_gap=float(rec["final_gap"]),
                    converged=rec["converged"] == "true",
                    wall_time_s=float(rec["wall_time_s"]),
                )
            )
    return rows


def _cells(rows):
    """Group rows by (dims, eps) preserving a deterministic order."""
    grouped = defaultdict(list)
    for r in rows:
        grouped[(r.dim_a, r.dim_b, r.dim_c, r.eps)].append(r)
    return dict(sorted(grouped.items()))


def summarize(rows) -> dict:
    """Trial-averaged summary of one experiment's rows, plus shape fits."""
    if not rows:
        return {"experiment": None, "cells": [], "fits": []}
    experiment = rows[0].experiment
    cells = []
    for (da, db, dc, eps), group in _cells(rows).items():
        cells.append(
            {
                "dim_a": da,
                "dim_b": db,
                "dim_c": dc,
                "eps": eps,
                "trials": len(group),
                "mean_iterations": sum(r.iterations for r in group) / len(group),
                "mean_oracle_calls": sum(r.oracle_calls for r in group) / len(group),
                "mean_final_gap": sum(r.final_gap for r in group) / len(group),
                "mean_wall_time_s": sum(r.wall_time_s for r in group) / len(group),
                "all_converged": all(r.converged for r in group),
            }
        )
    fits = []
    by_dims = defaultdict(list)
    for cell in cells:
        by_dims[(cell["dim_a"], cell["dim_b"], cell["dim_c"])].append(cell)
    for dims, group in sorted(by_dims.items()):
        conv = [c for c in group if c["all_converged"]]
        if len(conv) < 2:
            continue
        eps_vals = [c["eps"] for c in conv]
        iter_vals = [c["mean_iterations"] for c in conv]
        exponent, exp_r2 = fit_eps_exponent(eps_vals, iter_vals)
        slope, lin_r2 = fit_log_linear(eps_vals, iter_vals)
        fits.append(
            {
                "dim_a": dims[0],
                "dim_b": dims[1],
                "dim_c": dims[2],
                "eps_exponent": exponent,
                "eps_exponent_r2": exp_r2,
                "log_linear_slope": slope,
                "log_linear_r2": lin_r2,
            }
        )
    return {
        "experiment": experiment,
        "seed": rows[0].seed,
        "cells": cells,
        "fits": fits,
    }


def write_json(path, summary):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _dims_label(dim_a, dim_b, dim_c):
    dims = [d for d in (dim_a, dim_b, dim_c) if d]
    return "x".join(str(d) for d in dims) if dims else str(dim_a)


def write_plots(out_dir, experiment, rows):
    """Render the two convergence figures of one experiment as static SVG.

    One figure per metric (iterations, wall time) against the target
    accuracy, log-log, one line per dimension configuration.
    """
    summary = summarize(rows)
    series = defaultdict(list)
    for cell in summary["cells"]:
        key = (cell["dim_a"], cell["dim_b"], cell["dim_c"])
        series[key].append(cell)
    written = []
    for metric, ylabel, suffix in (
        ("mean_iterations", "iterations", "iterations"),
        ("mean_wall_time_s", "wall time [s]", "time"),
    ):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for dims, cells in sorted(series.items()):
            cells = sorted(cells, key=lambda c: c["eps"])
            ax.plot(
                [c["eps"] for c in cells],
                [max(c[metric], 1e-12) for c in cells],
                marker="o",
                label=_dims_label(*dims),
            )
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.invert_xaxis()
        ax.set_xlabel("target accuracy")
        ax.set_ylabel(ylabel)
        ax.set_title(experiment)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(title="size", fontsize=8)
        fig.tight_layout()
        path = f"{out_dir}/{experiment}_{suffix}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)
    return written
