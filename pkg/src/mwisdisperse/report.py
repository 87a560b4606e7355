"""Run reports, result tables and bench figures.

A report is canonical JSON (sorted keys, fixed indentation).  Timings are
left out unless asked for, so two runs on the same inputs and seed produce
the same bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

TIMING_KEYS = frozenset({"wall_time", "time", "exact_time", "approx_time", "oracle_time"})


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _plain(obj, timings: bool):
    """JSON-ready copy: fractions as strings, sets sorted, timing keys dropped unless wanted."""
    if isinstance(obj, dict):
        return {str(k): _plain(v, timings) for k, v in obj.items() if timings or k not in TIMING_KEYS}
    if isinstance(obj, (list, tuple)):
        return [_plain(v, timings) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v, timings) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return round(obj, 6)
    return obj


@dataclass
class RunReport:
    command: list[str]
    seed: int | None = None
    config: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)  # name -> digest
    result: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    verification: dict = field(default_factory=dict)
    wall_time: float | None = None
    exit_code: int = 0

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "inputs": self.inputs,
            "result": self.result,
            "stats": self.stats,
            "verification": self.verification,
            "exit_code": self.exit_code,
        }
        if timings:
            out["wall_time"] = self.wall_time
        return _plain(out, timings)

    def dumps(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_from_text(text: str) -> dict:
    return json.loads(text)


# ---------------------------------------------------------------------------
# tables

BENCH_COLUMNS = ["instance", "n", "class", "opt", "exact_weight", "approx_weight", "ratio",
                 "exact_nodes", "approx_nodes", "exact_time", "approx_time", "oracle_match"]


def format_table(rows: list[dict], columns: list[str] = BENCH_COLUMNS, delimiter: str = ",") -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, delimiter=delimiter, lineterminator="\n",
                            extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})
    return buf.getvalue()


def write_tables(rows: list[dict], out_dir: Path, stem: str = "results") -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for ext, delim in (("csv", ","), ("tsv", "\t")):
        p = out_dir / f"{stem}.{ext}"
        p.write_text(format_table(rows, delimiter=delim))
        paths.append(p)
    return paths


# ---------------------------------------------------------------------------
# figures

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams.update({"font.size": 9, "axes.spines.top": False, "axes.spines.right": False,
                         "savefig.dpi": 120, "figure.figsize": (6.0, 3.6)})
    return plt


def plot_ratios(rows: list[dict], eps, path: Path) -> Path:
    """Approximate over exact weight per instance, with the 1 - ε floor."""
    plt = _pyplot()
    pts = [(i, float(Fraction(r["ratio"]))) for i, r in enumerate(rows) if r.get("ratio") not in (None, "")]
    fig, ax = plt.subplots()
    if pts:
        xs, ys = zip(*pts)
        ax.scatter(xs, ys, s=12, color="tab:blue", label="approx / exact")
    if eps is not None:
        ax.axhline(1 - float(Fraction(eps)), color="tab:red", linestyle="--", linewidth=1, label="1 - ε")
    ax.set_xlabel("instance")
    ax.set_ylabel("weight ratio")
    ax.set_ylim(0, 1.05)
    ax.legend(loc="lower right", frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_runtimes(rows: list[dict], path: Path) -> Path:
    """Wall time against n for each solver column present."""
    plt = _pyplot()
    fig, ax = plt.subplots()
    for key, colour, label in (("exact_time", "tab:green", "exact"), ("approx_time", "tab:orange", "approx")):
        pts = [(r["n"], r[key]) for r in rows if r.get(key) not in (None, "")]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=12, color=colour, label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("seconds")
    ax.set_yscale("symlog", linthresh=1e-3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper left", frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path
