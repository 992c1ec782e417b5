"""Cross-scenario comparison and exposure reporting over completed runs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .errors import ConfigurationError
from .population import INSULATION_ORDER

COMPARE_ROWS = (
    "c_vsl", "c_medical", "c_prod", "c_build", "c_cic",
    "nei_total", "total", "n_death", "n_injured",
)


def _load_run(run_dir: Path) -> dict:
    summary_path = run_dir / "summary.json"
    if not summary_path.exists():
        raise ConfigurationError(f"no summary.json in {run_dir}; not a completed run")
    return json.loads(summary_path.read_text(encoding="utf-8"))


def compare_scenarios(run_dirs, out_path=None) -> list[dict]:
    """Tabulate mean costs across runs sharing one population.

    Rows cover each cost component, totals, deaths/injuries, and the
    population-mean relative risk; every row carries the percentage delta
    of each scenario against the first one. Runs over different populations
    are rejected.
    """
    dirs = [Path(d) for d in run_dirs]
    if len(dirs) < 2:
        raise ConfigurationError("compare needs at least two run directories")
    summaries = [_load_run(d) for d in dirs]
    digests = {s.get("population_digest") for s in summaries}
    if len(digests) != 1:
        raise ConfigurationError(
            "runs use different populations; comparisons must share one population "
            f"(digests: {sorted(str(d)[:12] for d in digests)})"
        )
    labels = [s.get("scenario", d.name) for s, d in zip(summaries, dirs)]

    rows: list[dict] = []
    for metric in COMPARE_ROWS:
        row = {"metric": f"{metric}_mean"}
        baseline = summaries[0][metric]["mean"]
        for label, summary in zip(labels, summaries):
            row[label] = summary[metric]["mean"]
        for label, summary in zip(labels, summaries):
            value = summary[metric]["mean"]
            row[f"{label}_delta_pct"] = (
                (value - baseline) / baseline * 100.0 if baseline else 0.0
            )
        rows.append(row)
    row = {"metric": "mean_rr_population"}
    baseline = summaries[0]["mean_rr_population"]
    for label, summary in zip(labels, summaries):
        row[label] = summary["mean_rr_population"]
        row[f"{label}_delta_pct"] = (
            (summary["mean_rr_population"] - baseline) / baseline * 100.0 if baseline else 0.0
        )
    rows.append(row)

    if out_path is not None:
        fieldnames = ["metric"] + labels + [f"{lb}_delta_pct" for lb in labels]
        with open(out_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=fieldnames)
            writer.writeheader()
            for r in rows:
                writer.writerow({k: (f"{v:.4f}" if isinstance(v, float) else v)
                                 for k, v in r.items()})
    return rows


def format_comparison(rows: list[dict]) -> str:
    labels = [k for k in rows[0] if k != "metric" and not k.endswith("_delta_pct")]
    header = f"{'metric':<22}" + "".join(f"{lb:>16}" for lb in labels)
    lines = [header, "-" * len(header)]
    for row in rows:
        cells = "".join(f"{row[lb]:>16,.2f}" for lb in labels)
        lines.append(f"{row['metric']:<22}" + cells)
        deltas = "".join(f"{row[f'{lb}_delta_pct']:>+15.1f}%" for lb in labels)
        lines.append(f"{'  vs first (%)':<22}" + deltas)
    return "\n".join(lines)


def export_exposure(run_dir, out_path=None) -> list[dict]:
    """Summarize a run's exposure table by insulation class.

    Returns one row per insulation class present: building count, mean of
    the per-building mean and minimum indoor temperatures, and mean relative
    risk. Writes `insulation_summary.csv` next to the run unless told
    otherwise.
    """
    run_dir = Path(run_dir)
    exposure_path = run_dir / "exposure.csv"
    if not exposure_path.exists():
        raise ConfigurationError(f"no exposure.csv in {run_dir}; not a completed run")
    by_class: dict[str, list[dict]] = {}
    with open(exposure_path, newline="", encoding="utf-8") as handle:
        for record in csv.DictReader(handle):
            by_class.setdefault(record["insulation"], []).append(record)

    rows = []
    for ins in INSULATION_ORDER:
        records = by_class.get(ins.value)
        if not records:
            continue
        n = len(records)
        rows.append({
            "insulation": ins.value,
            "n_buildings": n,
            "mean_t_in_c": sum(float(r["mean_t_in_c"]) for r in records) / n,
            "mean_min_t_in_c": sum(float(r["min_t_in_c"]) for r in records) / n,
            "mean_rr": sum(float(r["mean_rr"]) for r in records) / n,
        })
    if not rows:
        raise ConfigurationError(f"exposure table in {run_dir} is empty")

    out_path = Path(out_path) if out_path is not None else run_dir / "insulation_summary.csv"
    with open(out_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v)
                             for k, v in row.items()})
    return rows


def format_exposure(rows: list[dict]) -> str:
    header = (f"{'insulation':<16}{'buildings':>10}{'mean t_in':>12}"
              f"{'mean min t_in':>15}{'mean RR':>10}")
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row['insulation']:<16}{row['n_buildings']:>10}"
            f"{row['mean_t_in_c']:>12.2f}{row['mean_min_t_in_c']:>15.2f}"
            f"{row['mean_rr']:>10.4f}"
        )
    return "\n".join(lines)
