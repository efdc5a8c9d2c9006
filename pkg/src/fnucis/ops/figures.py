"""Figure rendering for the bench and report paths (headless matplotlib)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


def bench_figures(result, out_dir: str | Path) -> list[Path]:
    """latency percentile bars per operation class, plus a throughput bar."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    ops = sorted(result.per_op)
    quantiles = [(0.50, "p50"), (0.95, "p95"), (0.99, "p99")]
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(ops)), 4))
    width = 0.25
    for i, (q, label) in enumerate(quantiles):
        values = [result.per_op[op].percentile(q) for op in ops]
        positions = [x + (i - 1) * width for x in range(len(ops))]
        ax.bar(positions, values, width=width, label=label)
    ax.set_xticks(range(len(ops)))
    ax.set_xticklabels(ops, rotation=20, ha="right")
    ax.set_ylabel("latency (ms)")
    ax.set_title("request latency percentiles")
    ax.legend()
    fig.tight_layout()
    latency_path = out_dir / "latency_percentiles.png"
    fig.savefig(latency_path, dpi=120)
    plt.close(fig)
    written.append(latency_path)

    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar(["throughput"], [result.throughput_rps], color="#2a7f62")
    ax.set_ylabel("requests / second")
    ax.set_title(f"{result.total_ok} ok, {result.total_conflicts} conflicts, "
                 f"{result.total_errors} errors")
    fig.tight_layout()
    throughput_path = out_dir / "throughput.png"
    fig.savefig(throughput_path, dpi=120)
    plt.close(fig)
    written.append(throughput_path)
    return written


def report_figure(report: dict, out_path: str | Path) -> Path:
    """Bar chart of a statistical report's numeric column, labeled by row."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    rows = [row["cells"] for row in report["rows"]]
    labels = [" / ".join(cells[:-1]) if len(cells) > 1 else cells[0] for cells in rows]
    values = []
    for cells in rows:
        try:
            values.append(float(cells[-1]))
        except (ValueError, IndexError):
            values.append(0.0)
    fig, ax = plt.subplots(figsize=(max(5, 0.8 * len(rows) + 2), 4))
    ax.bar(labels, values, color="#33658a")
    ax.set_title(f"{report['kind']} ({report['term']['year']}-{report['term']['semester']})")
    ax.set_ylabel(report["columns"][-1])
    plt.xticks(rotation=20, ha="right")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
