"""Evaluation report output: delimited tables, JSON, notes, and figures.

Tables mirror the usual presentation for this task: books as rows, models
as columns, percentages with two decimals, plus a recall-by-query-length
table.  Figures are rendered with matplotlib next to the delimited output.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Sequence

from .metrics import EvalReport

NOTES = """\
Evaluation notes
----------------
* Accuracy is 1 - edit_distance(truth, prediction) / page_length; book and
  overall rows pool numerators and denominators across pages (ratio of
  sums, not a mean of page percentages).
* Recall at query length L counts contiguous ground-truth windows that
  appear, in place, in the prediction.  A page of n characters contributes
  n - L + 1 windows.  Worked example: truth (1,2,3,4,5) against prediction
  (5,1,2,3,4) at L=2 preserves (1,2),(2,3),(3,4) but not (4,5): recall
  3/4 = 75.00%.  A figure of 4/5 = 80% is sometimes quoted for this same
  example; that convention divides by the sequence length (5) instead of
  the window count (4), and counting four surviving windows contradicts
  direct enumeration.  Everything reported here uses the window-count
  denominator.
* The pooled recall column aggregates query lengths 2 through 20.
* For a single model whose prediction is a permutation of the truth,
  precision equals recall, so only recall is reported per model.
"""


def pct(x: float | None) -> str:
    return "" if x is None else f"{100 * x:.2f}"


def _table(header: list[str], rows: list[list[str]], sep: str = ",") -> str:
    return "\n".join(sep.join(r) for r in [header] + rows) + "\n"


def accuracy_table(reports: Mapping[str, EvalReport]) -> str:
    models = list(reports)
    books = sorted({b for r in reports.values() for b in r.per_book})
    rows = [[b] + [pct(reports[m].per_book[b].accuracy) if b in reports[m].per_book
                   else "" for m in models] for b in books]
    rows.append(["Overall"] + [pct(reports[m].overall.accuracy) for m in models])
    return _table(["book_id"] + models, rows)


def recall_table(reports: Mapping[str, EvalReport]) -> str:
    models = list(reports)
    books = sorted({b for r in reports.values() for b in r.per_book})
    rows = [[b] + [pct(reports[m].per_book[b].recall_2_20) if b in reports[m].per_book
                   else "" for m in models] for b in books]
    rows.append(["Overall"] + [pct(reports[m].overall.recall_2_20) for m in models])
    return _table(["book_id"] + models, rows)


def recall_by_length_table(reports: Mapping[str, EvalReport]) -> str:
    models = list(reports)
    lengths = sorted({length for r in reports.values() for length in r.lengths})
    rows = [[str(length)] + [pct(reports[m].overall.recall(length)) for m in models]
            for length in lengths]
    return _table(["query_length"] + models, rows)


def report_dict(reports: Mapping[str, EvalReport]) -> dict:
    out: dict = {"models": {}}
    for model, rep in reports.items():
        out["models"][model] = {
            "overall": _group_dict(rep.overall),
            "books": {b: _group_dict(g) for b, g in sorted(rep.per_book.items())},
            "pages": {
                p.page_id: {
                    "book": p.book_id,
                    "chars": p.n_chars,
                    "edit_distance": p.edit_dist,
                    "accuracy": p.accuracy,
                    "recall": {str(length): [m, t] for length, (m, t)
                               in sorted(p.recall_counts.items())},
                }
                for p in sorted(rep.per_page.values(), key=lambda p: p.page_id)
            },
        }
    return out


def _group_dict(g) -> dict:
    return {
        "pages": g.n_pages,
        "chars": g.n_chars,
        "edit_distance": g.edit_total,
        "accuracy": g.accuracy,
        "recall_2_20": g.recall_2_20,
        "recall_by_length": {str(length): (m / t if t else None)
                             for length, (m, t) in sorted(g.recall_counts.items())},
    }


def render_figures(reports: Mapping[str, EvalReport], out_dir: Path | str) -> list[Path]:
    """Accuracy-by-book bars and recall-vs-length curves as PNG files."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    models = list(reports)

    books = sorted({b for r in reports.values() for b in r.per_book})
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(books) + 2), 4))
    width = 0.8 / max(1, len(models))
    for mi, m in enumerate(models):
        vals = [100 * reports[m].per_book[b].accuracy if b in reports[m].per_book
                else 0 for b in books]
        ax.bar([i + mi * width for i in range(len(books))], vals, width, label=m)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(books))])
    ax.set_xticklabels(books, rotation=90, fontsize=7)
    ax.set_ylabel("accuracy (%)")
    ax.set_ylim(0, 105)
    ax.legend()
    fig.tight_layout()
    p = out_dir / "accuracy_by_book.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    written.append(p)

    fig, ax = plt.subplots(figsize=(6, 4))
    for m in models:
        rep = reports[m]
        xs = [length for length in rep.lengths
              if rep.overall.recall(length) is not None]
        ys = [100 * rep.overall.recall(length) for length in xs]
        ax.plot(xs, ys, marker="o", label=m)
    ax.set_xlabel("query length")
    ax.set_ylabel("recall (%)")
    ax.set_ylim(0, 105)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    p = out_dir / "recall_by_length.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    written.append(p)
    return written


def write_report_bundle(reports: Mapping[str, EvalReport],
                        out_dir: Path | str) -> dict[str, Path]:
    """The full eval artifact set: tables, JSON, notes, figures."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "accuracy": out_dir / "accuracy_by_book.csv",
        "recall": out_dir / "recall_by_book.csv",
        "recall_by_length": out_dir / "recall_by_length.csv",
        "json": out_dir / "report.json",
        "notes": out_dir / "notes.txt",
    }
    paths["accuracy"].write_text(accuracy_table(reports), encoding="utf-8")
    paths["recall"].write_text(recall_table(reports), encoding="utf-8")
    paths["recall_by_length"].write_text(recall_by_length_table(reports),
                                         encoding="utf-8")
    paths["json"].write_text(json.dumps(report_dict(reports), indent=2,
                                        sort_keys=True), encoding="utf-8")
    paths["notes"].write_text(NOTES, encoding="utf-8")
    for i, fig_path in enumerate(render_figures(reports, out_dir / "figures")):
        paths[f"figure_{i}"] = fig_path
    return paths


def pretty_table(csv_text: str) -> str:
    """Align a small CSV for terminal display."""
    rows = [line.split(",") for line in csv_text.strip().splitlines()]
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
        for r in rows
    )
