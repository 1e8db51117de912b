"""Command-line interface.

Pipeline stages are subcommands: ``synth`` or ``import`` produce canonical
page files, ``order`` turns pages into prediction files, ``eval`` and
``ensemble`` score prediction files against ground truth (writing delimited
tables, JSON, notes, and figures), and ``render`` draws reading-path
overlays as SVG.  Every stage is deterministic given its inputs, flags, and
seeds.
"""

from __future__ import annotations

import concurrent.futures
from pathlib import Path

import click

from . import ensemble as ens
from . import pageio, report
from .adaptive_rules import AdaptiveRulesConfig, adaptive_order
from .dataset import split_dataset
from .errors import YomijunError
from .metrics import DEFAULT_QUERY_LENGTHS, evaluate
from .model import Page, ReadingOrder
from .render import RenderSpec, color_for, render_paths
from .simple_rules import SimpleRulesConfig, simple_order
from .synth import LayoutKind, SynthConfig, generate_page


def _fail(e: Exception) -> click.ClickException:
    return click.ClickException(f"{type(e).__name__}: {e}")


def _parse_lengths(spec: str) -> list[int]:
    """'1-5,10,20' -> [1,2,3,4,5,10,20]"""
    out: set[int] = set()
    for part in spec.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.update(range(int(lo), int(hi) + 1))
        elif part:
            out.add(int(part))
    if not out or min(out) < 1:
        raise click.BadParameter(f"bad length spec {spec!r}")
    return sorted(out)


def _named_pred_files(preds: tuple[str, ...]) -> list[tuple[str, Path]]:
    named = []
    for spec in preds:
        if "=" in spec:
            name, path = spec.split("=", 1)
        else:
            name, path = Path(spec).stem, spec
        named.append((name, Path(path)))
    return named


def _load_preds(path: Path) -> dict[str, ReadingOrder]:
    if not path.exists():
        raise click.ClickException(f"prediction file not found: {path}")
    return pageio.read_predictions(path)


@click.group()
@click.version_option(package_name="yomijun")
def main() -> None:
    """Reading-order prediction and evaluation for page layouts."""


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

@main.command()
@click.option("--kind", type=click.Choice([k.value for k in LayoutKind]),
              default=LayoutKind.REGULAR_COLUMNS.value, show_default=True)
@click.option("--pages", "n_pages", type=int, default=10, show_default=True)
@click.option("--columns", type=int, default=3, show_default=True)
@click.option("--chars-per-column", type=int, default=8, show_default=True)
@click.option("--jitter", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--book-id", default="", help="Defaults to synth-<kind>.")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--split-ratio", type=float, default=None,
              help="Also write a split.csv train/validation manifest.")
@click.option("--split-seed", type=int, default=0, show_default=True)
def synth(kind: str, n_pages: int, columns: int, chars_per_column: int,
          jitter: float, seed: int, book_id: str, out: Path,
          split_ratio: float | None, split_seed: int) -> None:
    """Generate synthetic pages with known reading order."""
    from .dataset import from_books
    from .synth import generate_book
    try:
        book = generate_book(kind, n_pages, columns, chars_per_column,
                             jitter, seed, book_id)
        pageio.write_book(book, out)
        if split_ratio is not None:
            d = split_dataset(from_books([book]), split_ratio, split_seed)
            pageio.write_split(d.split, out / "split.csv")
    except YomijunError as e:
        raise _fail(e)
    click.echo(f"wrote {n_pages} pages to {out / book.book_id}")


# ---------------------------------------------------------------------------
# import
# ---------------------------------------------------------------------------

@main.command(name="import")
@click.argument("coords", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--dims-file", type=click.Path(exists=True, path_type=Path),
              help="CSV of page_id,width,height pixel sizes.")
@click.option("--assume-dims", default=None, metavar="WxH",
              help="Uniform pixel size when no dims file is given.")
@click.option("--col-page", default="Image", show_default=True)
@click.option("--col-label", default="Unicode", show_default=True)
@click.option("--col-x", default="X", show_default=True)
@click.option("--col-y", default="Y", show_default=True)
@click.option("--col-width", default="Width", show_default=True)
@click.option("--col-height", default="Height", show_default=True)
@click.option("--col-order", default="Char ID", show_default=True,
              help="Reading-order column; absent values leave pages unlabeled.")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--split-ratio", type=float, default=None)
@click.option("--split-seed", type=int, default=0, show_default=True)
def import_cmd(coords: tuple[Path, ...], dims_file: Path | None,
               assume_dims: str | None, col_page: str, col_label: str,
               col_x: str, col_y: str, col_width: str, col_height: str,
               col_order: str, out: Path, split_ratio: float | None,
               split_seed: int) -> None:
    """Convert coordinate-table CSVs (one per book) to canonical pages."""
    from .dataset import from_books
    mapping = pageio.ColumnMapping(page=col_page, label=col_label, x=col_x,
                                   y=col_y, width=col_width, height=col_height,
                                   order=col_order)
    if dims_file:
        dims: dict | tuple = pageio.read_image_dims(dims_file)
    elif assume_dims:
        w, h = assume_dims.lower().split("x")
        dims = (int(w), int(h))
    else:
        raise click.UsageError("provide --dims-file or --assume-dims")
    try:
        books = [pageio.import_coordinate_table(path, dims, mapping)
                 for path in coords]
        for book in books:
            pageio.write_book(book, out)
        if split_ratio is not None:
            d = split_dataset(from_books(books), split_ratio, split_seed)
            pageio.write_split(d.split, out / "split.csv")
    except YomijunError as e:
        raise _fail(e)
    n = sum(len(b.pages) for b in books)
    click.echo(f"imported {n} pages from {len(coords)} book(s) into {out}")


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------

def _order_one(task: tuple[str, str, dict]) -> tuple[str, list[int]]:
    path, model, cfg = task
    page, _ = pageio.read_page(path)
    return page.page_id, list(_run_model(model, cfg, page))


def _run_model(model: str, cfg: dict, page: Page) -> ReadingOrder:
    if model == "simple":
        return simple_order(page, SimpleRulesConfig(**cfg))
    return adaptive_order(page, AdaptiveRulesConfig(**cfg))


@main.command()
@click.argument("pages", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--model", type=click.Choice(["simple", "adaptive"]), required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--column-x-tolerance", type=float, default=0.05, show_default=True)
@click.option("--column-break-distance", type=float, default=0.15, show_default=True)
@click.option("--start-tiebreak-band", type=float, default=0.03, show_default=True)
@click.option("--width-multiplier", type=float, default=1.0, show_default=True)
@click.option("--span-overlap-fraction", type=float, default=0.25, show_default=True)
@click.option("--min-spanned", type=int, default=2, show_default=True)
@click.option("--column-break-multiplier", type=float, default=3.0, show_default=True)
def order(pages: tuple[Path, ...], model: str, out: Path, jobs: int,
          column_x_tolerance: float, column_break_distance: float,
          start_tiebreak_band: float, width_multiplier: float,
          span_overlap_fraction: float, min_spanned: int,
          column_break_multiplier: float) -> None:
    """Predict reading orders for canonical pages into a prediction file."""
    if model == "simple":
        cfg = dict(column_x_tolerance=column_x_tolerance,
                   column_break_distance=column_break_distance,
                   start_tiebreak_band=start_tiebreak_band)
    else:
        cfg = dict(width_multiplier=width_multiplier,
                   span_overlap_fraction=span_overlap_fraction,
                   min_spanned=min_spanned,
                   column_break_multiplier=column_break_multiplier)
    files = pageio.collect_page_files(pages)
    if not files:
        raise click.ClickException("no canonical page files found")
    tasks = [(str(f), model, cfg) for f in files]
    try:
        if jobs > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_order_one, tasks))
        else:
            results = [_order_one(t) for t in tasks]
        preds = dict(sorted(results))
        if len(preds) != len(results):
            raise click.ClickException("duplicate page ids across input files")
        pageio.write_predictions(preds, out)
    except YomijunError as e:
        raise _fail(e)
    click.echo(f"wrote {len(preds)} predictions to {out}")


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

@main.command(name="eval")
@click.argument("pages", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--preds", multiple=True, required=True, metavar="[NAME=]FILE",
              help="Prediction file(s); repeat per model.")
@click.option("--lengths", default="1-10,15,20,25,30,40,50", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Directory for tables, report.json, notes, and figures.")
def eval_cmd(pages: tuple[Path, ...], preds: tuple[str, ...], lengths: str,
             out: Path | None) -> None:
    """Score predictions against ground-truthed canonical pages."""
    query_lengths = _parse_lengths(lengths)
    try:
        data = pageio.load_dataset(list(pages))
        reports = {}
        for name, path in _named_pred_files(preds):
            reports[name] = evaluate(data, _load_preds(path), query_lengths)
    except YomijunError as e:
        raise _fail(e)
    if all(not r.per_page for r in reports.values()):
        raise click.ClickException("no ground-truthed pages to evaluate")
    click.echo("Accuracy by book (%):")
    click.echo(report.pretty_table(report.accuracy_table(reports)))
    click.echo("\nRecall over query lengths 2-20 by book (%):")
    click.echo(report.pretty_table(report.recall_table(reports)))
    click.echo("\nRecall by query length (%):")
    click.echo(report.pretty_table(report.recall_by_length_table(reports)))
    click.echo("")
    click.echo(report.NOTES)
    if out is not None:
        paths = report.write_report_bundle(reports, out)
        click.echo(f"report written to {out} "
                   f"({', '.join(p.name for p in paths.values())})")


# ---------------------------------------------------------------------------
# ensemble
# ---------------------------------------------------------------------------

@main.command(name="ensemble")
@click.argument("pages", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--preds", multiple=True, required=True, metavar="[NAME=]FILE")
@click.option("--lengths", default="1-10,15,20", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
def ensemble_cmd(pages: tuple[Path, ...], preds: tuple[str, ...],
                 lengths: str, out: Path | None) -> None:
    """Pool several models' query windows: union recall and its precision."""
    query_lengths = _parse_lengths(lengths)
    named = _named_pred_files(preds)
    try:
        data = pageio.load_dataset(list(pages))
        models = {name: _load_preds(path) for name, path in named}
        truth = {}
        for _, page in data.pages():
            if page.ground_truth is not None:
                truth[page.page_id] = page.ground_truth
                for name, p in models.items():
                    if page.page_id not in p:
                        raise _fail(YomijunError(
                            f"missing prediction for page '{page.page_id}' "
                            f"in model {name}"))
        header = (["query_length"] + [f"recall_{n}" for n in models]
                  + ["union_recall", "union_precision"])
        rows = []
        for length in query_lengths:
            page_ids = [p for p in truth if len(truth[p]) >= length]
            if not page_ids:
                continue
            single = []
            for name in models:
                m = sum(ens.union_matched(truth[p], [models[name][p]], length)[0]
                        for p in page_ids)
                t = sum(len(truth[p]) - length + 1 for p in page_ids)
                single.append(m / t)
            um = sum(ens.union_matched(truth[p], [models[n][p] for n in models],
                                       length)[0] for p in page_ids)
            ut = sum(len(truth[p]) - length + 1 for p in page_ids)
            ct = ca = 0
            for p in page_ids:
                c_true, c_all = ens.union_candidates(
                    truth[p], [models[n][p] for n in models], length)
                ct += c_true
                ca += c_all
            rows.append([str(length)] + [report.pct(s) for s in single]
                        + [report.pct(um / ut), report.pct(ct / ca)])
        table = "\n".join(",".join(r) for r in [header] + rows) + "\n"
    except YomijunError as e:
        raise _fail(e)
    click.echo(report.pretty_table(table))
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "ensemble.csv").write_text(table, encoding="utf-8")
        click.echo(f"wrote {out / 'ensemble.csv'}")


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------

@main.command()
@click.argument("page_file", type=click.Path(exists=True, path_type=Path))
@click.option("--preds", multiple=True, metavar="[NAME=]FILE")
@click.option("--gt/--no-gt", default=True, show_default=True,
              help="Overlay the ground-truth path when present.")
@click.option("--boxes/--no-boxes", default=True, show_default=True)
@click.option("--stroke-width", type=float, default=3.0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
def render(page_file: Path, preds: tuple[str, ...], gt: bool, boxes: bool,
           stroke_width: float, out: Path) -> None:
    """Draw reading-path overlays for one page as SVG."""
    try:
        page, _ = pageio.read_page(page_file)
        orders = []
        if gt and page.ground_truth is not None:
            orders.append(("ground_truth", page.ground_truth,
                           color_for("ground_truth", 0)))
        for name, path in _named_pred_files(preds):
            p = _load_preds(path)
            if page.page_id not in p:
                raise _fail(YomijunError(
                    f"missing prediction for page '{page.page_id}' in {path}"))
            orders.append((name, p[page.page_id], color_for(name, len(orders))))
        svg = render_paths(RenderSpec(page=page, orders=tuple(orders),
                                      stroke_width=stroke_width,
                                      draw_boxes=boxes))
    except YomijunError as e:
        raise _fail(e)
    out.write_text(svg, encoding="utf-8", newline="\n")
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
