"""File formats and importers.

Three on-disk formats, all UTF-8 with LF line endings:

* Canonical page file -- one CSV per page.  A metadata comment line carries
  the pixel dimensions and book id, then a header and one row per
  character::

      # yomijun-page page=p0001 image_width=1000 image_height=1400 book=demo
      page_id,char_index,codepoint,x,y,width,height,reading_index
      p0001,0,U+306E,412,88,61,70,3

  Geometry columns are integer pixels (top-left corner plus size);
  ``reading_index`` is the character's position in the reading order, or -1
  when unknown.  ``char_index`` equals the row position, and reading order
  is always taken from ``reading_index``, never from row order.

* Prediction interchange file -- one page per line: the page id followed by
  the whitespace-separated char indices in predicted reading order.  This
  is the only boundary other ordering components need to speak.

* Split manifest -- CSV of page_id,split rows with split in
  {train, validation}.

Coordinate tables in the NIJL/CODH style (one CSV per book, pixel geometry,
an optional reading-order column) are imported through a configurable
column mapping; pixel values are normalized by the page dimensions at
import time so every downstream threshold is resolution-independent.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dataset import Dataset
from .errors import (
    BoxOutOfBoundsError,
    DuplicateCharIdError,
    MalformedRowError,
)
from .model import Book, CharBox, Page, ReadingOrder

PAGE_MAGIC = "# yomijun-page"
PAGE_COLUMNS = ("page_id", "char_index", "codepoint", "x", "y",
                "width", "height", "reading_index")


@dataclass(frozen=True)
class CoordinateRow:
    """One parsed coordinate-table row: raw pixel geometry plus an optional
    reading-order index."""
    label: str
    x: float
    y: float
    width: float
    height: float
    order: int | None = None


def _parse_label(value: str) -> str:
    value = value.strip()
    m = re.fullmatch(r"[Uu]\+([0-9a-fA-F]{1,6})", value)
    if m:
        return chr(int(m.group(1), 16))
    if value == "":
        raise MalformedRowError("empty character label")
    return value


def _format_label(label: str) -> str:
    if len(label) != 1:
        raise ValueError(f"canonical files need single-codepoint labels, got {label!r}")
    return f"U+{ord(label):04X}"


def import_page(rows: Iterable[CoordinateRow], image_dims: tuple[int, int],
                page_id: str = "page") -> Page:
    """Build a Page from pixel-coordinate rows.

    Character ids are the row indices.  When any row carries a reading-order
    index, all rows must, the indices must be unique, and the ground truth
    is the ids sorted by that index.  Boxes may overhang the image by at
    most one pixel and are clamped back inside.
    """
    width, height = image_dims
    if width <= 0 or height <= 0:
        raise MalformedRowError(f"page {page_id}: non-positive image dims")
    boxes: list[CharBox] = []
    orders: list[int | None] = []
    for idx, row in enumerate(rows):
        try:
            x, y, w, h = (float(v) for v in (row.x, row.y, row.width, row.height))
        except (TypeError, ValueError) as e:
            raise MalformedRowError(f"{page_id} row {idx}: non-numeric geometry") from e
        if x < 0 or y < 0 or w <= 0 or h <= 0:
            raise MalformedRowError(
                f"{page_id} row {idx}: negative or empty box ({x}, {y}, {w}, {h})"
            )
        if x + w > width + 1 or y + h > height + 1:
            raise BoxOutOfBoundsError(
                f"{page_id} row {idx}: box exceeds {width}x{height} image "
                f"by more than one pixel"
            )
        x2, y2 = min(x + w, width), min(y + h, height)
        if x >= x2 or y >= y2:
            raise MalformedRowError(f"{page_id} row {idx}: box lies outside the image")
        boxes.append(CharBox(
            id=idx, label=row.label,
            x=x / width, y=y / height,
            w=(x2 - x) / width, h=(y2 - y) / height,
        ))
        orders.append(row.order)

    known = [o for o in orders if o is not None]
    ground_truth = None
    if known:
        if len(known) != len(orders):
            raise MalformedRowError(
                f"{page_id}: reading-order index present on some rows but not all"
            )
        if len(set(known)) != len(known):
            raise DuplicateCharIdError(f"{page_id}: duplicate reading-order indices")
        ground_truth = ReadingOrder(
            sorted(range(len(boxes)), key=lambda i: orders[i])
        )
    return Page(page_id=page_id, image_width=int(width), image_height=int(height),
                chars=tuple(boxes), ground_truth=ground_truth)


# ---------------------------------------------------------------------------
# canonical page files
# ---------------------------------------------------------------------------

def page_to_text(page: Page, book_id: str = "") -> str:
    """Serialize a page to the canonical format (deterministic bytes)."""
    reading_index = {i: -1 for i in range(len(page.chars))}
    if page.ground_truth is not None:
        for pos, char_id in enumerate(page.ground_truth):
            reading_index[char_id] = pos
    if re.search(r"[\s,]", page.page_id):
        raise ValueError(f"page id {page.page_id!r} contains whitespace or commas")
    buf = io.StringIO()
    meta = (f"{PAGE_MAGIC} page={page.page_id} image_width={page.image_width} "
            f"image_height={page.image_height}")
    if book_id:
        meta += f" book={book_id}"
    buf.write(meta + "\n")
    buf.write(",".join(PAGE_COLUMNS) + "\n")
    for c in page.chars_by_id():
        px = round(c.x * page.image_width)
        py = round(c.y * page.image_height)
        pw = round(c.w * page.image_width)
        ph = round(c.h * page.image_height)
        buf.write(f"{page.page_id},{c.id},{_format_label(c.label)},"
                  f"{px},{py},{pw},{ph},{reading_index[c.id]}\n")
    return buf.getvalue()


def write_page(page: Page, path: Path | str, book_id: str = "") -> None:
    Path(path).write_text(page_to_text(page, book_id), encoding="utf-8", newline="\n")


def page_from_text(text: str) -> tuple[Page, str]:
    """Parse a canonical page file; returns (page, book_id)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(PAGE_MAGIC):
        raise MalformedRowError("not a canonical page file (missing metadata line)")
    meta = dict(kv.split("=", 1) for kv in lines[0][len(PAGE_MAGIC):].split() if "=" in kv)
    try:
        width = int(meta["image_width"])
        height = int(meta["image_height"])
    except (KeyError, ValueError) as e:
        raise MalformedRowError("metadata line lacks integer image dims") from e
    book_id = meta.get("book", "")

    reader = csv.DictReader(lines[1:])
    if reader.fieldnames is None or tuple(reader.fieldnames) != PAGE_COLUMNS:
        raise MalformedRowError(f"expected columns {','.join(PAGE_COLUMNS)}")
    rows: list[CoordinateRow] = []
    page_ids = set()
    for rec in reader:
        page_ids.add(rec["page_id"])
        try:
            order = int(rec["reading_index"])
            char_index = int(rec["char_index"])
        except (TypeError, ValueError) as e:
            raise MalformedRowError(f"non-integer index in row {rec}") from e
        if char_index != len(rows):
            raise MalformedRowError(
                f"char_index {char_index} out of sequence (expected {len(rows)})"
            )
        rows.append(CoordinateRow(
            label=_parse_label(rec["codepoint"]),
            x=rec["x"], y=rec["y"], width=rec["width"], height=rec["height"],  # type: ignore[arg-type]
            order=None if order < 0 else order,
        ))
    if len(page_ids) > 1:
        raise MalformedRowError(f"multiple page ids in one file: {sorted(page_ids)}")
    page_id = meta.get("page") or (page_ids.pop() if page_ids else "page")
    return import_page(rows, (width, height), page_id), book_id


def read_page(path: Path | str) -> tuple[Page, str]:
    return page_from_text(Path(path).read_text(encoding="utf-8"))


def is_page_file(path: Path | str) -> bool:
    try:
        with open(path, encoding="utf-8") as f:
            return f.readline().startswith(PAGE_MAGIC)
    except OSError:
        return False


def write_book(book: Book, root: Path | str) -> None:
    """One canonical file per page under root/<book_id>/."""
    out = Path(root) / book.book_id
    out.mkdir(parents=True, exist_ok=True)
    for page in book.pages:
        write_page(page, out / f"{page.page_id}.csv", book.book_id)


def collect_page_files(paths: Sequence[Path | str]) -> list[Path]:
    """Expand files/directories into canonical page files, sorted."""
    found: list[Path] = []
    for p in (Path(p) for p in paths):
        if p.is_dir():
            found.extend(q for q in sorted(p.rglob("*.csv")) if is_page_file(q))
        else:
            found.append(p)
    return found


def load_dataset(paths: Sequence[Path | str],
                 split: Mapping[str, str] | None = None) -> Dataset:
    """Read canonical page files into a Dataset, grouping pages by book id
    (falling back to the parent directory name)."""
    by_book: dict[str, list[Page]] = {}
    for path in collect_page_files(paths):
        page, book_id = read_page(path)
        by_book.setdefault(book_id or path.parent.name, []).append(page)
    books = tuple(
        Book(book_id=b, pages=tuple(sorted(ps, key=lambda p: p.page_id)))
        for b, ps in sorted(by_book.items())
    )
    return Dataset(books=books, split=dict(split) if split else {})


# ---------------------------------------------------------------------------
# prediction interchange files
# ---------------------------------------------------------------------------

def predictions_to_text(preds: Mapping[str, Sequence[int]]) -> str:
    lines = []
    for page_id in sorted(preds):
        if re.search(r"\s", page_id):
            raise ValueError(f"page id {page_id!r} contains whitespace")
        lines.append(" ".join([page_id] + [str(int(i)) for i in preds[page_id]]))
    return "\n".join(lines) + ("\n" if lines else "")


def write_predictions(preds: Mapping[str, Sequence[int]], path: Path | str) -> None:
    Path(path).write_text(predictions_to_text(preds), encoding="utf-8", newline="\n")


def read_predictions(path: Path | str) -> dict[str, ReadingOrder]:
    preds: dict[str, ReadingOrder] = {}
    for ln, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        parts = line.split()
        try:
            preds[parts[0]] = ReadingOrder(int(t) for t in parts[1:])
        except ValueError as e:
            raise MalformedRowError(f"{path} line {ln + 1}: bad index") from e
    return preds


# ---------------------------------------------------------------------------
# split manifests
# ---------------------------------------------------------------------------

def write_split(split: Mapping[str, str], path: Path | str) -> None:
    lines = ["page_id,split"] + [f"{pid},{split[pid]}" for pid in sorted(split)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_split(path: Path | str) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    reader = csv.DictReader(text)
    return {rec["page_id"]: rec["split"] for rec in reader}


# ---------------------------------------------------------------------------
# NIJL/CODH-style coordinate tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColumnMapping:
    """Column names of a coordinate table; defaults follow the CODH layout."""
    page: str = "Image"
    label: str = "Unicode"
    x: str = "X"
    y: str = "Y"
    width: str = "Width"
    height: str = "Height"
    order: str = "Char ID"  # optional in the source


def import_coordinate_table(
    path: Path | str,
    image_dims: Mapping[str, tuple[int, int]] | tuple[int, int],
    mapping: ColumnMapping = ColumnMapping(),
    book_id: str = "",
) -> Book:
    """Import one book's coordinate CSV.

    ``image_dims`` maps page id -> (width, height) pixels, or is a single
    pair applied to every page.
    """
    path = Path(path)
    book_id = book_id or path.stem.removesuffix("_coordinate")
    with open(path, encoding="utf-8-sig", newline="") as f:
        reader = csv.DictReader(f)
        fields = reader.fieldnames or []
        for col in (mapping.page, mapping.label, mapping.x, mapping.y,
                    mapping.width, mapping.height):
            if col not in fields:
                raise MalformedRowError(f"{path}: missing column {col!r}")
        has_order = mapping.order in fields
        by_page: dict[str, list[CoordinateRow]] = {}
        for rec in reader:
            order = None
            if has_order and rec[mapping.order] not in (None, "", "-1"):
                try:
                    order = int(rec[mapping.order])
                except ValueError as e:
                    raise MalformedRowError(
                        f"{path}: non-integer order value {rec[mapping.order]!r}"
                    ) from e
            by_page.setdefault(rec[mapping.page], []).append(CoordinateRow(
                label=_parse_label(rec[mapping.label]),
                x=rec[mapping.x], y=rec[mapping.y],  # type: ignore[arg-type]
                width=rec[mapping.width], height=rec[mapping.height],  # type: ignore[arg-type]
                order=order,
            ))
    pages = []
    for page_id in sorted(by_page):
        dims = image_dims[page_id] if isinstance(image_dims, Mapping) else image_dims
        pages.append(import_page(by_page[page_id], dims, page_id))
    return Book(book_id=book_id, pages=tuple(pages))


def read_image_dims(path: Path | str) -> dict[str, tuple[int, int]]:
    """CSV of page_id,width,height rows."""
    out: dict[str, tuple[int, int]] = {}
    with open(path, encoding="utf-8-sig", newline="") as f:
        for rec in csv.DictReader(f):
            out[rec["page_id"]] = (int(rec["width"]), int(rec["height"]))
    return out
