import json

from yomijun.dataset import from_books
from yomijun.metrics import evaluate
from yomijun.model import Book, ReadingOrder
from yomijun.report import (
    NOTES,
    accuracy_table,
    pretty_table,
    recall_by_length_table,
    recall_table,
    report_dict,
    write_report_bundle,
)

from conftest import make_page


def _reports():
    p = make_page([(0.9, 0.2), (0.9, 0.5), (0.5, 0.2), (0.5, 0.5)],
                  gt=[0, 1, 2, 3], page_id="p0")
    d = from_books([Book(book_id="bk", pages=(p,))])
    return {
        "perfect": evaluate(d, {"p0": ReadingOrder([0, 1, 2, 3])}, (1, 2)),
        "swapped": evaluate(d, {"p0": ReadingOrder([1, 0, 2, 3])}, (1, 2)),
    }


def test_accuracy_table_shape():
    text = accuracy_table(_reports())
    lines = text.strip().splitlines()
    assert lines[0] == "book_id,perfect,swapped"
    assert lines[1].startswith("bk,100.00,50.00")
    assert lines[-1].startswith("Overall,100.00,50.00")


def test_recall_tables():
    reports = _reports()
    assert "Overall,100.00" in recall_table(reports)
    text = recall_by_length_table(reports)
    assert text.splitlines()[0] == "query_length,perfect,swapped"
    assert "1,100.00,100.00" in text


def test_notes_document_denominator_convention():
    assert "3/4" in NOTES and "75.00%" in NOTES and "80%" in NOTES
    assert "window count" in NOTES


def test_report_bundle(tmp_path):
    paths = write_report_bundle(_reports(), tmp_path)
    assert paths["accuracy"].exists()
    assert paths["notes"].read_text(encoding="utf-8") == NOTES
    data = json.loads(paths["json"].read_text(encoding="utf-8"))
    assert data["models"]["perfect"]["overall"]["accuracy"] == 1.0
    assert (tmp_path / "figures" / "accuracy_by_book.png").exists()
    assert (tmp_path / "figures" / "recall_by_length.png").exists()


def test_report_dict_counts():
    d = report_dict(_reports())
    page = d["models"]["swapped"]["pages"]["p0"]
    assert page["edit_distance"] == 2
    # windows (0,1) and (1,2) break, (2,3) survives
    assert page["recall"]["2"] == [1, 3]


def test_pretty_table_alignment():
    out = pretty_table("a,b\nlong,1\n")
    assert out.splitlines()[0].startswith("a")
    assert "long" in out
