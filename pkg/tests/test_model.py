import pytest

from yomijun.errors import EmptyPageError, NotPermutationError
from yomijun.model import (
    Book,
    CharBox,
    Page,
    ReadingOrder,
    center,
    is_permutation,
    mean_char_width,
    x_overlap,
)

from conftest import make_page


def box(x, y, w, h, id=0):
    return CharBox(id=id, label="a", x=x, y=y, w=w, h=h)


@pytest.mark.parametrize("b,expected", [
    (box(0, 0, 1, 1), (0.5, 0.5)),
    (box(0.9, 0.1, 0.05, 0.05), (0.925, 0.125)),
    (box(0.4, 0.4, 0.2, 0.2), (0.5, 0.5)),
])
def test_center(b, expected):
    assert center(b) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("a,b,expected", [
    (box(0, 0, 0.5, 0.1), box(0.25, 0, 0.5, 0.1, id=1), 0.25),
    (box(0, 0, 0.2, 0.1), box(0.5, 0, 0.2, 0.1, id=1), 0.0),
    (box(0.1, 0, 0.3, 0.1), box(0.1, 0.5, 0.3, 0.1, id=1), 0.3),
])
def test_x_overlap(a, b, expected):
    assert x_overlap(a, b) == pytest.approx(expected, abs=1e-12)
    assert x_overlap(b, a) == x_overlap(a, b)


@pytest.mark.parametrize("widths,expected", [
    ((0.1, 0.3), 0.2),
    ((0.07,), 0.07),
    ((0.05, 0.05, 0.05), 0.05),
])
def test_mean_char_width(widths, expected):
    p = make_page([(0.5, 0.1 * (i + 1), w, 0.05) for i, w in enumerate(widths)])
    assert mean_char_width(p) == pytest.approx(expected, abs=1e-12)


def test_mean_char_width_empty_page():
    p = Page(page_id="e", image_width=10, image_height=10, chars=())
    with pytest.raises(EmptyPageError):
        mean_char_width(p)


@pytest.mark.parametrize("kwargs", [
    dict(x=0, y=0, w=0, h=0.1),          # zero width
    dict(x=0, y=0, w=0.1, h=-0.1),       # negative height
    dict(x=-0.1, y=0, w=0.1, h=0.1),     # negative corner
    dict(x=0.95, y=0, w=0.1, h=0.1),     # past the right edge
])
def test_charbox_invariants(kwargs):
    with pytest.raises(ValueError):
        CharBox(id=0, label="a", **kwargs)


def test_charbox_edge_epsilon():
    # boxes touching the edge within 1e-6 are fine
    CharBox(id=0, label="a", x=0.9, y=0.9, w=0.1 + 5e-7, h=0.1)


def test_page_requires_contiguous_ids():
    chars = (box(0.1, 0.1, 0.1, 0.1, id=0), box(0.3, 0.3, 0.1, 0.1, id=2))
    with pytest.raises(ValueError):
        Page(page_id="p", image_width=10, image_height=10, chars=chars)


def test_page_ground_truth_must_be_permutation():
    with pytest.raises(NotPermutationError):
        make_page([(0.2, 0.2), (0.4, 0.4)], gt=[0, 0])
    with pytest.raises(NotPermutationError):
        make_page([(0.2, 0.2), (0.4, 0.4)], gt=[0])


def test_reading_order_is_a_sequence():
    r = ReadingOrder([2, 0, 1])
    assert list(r) == [2, 0, 1]
    assert len(r) == 3
    assert r[0] == 2
    assert ReadingOrder([2, 0, 1]) == r


def test_is_permutation():
    assert is_permutation([1, 0, 2], 3)
    assert not is_permutation([1, 1, 2], 3)
    assert not is_permutation([0, 1], 3)


def test_book_unique_page_ids():
    p = make_page([(0.5, 0.5)])
    with pytest.raises(ValueError):
        Book(book_id="b", pages=(p, p))
