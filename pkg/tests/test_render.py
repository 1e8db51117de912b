import pytest

from yomijun.errors import NotPermutationError
from yomijun.model import ReadingOrder
from yomijun.render import RenderSpec, color_for, render_paths

from conftest import make_page


def _spec(page, orders, **kwargs):
    return RenderSpec(page=page, orders=tuple(orders), **kwargs)


def test_polyline_through_centers():
    page = make_page([(0.1, 0.2), (0.3, 0.4), (0.5, 0.6)], dims=(100, 200))
    svg = render_paths(_spec(page, [("gt", ReadingOrder([0, 1, 2]), "blue")]))
    assert '<polyline points="10.00,40.00 30.00,80.00 50.00,120.00"' in svg
    assert 'stroke="blue"' in svg
    assert svg.count("<rect") == 4  # background + three boxes


def test_two_orders_two_colors():
    page = make_page([(0.2, 0.2), (0.8, 0.8)])
    svg = render_paths(_spec(page, [
        ("a", ReadingOrder([0, 1]), "red"),
        ("b", ReadingOrder([1, 0]), "green"),
    ]))
    assert svg.count("<polyline") == 2
    assert 'stroke="red"' in svg and 'stroke="green"' in svg
    assert ">a</text>" in svg and ">b</text>" in svg


def test_single_char_renders_box_only():
    page = make_page([(0.5, 0.5)])
    svg = render_paths(_spec(page, [("gt", ReadingOrder([0]), "blue")]))
    assert "<polyline" not in svg
    assert svg.count("<rect") == 2
    assert "<circle" in svg  # start marker still drawn


def test_empty_order_renders_boxes_only():
    page = make_page([(0.5, 0.5)])
    svg = render_paths(_spec(page, [], draw_boxes=True))
    assert "<polyline" not in svg and svg.count("<rect") == 2


def test_deterministic_bytes():
    page = make_page([(0.1, 0.9), (0.9, 0.1), (0.4, 0.4)])
    spec = _spec(page, [("m", ReadingOrder([2, 0, 1]), "violet")],
                 stroke_width=2.5, draw_boxes=False)
    assert render_paths(spec) == render_paths(spec)


def test_order_must_be_permutation():
    page = make_page([(0.2, 0.2), (0.8, 0.8)])
    with pytest.raises(NotPermutationError):
        _spec(page, [("bad", ReadingOrder([0, 0]), "red")])


def test_color_defaults():
    assert color_for("ground_truth", 3) == "blue"
    assert color_for("simple", 0) == "red"
    assert color_for("adaptive", 0) == "green"
    assert color_for("somethingelse", 0) == "blue"
    assert color_for("somethingelse", 1) == "red"
