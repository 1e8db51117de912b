import random

import pytest
from hypothesis import strategies as st

from yomijun.model import CharBox, Page, ReadingOrder
from yomijun.synth import LayoutKind, SynthConfig, generate_page


def make_page(centers, w=0.05, h=0.05, gt=None, page_id="t",
              dims=(1000, 1000)):
    """Page from (cx, cy) center tuples, or (cx, cy, w, h) per char."""
    chars = []
    for i, c in enumerate(centers):
        cx, cy, bw, bh = c if len(c) == 4 else (*c, w, h)
        chars.append(CharBox(id=i, label="あ", x=cx - bw / 2, y=cy - bh / 2,
                             w=bw, h=bh))
    return Page(page_id=page_id, image_width=dims[0], image_height=dims[1],
                chars=tuple(chars),
                ground_truth=ReadingOrder(gt) if gt is not None else None)


@st.composite
def synth_configs(draw, kinds=tuple(LayoutKind), max_columns=5, max_chars=8):
    kind = draw(st.sampled_from(list(kinds)))
    min_chars = 3 if kind is LayoutKind.WARICHU else 1
    return SynthConfig(
        layout_kind=kind,
        n_columns=draw(st.integers(1, max_columns)),
        chars_per_column=draw(st.integers(min_chars, max_chars)),
        jitter=draw(st.floats(0, 0.45, allow_nan=False)),
        rng_seed=draw(st.integers(0, 2**31 - 1)),
    )


@st.composite
def synth_pages(draw, **kwargs):
    return generate_page(draw(synth_configs(**kwargs)))


@st.composite
def permutation_pairs(draw, max_n=12):
    """(gt, pred): two random permutations of the same ids."""
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**31 - 1))
    rng = random.Random(seed)
    gt = list(range(n))
    rng.shuffle(gt)
    pred = list(gt)
    rng.shuffle(pred)
    return gt, pred


@pytest.fixture
def rng():
    return random.Random(20240601)
