import math

import numpy as np
import pytest

from lifespan_ph import formats
from lifespan_ph.barcode import Bar, Barcode
from lifespan_ph.formats import BarcodeFile, ParseError
from lifespan_ph.homology import ClosureError
from lifespan_ph.order import IndexUniverse, Interval
from lifespan_ph.samples import filtration_corpus, random_module

TRIANGLE = """grid 4
simplex 1 0
simplex 1 1
simplex 1 2
simplex 1 0 1
simplex 1 1 2
simplex 2 0 2
simplex 3 0 1 2
"""


def test_filtration_round_trip():
    x = formats.parse_filtration(TRIANGLE)
    assert formats.print_filtration(x) == TRIANGLE
    for y, _ in filtration_corpus(9, 20):
        text = formats.print_filtration(y)
        again = formats.parse_filtration(text)
        assert again.grades == y.grades and again.top == y.top
        assert formats.print_filtration(again) == text


def test_filtration_comments_and_order():
    text = "# header\ngrid 2\nsimplex 2 1 0  # edge first\nsimplex 1 0\nsimplex 1 1\n"
    x = formats.parse_filtration(text)
    assert x.grades[(0, 1)] == 2


@pytest.mark.parametrize(
    "text, line",
    [
        ("simplex 1 0\n", 1),
        ("grid 2\nsimplex x 0\n", 2),
        ("grid 2\nsimplex 3 0\n", 2),
        ("grid 2\nsimplex 1 0\nsimplex 1 0\n", 3),
        ("grid 2\nvertex 1 0\n", 2),
    ],
)
def test_filtration_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        formats.parse_filtration(text)
    assert exc.value.line == line


def test_closure_violation_names_face():
    with pytest.raises(ClosureError, match="missing face 1"):
        formats.parse_filtration("grid 2\nsimplex 1 0\nsimplex 2 0 1\n")


def test_barcode_round_trip():
    text = "integers\n0 -inf inf\n0 -inf 5\n0 2 inf\n0 3 6\n1 0 0\n"
    bf = formats.parse_barcode(text)
    assert bf.universe == IndexUniverse.integers()
    assert bf[0].intervals() == [(-math.inf, 5), (-math.inf, math.inf), (2, math.inf), (3, 6)]
    assert formats.print_barcode(bf) == text


def test_barcode_tags_round_trip():
    u = IndexUniverse.grid(3)
    b = Barcode(u, (Bar(Interval(0, 1, u), "a"), Bar(Interval(2, 3, u), 7)))
    text = formats.print_barcode(BarcodeFile(u, {0: b}))
    assert text == "grid 3\n0 0 1 a\n0 2 3 7\n"
    assert formats.parse_barcode(text)[0] == b


def test_headerless_barcode():
    bf = formats.parse_barcode("1 2 2\n")
    assert bf.universe is None and bf[1].intervals() == [(2, 2)]
    assert formats.print_barcode(bf) == "1 2 2\n"
    assert formats.parse_barcode("").barcodes == {}


def test_barcode_json_round_trip():
    bf = formats.parse_barcode("integers\n0 -inf 3 x\n2 1 inf y\n")
    again = formats.barcode_from_json(formats.barcode_to_json(bf))
    assert again == bf
    assert formats.print_barcode(again) == "integers\n0 -inf 3 x\n2 1 inf y\n"


@pytest.mark.parametrize("text", ["grid 4\n0 3 2\n", "grid 4\n0 1 5\n", "0 1\n", "grid 2\n0 0 1 a\n0 1 2 a\n", "0 1 2\ngrid 2\n"])
def test_bad_barcodes(text):
    with pytest.raises(ParseError):
        formats.parse_barcode(text)


@pytest.mark.parametrize("layout", ["dense", "sparse"])
def test_module_round_trip(layout):
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = random_module(rng)
        text = formats.print_module(m, layout)
        again = formats.parse_module(text)
        assert again.p == m.p and again.dims == m.dims
        assert all(np.array_equal(a, b) for a, b in zip(again.steps, m.steps))
        assert formats.print_module(again, layout) == text


def test_module_errors():
    with pytest.raises(ParseError):
        formats.parse_module("prime 4\ndims 1\nformat dense\n")
    with pytest.raises(ParseError):
        formats.parse_module("dims 1 1\nformat dense\nstep 0\n1 1\n")
    with pytest.raises(ParseError):
        formats.parse_module("dims 1 1\nformat sparse\nentry 0 1 0 1\n")


def test_map_round_trip():
    text = "map\nvertex 0 0\nvertex 1 0\n"
    assert formats.print_map(formats.parse_map(text)) == text
    with pytest.raises(ParseError):
        formats.parse_map("vertex 0 0\n")
    with pytest.raises(ParseError):
        formats.parse_map("map\nvertex 0 0\nvertex 0 1\n")


def test_sniff():
    assert formats.sniff(TRIANGLE) == "filtration"
    assert formats.sniff("map\n") == "map"
    assert formats.sniff("prime 2\ndims 1\nformat dense\n") == "module"
    assert formats.sniff("grid 4\n0 1 2\n") == "barcode"
