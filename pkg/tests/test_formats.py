"""tgspace/tgcolor parsing, rejection cases, and byte-exact round trips."""

from __future__ import annotations

import io

import pytest
from hypothesis import given, settings

from treegraded.formats import (
    FormatError,
    read_coloring,
    read_space,
    space_to_text,
    write_coloring,
    write_space,
)

from conftest import small_spaces, tripod_space

GOOD = """tgspace 1
vertices 4
edges 3
0 1
1 2
2 3
basepoint 0
pieces 3
2 0 1
2 1 2
2 2 3
"""


def test_round_trip_from_text():
    space = read_space(io.StringIO(GOOD))
    assert space.graph.vertex_count == 4
    assert space.basepoint == 0
    assert space.pieces == (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3}))
    assert space_to_text(space) == GOOD


def test_comments_and_blank_lines_ignored():
    text = GOOD.replace("vertices 4", "# seed 99\n\nvertices 4")
    assert space_to_text(read_space(io.StringIO(text))) == GOOD


def test_metadata_written_as_comments():
    space = read_space(io.StringIO(GOOD))
    text = space_to_text(space, {"seed": 7, "generator": "random"})
    assert "# generator random\n" in text and "# seed 7\n" in text
    assert space_to_text(read_space(io.StringIO(text))) == GOOD


@settings(max_examples=30, deadline=None)
@given(small_spaces())
def test_round_trip_generated(space):
    text = space_to_text(space)
    again = read_space(io.StringIO(text))
    assert space_to_text(again) == text
    assert again.basepoint == space.basepoint
    assert set(again.pieces) == set(space.pieces)
    assert again.graph.edges == space.graph.edges


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        (lambda t: t.replace("tgspace 1", "tgspace 2"), "bad header"),
        (lambda t: t.replace("edges 3", "edges 4"), "malformed edge"),
        (lambda t: t.replace("1 2\n", "1 2\n1 2\n").replace("edges 3", "edges 4"), "duplicate edge"),
        (lambda t: t.replace("0 1", "1 0"), "u < v"),
        (lambda t: t.replace("2 3\n", "2 9\n"), "out of range"),
        (lambda t: t.replace("basepoint 0", "basepoint 11"), "out of range"),
        (lambda t: t.replace("2 0 1", "3 0 1"), "count mismatch"),
        (lambda t: t.replace("2 2 3", "2 2 2"), "duplicate vertex"),
        (lambda t: t.replace("vertices 4", "vertices x"), "malformed integer"),
        (lambda t: t + "2 0 1\n", "trailing content"),
    ],
)
def test_malformed_inputs_rejected(mutation, fragment):
    with pytest.raises(FormatError) as err:
        read_space(io.StringIO(mutation(GOOD)))
    assert fragment in str(err.value)


def test_truncation_reports_line_number():
    truncated = "".join(GOOD.splitlines(keepends=True)[:4])
    with pytest.raises(FormatError) as err:
        read_space(io.StringIO(truncated))
    assert err.value.line == 5
    assert "line 5" in str(err.value)


def test_coloring_round_trip():
    colors = {0: 1, 3: 0, 2: 2}
    buf = io.StringIO()
    write_coloring(colors, buf)
    text = buf.getvalue()
    assert text == "tgcolor 1\n0 1\n2 2\n3 0\n"
    assert read_coloring(io.StringIO(text)) == colors


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("tgcolor 2\n0 1\n", "bad header"),
        ("tgcolor 1\n0 1\n0 2\n", "duplicate vertex"),
        ("tgcolor 1\n0\n", "expected 'v c'"),
        ("tgcolor 1\n0 -1\n", "negative color"),
        ("", "empty coloring"),
    ],
)
def test_bad_colorings_rejected(text, fragment):
    with pytest.raises(FormatError) as err:
        read_coloring(io.StringIO(text))
    assert fragment in str(err.value)


def test_write_to_disk(tmp_path):
    space = tripod_space(arm=2)
    path = tmp_path / "tripod.tgspace"
    write_space(space, str(path), {"seed": 1})
    again = read_space(str(path))
    assert space_to_text(again) == space_to_text(space)
