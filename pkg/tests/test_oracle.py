import math

import pytest

from kasteleyn.errors import DomainError
from kasteleyn.lattice import VertexRef
from kasteleyn.oracle import DEFAULT_ENTRIES, anchor, center_entries, compare, in_window, window


def test_center_entries():
    assert len(DEFAULT_ENTRIES) == 25
    for dx1, dx2, dy1, dy2 in DEFAULT_ENTRIES:
        x, y = VertexRef(dx1, dx2), VertexRef(dy1, dy2)
        assert x.color == "white" and y.color == "black"
    assert center_entries(0) == ()
    assert len(center_entries(1)) == 4


def test_anchor():
    assert anchor(16, -0.375) == 10
    with pytest.raises(DomainError):
        anchor(16, -0.3)
    with pytest.raises(DomainError):
        anchor(8, -0.375)  # N = 5 is odd


def test_window():
    assert window(64) == 4.0
    assert in_window(VertexRef(11, 8), 64)
    assert not in_window(VertexRef(13, 8), 64)


def test_compare_refuses_entries_outside_the_window():
    with pytest.raises(DomainError, match="window"):
        compare(16, 0.5, -0.375, entries=[(3, 0, 0, 1)])


def test_compare_gap_shrinks_with_n():
    small = compare(16, 0.5, -0.375)
    large = compare(32, 0.5, -0.375)
    assert len(small) == len(large) == 25
    assert max(r.gap for r in large) < max(r.gap for r in small)
    for r in small + large:
        assert r.envelope > 0 and math.isfinite(r.gap)
        assert r.gap == pytest.approx(abs(r.finite - r.infinite))
