import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sketch2ui import kernels
from sketch2ui.detection_io import BoundingBox, DetectedElement, ElementClass
from sketch2ui.kernels import _numba, _numpy
from sketch2ui.overlap import (
    OverlapKind,
    classify_overlap,
    overlap_area,
    overlap_lengths,
    overlap_ratio,
)
from sketch2ui.rules import RatioMode, ResolutionRules

from conftest import random_box, raster_overlap_cells


def boxes_strategy(span=200):
    def build(x1, y1, w, h):
        return BoundingBox(x1, y1, x1 + w, y1 + h)

    coord = st.integers(0, span).map(float) | st.floats(
        0, span, allow_nan=False, allow_infinity=False
    )
    size = st.integers(1, span).map(float) | st.floats(
        min_value=0.5, max_value=span, allow_nan=False
    )
    return st.builds(build, coord, coord, size, size)


class TestOverlapLengths:
    def test_partial_overlap(self):
        assert overlap_lengths(BoundingBox(0, 0, 10, 10), BoundingBox(5, 5, 15, 15)) == (5, 5)

    def test_self_overlap_is_width_height(self):
        b = BoundingBox(3, 4, 10, 20)
        assert overlap_lengths(b, b) == (b.width, b.height)

    def test_disjoint_boxes(self):
        assert overlap_lengths(BoundingBox(0, 0, 10, 10), BoundingBox(20, 20, 30, 30)) == (0, 0)


class TestOverlapArea:
    def test_partial_overlap(self):
        assert overlap_area(BoundingBox(0, 0, 10, 10), BoundingBox(5, 5, 15, 15)) == 25

    def test_identical_boxes(self):
        b = BoundingBox(2, 3, 12, 9)
        assert overlap_area(b, b) == b.area

    def test_shared_edge_only(self):
        assert overlap_area(BoundingBox(0, 0, 10, 10), BoundingBox(10, 0, 20, 10)) == 0


class TestOverlapRatio:
    def test_quarter_overlap(self):
        assert overlap_ratio(BoundingBox(0, 0, 10, 10), BoundingBox(5, 5, 15, 15)) == 0.25

    def test_identical_boxes(self):
        b = BoundingBox(0, 0, 10, 10)
        assert overlap_ratio(b, b) == 1.0

    def test_contained_box_scores_full(self):
        assert overlap_ratio(BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 5)) == 1.0

    def test_iou_mode(self):
        b1, b2 = BoundingBox(0, 0, 10, 10), BoundingBox(5, 5, 15, 15)
        assert overlap_ratio(b1, b2, RatioMode.IOU) == 25 / 175


class TestRasterizationOracle:
    def test_area_matches_cell_counts_exactly(self):
        rng = random.Random(12345)
        for _ in range(1000):
            b1, b2 = random_box(rng), random_box(rng)
            assert overlap_area(b1, b2) == raster_overlap_cells(b1, b2)

    def test_ratio_matches_oracle_ratio(self):
        rng = random.Random(54321)
        for _ in range(500):
            b1, b2 = random_box(rng), random_box(rng)
            oracle = raster_overlap_cells(b1, b2) / min(b1.area, b2.area)
            assert abs(overlap_ratio(b1, b2) - oracle) <= 1e-9


class TestProperties:
    @given(boxes_strategy(), boxes_strategy())
    def test_symmetry_exact(self, b1, b2):
        assert overlap_area(b1, b2) == overlap_area(b2, b1)
        assert overlap_ratio(b1, b2) == overlap_ratio(b2, b1)

    @given(boxes_strategy(), boxes_strategy())
    def test_bounds(self, b1, b2):
        area = overlap_area(b1, b2)
        assert 0.0 <= area <= min(b1.area, b2.area) * (1 + 1e-12)
        ratio = overlap_ratio(b1, b2)
        assert 0.0 <= ratio <= 1.0 + 1e-12

    @given(boxes_strategy())
    def test_self_ratio_is_one(self, b):
        assert overlap_ratio(b, b) == 1.0


def _element(box, cls=ElementClass.BUTTON, confidence=1.0):
    return DetectedElement(cls, box, confidence, "s")


class TestClassifyOverlap:
    RULES = ResolutionRules()

    def test_quarter_overlap_is_proximity(self):
        e1 = _element(BoundingBox(0, 0, 10, 10))
        e2 = _element(BoundingBox(5, 5, 15, 15), ElementClass.LABEL)
        assert classify_overlap(e1, e2, self.RULES) is OverlapKind.PROXIMITY

    def test_identical_boxes_are_duplicate(self):
        e1 = _element(BoundingBox(0, 0, 10, 10))
        e2 = _element(BoundingBox(0, 0, 10, 10), ElementClass.LABEL)
        assert classify_overlap(e1, e2, self.RULES) is OverlapKind.DUPLICATE

    def test_disjoint_is_none(self):
        e1 = _element(BoundingBox(0, 0, 10, 10))
        e2 = _element(BoundingBox(20, 0, 30, 10))
        assert classify_overlap(e1, e2, self.RULES) is OverlapKind.NONE

    @pytest.mark.parametrize(
        "overlap_units,expected",
        [
            (4999, OverlapKind.PROXIMITY),  # ratio 0.4999
            (5000, OverlapKind.DUPLICATE),  # ratio 0.5000: at-threshold is duplicate
            (5001, OverlapKind.DUPLICATE),  # ratio 0.5001
        ],
    )
    def test_threshold_is_inclusive(self, overlap_units, expected):
        base = _element(BoundingBox(0, 0, 10000, 1))
        other = _element(
            BoundingBox(10000 - overlap_units, 0, 20000 - overlap_units, 1),
            ElementClass.LABEL,
        )
        ratio = overlap_ratio(base.box, other.box)
        assert ratio == overlap_units / 10000
        assert classify_overlap(base, other, self.RULES) is expected


class TestKernelParity:
    """Batch kernels must agree with the scalar path and across backends."""

    def _random_boxes(self, n=60, seed=9):
        rng = random.Random(seed)
        return [random_box(rng) for _ in range(n)]

    def test_pairwise_matches_scalar(self):
        boxes = self._random_boxes()
        arr = np.array([b.as_tuple() for b in boxes])
        area = kernels.pairwise_overlap_area(arr)
        ratio = kernels.pairwise_overlap_ratio(arr, False)
        for i, b1 in enumerate(boxes):
            for j, b2 in enumerate(boxes):
                assert area[i, j] == overlap_area(b1, b2)
                assert ratio[i, j] == overlap_ratio(b1, b2)

    def test_backends_agree_exactly_on_geometry(self):
        arr = np.array([b.as_tuple() for b in self._random_boxes(80, seed=11)])
        np.testing.assert_array_equal(
            _numba.pairwise_overlap_area(arr), _numpy.pairwise_overlap_area(arr)
        )
        for use_iou in (False, True):
            np.testing.assert_array_equal(
                _numba.pairwise_overlap_ratio(arr, use_iou),
                _numpy.pairwise_overlap_ratio(arr, use_iou),
            )
        np.testing.assert_array_equal(
            _numba.vertical_overlap_fraction(arr), _numpy.vertical_overlap_fraction(arr)
        )

    def test_backends_agree_on_band_labels(self):
        rng = np.random.default_rng(5)
        for n in (1, 2, 7, 25):
            adj = rng.random((n, n)) < 0.3
            adj = adj | adj.T
            np.testing.assert_array_equal(_numba.band_labels(adj), _numpy.band_labels(adj))
