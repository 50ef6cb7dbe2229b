import random

import pytest

from sketch2ui.detection_io import (
    BoundingBox,
    ClassMap,
    DetectedElement,
    DetectionSet,
    ElementClass,
    class_histogram,
    default_class_map,
    filter_by_confidence,
    parse_class_map,
    parse_detection_csv,
    write_detection_csv,
)
from sketch2ui.errors import ClassMapError, DetectionError
from sketch2ui.fixtures import corpus_paths

from conftest import random_detection_set


class TestElementClass:
    def test_closed_set_of_ten(self):
        assert len(ElementClass) == 10

    def test_case_insensitive_lookup(self):
        assert ElementClass.from_name("Button") is ElementClass.BUTTON
        assert ElementClass.from_name("CHECKBOX") is ElementClass.CHECKBOX
        assert ElementClass.from_name(" textbox ") is ElementClass.TEXTBOX

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError, match="unknown element class"):
            ElementClass.from_name("slider")


class TestBoundingBox:
    def test_dimensions(self):
        box = BoundingBox(10, 20, 110, 60)
        assert (box.width, box.height, box.area) == (100, 40, 4000)

    @pytest.mark.parametrize(
        "coords", [(110, 20, 10, 60), (10, 60, 110, 20), (10, 20, 10, 60), (10, 20, 110, 20)]
    )
    def test_inverted_or_degenerate_rejected(self, coords):
        with pytest.raises(ValueError, match="inverted or degenerate"):
            BoundingBox(*coords)

    def test_negative_coordinates_rejected(self):
        with pytest.raises(ValueError, match="negative coordinate"):
            BoundingBox(-1, 0, 10, 10)


class TestParseClassMap:
    def test_basic_map(self):
        cm = parse_class_map("0,button\n1,textbox")
        assert cm.class_of(0) is ElementClass.BUTTON
        assert cm.class_of(1) is ElementClass.TEXTBOX
        assert cm.id_of(ElementClass.BUTTON) == 0

    def test_line_order_irrelevant(self):
        a = parse_class_map("0,button\n1,textbox")
        b = parse_class_map("1,textbox\n0,button")
        assert a.by_id == b.by_id

    def test_empty_input_rejected(self):
        with pytest.raises(ClassMapError, match="empty class map"):
            parse_class_map("")

    def test_duplicate_id_rejected_with_line(self):
        with pytest.raises(ClassMapError, match="line 2: duplicate id 0"):
            parse_class_map("0,button\n0,label")

    def test_duplicate_class_rejected(self):
        with pytest.raises(ClassMapError, match="duplicate class 'button'"):
            parse_class_map("0,button\n1,Button")

    def test_unknown_class_rejected(self):
        with pytest.raises(ClassMapError, match="line 1: unknown class name 'slider'"):
            parse_class_map("0,slider")

    def test_malformed_id_rejected(self):
        with pytest.raises(ClassMapError, match="malformed integer id"):
            parse_class_map("zero,button")

    def test_comments_and_blank_lines_skipped(self):
        cm = parse_class_map("# ids\n\n0,button\r\n1,label\n")
        assert len(cm) == 2

    def test_bijectivity_enforced_on_construction(self):
        with pytest.raises(ValueError, match="non-negative"):
            ClassMap({-1: ElementClass.BUTTON})


class TestParseDetectionCsv:
    def test_single_line_defaults_confidence(self):
        sets = parse_detection_csv("s1.jpg,10,20,110,60,button", default_class_map())
        assert len(sets) == 1
        (el,) = sets[0].elements
        assert el.cls is ElementClass.BUTTON
        assert el.box == BoundingBox(10, 20, 110, 60)
        assert el.confidence == 1.0
        assert el.source_file == "s1.jpg"

    def test_inverted_box_rejected_with_line(self):
        with pytest.raises(DetectionError, match="line 1"):
            parse_detection_csv("s1.jpg,110,20,10,60,button", default_class_map())

    def test_grouping_by_source_file(self):
        text = "s1.jpg,0,0,5,5,button\ns1.jpg,10,10,20,20,label\ns2.jpg,0,0,5,5,image"
        sets = parse_detection_csv(text, default_class_map())
        assert [(s.source_file, len(s)) for s in sets] == [("s1.jpg", 2), ("s2.jpg", 1)]

    def test_class_by_integer_id(self):
        cm = parse_class_map("4,button")
        sets = parse_detection_csv("s1.jpg,0,0,5,5,4", cm)
        assert sets[0].elements[0].cls is ElementClass.BUTTON

    def test_unresolvable_class_id(self):
        with pytest.raises(DetectionError, match="class id 9 not in class map"):
            parse_detection_csv("s1.jpg,0,0,5,5,9", parse_class_map("4,button"))

    def test_unresolvable_class_name(self):
        with pytest.raises(DetectionError, match="unresolvable class 'slider'"):
            parse_detection_csv("s1.jpg,0,0,5,5,slider", default_class_map())

    def test_wrong_field_count(self):
        with pytest.raises(DetectionError, match="expected 6 or 7.*got 5"):
            parse_detection_csv("s1.jpg,0,0,5,5", default_class_map())

    def test_confidence_column_parsed_and_validated(self):
        sets = parse_detection_csv("s1.jpg,0,0,5,5,button,0.25", default_class_map())
        assert sets[0].elements[0].confidence == 0.25
        with pytest.raises(DetectionError, match="confidence 1.5 outside"):
            parse_detection_csv("s1.jpg,0,0,5,5,button,1.5", default_class_map())

    def test_subpixel_coordinates_accepted(self):
        sets = parse_detection_csv("s1.jpg,0.5,0.25,5.75,5.5,button", default_class_map())
        assert sets[0].elements[0].box.x_min == 0.5

    def test_empty_file_rejected(self):
        with pytest.raises(DetectionError, match="no detections"):
            parse_detection_csv("# only a comment\n", default_class_map())

    def test_locale_independent_numbers(self):
        # decimal comma shifts the field count and must not parse as a number
        with pytest.raises(DetectionError):
            parse_detection_csv("s1.jpg,0,0,5_0,5,button", default_class_map())

    def test_crlf_endings(self):
        sets = parse_detection_csv("s1.jpg,0,0,5,5,button\r\ns1.jpg,6,6,9,9,label\r\n",
                                   default_class_map())
        assert len(sets[0]) == 2

    def test_round_trip_through_writer(self):
        rng = random.Random(7)
        originals = [random_detection_set(rng, n, source=f"s{n}.png") for n in (1, 3, 8)]
        text = write_detection_csv(originals)
        parsed = parse_detection_csv(text, default_class_map())
        assert parsed == originals


class TestFilterByConfidence:
    def _dets(self, confidences):
        elements = tuple(
            DetectedElement(ElementClass.BUTTON, BoundingBox(i * 10, 0, i * 10 + 5, 5), c, "s")
            for i, c in enumerate(confidences)
        )
        return DetectionSet("s", elements)

    def test_keeps_at_or_above_threshold(self):
        out = filter_by_confidence(self._dets([0.9, 0.4, 0.5]), 0.5)
        assert [e.confidence for e in out] == [0.9, 0.5]

    def test_zero_threshold_is_identity(self):
        dets = self._dets([0.9, 0.4, 0.5])
        assert filter_by_confidence(dets, 0.0) == dets

    def test_full_threshold_empties_sub_one_confidences(self):
        assert len(filter_by_confidence(self._dets([0.9, 0.99]), 1.0)) == 0

    def test_idempotent_and_monotone(self):
        rng = random.Random(3)
        dets = random_detection_set(rng, 20)
        for threshold in (0.0, 0.3, 0.55, 0.8, 1.0):
            once = filter_by_confidence(dets, threshold)
            assert filter_by_confidence(once, threshold) == once
        sizes = [len(filter_by_confidence(dets, t)) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
        assert sizes == sorted(sizes, reverse=True)


class TestClassHistogram:
    def test_bundled_corpus_matches_reference_counts(self):
        annotations, classes = corpus_paths()
        cm = parse_class_map(classes.read_text(encoding="utf-8"))
        sets = parse_detection_csv(annotations.read_text(encoding="utf-8"), cm)
        hist = class_histogram(sets)
        assert len(sets) == 50
        assert {cls.canonical_name: n for cls, n in hist.items()} == {
            "heading": 17,
            "checkbox": 34,
            "radio": 28,
            "selectbox": 12,
            "label": 29,
            "link": 20,
            "button": 19,
            "image": 22,
            "paragraph": 10,
            "textbox": 29,
        }
        assert sum(hist.values()) == 220 == sum(len(s) for s in sets)

    def test_empty_input_all_zero(self):
        hist = class_histogram([])
        assert set(hist) == set(ElementClass)
        assert all(v == 0 for v in hist.values())

    def test_single_element(self):
        ds = DetectionSet(
            "s", (DetectedElement(ElementClass.BUTTON, BoundingBox(0, 0, 1, 1), 1.0, "s"),)
        )
        hist = class_histogram([ds])
        assert hist[ElementClass.BUTTON] == 1
        assert sum(hist.values()) == 1
