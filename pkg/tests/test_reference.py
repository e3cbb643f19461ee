import math

import pytest

from su2search.matching import MatchingInputs
from su2search.reference import (
    REFERENCE_EXAMPLE,
    adjudicate,
    matches_reference,
    max_w_on_matched_curve,
    min_f_on_matched_curve,
)


@pytest.fixture(scope="module")
def report():
    return adjudicate()


def test_matches_reference():
    assert matches_reference(0.7, 1e-4, 0.0)
    assert not matches_reference(0.7, 1e-3, 0.0)


def test_counts(report):
    assert report["eq23_m"] == 2
    assert report["oracle_m"] == 2
    assert report["planner_m"] == 2
    assert report["pi_point_f"] == pytest.approx(1.1219259477, abs=1e-9)


def test_reference_count_not_achievable(report):
    assert report["reference_m_achievable"] is False
    assert report["reference_m_best_success_any"] < 1 - 1e-3
    assert report["max_w_matched"] == pytest.approx(1.4, abs=1e-9)
    assert report["max_w_matched"] < math.pi / 2


def test_adjusted_phases_certain(report):
    assert len(report["adjusted_phases"]) == 2
    for p in report["adjusted_phases"]:
        assert p["oracle_success"] > 1 - 1e-9


def test_reference_phases_belong_to_two_iterations(report):
    assert report["reference_phases_agree"]
    assert any("m = 2" in n for n in report["notes"])


def test_curve_extremes_for_other_inputs():
    inputs = MatchingInputs.from_angles(0.3, 0.3)
    assert max_w_on_matched_curve(inputs)[0] == pytest.approx(0.6, abs=1e-9)
    assert min_f_on_matched_curve(inputs) == pytest.approx((math.pi / 2 - 0.3) / 0.6, abs=1e-9)


def test_reference_record_is_unchanged():
    assert REFERENCE_EXAMPLE["m_op"] == 1 and REFERENCE_EXAMPLE["min_f"] == 0.56
