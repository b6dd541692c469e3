"""JSON 入出力のテスト"""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.curve import LocalizedRing
from src.algebra.rings import QQ_RING
from src.errors import ParseError
from src.utils import io
from tests.strategies import LAURENT, auts

TWO_POINTS = LocalizedRing.create("t", [0, -1, 1])


class TestJetRecords:
    def test_chart_jet_keeps_its_ring(self):
        tau = io.load_jet(io.SAMPLES_DIR / "jet_over_chart.json")
        data = io.serialize_jet(tau)
        assert data["chart"] == {"variable": "t", "localization": ["0", "1"]}
        again = io.parse_jet(data)
        assert again.ring == tau.ring
        assert again == tau
        assert io.serialize_jet(again) == data

    def test_rational_jet_has_no_chart(self):
        data = io.serialize_jet(io.parse_jet_literal("0,2,1", 3))
        assert "chart" not in data
        assert io.parse_jet(data) == io.parse_jet_literal("0,2,1", 3)

    @settings(max_examples=15)
    @given(tau=st.one_of(auts(QQ_RING, 4), auts(LAURENT, 4), auts(TWO_POINTS, 3)))
    def test_serialized_jet_reads_back(self, tau):
        assert io.parse_jet(json.loads(io.dumps(io.serialize_jet(tau)))) == tau

    def test_two_point_localization(self):
        t = TWO_POINTS.variable_element()
        coeffs = ["0", {"num": ["1"], "den": ["0", "-1", "1"]}, "1"]
        tau = io.parse_jet({"order": 3, "chart": io.serialize_ring(TWO_POINTS), "coeffs": coeffs})
        assert tau.coeffs[1] == 1 / (t * (t - 1))
        assert io.serialize_jet(tau)["chart"]["localization"] == ["0", "-1", "1"]

    def test_missing_order(self):
        with pytest.raises(ParseError):
            io.parse_jet({"coeffs": ["0", "1"]})

    def test_float_is_rejected(self):
        with pytest.raises(ParseError):
            io.parse_rational_value(0.5)
        assert io.parse_rational_value("1/2") == Fraction(1, 2)
