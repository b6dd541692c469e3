"""CLI のゴールデンテストと終了コード"""

import json
from dataclasses import replace
from pathlib import Path

import pytest

from src import cli
from src.errors import EXIT_DOMAIN, EXIT_OK, EXIT_PARSE
from src.utils.io import SAMPLES_DIR as SAMPLES

GOLDEN = Path(__file__).parent / "golden"

LAURENT = SAMPLES / "laurent.json"

GOLDEN_CASES = {
    "aut_inv_scaling": ["aut", "inv", "0,2", "--order", "3"],
    "aut_inv_unipotent": ["aut", "inv", "0,1,1"],
    "aut_mul": ["aut", "mul", "0,1,1", "0,2"],
    "aut_mul_reversed": ["aut", "mul", "0,2", "0,1,1"],
    "aut_project": ["aut", "project", "0,1,1,1", "--order", "4", "--to", "3"],
    "aut_decompose": ["aut", "decompose", "0,2,4"],
    "aut_kernel": ["aut", "kernel", "0,1,0,5", "--order", "4"],
    "aut_kernel_none": ["aut", "kernel", "0,1,1,5", "--order", "4"],
    "aut_inv_file": ["aut", "inv", SAMPLES / "jet_tau.json"],
    "aut_inv_over_chart": ["aut", "inv", SAMPLES / "jet_over_chart.json"],
    "cocycle_square": ["cocycle", "--chart", LAURENT, "sq", "t"],
    "cocycle_square_at_3": ["cocycle", "--chart", LAURENT, "sq", "t", "--at", "3"],
    "cocycle_inversion": ["cocycle", "--chart", LAURENT, "inv", "t"],
    "cocycle_identity": ["cocycle", "--chart", LAURENT, "t", "t", "--order", "5"],
    "schwarzian_mobius": ["oper", "schwarzian", "--chart", LAURENT, "t", "inv"],
    "schwarzian_square": ["oper", "schwarzian", "--chart", LAURENT, "sq", "t"],
    "canonicalize_sl2": ["oper", "canonicalize", SAMPLES / "sl2_oper.json"],
    "canonicalize_sl3": ["oper", "canonicalize", SAMPLES / "sl3_oper.json"],
    "canonicalize_extension": [
        "oper", "canonicalize", SAMPLES / "sl2_trivial_oper.json", "--allow-quadratic-extension",
    ],
    "is_oper_false": ["oper", "is-oper", SAMPLES / "sl2_not_oper.json"],
    "is_oper_true": ["oper", "is-oper", SAMPLES / "sl2_localized_oper.json"],
    "change_coords_inversion": ["oper", "change-coords", SAMPLES / "sl2_canonical.json", "--to", "inv"],
    "change_coords_affine": ["oper", "change-coords", SAMPLES / "sl2_canonical.json", "--to", "aff"],
    "rewrite_inversion": ["oper", "rewrite", SAMPLES / "sl2_oper.json", "--to", "inv"],
    "cocycle_check_sl2": ["oper", "cocycle-check", "--chart", LAURENT, "t", "inv"],
    "cocycle_check_sl3": ["oper", "cocycle-check", "--chart", LAURENT, "--lie", "sl:3", "t", "inv"],
    "cocycle_check_triple": ["oper", "cocycle-check", "--chart", LAURENT, "t", "inv", "dbl"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(run_cli, name):
    code, out, _ = run_cli(*GOLDEN_CASES[name], "-q")
    assert code == EXIT_OK
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "argv, name",
    [
        (["oper", "schwarzian", "t", "inv", "--chart", LAURENT], "schwarzian_mobius"),
        (["cocycle", "sq", "t", "--chart", LAURENT, "--at", "3"], "cocycle_square_at_3"),
        (["oper", "cocycle-check", "t", "inv", "--lie", "sl:3", "--chart", LAURENT], "cocycle_check_sl3"),
        (["oper", "change-coords", "--to", "inv", SAMPLES / "sl2_canonical.json"], "change_coords_inversion"),
    ],
)
def test_option_order_does_not_matter(run_cli, argv, name):
    code, out, _ = run_cli(*argv, "-q")
    assert code == EXIT_OK
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_output_is_deterministic(run_cli):
    argv = ["oper", "cocycle-check", "--chart", LAURENT, "--lie", "sl:3", "t", "inv", "dbl", "-q"]
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first == second


def test_progress_goes_to_stderr(run_cli):
    code, out, err = run_cli("oper", "canonicalize", SAMPLES / "sl2_oper.json")
    assert code == EXIT_OK
    assert "📥" in err
    assert "📥" not in out


# ============================================================
# --json
# ============================================================

class TestJsonOutput:
    def test_jet(self, run_cli):
        code, out, _ = run_cli("aut", "inv", "0,2", "--json", "-q")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data == {"order": 3, "ring": "QQ", "coeffs": ["0", "1/2", "0"], "text": "1/2·z"}

    def test_canonical(self, run_cli):
        _, out, _ = run_cli("oper", "canonicalize", SAMPLES / "sl2_oper.json", "--json", "-q")
        data = json.loads(out)
        assert data["oper"]["coefficients"] == [{"degree": 1, "value": {"num": ["1", "0", "2"], "den": ["1"]}}]
        assert data["gauge"]["text"] == "[[1, -t], [0, 1]]"

    def test_extension_gauge(self, run_cli):
        _, out, _ = run_cli(
            "oper", "canonicalize", SAMPLES / "sl2_trivial_oper.json",
            "--allow-quadratic-extension", "--json", "-q",
        )
        data = json.loads(out)
        corner = data["gauge"]["matrix"][2][2]
        assert corner["sqrt_coefficient"] == {"num": ["1"], "den": ["1"]}
        assert corner["radicand"] == {"num": ["0", "1"], "den": ["1"]}

    def test_chart_jet_reads_back(self, run_cli, tmp_path):
        _, out, _ = run_cli("aut", "inv", SAMPLES / "jet_over_chart.json", "--json", "-q")
        data = json.loads(out)
        assert data["chart"] == {"variable": "t", "localization": ["0", "1"]}
        saved = tmp_path / "inverse.json"
        saved.write_text(out, encoding="utf-8")
        code, out, _ = run_cli("aut", "inv", saved, "--json", "-q")
        assert code == EXIT_OK
        assert json.loads(out)["text"] == "2t·z + z²"

    def test_cocycle_report(self, run_cli):
        _, out, _ = run_cli("oper", "cocycle-check", "--chart", LAURENT, "t", "inv", "--json", "-q")
        data = json.loads(out)
        assert data["passed"] is True
        assert data["jet_orientation"] == "direct"
        assert data["coordinates"] == ["t", "inv"]


# ============================================================
# エラーと終了コード
# ============================================================

class TestErrors:
    def test_malformed_json(self, run_cli):
        code, out, err = run_cli("aut", "inv", SAMPLES / "malformed.json")
        assert code == EXIT_PARSE
        assert out == ""
        assert err.strip().splitlines()[-1].startswith("❌ parse-error: ")
        assert "malformed.json:4:1" in err

    def test_missing_file(self, run_cli):
        code, _, err = run_cli("aut", "inv", SAMPLES / "nope.json")
        assert code == EXIT_PARSE
        assert "file not found" in err

    def test_bad_literal(self, run_cli):
        code, _, err = run_cli("aut", "inv", "0,x")
        assert code == EXIT_PARSE
        assert "not an exact rational" in err

    def test_non_unit_linear_coefficient(self, run_cli):
        code, _, err = run_cli("aut", "inv", "0,0,1")
        assert code == EXIT_DOMAIN
        assert "❌ non-unit: " in err

    def test_projection_out_of_range(self, run_cli):
        code, _, err = run_cli("aut", "project", "0,1,1", "--to", "5")
        assert code == EXIT_DOMAIN
        assert "order-error" in err

    def test_mul_needs_two_series(self, run_cli):
        code, _, _ = run_cli("aut", "mul", "0,1,1")
        assert code == EXIT_PARSE

    def test_point_outside_chart(self, run_cli):
        code, _, err = run_cli("cocycle", "--chart", LAURENT, "sq", "t", "--at", "0")
        assert code == EXIT_DOMAIN
        assert "point-outside-chart" in err

    def test_unknown_coordinate(self, run_cli):
        code, _, err = run_cli("cocycle", "--chart", LAURENT, "nope", "t")
        assert code == EXIT_DOMAIN
        assert "invalid-coordinate" in err

    def test_not_an_oper(self, run_cli):
        code, _, err = run_cli("oper", "canonicalize", SAMPLES / "sl2_not_oper.json")
        assert code == EXIT_DOMAIN
        assert "not-an-oper" in err

    def test_torus_obstruction(self, run_cli):
        code, out, err = run_cli("oper", "canonicalize", SAMPLES / "sl2_trivial_oper.json")
        assert code == EXIT_DOMAIN
        assert out == ""
        assert "❌ torus-obstruction: √t is not in QQ[t, 1/t]; pass --allow-quadratic-extension to adjoin it" in err

    def test_broken_realization(self, run_cli):
        code, _, err = run_cli(
            "oper", "cocycle-check", "--chart", LAURENT, "--lie", SAMPLES / "broken_realization.json", "t", "inv",
        )
        assert code == EXIT_DOMAIN
        assert "invalid-realization" in err

    def test_schwarzian_needs_two_coordinates(self, run_cli):
        code, out, err = run_cli("oper", "schwarzian", "--chart", LAURENT, "t")
        assert code == EXIT_PARSE
        assert out == ""
        assert err.startswith("❌ parse-error: ")

    def test_unknown_subcommand(self, run_cli):
        code, _, err = run_cli("frobnicate")
        assert code == EXIT_PARSE
        assert err.startswith("❌ parse-error: ")

    def test_non_integer_projection_order(self, run_cli):
        code, out, err = run_cli("aut", "project", "0,1,2", "--to", "abc")
        assert code == EXIT_PARSE
        assert out == ""
        assert err.startswith("❌ parse-error: ")
        assert "--to" in err

    def test_cocycle_check_needs_chart(self, run_cli):
        code, _, err = run_cli("oper", "cocycle-check", "t", "inv")
        assert code == EXIT_PARSE
        assert "--chart" in err

    def test_failed_cocycle_check(self, monkeypatch, run_cli):
        real = cli.torsor_cocycle_check

        def mismatched(*args, **kwargs):
            return replace(real(*args, **kwargs), jet_orientation="none")

        monkeypatch.setattr(cli, "torsor_cocycle_check", mismatched)
        code, out, err = run_cli("oper", "cocycle-check", "--chart", LAURENT, "t", "inv", "-q")
        assert code == EXIT_DOMAIN
        assert "passed: false" in out
        assert err.strip().splitlines()[-1].startswith("❌ cocycle-mismatch: t → inv")


def test_environment_default_allows_extension(monkeypatch, run_cli):
    monkeypatch.setattr(cli, "DEFAULT_ALLOW_EXTENSION", True)
    code, out, _ = run_cli("oper", "canonicalize", SAMPLES / "sl2_trivial_oper.json", "-q")
    assert code == EXIT_OK
    assert out == (GOLDEN / "canonicalize_extension.txt").read_text(encoding="utf-8")
