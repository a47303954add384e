"""Tests for the command-line front end.

Each subcommand is driven through run() with captured output, checking the
facts it reports, the text/JSON parity, the documented exit codes (0 ok,
1 domain error, 2 usage error), and byte-level determinism of JSON output.
"""

import json
from pathlib import Path

import pytest

from twistctl.cli import run, _parse_primes
from twistctl.forms import cocycle_to_json, finite_model, unitary_cocycle

DATA = Path(__file__).parent / "data"
VANTOP = str(DATA / "vantop.json")
KLEIN = str(DATA / "klein.json")
RATIONAL2 = str(DATA / "rational_rank2.json")
CACHE = str(DATA / "lmfdb_cache")


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsageErrors:
    def test_unknown_subcommand_exits_2(self, capsys):
        code, _, err = invoke(capsys, "frobnicate")
        assert code == 2

    def test_missing_required_flag_exits_2(self, capsys):
        code, _, err = invoke(capsys, "twists")
        assert code == 2
        assert "--input" in err

    def test_empty_prime_range_exits_2(self, capsys):
        code, _, err = invoke(capsys, "classify", "--input", VANTOP,
                              "--primes", "4..4")
        assert code == 2
        assert "--primes" in err

    def test_composite_in_prime_list_exits_2(self, capsys):
        code, _, err = invoke(capsys, "classify", "--input", VANTOP,
                              "--primes", "5,6,7")
        assert code == 2
        assert "6" in err

    def test_prime_range_parsing(self):
        assert _parse_primes("3..12") == (3, 5, 7, 11)
        assert _parse_primes("13,5,7") == (13, 5, 7)


class TestTwistsCommand:
    def test_outer_twist_walkthrough(self, capsys):
        code, out, _ = invoke(capsys, "twists", "--input", VANTOP,
                              "--bound", "500", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["group_order"] == 2
        assert doc["inner_order"] == 1
        kinds = {t["kind"] for t in doc["twists"]}
        assert kinds == {"inner", "outer"}
        assert doc["fixed_field"]["degree"] == 1
        assert doc["inner_fixed_field"]["degree"] == 2
        assert doc["inner_fixed_field"]["min_poly"] == ["1", "0", "1"]
        assert doc["verdict"]["kind"] == "general-type"
        assert doc["coefficient_field_check"]["inner_matches"]
        assert doc["coefficient_field_check"]["full_matches"]
        assert doc["normalized_on_load"] is True

    def test_text_mode_carries_the_same_facts(self, capsys):
        code, out, _ = invoke(capsys, "twists", "--input", VANTOP,
                              "--bound", "500")
        assert code == 0
        assert "twist group order 2" in out
        assert "outer twist at automorphism 1" in out
        assert "fixed field degree 1" in out
        assert "general-type" in out

    def test_rank2_control_reports_trivial_group(self, capsys):
        code, out, _ = invoke(capsys, "twists", "--input", RATIONAL2,
                              "--bound", "200", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["group_order"] == 1
        assert doc["verdict"]["kind"] == "essentially-self-dual"
        assert doc["normalized_on_load"] is False

    def test_missing_file_is_a_domain_error(self, capsys):
        code, _, err = invoke(capsys, "twists", "--input", "/no/such.json")
        assert code == 1
        assert "error[" in err


class TestClassifyCommand:
    def test_residue_dichotomy_with_exclusions(self, capsys):
        code, out, _ = invoke(capsys, "classify", "--input", VANTOP,
                              "--primes", "2..100", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["excluded"] == {"2": "bad place of the input data"}
        assert doc["predicted_dimension"] == 9
        for p_text, verdicts in doc["primes"].items():
            p = int(p_text)
            label = verdicts[0]["group_label"]
            if p % 4 == 1:
                assert label == "SL_3 (split)", p
            else:
                assert label == "SU_3 over quadratic extension", p

    def test_ramified_primes_are_excluded_with_a_reason(self, capsys,
                                                        tmp_path):
        doc = json.loads(Path(VANTOP).read_text())
        doc["bad_places"] = []
        target = tmp_path / "no_bad.json"
        target.write_text(json.dumps(doc))
        code, out, _ = invoke(capsys, "classify", "--input", str(target),
                              "--primes", "2,5", "--format", "json")
        assert code == 0
        parsed = json.loads(out)
        assert parsed["excluded"] == {
            "2": "ramified in the coefficient field"}
        assert set(parsed["primes"]) == {"5"}

    def test_text_table_lists_exclusions(self, capsys):
        code, out, _ = invoke(capsys, "classify", "--input", KLEIN,
                              "--primes", "2..13")
        assert code == 0
        assert "excluded primes:" in out
        assert "2: bad place" in out
        assert "p=7: SL_3 (split)" in out
        assert "p=5: SU_3 over quadratic extension" in out


class TestReportCommand:
    def test_full_report_shape(self, capsys):
        code, out, _ = invoke(capsys, "report", "--input", VANTOP,
                              "--bound", "200", "--primes", "3..20",
                              "--format", "json")
        assert code == 0
        doc = json.loads(out)
        for key in ("verdict", "group_order", "inner_order", "fixed_field",
                    "inner_fixed_field", "predicted_dimension",
                    "mt_upper_bound_dimension", "primes", "excluded"):
            assert key in doc, key
        assert doc["verdict"] == "general-type"
        assert doc["mt_upper_bound_dimension"] == 9

    def test_json_output_is_byte_identical_across_runs(self, capsys):
        argv = ("report", "--input", VANTOP, "--bound", "200",
                "--primes", "3..50", "--format", "json")
        code1, out1, _ = invoke(capsys, *argv)
        code2, out2, _ = invoke(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2


class TestVerifyCocycleCommand:
    def test_valid_cocycle_accepted(self, capsys, tmp_path):
        model = finite_model(2, 2, 3)
        path = tmp_path / "cocycle.json"
        path.write_text(json.dumps(cocycle_to_json(unitary_cocycle(model))))
        code, out, _ = invoke(capsys, "verify-cocycle", "--input", str(path))
        assert code == 0
        assert "is valid" in out
        assert "1 flip assignments" in out

    def test_broken_cocycle_rejected_with_error_name(self, capsys, tmp_path):
        doc = cocycle_to_json(unitary_cocycle(finite_model(2, 2, 3)))
        doc["assignments"]["1"]["alpha"] = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc))
        code, _, err = invoke(capsys, "verify-cocycle", "--input", str(path))
        assert code == 1
        assert "error[CocycleViolation]" in err

    def test_malformed_document_rejected(self, capsys, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text('{"assignments": {}}')
        code, _, err = invoke(capsys, "verify-cocycle", "--input", str(path))
        assert code == 1
        assert "error[SchemaError]" in err


class TestOracleCommand:
    def test_unitary_walkthrough(self, capsys):
        code, out, _ = invoke(capsys, "oracle", "--n", "3", "--q", "2",
                              "--m", "2", "--flip")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "216"
        assert lines[1] == "matches SU_3(2)"

    def test_split_control(self, capsys):
        code, out, _ = invoke(capsys, "oracle", "--n", "2", "--q", "3",
                              "--m", "2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["fixed_points"] == 24
        assert doc["closed_form"] == "SL_2(F_3)"
        assert doc["matches"] is True

    def test_projection_option(self, capsys):
        code, out, _ = invoke(capsys, "oracle", "--n", "2", "--q", "2",
                              "--m", "2", "--flip", "--check-projection",
                              "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["projection"]["passed"] is True
        assert doc["projection"]["source_order"] == doc["fixed_points"] == 6

    def test_budget_overrun_is_a_domain_error(self, capsys):
        code, _, err = invoke(capsys, "oracle", "--n", "2", "--q", "7",
                              "--m", "2", "--budget", "1000")
        assert code == 1
        assert "error[BudgetExceeded]" in err

    def test_non_prime_power_is_a_domain_error(self, capsys):
        code, _, err = invoke(capsys, "oracle", "--n", "2", "--q", "6",
                              "--m", "1")
        assert code == 1
        assert "prime power" in err


class TestNormalizeCommand:
    def test_normalize_writes_a_loadable_document(self, capsys, tmp_path):
        target = tmp_path / "norm.json"
        code, out, _ = invoke(capsys, "normalize", "--input", VANTOP,
                              "--output", str(target))
        assert code == 0
        doc = json.loads(target.read_text())
        assert doc["central_character"] == "normalized"
        code, out, _ = invoke(capsys, "twists", "--input", str(target),
                              "--bound", "500", "--format", "json")
        assert code == 0
        parsed = json.loads(out)
        assert parsed["group_order"] == 2
        assert parsed["normalized_on_load"] is False

    def test_normalize_to_stdout(self, capsys):
        code, out, _ = invoke(capsys, "normalize", "--input", VANTOP)
        assert code == 0
        assert json.loads(out)["central_character"] == "normalized"


class TestLmfdbCommands:
    def test_fetch_from_committed_cache(self, capsys):
        code, out, _ = invoke(capsys, "lmfdb", "fetch", "--label",
                              "11.2.a.a", "--cache-dir", CACHE,
                              "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["level"] == 11
        assert doc["stored_coefficients"] == 500
        assert doc["recorded_inner_twists"] == []

    def test_compare_agrees_offline(self, capsys):
        code, out, _ = invoke(capsys, "lmfdb", "compare", "--label",
                              "47.1.b.a", "--cache-dir", CACHE,
                              "--bound", "500",
                              "--aut-images", "[[0,1],[1,-1]]",
                              "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "agree"
        assert doc["detected"] == [
            {"aut_index": 0, "order": 2, "conductor": 47}]

    def test_compare_reports_insufficient_bound(self, capsys):
        code, out, _ = invoke(capsys, "lmfdb", "compare", "--label",
                              "47.1.b.a", "--cache-dir", CACHE,
                              "--bound", "20",
                              "--aut-images", "[[0,1],[1,-1]]",
                              "--format", "json")
        assert code == 0
        assert json.loads(out)["verdict"] == "bound-insufficient"

    def test_cache_miss_without_network_is_a_domain_error(self, capsys,
                                                          tmp_path,
                                                          monkeypatch):
        monkeypatch.delenv("TWISTCTL_NETWORK", raising=False)
        code, _, err = invoke(capsys, "lmfdb", "fetch", "--label",
                              "99.2.a.a", "--cache-dir", str(tmp_path))
        assert code == 1
        assert "error[NetworkError]" in err
