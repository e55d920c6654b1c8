"""Command-line interface: rule parsing, exit codes, and output formats."""

import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

import pientail as pt
from pientail.cli import RuleParseError, parse_gamma, parse_rules, run, scan_rule

PAIR_RULES = "A -> B C\nA -> B D\n"
CYCLE_RULES = "B -> A C H\nC -> A D\nD -> A B\n"


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.rules"
    path.write_text(PAIR_RULES)
    return str(path)


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle.rules"
    path.write_text(CYCLE_RULES)
    return str(path)


class TestParsing:
    def test_parse_rules_basic(self):
        rules = parse_rules("A -> B C\n\n# comment\nB C -> D\n")
        assert len(rules) == 2
        assert [str(r) for r in rules] == ["A -> B C", "B C -> D"]
        assert rules.universe.names == ("A", "B", "C", "D")

    def test_empty_sides(self):
        rules = parse_rules("A ->\n-> B\n->\n")
        assert [str(r) for r in rules] == ["A ->", "-> B", "->"]

    def test_universe_ordered_by_first_appearance(self):
        rules = parse_rules("Z -> A\nM -> Z Q\n")
        assert rules.universe.names == ("Z", "A", "M", "Q")

    def test_multicharacter_tokens(self):
        rules = parse_rules("beer_6pack -> chips salsa2\n")
        assert str(rules[0]) == "beer_6pack -> chips salsa2"

    def test_missing_arrow_reports_line(self):
        with pytest.raises(RuleParseError, match="line 3"):
            parse_rules("A -> B\n# fine\nA B\n")

    def test_double_arrow_rejected(self):
        with pytest.raises(RuleParseError, match="exactly one '->'"):
            scan_rule("A -> B -> C")

    def test_bad_token_rejected(self):
        with pytest.raises(RuleParseError, match="invalid attribute token"):
            parse_rules("A -> B,C\n")

    def test_too_many_attributes_hits_hard_cap(self):
        line = " ".join(f"x{i}" for i in range(25)) + " ->"
        with pytest.raises(pt.AttributeCapError):
            parse_rules(line)

    def test_round_trip(self):
        text = "A -> B C\nA ->\n-> B\nlong_name -> other9\n"
        rules = parse_rules(text)
        again = parse_rules("\n".join(str(r) for r in rules))
        assert [str(r) for r in again] == [str(r) for r in rules]


class TestParseGamma:
    def test_accepted_forms(self):
        assert parse_gamma("1/2") == F(1, 2)
        assert parse_gamma("0.57") == F(57, 100)
        assert parse_gamma("1e-5") == F(1, 100000)
        assert parse_gamma("0") == 0
        assert parse_gamma("1") == 1

    def test_rejected_forms(self):
        for bad in ("3/2", "-1/10", "abc", "1/0", ""):
            with pytest.raises(RuleParseError):
                parse_gamma(bad)


class TestEntailCommand:
    def test_holds_exit_zero(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "1/2", "--premises", pair_file,
             "--conclusion", "A C D -> B"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "entailment holds at gamma 1/2" in out
        assert "1/2 1/2" in out

    def test_fails_exit_one(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "49/100", "--premises", pair_file,
             "--conclusion", "A C D -> B"]
        )
        assert code == 1
        out = capsys.readouterr().out
        assert "does not hold" in out
        assert "x49" in out

    def test_json_payload_on_hold(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "1/2", "--premises", pair_file,
             "--conclusion", "A C D -> B", "--json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {
            "holds": True,
            "regime": "high-gamma",
            "gamma": "1/2",
            "lambda": ["1/2", "1/2"],
            "counterexample": None,
        }

    def test_json_payload_on_failure(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "49/100", "--premises", pair_file,
             "--conclusion", "A C D -> B", "--json"]
        )
        assert code == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is False
        assert payload["lambda"] is None
        assert payload["counterexample"] == {"A B C": 49, "A B D": 49, "A C D": 2}

    def test_method_lp(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "1/2", "--premises", pair_file,
             "--conclusion", "A C D -> B", "--method", "lp", "--json"]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["regime"] == "lp-direct"

    def test_method_characterization_rejects_boundary(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "0", "--premises", pair_file,
             "--conclusion", "A C D -> B", "--method", "charact"]
        )
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_method_is_usage_error(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "1/2", "--premises", pair_file,
             "--conclusion", "A C D -> B", "--method", "bogus"]
        )
        assert code == 2
        capsys.readouterr()

    def test_gamma_out_of_range(self, pair_file, capsys):
        code = run(
            ["entail", "--gamma", "7/2", "--premises", pair_file,
             "--conclusion", "A C D -> B"]
        )
        assert code == 2
        assert "gamma" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        code = run(
            ["entail", "--gamma", "1/2",
             "--premises", str(tmp_path / "nope.rules"),
             "--conclusion", "A -> B"]
        )
        assert code == 2
        capsys.readouterr()

    def test_malformed_rules_file(self, tmp_path, capsys):
        path = tmp_path / "bad.rules"
        path.write_text("A -> B\nA B\n")
        code = run(
            ["entail", "--gamma", "1/2", "--premises", str(path),
             "--conclusion", "A -> B"]
        )
        assert code == 2
        assert "line 2" in capsys.readouterr().err

    def test_enumeration_cap_exit_three(self, tmp_path, capsys):
        wide = " ".join(f"x{i}" for i in range(21))
        path = tmp_path / "wide.rules"
        path.write_text(f"{wide} -> y\n")
        code = run(
            ["entail", "--gamma", "1/2", "--premises", str(path),
             "--conclusion", "x0 -> y"]
        )
        assert code == 3
        assert "error" in capsys.readouterr().err

    def test_max_attrs_flag_validated(self, pair_file, capsys):
        for bad in ("0", "25"):
            code = run(
                ["entail", "--gamma", "1/2", "--premises", pair_file,
                 "--conclusion", "A C D -> B", "--max-attrs", bad]
            )
            assert code == 2
        capsys.readouterr()


class TestCounterexampleCommand:
    def test_found_exit_zero(self, pair_file, capsys):
        code = run(
            ["counterexample", "--gamma", "49/100", "--premises", pair_file,
             "--conclusion", "A C D -> B", "--json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is False
        assert payload["counterexample"] == {"A B C": 49, "A B D": 49, "A C D": 2}

    def test_holds_exit_one(self, pair_file, capsys):
        code = run(
            ["counterexample", "--gamma", "1/2", "--premises", pair_file,
             "--conclusion", "A C D -> B"]
        )
        assert code == 1
        assert "no counterexample" in capsys.readouterr().out


class TestGammaStarCommand:
    def test_cycle_bracket_json(self, cycle_file, capsys):
        code = run(
            ["gamma-star", "--premises", cycle_file,
             "--antecedent", "B C D H", "--tol", "1/100000", "--json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        lower = F(payload["gamma_star_lower"])
        upper = F(payload["gamma_star_upper"])
        assert upper - lower <= F(1, 100000)
        assert abs(payload["gamma_star_midpoint_approx"] - 0.56984) < 1e-4
        assert payload["tolerance"] == "1/100000"
        lams = [F(m) for m in payload["lambda"]]
        assert len(lams) == 3 and sum(lams) == 1

    def test_text_output(self, cycle_file, capsys):
        code = run(
            ["gamma-star", "--premises", cycle_file,
             "--antecedent", "B C D H", "--tol", "1/1024"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "critical threshold within" in out
        assert "multipliers at upper bound:" in out

    def test_bad_tolerance(self, cycle_file, capsys):
        code = run(
            ["gamma-star", "--premises", cycle_file,
             "--antecedent", "B C D H", "--tol", "0"]
        )
        assert code == 2
        capsys.readouterr()


class TestNiceCommand:
    def test_cycle_is_nice(self, cycle_file, capsys):
        code = run(["nice", "--premises", cycle_file])
        assert code == 0
        assert "enforces homogeneity" in capsys.readouterr().out

    def test_subset_is_not(self, tmp_path, capsys):
        path = tmp_path / "sub.rules"
        path.write_text("B -> A C H\nC -> A D\n")
        code = run(["nice", "--premises", str(path), "--json"])
        assert code == 1
        assert json.loads(capsys.readouterr().out) == {"nice": False}


class TestPruneCommand:
    def test_drops_redundant_rule(self, tmp_path, capsys):
        path = tmp_path / "rules.rules"
        path.write_text("A -> B C\nA -> B D\nA C D -> B\n")
        code = run(["prune", "--gamma", "1/2", "--rules", str(path)])
        assert code == 0
        captured = capsys.readouterr()
        assert captured.out.splitlines() == ["A -> B C", "A -> B D"]
        assert "dropped 1" in captured.err

    def test_json_payload(self, tmp_path, capsys):
        path = tmp_path / "rules.rules"
        path.write_text("A -> B C\nA -> B\n")
        code = run(["prune", "--gamma", "1/2", "--rules", str(path), "--json"])
        assert code == 0
        assert json.loads(capsys.readouterr().out) == {
            "kept": ["A -> B C"],
            "dropped": 1,
        }


class TestTopLevel:
    def test_help_is_success(self, capsys):
        assert run(["--help"]) == 0
        capsys.readouterr()

    def test_no_command_is_usage_error(self, capsys):
        assert run([]) == 2
        capsys.readouterr()

    def test_unknown_command_is_usage_error(self, capsys):
        assert run(["frobnicate"]) == 2
        capsys.readouterr()

    def test_console_entry_point(self, pair_file):
        proc = subprocess.run(
            [sys.executable, "-m", "pientail.cli", "entail",
             "--gamma", "3/4", "--premises", pair_file,
             "--conclusion", "A C D -> B"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "entailment holds" in proc.stdout
