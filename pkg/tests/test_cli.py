"""
Tests for the command-line surface.
"""

import io
import json

import pytest

from hqvi.cli import JobSpec, build_parser, load_job, main
from hqvi.cli.verify import VerifyOptions, format_table, run_verification
from hqvi.config import Method
from hqvi.errors import UsageError


def _run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestParser:
    def test_solve_flags(self):
        args = build_parser().parse_args(["solve", "--genus", "0", "--n", "2", "--ranks", "1", "--q", "4"])
        assert args.command == "solve"
        assert args.q == "4"
        assert args.ranks == "1"

    def test_verify_only_repeats(self):
        args = build_parser().parse_args(["verify", "--only", "golden", "--only", "counts"])
        assert args.only == ["golden", "counts"]

    def test_log_level_is_upper_cased(self):
        args = build_parser().parse_args(["--log-level", "debug", "verify"])
        assert args.log_level == "DEBUG"

    def test_unknown_group_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["verify", "--only", "nope"])
        assert exc.value.code == 2


class TestJobs:
    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "job.json"
        path.write_text(json.dumps({"genus": 1, "n": 3, "ranks": [1, 2], "insertion": "c1[1]"}))
        job = load_job(path, {"genus": 2, "insertion": None})
        assert job.genus == 2
        assert job.ranks == [1, 2]
        assert job.insertion == "c1[1]"

    def test_string_ranks_and_complex_pairs(self):
        job = JobSpec.model_validate({"genus": 0, "n": 3, "ranks": "1,2", "q": [[0.5, 1.0], "2"]})
        assert job.ranks == [1, 2]
        assert job.q_values() == [0.5 + 1j, 2 + 0j]
        assert job.problem().ranks == (1, 2)

    def test_method_follows_eps(self):
        job = JobSpec(genus=0, n=2, ranks=[1], eps="0.1,-0.2")
        assert job.resolved_method() == Method.EQUIVARIANT
        assert job.problem().equivariant_params == (0.1 + 0j, -0.2 + 0j)

    def test_invalid_job(self):
        with pytest.raises(UsageError) as exc:
            load_job(None, {"genus": -1, "n": 2, "ranks": "1"})
        assert exc.value.details["errors"][0]["field"] == "genus"

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(UsageError):
            load_job(path, {})

    def test_job_from_stdin(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"genus": 0, "n": 2, "ranks": "1", "q": "4"})))
        job = load_job("-", {"seed": 5})
        assert job.ranks == [1]
        assert job.seed == 5
        assert job.q_values() == [4 + 0j]

    def test_stdin_must_hold_an_object(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("[1, 2]"))
        with pytest.raises(UsageError):
            load_job("-", {})

    def test_bad_complex_list(self):
        job = JobSpec(genus=0, n=2, ranks=[1], q="1,,2")
        with pytest.raises(UsageError):
            job.q_values()


class TestMain:
    def test_malformed_insertion(self, capsys):
        code, payload = _run(capsys, ["compute", "--genus", "0", "--n", "2", "--ranks", "1", "--insertion", "c1[1"])
        assert code == 2
        assert payload["error"]["code"] == "INSERTION_PARSE"
        assert payload["schema"] == "hqvi/1"

    def test_solve_needs_q(self, capsys):
        code, payload = _run(capsys, ["solve", "--genus", "0", "--n", "2", "--ranks", "1"])
        assert code == 2
        assert payload["error"]["code"] == "USAGE"

    def test_equivariant_solve_needs_eps(self, capsys):
        argv = ["solve", "--genus", "0", "--n", "2", "--ranks", "1", "--q", "1", "--method", "equivariant"]
        code, payload = _run(capsys, argv)
        assert code == 2
        assert payload["error"]["code"] == "USAGE"

    def test_positive_bundle_degree(self, capsys):
        argv = ["compute", "--genus", "0", "--n", "2", "--ranks", "1", "--degree-e", "1", "--insertion", "c1[1]"]
        code, payload = _run(capsys, argv)
        assert code == 2
        assert payload["error"]["code"] == "BUNDLE_DEGREE_POSITIVE"

    def test_solve_quadratic(self, capsys):
        code, payload = _run(capsys, ["solve", "--genus", "0", "--n", "2", "--ranks", "1", "--q", "4", "--seed", "5"])
        assert code == 0
        result = payload["result"]
        assert result["status"] == "complete"
        assert result["solution_count"] == 2
        roots = sorted(rep["z"][0][0] for rep in result["representatives"])
        assert roots == pytest.approx([-2.0, 2.0], abs=1e-9)
        assert all(len(rep["J"]) == 2 for rep in result["representatives"])

    def test_solve_job_on_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"genus": 0, "n": 2, "ranks": [1], "q": "4", "seed": 5})))
        code, payload = _run(capsys, ["solve", "--job", "-"])
        assert code == 0
        assert payload["result"]["solution_count"] == 2

    def test_compute_line(self, capsys):
        argv = ["compute", "--genus", "0", "--n", "2", "--ranks", "1", "--insertion", "c1[1]^3", "--seed", "2", "--threads", "1"]
        code, payload = _run(capsys, argv)
        assert code == 0
        assert payload["command"] == "compute"

    def test_compute_csv_to_file(self, tmp_path):
        out = tmp_path / "out" / "line.csv"
        argv = ["compute", "--genus", "0", "--n", "2", "--ranks", "1", "--insertion", "c1[1]^3",
                "--threads", "1", "--format", "csv", "--out", str(out)]
        assert main(argv) == 0
        assert out.read_text().strip().splitlines()[-1] == "1,1"

    def test_verify_maximal_subsheaf(self, capsys):
        code, payload = _run(capsys, ["verify", "--only", "maximal_subsheaf", "--threads", "1", "--format", "json"])
        assert code == 0
        assert payload["result"]["passed"] is True
        assert [case["group"] for case in payload["result"]["cases"]] == ["maximal_subsheaf"] * 2


def test_format_table_counts_passes():
    results = run_verification(["maximal_subsheaf"], VerifyOptions(seed=1, threads=1))
    table = format_table(results)
    assert table.splitlines()[0].startswith("GROUP")
    assert table.splitlines()[-1] == f"{sum(r.passed for r in results)}/{len(results)} passed"
