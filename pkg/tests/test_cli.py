import json

import pytest
from click.testing import CliRunner

from kha.main import cli


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def fx(fixtures_dir):
    return lambda name: str(fixtures_dir / name)


def _error(result):
    return json.loads(result.stderr.strip().splitlines()[-1])


def test_unit(runner, fx):
    result = runner.invoke(cli, ["unit", "--quiver", fx("jordan.json")])
    assert result.exit_code == 0
    assert result.stdout == '{"terms":[{"coeff":"1","q":[0],"z":{}}],"vars":{"q":1,"z":{"1":0}}}\n'


def test_mul_matches_golden_output(runner, fx, fixtures_dir):
    args = ["mul", "--quiver", fx("jordan.json"), "--lhs", fx("jordan_one.json"), "--rhs", fx("jordan_one.json")]
    outputs = [runner.invoke(cli, args).stdout for _ in range(3)]
    assert outputs[0] == (fixtures_dir / "jordan_one_squared.json").read_text()
    assert len(set(outputs)) == 1


def test_mul_writes_to_file(runner, fx, fixtures_dir, tmp_path):
    out = tmp_path / "product.json"
    result = runner.invoke(cli, ["mul", "--quiver", fx("jordan.json"), "--lhs", fx("jordan_one.json"),
                                 "--rhs", fx("jordan_one.json"), "--out", str(out)])
    assert result.exit_code == 0 and result.stdout == ""
    assert out.read_text() == (fixtures_dir / "jordan_one_squared.json").read_text()


def test_mul_reads_stdin(runner, fx, fixtures_dir):
    text = (fixtures_dir / "jordan_one.json").read_text()
    result = runner.invoke(cli, ["mul", "--quiver", fx("jordan.json"), "--lhs", "-", "--rhs", fx("jordan_one.json")],
                           input=text)
    assert result.exit_code == 0
    assert result.stdout == (fixtures_dir / "jordan_one_squared.json").read_text()


def test_act(runner, fx):
    result = runner.invoke(cli, ["act", "--quiver", fx("jordan.json"), "--lhs", fx("jordan_one.json"),
                                 "--rhs", fx("jordan_vacuum.json")])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["vars"] == {"q": 1, "z": {"inf": 1, "1": 1}}
    assert payload["terms"] == [{"coeff": "1", "q": [0], "z": {"inf": [0], "1": [0]}}]


def test_zeta(runner, fx):
    result = runner.invoke(cli, ["zeta", "--quiver", fx("a2.json"), "--source", "1", "--target", "2"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["denominator"]["terms"] == [{"coeff": "1", "q": [0], "z": {"z": [0]}}]
    assert payload["numerator"]["terms"] == [
        {"coeff": "1", "q": [0], "z": {"z": [0]}},
        {"coeff": "-1", "q": [-1], "z": {"z": [-1]}},
    ]


def test_triple(runner, fx):
    result = runner.invoke(cli, ["triple", "--quiver", fx("jordan.json")])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["vertices"] == ["1"]
    assert [e["id"] for e in payload["edges"]] == ["f", "f_bar", "omega_1"]
    assert payload["potential"] == [
        {"coeff": 1, "cycle": ["omega_1", "f", "f_bar"]},
        {"coeff": -1, "cycle": ["omega_1", "f_bar", "f"]},
    ]


def test_frame_with_stability(runner, fx):
    result = runner.invoke(cli, ["frame", "--quiver", fx("jordan.json"), "--theta", fx("theta_0.json")])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["vertices"] == ["inf", "1"]
    assert payload["theta"] == ["1/18", "0"]


def test_jacobi_and_assumption_a(runner, fx):
    result = runner.invoke(cli, ["jacobi", "--quiver", fx("q3.json")])
    assert json.loads(result.stdout)["z"]["terms"] == [{"coeff": 1, "path": ["x", "y"]},
                                                       {"coeff": -1, "path": ["y", "x"]}]
    result = runner.invoke(cli, ["check-assumption-a", "--quiver", fx("q3.json")])
    assert json.loads(result.stdout) == {"satisfied": True, "weights": {"x": 0, "y": 0, "z": 2}}
    result = runner.invoke(cli, ["check-assumption-a", "--quiver", fx("q3.json"), "--weights", '{"x": 1}'])
    assert json.loads(result.stdout) == {"satisfied": False, "weights": None}


def test_euler_and_certificate(runner, fx, fixtures_dir):
    result = runner.invoke(cli, ["euler", "--weights", fx("weights_11.json")])
    assert [t["coeff"] for t in json.loads(result.stdout)["terms"]] == ["1", "-2", "1"]
    result = runner.invoke(cli, ["zerodiv-cert", "--weights", fx("weights_11.json"), "--lambda", fx("lambda_neg.json")])
    assert result.stdout == (fixtures_dir / "certificate_11_neg.json").read_text()


def test_strata(runner, fx, fixtures_dir):
    result = runner.invoke(cli, ["strata", "--quiver", fx("a2.json"), "--theta", fx("theta_12.json"), "--dim", "[1, 1]"])
    assert result.exit_code == 0
    assert result.stdout == (fixtures_dir / "reports" / "strata_a2_11.json").read_text()


def test_verify_generation(runner, fx, fixtures_dir):
    result = runner.invoke(cli, ["verify-generation", "--quiver", fx("a2.json"), "--theta", fx("theta_12.json"),
                                 "--dim", "[1, 1]", "--window", "-1:1", "--gen-degree", "0"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert (payload["achieved_rank"], payload["target_rank"], payload["full_rank"]) == (1, 9, False)
    assert {"1": [1], "2": [1]} in payload["unspanned"]
    assert result.stdout == (fixtures_dir / "reports" / "generation_a2_11_degree0.json").read_text()


def test_relation_search(runner):
    result = runner.invoke(cli, ["relation-search", "--r-max", "1"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["accepted"] == [-1] and payload["status"] == "found"
    empty = json.loads(runner.invoke(cli, ["relation-search", "--r-max", "1", "--candidates", ""]).stdout)
    assert empty["status"] == "none" and empty["alpha"] is None


def test_domain_error_exit_code(runner, fx):
    result = runner.invoke(cli, ["jacobi", "--quiver", fx("invalid/bad_potential.json")])
    assert result.exit_code == 1
    assert result.stdout == ""
    error = _error(result)
    assert error["error"] == "SchemaError"
    assert error["path"] == "quiver.potential[1].cycle"
    assert error["operation"] == "jacobi"


def test_unknown_torus_edge(runner, fx):
    result = runner.invoke(cli, ["unit", "--quiver", fx("jordan.json"),
                                 "--torus", fx("invalid/unknown_edge_torus.json")])
    assert result.exit_code == 1
    assert _error(result)["path"] == "torus.weights.g"


def test_malformed_json_and_missing_file(runner, fx, tmp_path):
    result = runner.invoke(cli, ["unit", "--quiver", fx("invalid/malformed.json")])
    assert result.exit_code == 1 and _error(result)["path"] == "quiver"
    result = runner.invoke(cli, ["unit", "--quiver", str(tmp_path / "absent.json")])
    assert result.exit_code == 1 and _error(result)["error"] == "SchemaError"


def test_non_symmetric_input_is_rejected(runner, fx):
    result = runner.invoke(cli, ["mul", "--quiver", fx("a2.json"), "--lhs", fx("invalid/a2_not_symmetric.json"),
                                 "--rhs", fx("invalid/a2_not_symmetric.json")])
    assert result.exit_code == 1
    assert _error(result)["path"] == "lhs"


def test_usage_errors_exit_with_two(runner, fx):
    assert runner.invoke(cli, ["mul", "--quiver", fx("jordan.json")]).exit_code == 2
    result = runner.invoke(cli, ["verify-generation", "--quiver", fx("a2.json"), "--theta", fx("theta_12.json"),
                                 "--dim", "[1, 1]", "--window", "abc"])
    assert result.exit_code == 2
    assert runner.invoke(cli, ["relation-search", "--r-max", "-1"]).exit_code == 2
