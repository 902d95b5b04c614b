import json
from pathlib import Path

import jsonschema

from areaflow.cli import main

SCHEMAS = Path(__file__).resolve().parents[1] / "schemas"
SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


TINY_SCENARIO = """
backend = torus
resolution = 16
initial = sine
amplitude = 0.4
t_max = 8.0
cadence = 10
"""


def test_curvature_subcommand(capsys):
    rc, out = run_cli(capsys, "curvature", "cp(2)", "--plane", "1.0")
    assert rc == 0
    payload = json.loads(out)
    jsonschema.validate(payload, schema("curvature.schema.json"))
    assert payload["sectional"] == 4.0
    assert payload["ricci_constant"] == 6.0
    assert payload["bounds"] == {"sec_min": 1.0, "sec_max": 4.0, "ricci": 6.0}


def test_verify_is_byte_deterministic(capsys):
    rc1, out1 = run_cli(capsys, "verify", "triple_weight", "--samples", "2000", "--seed", "3")
    rc2, out2 = run_cli(capsys, "verify", "triple_weight", "--samples", "2000", "--seed", "3")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_sectional_reports_c3_ratio(capsys):
    rc, out = run_cli(capsys, "verify", "sectional", "--n", "3", "--m", "2",
                      "--samples", "2000")
    assert rc == 0
    report = json.loads(out)
    ratio = report["configs"][0]["c3_empirical_min_ratio"]
    assert ratio is not None and ratio > 0.0


def test_curvature_bad_model_is_config_error(capsys):
    rc, _ = run_cli(capsys, "curvature", "blob(2)")
    assert rc == 2


def test_unknown_flag_exits_two(capsys):
    rc, _ = run_cli(capsys, "verify", "triple_weight", "--bogus")
    assert rc == 2


def test_criteria_hopf(capsys, tmp_path):
    rc, out = run_cli(capsys, "criteria", "hopf_s3_s2", "--theorem", "13",
                      "--out", str(tmp_path))
    assert rc == 0
    payload = json.loads(out)
    jsonschema.validate(payload, schema("criteria_verdict.schema.json"))
    assert payload["verdict"] == "hypotheses not met"
    assert payload["details"]["sup_two_dilation"] == 4.0
    assert payload["bounds"]["sphere_pair_bound"] == 3.0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    jsonschema.validate(manifest, schema("run_manifest.schema.json"))


def test_criteria_parameterized_profile(capsys):
    rc, out = run_cli(capsys, "criteria", "hopf_s2n1_cpn:2", "--theorem", "ricci")
    assert rc == 0
    payload = json.loads(out)
    assert payload["bounds"]["cp_bound"] == 0.8
    assert payload["verdict"] == "hypotheses not met"  # sup = 1 is never feasible


def test_criteria_profile_from_json(capsys, tmp_path):
    profile = {"name": "probe", "source": "sphere(4)", "target": "sphere(3)",
               "spectra": [[1.0, 0.8, 0.3, 0.0]]}
    path = tmp_path / "profile.json"
    path.write_text(json.dumps(profile))
    rc, out = run_cli(capsys, "criteria", f"@{path}", "--theorem", "13")
    assert rc == 0
    payload = json.loads(out)
    assert payload["rho"] is not None
    assert payload["verdict"].startswith("homotopically trivial")


def test_verify_subcommand_report_and_violation(capsys, tmp_path):
    rc, out = run_cli(capsys, "verify", "triple_weight", "--samples", "3000",
                      "--out", str(tmp_path))
    assert rc == 0
    payload = json.loads(out)
    jsonschema.validate(payload, schema("verify_report.schema.json"))
    report = json.loads((tmp_path / "report.json").read_text())
    assert report == payload
    # impossible tolerance: violation with replay payload, exit 1
    rc, out = run_cli(capsys, "verify", "thm32", "--n", "3", "--m", "2",
                      "--samples", "2000", "--tol", "1e6")
    assert rc == 1
    payload = json.loads(out)
    jsonschema.validate(payload, schema("verify_report.schema.json"))
    assert payload["configs"][0]["failing_sample"] is not None


def test_flow_subcommand_outputs_and_determinism(capsys, tmp_path):
    scenario = tmp_path / "tiny.cfg"
    scenario.write_text(TINY_SCENARIO)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    rc, _ = run_cli(capsys, "flow", str(scenario), "--out", str(out_a))
    assert rc == 0
    rc, _ = run_cli(capsys, "flow", str(scenario), "--out", str(out_b))
    assert rc == 0
    csv_a = (out_a / "timeseries.csv").read_bytes()
    csv_b = (out_b / "timeseries.csv").read_bytes()
    assert csv_a == csv_b
    verdict = json.loads((out_a / "verdict.json").read_text())
    jsonschema.validate(verdict, schema("flow_verdict.schema.json"))
    assert (out_a / "verdict.json").read_bytes() == (out_b / "verdict.json").read_bytes()
    manifest = json.loads((out_a / "manifest.json").read_text())
    jsonschema.validate(manifest, schema("run_manifest.schema.json"))
    assert set(manifest["outputs"]) == {"timeseries.csv", "verdict.json"}


def test_flow_svg_outputs(capsys, tmp_path):
    scenario = tmp_path / "tiny.cfg"
    scenario.write_text(TINY_SCENARIO + "plots = true\n")
    rc, _ = run_cli(capsys, "flow", str(scenario), "--out", str(tmp_path / "o"))
    assert rc == 0
    svg = (tmp_path / "o" / "min_phi.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_flow_bad_scenario_is_config_error(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("backend = torus\nwibble = 3\n")
    rc, _ = run_cli(capsys, "flow", str(bad))
    assert rc == 2


def test_shipped_scenarios_parse():
    from areaflow.flowsim import parse_scenario
    for name in ("torus_sine_05.cfg", "torus_sine_05_128.cfg",
                 "equivariant_sin_03.cfg", "equivariant_identity.cfg"):
        config = parse_scenario(SCENARIOS / name)
        assert config.cfl <= 0.25
