import io
import json
import sys

from fractions import Fraction as F

from refdep.cli import main
from refdep.serialize import dataset_from_dict, dataset_to_dict, dump_dataset

from helpers import allais_dataset


def run(argv):
    buffer = io.StringIO()
    stdout = sys.stdout
    sys.stdout = buffer
    try:
        code = main(argv)
    finally:
        sys.stdout = stdout
    return code, buffer.getvalue()


def run_json(argv):
    code, out = run(["--json"] + argv)
    return code, json.loads(out)


def write_dataset(tmp_path, ds, name="data.json"):
    path = tmp_path / name
    dump_dataset(ds, path)
    return str(path)


def test_validate_fixture_uri():
    code, doc = run_json(["validate", "fixtures://compliance_2_1"])
    assert code == 0
    assert doc == {"ok": True, "kind": "generic",
                   "alternatives": 4, "observations": 11}


def test_validate_unknown_path_exits_2_with_json():
    code, doc = run_json(["validate", "/nonexistent/file.json"])
    assert code == 2
    assert doc["error"]


def test_check_violation_table_exits_1_with_empty_candidate_witness():
    code, doc = run_json(["check", "--model", "ordu",
                          "fixtures://violation_2_1"])
    assert code == 1
    witnesses = doc["results"]["reference_dependence"]["witnesses"]
    assert witnesses[0]["menu"] == ["a", "b", "c"]
    assert set(witnesses[0]["candidates"]) == {"a", "b", "c"}


def test_check_compliance_table_passes():
    code, doc = run_json(["check", "--model", "ordu",
                          "fixtures://compliance_2_1"])
    assert code == 0 and doc["pass"] is True


def test_fit_simulate_verify_round_trip_via_files(tmp_path):
    ds = allais_dataset()
    data_path = write_dataset(tmp_path, ds)
    params_path = str(tmp_path / "params.json")
    code, doc = run_json(["fit", "--model", "areu", "--out", params_path,
                          data_path])
    assert code == 0 and doc["fit"] == "ok"
    menus_path = str(tmp_path / "menus.json")
    dataset_doc = dataset_to_dict(ds)
    menus_doc = {"kind": dataset_doc["kind"],
                 "alternatives": dataset_doc["alternatives"],
                 "menus": [sorted(m) for m in ds.menus()]}
    with open(menus_path, "w") as fh:
        json.dump(menus_doc, fh)
    out_path = str(tmp_path / "sim.json")
    code, doc = run_json(["simulate", "--model", "areu", "--out", out_path,
                          params_path, menus_path])
    assert code == 0
    with open(out_path) as fh:
        sim = dataset_from_dict(json.load(fh))
    assert sim.same_observations(ds)
    code, doc = run_json(["verify", "--model", "areu", params_path, data_path])
    assert code == 0 and doc["pass"] is True


def test_simulate_triple_menu_reversal_via_files(tmp_path):
    from refdep.serialize import to_json
    from test_risk import warp_prediction_params
    params = warp_prediction_params()
    params_path = str(tmp_path / "areu.json")
    with open(params_path, "w") as fh:
        fh.write(to_json(params.to_json()))
    menus_path = str(tmp_path / "menus.json")
    probs = {"p1": {"3000": "1"},
             "q1": {"0": "1/10", "3000": "7/10", "4000": "1/5"},
             "q2": {"0": "3/10", "3000": "3/10", "4000": "2/5"}}
    menus_doc = {"kind": "lottery",
                 "alternatives": [{"id": k, "payload": {"probs": v}}
                                  for k, v in probs.items()],
                 "menus": [["p1", "q1", "q2"], ["q1", "q2"]]}
    with open(menus_path, "w") as fh:
        json.dump(menus_doc, fh)
    code, doc = run_json(["simulate", "--model", "areu",
                          params_path, menus_path])
    assert code == 0
    picks = {tuple(obs["menu"]): obs["choice"] for obs in doc["observations"]}
    assert picks[("p1", "q1", "q2")] == ["q1"]
    assert picks[("q1", "q2")] == ["q2"]


def test_fit_reverse_allais_reports_infeasible(tmp_path):
    from helpers import reverse_allais_dataset
    path = write_dataset(tmp_path, reverse_allais_dataset())
    code, doc = run_json(["fit", "--model", "areu", path])
    assert code == 1 and doc["fit"] == "infeasible"


def test_fit_pbdu_fixture_reports_present_bias(tmp_path):
    from helpers import pay, payment_dataset
    payments = {"a18_0": pay(18, 0), "a20_1": pay(20, 1),
                "a15_0": pay(15, 0), "a18_3": pay(18, 3), "a20_4": pay(20, 4)}
    ds = payment_dataset(payments, [
        (("a18_0", "a20_1"), ("a18_0",)),
        (("a18_3", "a20_4"), ("a20_4",)),
        (("a15_0", "a18_3", "a20_4"), ("a18_3",)),
    ])
    path = write_dataset(tmp_path, ds)
    code, doc = run_json(["fit", "--model", "pbdu", path])
    assert code == 0
    d0 = F(doc["params"]["log_discount"]["0"])
    d3 = F(doc["params"]["log_discount"]["3"])
    assert d0 < d3 < 0


def test_fit_axiom_failure_path_is_json(tmp_path):
    from helpers import pay, payment_dataset
    payments = {"now": pay(18, 0), "late": pay(18, 2)}
    ds = payment_dataset(payments, [(("now", "late"), ("late",))])
    path = write_dataset(tmp_path, ds)
    code, doc = run_json(["fit", "--model", "pbdu", path])
    assert code == 1 and doc["fit"] == "axiom_fails"
    assert doc["witnesses"][0]["kind"] == "Impatience"


def test_report_emits_linkage_json():
    code, doc = run_json(["report", "fixtures://compliance_2_1"])
    assert code == 1  # WARP fails globally on the compliance table
    assert doc["linkage"]["warp"]["pass"] is False
    assert "note" in doc


def test_fixtures_list_and_run():
    code, doc = run_json(["fixtures", "list"])
    assert code == 0 and "compliance_2_1" in doc["fixtures"]
    code, doc = run_json(["fixtures", "run", "binary_cycle"])
    assert code == 0 and doc["matches"] is True


def test_byte_identical_reruns():
    args = ["--json", "check", "--model", "ordu", "fixtures://violation_2_1"]
    code1, out1 = run(args)
    code2, out2 = run(args)
    assert (code1, out1) == (code2, out2)


def test_witness_menus_round_trip_through_validate():
    code, doc = run_json(["check", "--model", "ordu",
                          "fixtures://violation_2_1"])
    ds = dataset_from_dict({
        "kind": "generic",
        "alternatives": [{"id": x} for x in "abc"],
        "observations": [{"menu": w["menu"], "choice": w["menu"][:1]}
                         for w in doc["results"]["reference_dependence"]["witnesses"]],
    })
    assert len(ds.observations) == 1


def test_export_triangle_writes_csv(tmp_path):
    from refdep.serialize import to_json
    from test_risk import fan_out_params
    params = fan_out_params((F(0), F(1), F(3)), 4)
    params_path = str(tmp_path / "areu.json")
    with open(params_path, "w") as fh:
        fh.write(to_json(params.to_json()))
    out_path = str(tmp_path / "triangle.csv")
    code, doc = run_json(["export-triangle", "--resolution", "4",
                          "--out", out_path, params_path])
    assert code == 0 and doc["rows"] == 15
    with open(out_path) as fh:
        lines = fh.read().strip().splitlines()
    assert lines[0] == "p_b,p_w,reference_id,utility_level"
    assert len(lines) == 16


def test_text_mode_renders_without_error():
    code, out = run(["check", "--model", "ordu", "fixtures://compliance_2_1"])
    assert code == 0 and "pass" in out
