import json
import subprocess
import sys

import pytest

from conftest import C6_POINTS, K2, K8
from digitop import DigitalImage, save_image
from digitop.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}

    def put(name, pts, kind):
        p = tmp_path / f"{name}.dimg"
        save_image(DigitalImage(pts, kind), p)
        paths[name] = str(p)

    put("c6", C6_POINTS, K8)
    put("pendant", C6_POINTS + [(4, 0)], K8)
    put("i5", [(i,) for i in range(5)], K2)
    put("split", [(0,), (3,)], K2)
    paths["dir"] = tmp_path
    return paths


def run(argv, capsys):
    code = main(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_tc_on_c6(files, capsys):
    code, rep = run(["tc", "--image", files["c6"]], capsys)
    assert code == 0
    assert rep["value"] == 2 and rep["method"] == "certificate"
    assert rep["witness_parts"] == 2
    assert rep["version"] and "flags" in rep and "elapsed_s" in rep


def test_contractible_interval(files, capsys):
    code, rep = run(["contractible", "--image", files["i5"]], capsys)
    assert code == 0 and rep["verdict"] == "yes"


def test_tc_disconnected_is_input_error(files, capsys):
    code, rep = run(["tc", "--image", files["split"]], capsys)
    assert code == 1 and "error" in rep


def test_missing_file(files, capsys):
    code, rep = run(["info", "--image", str(files["dir"] / "nope.dimg")], capsys)
    assert code == 1


def test_parse_error_names_file_and_line(tmp_path, capsys):
    bad = tmp_path / "bad.dimg"
    bad.write_text("dim 2\nk 2\np 0 0\np 0 x\n")
    code, rep = run(["info", "--image", str(bad)], capsys)
    assert code == 1
    assert "bad.dimg:4" in rep["error"]


def test_unknown_flag_rejected(files):
    assert main(["tc", "--image", files["c6"], "--bogus"]) == 1


def test_budget_exhaustion_exit_two(files, capsys):
    code, rep = run(["loops", "--image", files["c6"], "--m", "6", "--budget", "3"], capsys)
    assert code == 2 and rep["budget_status"] == "exhausted"


def test_loops_table(files, capsys):
    code, rep = run(["loops", "--image", files["c6"], "--m", "6"], capsys)
    assert code == 0 and rep["classes"] == 3
    assert len(rep["representatives"]) == 3


def test_equiv_with_certificates(files, capsys, tmp_path):
    certs = tmp_path / "certs"
    code, rep = run(["equiv", "--image", files["pendant"], "--image2", files["c6"], "--certs", str(certs)], capsys)
    assert code == 0 and rep["verdict"] == "yes" and rep["certificate_checked"]
    assert len(rep["certificates"]) == 2


def test_contraction_certificate_verifies(files, capsys, tmp_path):
    certs = tmp_path / "certs"
    run(["contractible", "--image", files["i5"], "--certs", str(certs)], capsys)
    code, rep = run(["verify", "--image", files["i5"], "--cert", str(certs / "contraction.hom")], capsys)
    assert code == 0 and rep["verdict"] == "yes"
    assert rep["starts_at_identity"] and rep["ends_constant"]


def test_planner_synth_verify_round_trip(files, capsys, tmp_path):
    plan = tmp_path / "c6.plan"
    code, rep = run(["planner", "synth", "--image", files["c6"], "--write", str(plan)], capsys)
    assert code == 0 and rep["verified"] and rep["parts"] == 2
    code, rep = run(["planner-verify", "--image", files["c6"], "--planner", str(plan)], capsys)
    assert code == 0 and rep["verdict"] == "yes"
    lines = plan.read_text().splitlines()
    i = next(i for i, ln in enumerate(lines) if ln.startswith("s "))
    head, body = lines[i].split(":")
    coords = body.split()
    start = (int(coords[0]), int(coords[1]))
    far = next(q for q in C6_POINTS if max(abs(q[0] - start[0]), abs(q[1] - start[1])) > 1)
    coords[2:4] = [str(c) for c in far]
    lines[i] = head + ": " + " ".join(coords)
    plan.write_text("\n".join(lines) + "\n")
    code, rep = run(["planner-verify", "--image", files["c6"], "--planner", str(plan)], capsys)
    assert code == 0 and rep["verdict"] == "no" and rep["violations"] >= 1


def test_higher_planner_synth(files, capsys, tmp_path):
    plan = tmp_path / "c6n3.plan"
    code, rep = run(["planner-synth", "--image", files["c6"], "--n", "3", "--write", str(plan)], capsys)
    assert code == 0 and rep["verified"]
    code, rep = run(["planner", "verify", "--image", files["c6"], "--planner", str(plan)], capsys)
    assert rep["verdict"] == "yes" and rep["n"] == 3


def test_tcn_exact(files, capsys):
    code, rep = run(["tcn", "--image", files["c6"], "--n", "3"], capsys)
    assert code == 0 and rep["value"] == 2
    assert rep["refuter"] == "no" and rep["exact"]


def test_tcn_no_refute(files, capsys):
    code, rep = run(["tcn", "--image", files["i5"], "--n", "3", "--no-refute"], capsys)
    assert code == 0 and rep["value"] == 1 and "refuter" not in rep


def test_curve_gen_and_search(capsys, tmp_path):
    out = tmp_path / "c8.dimg"
    code, rep = run(["curve-gen", "--m", "8", "--kind", "4", "--write", str(out)], capsys)
    assert code == 0 and out.exists()
    code, rep = run(["curve-gen", "--m", "5"], capsys)
    assert code == 1
    code, rep = run(["curve-search", "--m", "6", "--kind", "4", "--window", "4"], capsys)
    assert code == 0 and rep["found"] == 0 and rep["verdict"] == "no"


def test_corpus_contains_square(capsys, tmp_path):
    d = tmp_path / "corpus"
    code, rep = run(["corpus", "--kind", "4", "--window", "2", "--max-points", "4", "--write", str(d)], capsys)
    assert code == 0
    names = {p.name for p in d.iterdir()}
    assert "k4_n4_0-0_0-1_1-0_1-1.dimg" in names
    assert rep["images"] == len(names)


def test_info_and_connected(files, capsys):
    code, rep = run(["info", "--image", files["pendant"]], capsys)
    assert code == 0 and rep["homotopy_type"] == "CycleType(6)" and rep["points"] == 7
    code, rep = run(["connected", "--image", files["split"]], capsys)
    assert code == 0 and rep["verdict"] == "no"


def test_rigid_and_reducible(files, capsys):
    code, rep = run(["rigid", "--image", files["c6"]], capsys)
    assert code == 0 and rep["verdict"] == "no"
    code, rep = run(["reducible", "--image", files["pendant"]], capsys)
    assert code == 0 and rep["verdict"] == "yes"


def test_kv_output_and_out_file(files, capsys, tmp_path):
    out = tmp_path / "rep.txt"
    assert main(["connected", "--image", files["c6"], "--out", str(out)]) == 0
    text = out.read_text()
    assert "verdict: yes" in text and "exit: 0" in text


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "digitop", "connected", "--image", files["c6"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verdict: yes" in proc.stdout
