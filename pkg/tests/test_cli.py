import json
import subprocess
import sys

import pytest

from quadric_links import cli
from quadric_links import polytopes as poly
from quadric_links.configurations import Configuration
from quadric_links.homology import SimplicialComplex


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_corpus_contents():
    names = set(cli.CORPUS_NAMES)
    for required in ["cube", "truncated_cube", "pentagon", "hexagon", "rp2_truncation", "cyclic_dual_4_8", "two_wall_path"]:
        assert required in names
    assert {f"book_{l}" for l in range(3, 7)} <= names
    assert {f"cyclic_dual_4_{v}" for v in range(5, 9)} <= names
    assert {"two_wall_start", "two_wall_middle", "two_wall_end", "p1_path"} <= names
    assert cli.fixture("cube").value.n == 6


@pytest.mark.parametrize("name", cli.CORPUS_NAMES)
def test_fixture_round_trip(name):
    f = cli.fixture(name)
    data = json.loads(json.dumps(f.to_json()))
    back = cli.parse_input(data, name)
    assert back.kind == f.kind and back.value == f.value
    if f.kind == "polytope":
        assert back.value.labels == f.value.labels
    if f.kind == "path":
        assert tuple(back.translation) == tuple(f.translation)


def test_cohomology_table(capsys):
    code, out, _ = run(capsys, "cohomology", "--builtin", "cube")
    assert code == 0 and "dim X = 9" in out and "H^3  = Z^3" in out
    data = run_json(capsys, "cohomology", "--builtin", "cube")
    assert data["betti"] == [1, 0, 0, 3, 0, 0, 3, 0, 0, 1]


def test_check_pentagon(capsys):
    data = run_json(capsys, "check", "pentagon_configuration")
    assert data["admissible"] and data["k"] == 0


def test_input_from_file(tmp_path, capsys):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(Configuration.from_rows([[1, 1, -1]]).to_json()))
    data = run_json(capsys, "check", str(path))
    assert data["indispensable"] == [3]


def test_invalid_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1 and err
    code, _, _ = run(capsys, "polytope", "no_such_fixture")
    assert code == 1


def test_invalid_flip_names_the_condition(capsys):
    code, _, err = run(capsys, "flip", "--builtin", "simplex:3", "--face", "1,2")
    assert code == 1 and "[incoming_face_exists]" in err
    code, _, err = run(capsys, "flip", "--builtin", "book:6", "--face", "2,h")
    assert code == 1 and "[incoming_face_exists]" in err
    code, _, err = run(capsys, "flip", "--builtin", "cube", "--face", "1,2,3", "--type", "2,2")
    assert code == 1 and "[type]" in err


def test_refused_computation_exit_code(capsys):
    code, _, err = run(capsys, "cohomology", "--builtin", "cube", "--max-n", "4")
    assert code == 2 and "refused" in err
    code, _, _ = run(capsys, "verify", "--builtin", "cube", "--max-n", "4")
    assert code == 2


def test_invariant_violation_exit_code(monkeypatch, capsys):
    def broken(p, ctx):
        return False, "forced"

    monkeypatch.setitem(cli.SUITES, "euler", broken)
    code, _, err = run(capsys, "verify", "--builtin", "cube", "--suite", "euler")
    assert code == 3 and "invariant violation" in err


def test_flip_and_truncate(capsys):
    data = run_json(capsys, "flip", "--builtin", "cube", "--face", "1,2,3", "--type", "1,3")
    assert data["flip"]["type"] == [1, 3] and data["polytope"]["n"] == 7
    data = run_json(capsys, "truncate", "--builtin", "cube", "--face", "1,2")
    assert data["n"] == 7


def test_polytope_and_realize(capsys):
    data = run_json(capsys, "polytope", "pentagon_configuration")
    assert data["n"] == 5 and data["f_vector"] == [5, 5]
    config = run_json(capsys, "realize", "--builtin", "cube", "--circles", "1")
    c = Configuration.from_json(config)
    assert poly.polytope_of(c).dual_facets == poly.cube(3).dual_facets


def test_product_of_fixtures(capsys):
    data = run_json(capsys, "product", "simplex_1", "simplex_2")
    assert data["n"] == 5 and data["d"] == 3


def test_homology_ring_classify(capsys):
    data = run_json(capsys, "homology-x", "--builtin", "cube")
    assert [x["betti"] for x in data] == [1, 0, 0, 3, 0, 0, 3, 0, 0, 1]
    ring = run_json(capsys, "ring", "--builtin", "cube")
    assert len(ring["products"]) == 6
    out = run_json(capsys, "classify", "--builtin", "cube")
    assert out["connected_sum_type"] is False and len(out["witness"]["cycle"]) == 4


def test_walls_and_cross(capsys):
    data = run_json(capsys, "walls", "p1_path")
    assert len(data["walls"]) == 2 and len(data["crossing"]["events"]) == 1
    code, out, _ = run(capsys, "cross", "two_wall_path")
    assert code == 0 and out.count("t = ") == 2 and "#(5) S^3×S^4" in out
    data = run_json(capsys, "cross", "pentagon_configuration", "--translate", "0,0")
    assert data["events"] == []


def test_diffeo(capsys):
    assert run_json(capsys, "diffeo", "--builtin", "cube")["text"] == "S^3×S^3×S^3"
    assert run_json(capsys, "diffeo", "two_wall_start")["text"] == "S^5×T^2"


def test_torsion_build_and_lvm(tmp_path, capsys):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps(SimplicialComplex.from_faces([[1, 2], [2, 3], [1, 3]]).to_json()))
    data = run_json(capsys, "torsion-build", str(path), "--no-realize")
    assert data["certificates"][0]["complex_degree"] == 1
    out = run_json(capsys, "lvm", "pentagon_configuration")
    assert out["indispensable_count"] == 0


def test_builtin_listing(capsys):
    data = run_json(capsys, "builtin")
    assert "cube" in data["fixtures"]
    data = run_json(capsys, "builtin", "cube")
    assert data["kind"] == "polytope" and data["n"] == 6


def test_output_is_deterministic(capsys):
    first = run(capsys, "cohomology", "--builtin", "truncated_cube", "--json", "--threads", "1")
    second = run(capsys, "cohomology", "--builtin", "truncated_cube", "--json", "--threads", "3")
    assert first == second


@pytest.mark.parametrize("name", ["cube", "truncated_cube", "two_wall_path", "circle_complex", "book_6"])
def test_verify_small_fixtures(name, capsys):
    data = run_json(capsys, "verify", name)
    assert data["pass"]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quadric_links.cli", "check", "p1_path", "--json"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["admissible"]
