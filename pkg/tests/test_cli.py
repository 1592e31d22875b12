import json
import random
import subprocess
import sys

import pytest

from matstrata.cli import EXHAUSTED, NO, OK, USAGE, main
from matstrata.strata import canonical_projective_rep, enumerate_strata, format_point


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_enum_four(capsys):
    code, out = run(capsys, "enum", "--n", "4")
    assert code == OK
    lines = out.splitlines()
    assert [line.split()[0] for line in lines] == [
        "A(p1)", "B(p1:p2)", "C(p1:p2)", "D(p1:p2:p3)", "E(p1:p2:p3:p4)"]


def test_enum_json(capsys):
    code, out = run(capsys, "enum", "--n", "3", "--json")
    data = json.loads(out)
    assert [d["index"] for d in data] == [[3, 0, 0], [2, 1, 0], [1, 1, 1]]


def test_classify_jordan_block(capsys, tmp_path):
    f = write(tmp_path / "m.json", [[1, 1], [0, 1]])
    code, out = run(capsys, "classify", "--in", f)
    assert code == OK and out == "stratum [1,1], point (1:1)\n"


def test_classify_similarity_and_congruence(capsys, tmp_path):
    f = write(tmp_path / "m.json", [[1, 0], [0, 1]])
    code, out = run(capsys, "classify", "--in", f, "--action", "similarity", "--json")
    assert code == OK and json.loads(out)["stratum"] == [2, 0]
    code, out = run(capsys, "classify", "--in", f, "--action", "congruence")
    assert out == "class B(1:1)\n"


def test_dictionary(capsys):
    code, out = run(capsys, "dictionary", "--dim", "2")
    assert code == OK and out.splitlines()[-1] == "7/7 verified"


def test_certify_exit_codes(capsys, tmp_path):
    i2 = write(tmp_path / "i.json", [[1, 0], [0, 1]])
    a1 = write(tmp_path / "a.json", [[0, 1], [-1, 0]])
    b11 = write(tmp_path / "b.json", [[1, 1], [1, 0]])
    code, out = run(capsys, "certify", "--a", i2, "--b", a1)
    assert code == NO and json.loads(out)["inequivalent"]
    code, out = run(capsys, "certify", "--a", b11, "--b", i2, "--seed", "3", "--tol", "1e-10",
                    "--restarts", "4")
    assert code == OK and json.loads(out)["verified"]


def test_certify_search_exhausted(capsys, tmp_path):
    # B = G^T A G for G = [[2,1,0],[0,1,1],[1,0,3]]: congruent, but no exact guess
    # reaches it and zero restarts leave the numerical search nothing to try
    a = write(tmp_path / "a.json", [[0, 0, 2], [0, 1, 1], [1, 0, 1]])
    b = write(tmp_path / "b.json", [[7, 1, 15], [3, 1, 10], [10, 4, 13]])
    assert run(capsys, "certify", "--a", a, "--b", b, "--restarts", "0")[0] == EXHAUSTED
    code, out = run(capsys, "certify", "--a", a, "--b", b)
    assert code == OK and json.loads(out)["verified"]


def test_verify_jump(capsys, tmp_path):
    d = write(tmp_path / "d.json", [[0, 1], [-1, 0]])
    dirs = write(tmp_path / "e.json", [[[1, 0], [0, 0]]])
    good = write(tmp_path / "t.json", [[1, -1], [1, 0]])
    bad = write(tmp_path / "u.json", [[1, 0], [0, 1]])
    assert run(capsys, "verify-jump", "--d", d, "--dirs", dirs, "--target", good)[0] == OK
    assert run(capsys, "verify-jump", "--d", d, "--dirs", dirs, "--target", bad)[0] == NO


def test_lie_and_assoc(capsys, tmp_path):
    f = write(tmp_path / "m.json", [[0, -1], [1, 1]])
    code, out = run(capsys, "assoc", "--in", f)
    table = {(e["i"], e["j"]): e["c"] for e in json.loads(out)["table"]}
    assert table[(2, 3)] == ["-1/1", "0/1"] and table[(3, 3)] == ["1/1", "0/1"]
    code, out = run(capsys, "lie", "--in", f)
    assert code == OK and json.loads(out)["kind"] == "lie"


def test_arnold_and_miniversal(capsys, tmp_path):
    f = write(tmp_path / "m.json", [[0, 1], [0, 0]])
    code, out = run(capsys, "arnold", "--in", f)
    assert json.loads(out) == {"arnold_count": 2, "centralizer_dim": 2, "scalar_similarity_params": 1}
    g = write(tmp_path / "b.json", [[1, 0], [0, 0]])
    code, out = run(capsys, "miniversal", "--in", g, "--action", "cogredient")
    assert json.loads(out)["count"] == 2


def test_bilinear_classify(capsys, tmp_path):
    f = write(tmp_path / "m.json", [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    code, out = run(capsys, "bilinear-classify", "--in", f)
    assert code == OK and out == "C3\n"


def test_usage_errors(capsys, tmp_path):
    assert main(["bogus"]) == USAGE
    assert main(["matrix", "--index", "1,2", "--params", "1"]) == USAGE
    assert main(["classify", "--in", str(tmp_path / "missing.json")]) == USAGE
    f = write(tmp_path / "m.json", [[1, 2, 3, 4]] * 4)
    assert main(["bilinear-classify", "--in", f]) == USAGE
    assert main(["graph", "--n", "4", "--forms"]) == USAGE
    capsys.readouterr()


def test_graph_bytes_are_deterministic(tmp_path):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    assert main(["graph", "--n", "4", "--out", str(a)]) == OK
    assert main(["graph", "--n", "4", "--out", str(b)]) == OK
    assert a.read_bytes() == b.read_bytes()


def test_forms_graph_json(capsys):
    code, out = run(capsys, "graph", "--n", "3", "--forms", "--json")
    assert len(json.loads(out)["edges"]) == 15


def test_matrix_classify_round_trip(capsys, tmp_path):
    rng = random.Random(0)
    strata = {n: enumerate_strata(n) for n in range(1, 6)}
    out_file = tmp_path / "m.json"
    for _ in range(100):
        st = rng.choice(strata[rng.randint(1, 5)])
        params = [rng.randint(-4, 4) for _ in range(st.param_count)]
        index = ",".join(str(x) for x in st.index)
        assert main(["matrix", "--index", index, "--params=" + ",".join(map(str, params)),
                     "--out", str(out_file)]) == OK
        code, out = run(capsys, "classify", "--in", str(out_file))
        point = canonical_projective_rep(params, st.symmetry_blocks)
        assert out == f"stratum [{index}], point {format_point(point)}\n"


@pytest.mark.parametrize("argv", [["enum", "--n", "2"], ["dictionary"]])
def test_module_entry_point(argv):
    proc = subprocess.run([sys.executable, "-m", "matstrata", *argv], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout
