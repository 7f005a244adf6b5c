import json
from fractions import Fraction as F

from qstruct.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen_file(tmp_path, name, *argv):
    path = tmp_path / name
    code = main(list(argv) + ["--out", str(path)])
    assert code == 0
    return path


def test_generate_chebyshev_stdout(capsys):
    code, out, _ = run(capsys, "generate", "--family", "chebyshev-t", "-N", "8")
    assert code == 0
    data = json.loads(out)
    assert data["C"][:3] == ["1/2", "1/4", "1/4"]
    assert all(b == "0" for b in data["B"])


def test_generate_qhermite_b_all_zero(capsys):
    code, out, _ = run(
        capsys, "generate", "--family", "q-hermite", "--q-quarter", "1/2", "-N", "4"
    )
    assert code == 0
    data = json.loads(out)
    assert data["B"] == ["0"] * 5
    assert data["q_quarter"] == "1/2"


def test_generate_irregular_exits_2(capsys):
    code, _, err = run(
        capsys,
        "generate",
        "--family",
        "alsalam-chihara",
        "--c",
        "1",
        "--d",
        "1",
        "--q-quarter",
        "1/2",
    )
    assert code == 2
    assert "c*d*q" in err  # names the violated regularity factor


def test_generate_writes_ops_table(tmp_path, capsys):
    ttrr_path = tmp_path / "t.json"
    ops_path = tmp_path / "ops.json"
    code = main(
        [
            "generate",
            "--family",
            "q-hermite",
            "-N",
            "6",
            "--out",
            str(ttrr_path),
            "--ops-out",
            str(ops_path),
        ]
    )
    assert code == 0
    ops = json.loads(ops_path.read_text())
    assert ops["polys"][0] == ["1"]
    assert ops["polys"][1] == ["0", "1"]  # P_1 = x


def test_fit_auto_on_chebyshev(tmp_path, capsys):
    path = gen_file(tmp_path, "cheb.json", "generate", "--family", "chebyshev-t", "-N", "12")
    code, out, err = run(capsys, "fit", str(path), "--deg-pi", "auto")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "exact"
    assert data["pi"] == ["-1", "0", "1"]  # x^2 - 1
    assert "deg pi = 2" in err


def test_fit_explicit_wrong_degree_exits_1(tmp_path, capsys):
    path = gen_file(tmp_path, "qh.json", "generate", "--family", "q-hermite", "-N", "12")
    code, out, _ = run(capsys, "fit", str(path), "--deg-pi", "1")
    assert code == 1
    data = json.loads(out)
    assert data["status"] == {"noSolution": 2}


def test_fit_asc_deg1(tmp_path, capsys):
    path = gen_file(
        tmp_path,
        "asc.json",
        "generate",
        "--family",
        "alsalam-chihara",
        "--c",
        "1/4",
        "--d",
        "1",
        "-N",
        "12",
    )
    code, out, _ = run(capsys, "fit", str(path), "--deg-pi", "1")
    assert code == 0
    data = json.loads(out)
    assert data["pi"] == ["-1", "1"]  # x - 1
    assert data["c"][1] == "-3/8"


def test_classify_families_and_exit_codes(tmp_path, capsys):
    jac = gen_file(
        tmp_path,
        "jac.json",
        "generate",
        "--family",
        "continuous-q-jacobi",
        "--p-a",
        "1/4",
        "--p-b",
        "1/16",
        "-N",
        "12",
    )
    code, out, _ = run(capsys, "classify", str(jac))
    assert code == 0
    data = json.loads(out)
    assert data["family"] == "continuous-q-jacobi"
    assert data["params"] == {"p_a": "1/4", "p_b": "1/16"}

    qh = gen_file(tmp_path, "qh.json", "generate", "--family", "q-hermite", "-N", "12")
    code, out, _ = run(capsys, "classify", str(qh))
    assert code == 0
    assert json.loads(out)["family"] == "q-hermite"


def test_classify_perturbed_exits_3(tmp_path, capsys):
    path = gen_file(tmp_path, "jac.json", "generate", "--family", "continuous-q-jacobi",
                    "--p-a", "1/4", "--p-b", "1/16", "-N", "12")
    data = json.loads(path.read_text())
    c2 = F(data["C"][1])
    data["C"][1] = str(c2 + F(1, 1000))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "classify", str(bad))
    assert code == 3
    parsed = json.loads(out)
    assert parsed["family"] == "not-characterized"
    assert parsed["predicates"]  # the ledger travels with the failure


def test_verify_all_checks_pass(tmp_path, capsys):
    for args in (
        ("--family", "q-hermite"),
        ("--family", "alsalam-chihara", "--c", "1/4", "--d", "1"),
        ("--family", "chebyshev-t"),
        ("--family", "continuous-q-jacobi", "--p-a", "1/4", "--p-b", "1/4"),
    ):
        path = gen_file(tmp_path, "v.json", "generate", *args, "-N", "12")
        code, out, _ = run(capsys, "verify", str(path), "-N", "10")
        assert code == 0
        data = json.loads(out)
        assert data["ok"] is True
        assert data["version"]
        assert data["input"]["C"]


def test_verify_single_check_selection(tmp_path, capsys):
    path = gen_file(tmp_path, "c.json", "generate", "--family", "chebyshev-t", "-N", "12")
    code, out, _ = run(capsys, "verify", str(path), "--checks", "pearson", "-N", "8")
    assert code == 0
    data = json.loads(out)
    assert all(c["name"] == "pearson" for c in data["checks"])


def test_verify_failure_is_nonzero(tmp_path, capsys):
    path = gen_file(tmp_path, "a.json", "generate", "--family", "alsalam-chihara",
                    "--c", "1", "--d", "2", "-N", "12")
    code, out, _ = run(capsys, "verify", str(path), "-N", "10")
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_verify_byte_identical_reports(tmp_path):
    src = tmp_path / "jac.json"
    main(["generate", "--family", "continuous-q-jacobi", "--p-a", "1/4",
          "--p-b", "1/16", "-N", "12", "--out", str(src)])
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["verify", str(src), "-N", "10", "--out", str(out1)]) == 0
    assert main(["verify", str(src), "-N", "10", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_generate_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["generate", "--family", "alsalam-chihara", "--c", "1/4", "--d", "1", "-N", "10"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_nmax_env_caps_n(tmp_path, capsys, monkeypatch):
    path = gen_file(tmp_path, "c.json", "generate", "--family", "chebyshev-t", "-N", "16")
    monkeypatch.setenv("QSTRUCT_NMAX", "8")
    code, out, _ = run(capsys, "verify", str(path), "-N", "14")
    assert code == 0
    data = json.loads(out)
    pearson_orders = [c["n"] for c in data["checks"] if c["name"] == "pearson"]
    assert max(pearson_orders) == 8


def test_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "classify", "/nonexistent/ttrr.json")
    assert code == 2
    assert "error" in err


def test_inverse_base_generation_classifies(tmp_path, capsys):
    path = gen_file(tmp_path, "qhi.json", "generate", "--family", "q-hermite",
                    "--base", "q-inverse", "-N", "12")
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["family"] == "q-hermite"
    assert data["base"] == "q-inverse"
