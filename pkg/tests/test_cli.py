import json
import subprocess
import sys

import numpy as np
import pytest

from mpx import InstanceSpec, generate, pinv_oracle, read_matrix, rel_diff, write_matrix
from mpx.cli import main


def _report_fields(text):
    fields = {}
    for line in text.strip().splitlines():
        key, _, value = line.partition(":")
        fields.setdefault(key.strip(), []).append(value.strip())
    return fields


def _gen(tmp_path, name, flavor="a1a2", m=5, n=4, r=2, cond=8.0, seed=42):
    out = tmp_path / name
    code = main(
        [
            "gen", "--m", str(m), "--n", str(n), "--r", str(r),
            "--cond", str(cond), "--flavor", flavor, "--seed", str(seed),
            "--out-dir", str(out),
        ]
    )
    assert code == 0
    return out


def test_gen_writes_fixture_and_sidecar(tmp_path):
    out = _gen(tmp_path, "f1")
    for name in ("N.mtx", "X.mtx", "Y.mtx", "spec.json"):
        assert (out / name).exists()
    sidecar = json.loads((out / "spec.json").read_text())
    assert sidecar["m"] == 5 and sidecar["flavor"] == "a1a2" and sidecar["seed"] == 42
    # files reproduce the library instance exactly
    inst = generate(InstanceSpec(m=5, n=4, r=2, sigma_cond=8.0, flavor="a1a2", seed=42))
    assert np.array_equal(read_matrix(out / "N.mtx"), inst.n_matrix)


def test_gen_infeasible_spec_exits_3(tmp_path, capsys):
    code = main(
        [
            "gen", "--m", "4", "--n", "4", "--r", "4", "--cond", "1",
            "--flavor", "violate_a1", "--seed", "1", "--out-dir", str(tmp_path / "x"),
        ]
    )
    assert code == 3
    assert "infeasible" in capsys.readouterr().err
    assert not (tmp_path / "x" / "N.mtx").exists()


def test_gen_bad_field_is_usage_error(tmp_path):
    code = main(
        [
            "gen", "--m", "3", "--n", "3", "--r", "9", "--flavor", "a1a2",
            "--seed", "1", "--out-dir", str(tmp_path / "y"),
        ]
    )
    assert code == 64


def test_gen_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MPX_SEED", "42")
    out = tmp_path / "env"
    assert main(["gen", "--m", "5", "--n", "4", "--r", "2", "--cond", "8.0",
                 "--flavor", "a1a2", "--out-dir", str(out)]) == 0
    ref = _gen(tmp_path, "explicit")
    assert np.array_equal(read_matrix(out / "N.mtx"), read_matrix(ref / "N.mtx"))


def test_pinv_oracle_self_check(tmp_path, capsys):
    out = _gen(tmp_path, "f2")
    assert main(["pinv", "--n", str(out / "N.mtx"), "--method", "oracle"]) == 0
    fields = _report_fields(capsys.readouterr().out)
    assert fields["method"] == ["oracle"]
    for key in ("residual-a", "residual-b", "residual-c", "residual-d"):
        assert float(fields[key][0]) <= 1e-10


def test_pinv_thm33_identity_sides_matches_oracle(tmp_path):
    out = _gen(tmp_path, "f3")
    z_form = tmp_path / "z1.mtx"
    z_orac = tmp_path / "z2.mtx"
    eye_m = tmp_path / "Im.mtx"
    eye_n = tmp_path / "In.mtx"
    write_matrix(eye_m, np.eye(5, dtype=complex))
    write_matrix(eye_n, np.eye(4, dtype=complex))
    assert main(["pinv", "--n", str(out / "N.mtx"), "--x", str(eye_m), "--y", str(eye_n),
                 "--method", "thm33", "--out", str(z_form),
                 "--report", str(tmp_path / "r.txt")]) == 0
    assert main(["pinv", "--n", str(out / "N.mtx"), "--method", "oracle",
                 "--out", str(z_orac)]) == 0
    assert rel_diff(read_matrix(z_form), read_matrix(z_orac)) <= 1e-10


def test_pinv_thm33_full_instance_with_verify(tmp_path, capsys):
    out = _gen(tmp_path, "f4")
    assert main(["pinv", "--n", str(out / "N.mtx"), "--x", str(out / "X.mtx"),
                 "--y", str(out / "Y.mtx"), "--method", "thm33", "--verify"]) == 0
    fields = _report_fields(capsys.readouterr().out)
    assert float(fields["oracle-distance"][0]) <= 1e-8
    checks = fields["check"]
    assert any("x-block-triangular passed=yes" in c for c in checks)
    assert any("y-block-triangular passed=yes" in c for c in checks)


def test_pinv_strict_violation_exits_2(tmp_path, capsys):
    out = _gen(tmp_path, "f5", flavor="violate_a1")
    code = main(["pinv", "--n", str(out / "N.mtx"), "--x", str(out / "X.mtx"),
                 "--y", str(out / "Y.mtx"), "--method", "thm33", "--strict"])
    assert code == 2
    err = capsys.readouterr().err
    assert "hypothesis violation" in err and "residual" in err


def test_pinv_permissive_violation_computes_anyway(tmp_path, capsys):
    out = _gen(tmp_path, "f6", flavor="violate_a1")
    code = main(["pinv", "--n", str(out / "N.mtx"), "--x", str(out / "X.mtx"),
                 "--y", str(out / "Y.mtx"), "--method", "thm33", "--permissive",
                 "--verify"])
    assert code == 0
    fields = _report_fields(capsys.readouterr().out)
    assert any("passed=no" in c for c in fields["check"])
    assert float(fields["oracle-distance"][0]) > 1e-6


def test_pinv_lemma21_requires_split(tmp_path, capsys):
    m = np.ones((2, 2), dtype=complex)
    path = tmp_path / "ones.mtx"
    write_matrix(path, m)
    assert main(["pinv", "--n", str(path), "--method", "lemma21"]) == 64
    capsys.readouterr()
    assert main(["pinv", "--n", str(path), "--method", "lemma21",
                 "--split", "1,1", "--out", str(tmp_path / "z.mtx")]) == 0
    z = read_matrix(tmp_path / "z.mtx")
    assert rel_diff(z, pinv_oracle(m)) <= 1e-10


def test_pinv_method_flag_combinations(tmp_path):
    out = _gen(tmp_path, "f7")
    n = str(out / "N.mtx")
    x = str(out / "X.mtx")
    y = str(out / "Y.mtx")
    assert main(["pinv", "--n", n, "--x", x, "--method", "thm31-xn"]) == 0
    assert main(["pinv", "--n", n, "--y", y, "--method", "thm31-ny"]) == 0
    assert main(["pinv", "--n", n, "--y", y, "--method", "thm31-xn"]) == 64
    assert main(["pinv", "--n", n, "--x", x, "--method", "thm31-ny"]) == 64
    assert main(["pinv", "--n", n, "--method", "thm33", "--split", "1,1"]) == 64


def test_pinv_variant_methods_roundtrip(tmp_path, capsys):
    fix = _gen(tmp_path, "pf", flavor="projector_fix", m=6, n=5, r=3)
    assert main(["pinv", "--n", str(fix / "N.mtx"), "--x", str(fix / "X.mtx"),
                 "--y", str(fix / "Y.mtx"), "--method", "cgms11", "--verify"]) == 0
    fields = _report_fields(capsys.readouterr().out)
    assert float(fields["oracle-distance"][0]) <= 1e-8
    herm = _gen(tmp_path, "hf", flavor="hermitian_fix", m=6, n=5, r=3)
    assert main(["pinv", "--n", str(herm / "N.mtx"), "--x", str(herm / "X.mtx"),
                 "--y", str(herm / "Y.mtx"), "--method", "cor34", "--verify"]) == 0
    fields = _report_fields(capsys.readouterr().out)
    assert float(fields["oracle-distance"][0]) <= 1e-8


def test_pinv_missing_file_exits_1(tmp_path):
    assert main(["pinv", "--n", str(tmp_path / "missing.mtx")]) == 1


def test_pinv_shape_mismatch_exits_1(tmp_path):
    out = _gen(tmp_path, "f8")
    wrong = tmp_path / "wrong.mtx"
    write_matrix(wrong, np.eye(3, dtype=complex))
    assert main(["pinv", "--n", str(out / "N.mtx"), "--x", str(wrong),
                 "--method", "thm33"]) == 1


def test_check_on_condition_fixture(tmp_path, capsys):
    out = _gen(tmp_path, "c6", flavor="condition:C6", m=6, n=5, r=3)
    assert main(["check", "--n", str(out / "N.mtx"), "--x", str(out / "X.mtx")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    verdicts = {ln.split()[1]: ln for ln in lines if ln.startswith("condition:")}
    assert "holds=yes" in verdicts["C6"]
    structure = [ln for ln in lines if ln.startswith("structure:")][0]
    assert "satisfied=yes" in structure and "side=X" in structure


def test_check_identity_x_c4(tmp_path, capsys):
    out = _gen(tmp_path, "cid")
    eye = tmp_path / "I5.mtx"
    write_matrix(eye, np.eye(5, dtype=complex))
    assert main(["check", "--n", str(out / "N.mtx"), "--x", str(eye),
                 "--conditions", "C4"]) == 0
    out_text = capsys.readouterr().out
    assert "condition: C4 holds=yes" in out_text


def test_check_violation_fixture_fails_all(tmp_path, capsys):
    out = _gen(tmp_path, "cv", flavor="violate_a1", m=6, n=5, r=3)
    assert main(["check", "--n", str(out / "N.mtx"), "--x", str(out / "X.mtx")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    for ln in lines:
        if ln.startswith("condition:"):
            assert "holds=no" in ln
    assert any("satisfied=no" in ln for ln in lines if ln.startswith("structure:"))


def test_check_y_side_primed_conditions(tmp_path, capsys):
    out = _gen(tmp_path, "cy", flavor="condition:C4'", m=5, n=6, r=2)
    assert main(["check", "--n", str(out / "N.mtx"), "--y", str(out / "Y.mtx"),
                 "--conditions", "C4p"]) == 0
    assert "condition: C4' holds=yes" in capsys.readouterr().out


def test_check_usage_errors(tmp_path):
    out = _gen(tmp_path, "cu")
    n = str(out / "N.mtx")
    x = str(out / "X.mtx")
    y = str(out / "Y.mtx")
    assert main(["check", "--n", n]) == 64                       # no side
    assert main(["check", "--n", n, "--x", x, "--y", y]) == 64   # both sides
    assert main(["check", "--n", n, "--x", x, "--conditions", "C1'"]) == 64
    assert main(["check", "--n", n, "--x", x, "--conditions", "C9"]) == 64
    assert main(["check", "--n", n, "--x", x, "--k-max", "0"]) == 64


def test_bench_cli(tmp_path, capsys):
    csv_path = tmp_path / "bench.csv"
    assert main(["bench", "--sizes", "4,6", "--trials", "1", "--seed", "7",
                 "--csv", str(csv_path)]) == 0
    out_text = capsys.readouterr().out
    assert "method=thm33" in out_text
    rows = csv_path.read_text().strip().splitlines()
    assert rows[0] == "method,m,n,r,wall_time_s,res_a,res_b,res_c,res_d,oracle_distance"
    assert len(rows) == 5
    for row in rows[1:]:
        assert float(row.split(",")[9]) <= 1e-7


def test_bench_usage_errors():
    assert main(["bench", "--trials", "0"]) == 64
    assert main(["bench", "--sizes", "abc", "--trials", "1"]) == 64
    assert main(["bench", "--sizes", "1", "--trials", "1"]) == 64


def test_unknown_command_and_help():
    assert main(["frobnicate"]) == 64
    assert main(["--help"]) == 0
    assert main([]) == 64


def test_console_entry_point(tmp_path):
    out = _gen(tmp_path, "sub")
    proc = subprocess.run(
        [sys.executable, "-m", "mpx", "pinv", "--n", str(out / "N.mtx"),
         "--method", "oracle"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "residual-a:" in proc.stdout
