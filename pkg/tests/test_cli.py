import json
import os

from spectral_riesz.cli import main
from spectral_riesz.output import dumps_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_levels_csv(capsys):
    code, out, _ = run(capsys, "levels", "sphere:2", "--lmax", "3")
    assert code == 0
    assert out.splitlines() == ["l,lambda,mult", "0,0,1", "1,2,3",
                                "2,6,5", "3,12,7"]


def test_levels_json_roundtrip(tmp_path, capsys):
    path = str(tmp_path / "levels.json")
    code, _, _ = run(capsys, "levels", "cp:4", "--lmax", "2",
                     "--format", "json", "--out", path)
    assert code == 0
    text = open(path).read()
    assert dumps_json(json.loads(text)) + "\n" == text
    rows = json.loads(text)
    assert rows[1] == {"l": 1, "lambda": 3, "mult": "8"}


def test_eval_brute_matches_closed_column(capsys):
    code, out, _ = run(capsys, "eval", "sphere:2", "R1",
                       "--z", "2,3.75,6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "z,brute_force,closed_form"
    for line in lines[1:]:
        _, brute, closed = line.split(",")
        assert brute == closed


def test_eval_counting_hemisphere(capsys):
    code, out, _ = run(capsys, "eval", "hemisphere-n:2", "N", "--z", "2")
    assert code == 0
    assert out.strip().splitlines()[1] == "2,3,3"


def test_eval_usage_error(capsys):
    code, _, err = run(capsys, "eval", "sphere:2", "R7", "--z", "1")
    assert code == 2
    assert "quantity" in err


def test_verify_expected_bound_exit_zero(capsys, tmp_path):
    out_dir = str(tmp_path)
    code, out, _ = run(capsys, "verify", "sphere:2", "s2.r1.lower",
                       "--out", out_dir)
    assert code == 0
    assert "min slack 0" in out
    files = os.listdir(out_dir)
    assert files == ["verify-s2.r1.lower.json"]
    text = open(os.path.join(out_dir, files[0])).read()
    assert dumps_json(json.loads(text)) + "\n" == text


def test_verify_counterexample_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "hemisphere-d:3",
                       "fail.hemi.polya.d>=3")
    assert code == 0
    assert "first witness z=3" in out


def test_verify_missing_counterexample_exit_one(capsys):
    # Grid stops below the witness: the expected violation is not found.
    code, out, _ = run(capsys, "verify", "hemisphere-d:3",
                       "fail.hemi.polya.d>=3", "--zmax", "2")
    assert code == 1
    assert "UNEXPECTED" in out


def test_verify_unexpected_violation_exit_one(capsys):
    # An absurd tolerance turns float noise into reported violations.
    code, out, _ = run(capsys, "verify", "circle:1", "s1.r1.upper.shift",
                       "--tol", "1e-18")
    assert code == 1


def test_verify_unknown_id_exit_two(capsys):
    code, _, err = run(capsys, "verify", "sphere:2", "bogus.id")
    assert code == 2 and "unknown bound id" in err


def test_verify_all_for_space(capsys):
    code, out, _ = run(capsys, "verify", "sphere:2", "all", "--points", "300")
    assert code == 0
    assert "s2.r1.lower" in out and "sd.r1.upper.shift" in out
    # fully defaulted counterexample entries ride along and behave
    assert "fail.r1p.weyl [ok]" in out
    # hemisphere-only entries must not appear for a closed sphere
    assert "hemi2.nd.polya" not in out


def test_verify_bad_space_exit_two(capsys):
    code, _, err = run(capsys, "verify", "moebius:2", "s2.r1.lower")
    assert code == 2 and "unknown space family" in err


def test_expansion_series(capsys):
    code, out, _ = run(capsys, "expansion", "hemisphere-d:2", "N",
                       "--terms", "2", "--z", "3.75")
    assert code == 0
    z, label, value = out.strip().splitlines()[1].split(",")
    assert label == "N:hemisphere-d:2:2-term"
    assert abs(float(value) - 3.75 / 2 * (1 - 3.75 ** -0.5)) < 1e-15


def test_sumrule_commands(capsys):
    code, out, _ = run(capsys, "sumrule", "sphere:2", "trace",
                       "--lmax", "1000")
    assert code == 0 and "within tail" in out
    partial = float(out.split("partial sum ")[1].split(" ")[0])
    assert abs(partial - 1.0) < 1e-5

    code, out, _ = run(capsys, "sumrule", "hp:8", "pq", "--lmax", "8")
    assert code == 0 and "exact equality" in out

    code, out, _ = run(capsys, "sumrule", "rp:3", "r2", "--lmax", "20")
    assert code == 0 and "ok" in out


def test_sumrule_usage_error_on_circle_r2(capsys):
    code, _, err = run(capsys, "sumrule", "circle:1", "r2")
    assert code == 2


def test_figure_files(tmp_path, capsys):
    out_dir = str(tmp_path)
    code, out, _ = run(capsys, "figure", "f1", "--resolution", "4",
                       "--lmax", "6", "--out", out_dir)
    assert code == 0
    csv_text = open(os.path.join(out_dir, "f1.csv")).read()
    assert csv_text.splitlines()[0] == "z,series_label,value"
    svg_text = open(os.path.join(out_dir, "f1.svg")).read()
    assert "<polyline" in svg_text and "viewBox" in svg_text
    assert not [f for f in os.listdir(out_dir) if f.startswith(".tmp-")]


def test_figure_unknown_id(capsys):
    code, _, err = run(capsys, "figure", "f42")
    assert code == 2 and "unknown figure id" in err


def test_figure_deterministic_output(tmp_path, capsys):
    p1, p2 = str(tmp_path / "a"), str(tmp_path / "b")
    run(capsys, "figure", "f6", "--resolution", "4", "--lmax", "5",
        "--out", p1)
    run(capsys, "figure", "f6", "--resolution", "4", "--lmax", "5",
        "--out", p2)
    assert open(os.path.join(p1, "f6.csv")).read() \
        == open(os.path.join(p2, "f6.csv")).read()


def test_space_flag_is_interchangeable_with_positional(capsys):
    code, out, _ = run(capsys, "eval", "--space", "sphere:2", "R1", "--z", "2")
    assert code == 0 and out.strip().splitlines()[1] == "2,2,2"
    code, out, _ = run(capsys, "sumrule", "--space", "hp:8", "pq",
                       "--lmax", "5")
    assert code == 0 and "exact equality" in out
    code, out, _ = run(capsys, "verify", "--space", "sphere:2", "s2.r1.upper")
    assert code == 0 and "s2.r1.upper [ok]" in out
    code, _, err = run(capsys, "verify", "--space", "sphere:2",
                       "sphere:3", "s2.r1.upper")
    assert code == 2 and "conflicting space" in err


def test_gamma_flag_selects_quantity(capsys):
    code, out, _ = run(capsys, "eval", "sphere:2", "--gamma", "0", "--z", "6")
    assert code == 0 and out.strip().splitlines()[1] == "6,9,9"
    code, _, err = run(capsys, "eval", "sphere:2")
    assert code == 2 and "gamma" in err


def test_verify_all_without_space(capsys):
    code, out, _ = run(capsys, "verify", "all", "--points", "150")
    assert code == 0
    assert "s2.r1.lower" in out and "hemi2.nd.polya" in out
