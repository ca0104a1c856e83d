import numpy as np
import pytest

from qdshare.cli import (
    CSV_HEADER,
    CheckSpec,
    ParseError,
    SweepSpec,
    UsageError,
    cmd_check,
    fmt,
    main,
    parse_number,
    read_matrix_file,
    read_sweep_csv,
    sweep_csv,
    write_matrix_file,
)
from qdshare.states import make_werner_ghz, random_ginibre


def _fields(text):
    out = {}
    for line in text.splitlines():
        key, _, val = line.partition(": ")
        out[key] = val
    return out


@pytest.mark.parametrize("text, value", [
    ("0.5", 0.5), ("pi", np.pi), ("pi/4", np.pi / 4), ("3pi/2", 1.5 * np.pi), ("-2*pi/3", -2 * np.pi / 3),
])
def test_parse_number(text, value):
    assert parse_number(text) == pytest.approx(value, abs=1e-15)


def test_fmt_twelve_digits():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(-0.0) == "0"
    assert fmt(1.0) == "1"


def test_sweep_header_and_rows(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["sweep", "--family", "WERNER_GHZ", "--grid", "11", "--workers", "1", "-o", str(out)]) == 0
    raw = out.read_bytes()
    assert raw.split(b"\n", 1)[0].decode() == CSV_HEADER
    assert b"\r" not in raw
    data = read_sweep_csv(out)
    assert data["param"].size == 11
    assert data["param"][-1] == 1.0
    assert data["bound_new"][-1] == pytest.approx(0, abs=1e-6)
    assert data["bound_hufan"][-1] == pytest.approx(1, abs=1e-6)
    assert np.all(data["delta1"] >= -1e-6) and np.all(data["delta2"] <= 1e-9)
    assert not data["applicable_monogamy"][5]


def test_sweep_deterministic_across_workers():
    spec = dict(family="GHZ_W_MIX", grid=6)
    one = sweep_csv(SweepSpec(**spec, workers=1))
    assert sweep_csv(SweepSpec(**spec, workers=1)) == one
    assert sweep_csv(SweepSpec(**spec, workers=2)) == one


def test_sweep_spec_validation():
    with pytest.raises(UsageError):
        SweepSpec("GGHZ", 1)
    with pytest.raises(UsageError):
        SweepSpec("GGHZ", 5, {"beta": 0.1})
    with pytest.raises(Exception):
        SweepSpec("GW", 5, {"phi": 9.0})
    with pytest.raises(Exception):
        SweepSpec("NOPE", 5)


def test_sweep_stdout_and_bad_family(capsys):
    assert main(["sweep", "--family", "GGHZ", "--grid", "2", "--workers", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 3
    assert main(["sweep", "--family", "NOPE", "--grid", "2"]) == 1


def test_sweep_unwritable_output(tmp_path, capsys):
    target = tmp_path / "missing" / "out.csv"
    assert main(["sweep", "--family", "GGHZ", "--grid", "2", "-o", str(target)]) == 2
    assert str(target) in capsys.readouterr().err


def test_check_t2_passes(capsys):
    assert main(["check", "--theorem", "T2", "--trials", "5", "--seed", "3"]) == 0
    f = _fields(capsys.readouterr().out)
    assert f["trials"] == "5" and f["violations"] == "0" and f["status"] == "OK"
    assert float(f["min_slack"]) >= -1e-6


def test_check_eq6_reports_violation(capsys):
    # seed 110 is a Ginibre state on which the max{0, delta} form fails
    assert main(["check", "--theorem", "EQ6", "--trials", "1", "--seed", "110"]) == 3
    f = _fields(capsys.readouterr().out)
    assert f["worst_seed"] == "110"
    assert f["violating_seeds"] == "110"
    assert float(f["min_slack"]) < -0.04
    assert "--seed 110" in f["status"]


def test_check_ghz_family_point(capsys):
    assert main(["check", "--theorem", "T2", "--family", "GGHZ", "--param", "beta=pi/4"]) == 0
    f = _fields(capsys.readouterr().out)
    assert float(f["min_slack"]) == pytest.approx(1.0, abs=1e-6)


def test_check_multipartite_and_hufan():
    s = cmd_check(CheckSpec("T3", trials=2, seed=7))
    assert s.ok and s.trials == 2
    s = cmd_check(CheckSpec("eq19", trials=2, seed=7, observables="x,y,z"))
    assert s.ok and s.theorem == "EQ19"
    s = cmd_check(CheckSpec("HUFAN", trials=3, source="RANDOM_PURE"))
    assert s.ok


def test_check_usage_errors():
    with pytest.raises(UsageError):
        CheckSpec("T9")
    with pytest.raises(UsageError):
        CheckSpec("T2", trials=0)
    assert main(["check", "--theorem", "T9"]) == 1
    for argv in (["check"], ["bogus"], ["sweep", "--family", "GGHZ", "--grid", "x"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 1


def test_check_output_is_deterministic(capsys):
    main(["check", "--theorem", "T1_16", "--trials", "3", "--seed", "20"])
    a = capsys.readouterr().out
    main(["check", "--theorem", "T1_16", "--trials", "3", "--seed", "20"])
    assert capsys.readouterr().out == a


def test_report_ghz_saturation(capsys):
    assert main(["report", "--family", "GGHZ", "--param", "beta=pi/4"]) == 0
    text = capsys.readouterr().out
    f = _fields(text)
    assert float(f["lhs_uncertainty"]) == pytest.approx(1, abs=1e-9)
    assert float(f["q_mu"]) == pytest.approx(1, abs=1e-12)
    assert "saturates" in text


def test_report_product_state_from_file(tmp_path, capsys):
    m = np.zeros((8, 8))
    m[0, 0] = 1
    path = tmp_path / "zero.txt"
    path.write_text("2 2 2\n" + "\n".join(" ".join(f"{v},0" for v in row) for row in m) + "\n")
    assert main(["report", "--state", str(path)]) == 0
    f = _fields(capsys.readouterr().out)
    assert float(f["d_ab"]) == pytest.approx(0, abs=1e-9)
    assert float(f["d_ac"]) == pytest.approx(0, abs=1e-9)
    assert float(f["bound_new"]) == pytest.approx(float(f["delta1"]), abs=1e-9)


def test_report_werner_not_monogamous(capsys):
    assert main(["report", "--family", "WERNER_GHZ", "--param", "p=0.5"]) == 0
    f = _fields(capsys.readouterr().out)
    assert f["applicable_monogamy"] == "false"
    assert f["bound_monogamy"] == "-"


def test_report_four_parts_shows_both_b_prime(capsys):
    assert main(["report", "--family", "RANDOM_GINIBRE", "--parts", "4", "--seed", "2"]) == 0
    f = _fields(capsys.readouterr().out)
    assert float(f["b_prime_printed"]) == pytest.approx(0.5, abs=1e-12)
    assert float(f["b_prime_chained"]) == pytest.approx(0.5, abs=1e-12)
    assert "eq19_slack" in f


def test_matrix_file_roundtrip(tmp_path):
    rho = random_ginibre((2, 2, 2), 4)
    path = tmp_path / "rho.txt"
    write_matrix_file(rho, path)
    assert np.array_equal(read_matrix_file(path).matrix, rho.matrix)


@pytest.mark.parametrize("body, line", [
    ("2 x\n", 1),
    ("2\n1,0 0,0\n0,0 1,0\n", 2),
    ("2\n1,0 0,0\n0,0 abc\n", 3),
    ("# comment\n2\n1,0 0,0\n", 3),
    ("2\n0.5,0 0.2,0\n0.1,0 0.5,0\n", 2),
])
def test_matrix_file_errors_carry_line(tmp_path, body, line):
    path = tmp_path / "bad.txt"
    path.write_text(body)
    with pytest.raises(ParseError) as err:
        read_matrix_file(path)
    assert err.value.line == line


def test_report_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 2 2\n1,0\n")
    assert main(["report", "--state", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["report", "--state", str(tmp_path / "absent.txt")]) == 2


def test_plotscript_werner(tmp_path):
    csv_path = tmp_path / "w.csv"
    csv_path.write_text(sweep_csv(SweepSpec("WERNER_GHZ", 5)))
    out = tmp_path / "plot.py"
    assert main(["plotscript", str(csv_path), "-o", str(out)]) == 0
    ns = {}
    exec(out.read_text().split("import matplotlib")[1].split("\n", 1)[1].split("fig, ax")[0], ns)
    assert ns["bound_hufan"] == pytest.approx([1] * 5, abs=1e-6)
    assert all(a >= b - 1e-9 for a, b in zip(ns["bound_new"], ns["bound_new"][1:]))
    compile(out.read_text(), str(out), "exec")


def test_plotscript_header_mismatch(tmp_path, capsys):
    csv_path = tmp_path / "x.csv"
    csv_path.write_text("a,b\n1,2\n")
    assert main(["plotscript", str(csv_path), "-o", str(tmp_path / "p.py")]) == 2
    assert "header" in capsys.readouterr().err


def test_plotscript_empty_body_warns(tmp_path, capsys):
    csv_path = tmp_path / "e.csv"
    csv_path.write_text(CSV_HEADER + "\n")
    out = tmp_path / "p.py"
    assert main(["plotscript", str(csv_path), "-o", str(out)]) == 0
    assert "warning" in capsys.readouterr().err
    assert "param = []" in out.read_text()


def test_werner_matrix_file_report_matches_family(tmp_path, capsys):
    path = tmp_path / "w.txt"
    write_matrix_file(make_werner_ghz(0.5), path)
    main(["report", "--state", str(path)])
    from_file = capsys.readouterr().out
    main(["report", "--family", "WERNER_GHZ", "--param", "p=0.5"])
    assert capsys.readouterr().out == from_file
