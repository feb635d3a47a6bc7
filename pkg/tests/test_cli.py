import json
from fractions import Fraction
from pathlib import Path

import pytest
from mpmath import mp, mpf

from ellperiods import cli, pde
from ellperiods.cli import UsageError, main, parse_dyadic
from ellperiods.pde import PDEReport, RichardsonReport
from ellperiods.serialize import InputFormatError, parse_points

FIXTURES = Path(__file__).parent / "fixtures"
REF = str(FIXTURES / "reference_points.json")


def run(capsys, *argv, environ=None):
    code = main(list(argv), environ or {})
    out, err = capsys.readouterr()
    return code, out, err


def test_check_reference(capsys):
    code, out, _ = run(capsys, "check", "--points", REF)
    assert code == 0
    rec = json.loads(out)
    assert rec["certified"] is True and rec["general_position"]["ok"] is True
    assert rec["genericity"]["disc_D_nonzero"] is True


def test_check_defaults_to_reference(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0
    assert json.loads(out)["points"][4] == ["1", "2", "3"]


def test_check_collinear(capsys):
    code, out, _ = run(capsys, "check", "--points", str(FIXTURES / "collinear_points.json"))
    assert code == 1
    gp = json.loads(out)["general_position"]
    assert gp["condition"] == "three collinear"
    assert gp["indices"] == [1, 2, 3]
    assert gp["witness"] == "X"


def test_check_cuspidal_is_not_generic(capsys):
    code, out, _ = run(capsys, "check", "--points", str(FIXTURES / "cuspidal_points.json"))
    assert code == 1
    rec = json.loads(out)
    assert rec["general_position"]["ok"] is True
    assert rec["genericity"]["error"] == "NotGeneric"


def test_compute_cuspidal_is_rejected(capsys):
    code, out, err = run(capsys, "compute", "--points", str(FIXTURES / "cuspidal_points.json"))
    assert code == 1 and out == ""
    report = json.loads(err)
    assert report["error"] == "NotGeneric" and report["module"] == "geometry"


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('[["1", "0", "0"],\n ["0", "1" "0"]]')
    code, _, err = run(capsys, "check", "--points", str(bad))
    assert code == 2
    assert "line 2" in err


def test_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "check", "--points", str(tmp_path / "nope.json"))
    assert code == 2


def test_wrong_point_count(tmp_path, capsys):
    f = tmp_path / "seven.json"
    f.write_text(json.dumps(json.loads(Path(REF).read_text())[:7]))
    code, out, _ = run(capsys, "compute", "--points", str(f))
    assert code == 1 or code == 2


def test_parse_points_positions():
    with pytest.raises(InputFormatError, match="point 1 coordinate 2"):
        parse_points('[["1","0","0"],["0","1","x"]]')
    with pytest.raises(InputFormatError, match="point 0"):
        parse_points('[["1","0"]]')
    with pytest.raises(InputFormatError, match="coordinate 0"):
        parse_points('[[1.5, 0, 0]]')
    assert parse_points('{"points": [[" 2 ", 3, "-4"]]}') == [(2, 3, -4)]


def test_usage_errors(capsys):
    assert run(capsys, "compute", "--precision", "32")[0] == 2
    assert run(capsys, "verify-pde", "--delta", "0.3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_dyadic_parsing():
    assert parse_dyadic("2^-20") == Fraction(1, 2 ** 20)
    assert parse_dyadic("2**-3") == Fraction(1, 8)
    assert parse_dyadic("1/1024") == Fraction(1, 1024)
    assert parse_dyadic("0.5") == Fraction(1, 2)
    with pytest.raises(UsageError):
        parse_dyadic("two")


def test_environment_overrides(capsys, tmp_path):
    out = tmp_path / "out.json"
    env = {"ELLPERIODS_PRECISION": "128", "ELLPERIODS_OUT": str(out), "ELLPERIODS_POINTS": REF}
    code, stdout, _ = run(capsys, "compute", environ=env)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["precision_bits"] == 128
    # a flag beats the environment
    args = cli.build_parser().parse_args(["compute", "--precision", "96"])
    assert cli.resolve_config(args, env).precision == 96
    with pytest.raises(UsageError):
        cli.resolve_config(cli.build_parser().parse_args(["compute"]), {"ELLPERIODS_PRECISION": "many"})


def test_compute_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "compute", "--precision", "128", "--out", str(a))[0] == 0
    assert run(capsys, "compute", "--precision", "128", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rec = json.loads(a.read_text())
    assert list(rec) == ["points", "g4", "g6", "branch_points", "H", "gram", "residuals",
                         "precision_bits", "sign_convention"]
    assert len(rec["H"]) == 8 and all(len(r) == 8 for r in rec["H"])
    assert mpf(rec["residuals"]["orthonormality"]) < mpf(10) ** -10
    assert all(isinstance(e["re"], str) for row in rec["H"] for e in row)


def test_compute_precisions_agree(capsys, result256):
    code, out, _ = run(capsys, "compute", "--precision", "128")
    assert code == 0
    H = json.loads(out)["H"]
    with mp.workprec(256):
        for r in range(8):
            for i in range(8):
                z = result256.period.M[r][i].mid
                assert abs(mpf(H[r][i]["re"]) - z.real) < mpf(10) ** -30
                assert abs(mpf(H[r][i]["im"]) - z.imag) < mpf(10) ** -30


def fake_report(delta, scale, worst_c=None):
    n = 8
    ec = [[mpf(0)] * n for _ in range(n)]
    ec[1][4] = worst_c if worst_c is not None else scale
    ea = [[scale / 2] * n for _ in range(n)]
    return PDEReport(Fraction(delta), mpf(50), scale / 2, scale / 3, ec[1][4], mpf(10) ** -70,
                     mpf(10) ** -15, mpf(10) ** -14, None, ea, [[mpf(0)] * n] * n, ec)


def fake_richardson(worst_c=None):
    def richardson(cfg, delta, bits, directions, progress=None):
        coarse = fake_report(delta, mpf(4) * 10 ** -12, worst_c)
        fine = fake_report(Fraction(delta) / 2, mpf(10) ** -12,
                           None if worst_c is None else worst_c / 4)
        ratios = {k: getattr(coarse, k) / getattr(fine, k) for k in ("residual_a", "residual_b", "residual_c")}
        return RichardsonReport(coarse, fine, ratios, [[mpf(1)] * 8] * 8)
    return richardson


def test_verify_pde_wiring(monkeypatch, capsys):
    monkeypatch.setattr(pde, "richardson", fake_richardson())
    code, out, _ = run(capsys, "verify-pde", "--precision", "128", "--seed", "5")
    assert code == 0
    rec = json.loads(out)
    assert rec["criteria"]["residuals_ok"] and rec["criteria"]["ratios_ok"]
    assert len(rec["directions"]) == 8
    assert rec["report"]["delta"] == "1/1048576"
    assert rec["half_step_report"]["delta"] == "1/2097152"


def test_verify_pde_reports_located_failure(monkeypatch, capsys):
    monkeypatch.setattr(pde, "richardson", fake_richardson(worst_c=mpf("0.02")))
    code, out, _ = run(capsys, "verify-pde", "--delta", "2^-20")
    assert code == 1
    rec = json.loads(out)
    assert rec["criteria"]["residuals_ok"] is False
    assert rec["report"]["worst"]["c"] == [2, 5]


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "ellperiods", "check", "--points", REF],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["certified"] is True
