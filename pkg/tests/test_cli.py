import csv
import json
from fractions import Fraction
from pathlib import Path

import pytest

from agpir.cli import main
from agpir.config import ConfigError, load_config, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="cfg.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_shipped_configs_parse():
    for p in sorted(CONFIGS.glob("*.toml")):
        cfg = load_config(p)
        assert cfg.field.q in (11, 13, 61, 256)


@pytest.mark.parametrize("text, msg", [
    ("[scheme]\nX = 1\n", "field"),
    ("[field]\np = 12\n", "field"),
    ("[field]\np = 13\n[scheme]\nX = -1\n", "X"),
    ("[field]\np = 13\n[scheme]\nkind = 'other'\n", "kind"),
    ("[field]\np = 13\n[curve]\nF = [1, 99, 1]\n", "canonical"),
    ("[field]\np = 13\n[sweep]\nxt = [5, 2]\n", "xt"),
])
def test_config_errors(text, msg):
    import tomli

    with pytest.raises(ConfigError, match=msg):
        parse_config(tomli.loads(text))


def test_unreadable_config(tmp_path, capsys):
    code, _, err = run(capsys, "scheme", "plan", "--config", tmp_path / "missing.toml")
    assert code == 2 and "cannot read" in err
    bad = write(tmp_path, "[field\n")
    assert run(capsys, "scheme", "plan", "--config", bad)[0] == 2


def test_curve_info(capsys):
    code, out, _ = run(capsys, "curve", "info", "--config", CONFIGS / "f256_elliptic.toml", "--pretty")
    assert code == 0
    assert "rational points: 288" in out
    assert "x-values without rational points: 112" in out


def test_curve_info_invalid(tmp_path, capsys):
    cfg = write(tmp_path, "[field]\np = 11\n[curve]\nF = [0, 0, 0, 1]\n")
    assert run(capsys, "curve", "info", "--config", cfg)[0] == 1


def test_curve_search(tmp_path, capsys):
    out = tmp_path / "curves.csv"
    code, _, _ = run(capsys, "curve", "search", "--p", 11, "--genus", 1, "--min-points", 18, "--output", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "F;H;num_points;num_y_zeros"
    assert all(l.split(";")[2] == "18" for l in lines[1:])
    manifest = json.loads((tmp_path / "curves.csv.manifest.json").read_text())
    assert manifest["command"] == "curve search" and manifest["rng"] == "numpy.PCG64"


def test_curve_search_guard(capsys):
    code, _, err = run(capsys, "curve", "search", "--p", 13, "--genus", 3, "--min-points", 5, "--budget", 100)
    assert code == 3 and "guard" in err


def test_scheme_plan(tmp_path, capsys):
    out = tmp_path / "pts.csv"
    code, text, _ = run(capsys, "scheme", "plan", "--config", CONFIGS / "f11_elliptic18.toml", "--output", out)
    assert code == 0
    assert "J = 2, L = 3, N = 13" in text and "rate: 3/13" in text
    assert len(out.read_text().splitlines()) == 14


def test_scheme_verify(capsys):
    code, text, _ = run(capsys, "scheme", "verify", "--config", CONFIGS / "f11_elliptic18.toml")
    assert code == 0 and "PASS" in text
    code, text, _ = run(capsys, "scheme", "verify", "--config", CONFIGS / "f13_genus2_lsss.toml")
    assert code == 0 and "d_perp - 1 = 4" in text


def test_scheme_verify_failure(capsys):
    code, text, _ = run(capsys, "scheme", "verify", "--config", CONFIGS / "f13_genus2_lsss.toml", "--claim", 5)
    assert code == 1 and "FAIL" in text


def test_audit_genus2(tmp_path, capsys):
    out = tmp_path / "sigma.csv"
    code, text, _ = run(capsys, "scheme", "audit", "--config", CONFIGS / "f13_genus2_lsss.toml", "--output", out)
    assert code == 0
    rows = {int(r["U"]): r for r in csv.DictReader(out.open())}
    assert (rows[5]["insecure"], rows[5]["total"]) == ("92", "42504")
    assert (rows[6]["insecure"], rows[6]["total"]) == ("8684", "134596")
    assert float(rows[5]["sigma"]) == pytest.approx(0.0022, abs=1e-4)


def test_audit_mds_genus0(capsys):
    code, text, _ = run(capsys, "scheme", "audit", "--config", CONFIGS / "genus0_f13.toml")
    assert code == 0
    assert "sigma[query](2) = 0/" in text
    assert "sigma[query](3) = 56/56" in text


def test_pir_run(tmp_path, capsys):
    t1, t2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for t in (t1, t2):
        code, text, _ = run(capsys, "pir", "run", "--config", CONFIGS / "f11_elliptic18.toml", "--mu", 2, "--transcript", t)
        assert code == 0 and "decoded matches" in text and "rate: 3/13" in text
    assert t1.read_bytes() == t2.read_bytes()
    assert (tmp_path / "a.csv.manifest.json").exists()


def test_pir_run_threads_same_transcript(tmp_path, capsys):
    t1, t2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "pir", "run", "--config", CONFIGS / "f13_genus2_pir.toml", "--mu", 1, "--transcript", t1)
    run(capsys, "pir", "run", "--config", CONFIGS / "f13_genus2_pir.toml", "--mu", 1, "--transcript", t2, "--threads", 3)
    assert t1.read_bytes() == t2.read_bytes()


def test_pir_run_with_files(tmp_path, capsys):
    files = write(tmp_path, "1,2,3,4\n5,6,7,8\n9,10,11,12\n", "files.csv")
    code, text, _ = run(capsys, "pir", "run", "--config", CONFIGS / "genus0_f13.toml", "--mu", 3, "--files", files)
    assert code == 0 and "retrieved file 3: 9 10 11 12" in text
    bad = write(tmp_path, "1,2\n", "bad.csv")
    assert run(capsys, "pir", "run", "--config", CONFIGS / "genus0_f13.toml", "--mu", 1, "--files", bad)[0] == 2


def test_pir_run_bad_mu(capsys):
    code, _, err = run(capsys, "pir", "run", "--config", CONFIGS / "f11_elliptic18.toml", "--mu", 7)
    assert code == 2 and "--mu" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scheme"])
    assert exc.value.code == 2
    assert main(["curve", "search", "--genus", "1", "--min-points", "3"]) == 2


def test_rate_sweep_f256(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "rate", "sweep", "--config", CONFIGS / "f256_elliptic.toml", "--xt", 49, 50,
                     "--output", out)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["xt", "construction", "genus", "L", "N", "rate_num", "rate_den", "rate"]
    at50 = {r["construction"]: r for r in rows if r["xt"] == "50"}
    assert (at50["genus0"]["L"], at50["genus0"]["N"]) == ("78", "178")
    assert (at50["curve"]["L"], at50["curve"]["N"]) == ("177", "285")
    for r in rows:
        assert Fraction(int(r["rate_num"]), int(r["rate_den"])) == Fraction(int(r["L"]), int(r["N"]))
        assert float(r["rate"]) == pytest.approx(int(r["rate_num"]) / int(r["rate_den"]), abs=1e-6)


def test_rate_sweep_infeasible_and_monotone(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run(capsys, "rate", "sweep", "--config", CONFIGS / "f61_sweep.toml", "--output", out)[0] == 0
    rows = list(csv.DictReader(out.open()))
    g0 = [float(r["rate"]) for r in rows if r["construction"] == "genus0"]
    assert all(a > b for a, b in zip(g0, g0[1:]))
    assert rows[-3]["construction"] == "genus0" and rows[-3]["rate"] == "0"
    first = out.read_bytes()
    run(capsys, "rate", "sweep", "--config", CONFIGS / "f61_sweep.toml", "--output", out)
    assert out.read_bytes() == first
