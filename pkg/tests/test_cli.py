import pytest

from latzeta import cli
from latzeta.errors import PreconditionError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_shells_e8(capsys):
    code, out, _ = run(capsys, "shells", "--lattice", "E8", "--depth", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["k,m_k,a_k", "1,2/1,240", "2,4/1,2160", "3,6/1,6720"]


def test_shells_integers(capsys):
    code, out, _ = run(capsys, "shells", "--lattice", "Zn", "--dim", "1", "--depth", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[1:] == ["1,1/1,2", "2,4/1,2"]


def test_bad_lattice(capsys):
    code, _, err = run(capsys, "shells", "--lattice", "nosuch")
    assert code == 2 and "nosuch" in err
    code, _, _ = run(capsys, "shells")
    assert code == 2
    code, _, _ = run(capsys, "shells", "--file", "/nonexistent/lattice.json")
    assert code == 2


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_design_table(capsys):
    code, out, _ = run(capsys, "design", "--lattice", "D4", "--depth", "5", "--t", "4")
    assert code == 0
    rows = out.splitlines()[2:]
    assert len(rows) == 5 and all(r.split()[3:5] == ["pass", "pass"] for r in rows)


def test_zeta_at_zero(capsys):
    code, out, _ = run(capsys, "zeta", "--lattice", "E8", "--s", "0", "--s", "5", "--format", "json")
    assert code == 0
    import json

    rows = json.loads(out)
    assert abs(float(rows[0]["zeta"]) + 1) <= 1e-10
    assert "e" in rows[1]["zeta"] and "e" in rows[1]["err"]


def test_pole_and_resource_exit_codes(capsys):
    code, _, _ = run(capsys, "zeta", "--lattice", "E8", "--s", "4")
    assert code == 2
    code, _, _ = run(capsys, "shells", "--lattice", "E8", "--depth", "40", "--budget", "1000")
    assert code == 3


def test_precondition_exit_code(capsys, monkeypatch):
    def boom(args):
        raise PreconditionError("shells are not 4-designs")

    monkeypatch.setitem(cli.COMMANDS, "design", boom)
    code, _, err = run(capsys, "design", "--lattice", "D4")
    assert code == 4 and "4-designs" in err


def test_theta_and_strip(capsys):
    code, out, _ = run(capsys, "theta", "--lattice", "D4", "--y", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "y,theta,err,S,S_err,S_sign"
    code, out, _ = run(capsys, "strip", "--lattice", "A2", "--points", "5", "--tol", "1e-8", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "s,zeta,err,sign" and len(lines) == 6
    assert all(r.endswith(",-1") for r in lines[1:])


def test_extremality_small(capsys):
    code, out, _ = run(capsys, "extremality", "--lattice", "D4", "--s", "3", "--seed", "1", "--depth", "3")
    assert code == 0
    assert "  verdict: yes" in out.splitlines()


def test_catalog_and_out_file(capsys, tmp_path):
    target = tmp_path / "cat.csv"
    code, out, _ = run(capsys, "catalog", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "name,dim,det,even,provenance"
    assert "Leech,24,1/1,true,catalog" in lines


def test_output_is_deterministic(capsys):
    argv = ("extremality", "--lattice", "A2", "--s", "2", "--seed", "5", "--format", "csv")
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a == b and a[0] == 0
