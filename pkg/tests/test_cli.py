import pytest

from tagwalk.cli import main
from tagwalk.group import read_instance, validate_instance


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params_gen(tmp_path, capsys):
    path = tmp_path / "p19.txt"
    assert run(capsys, "--seed", "3", "params", "gen", "--eta", "19", "--out", str(path))[0] == 0
    inst = read_instance(path)
    assert inst.params.q == 524287 and validate_instance(inst) is None
    code, out, _ = run(capsys, "params", "gen", "--eta", "3")
    assert code == 0 and "q=7\n" in out


def test_solve_from_file(tmp_path, capsys):
    path = tmp_path / "p.txt"
    run(capsys, "params", "gen", "--eta", "19", "--seed", "8", "--out", str(path))
    x = read_instance(path).x_hidden
    code, out, _ = run(capsys, "dlp", "solve", "--params", str(path), "--walk", "modified", "--r", "4", "--l", "10")
    assert code == 0
    header, row = out.splitlines()
    assert header == "walk,r,delta,seed,steps,mults,dps,degenerate,x,l,tag_ops"
    assert row.split(",")[8] == str(x)


def test_solve_is_deterministic(capsys):
    a = run(capsys, "dlp", "solve", "--eta", "19", "--seed", "2")[1]
    b = run(capsys, "--seed", "2", "dlp", "solve", "--eta", "19")[1]
    assert a == b


def test_stats_and_table(capsys):
    code, out, _ = run(capsys, "stats", "rho", "--r", "20", "--trials", "1000")
    assert code == 0
    mean = float(out.splitlines()[1].split(",")[3])
    assert 0.95 <= mean <= 1.10
    code, out, _ = run(capsys, "table", "info", "--r", "16", "--l", "10")
    assert code == 0 and out.splitlines()[1].split(",")[2] == "5311735"
    code, out, _ = run(capsys, "stats", "rho", "--r", "4", "--trials", "20", "--table", "qq")
    assert out.splitlines()[0] == "p,theoretical,empirical" and len(out.splitlines()) == 21


def test_bench_appends_single_header(tmp_path, capsys):
    out = tmp_path / "b.csv"
    for walk in ("original", "modified"):
        assert run(capsys, "bench", "iterate", "--eta", "19", "--walk", walk, "--iterations", "500", "--out", str(out))[0] == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3 and lines[0].startswith("walk,")
    assert lines[2].split(",")[5] == "50"


def test_exit_codes(capsys):
    assert run(capsys, "params", "gen", "--eta", "20")[0] == 3
    assert run(capsys, "dlp", "solve", "--walk", "modified", "--r", "16", "--strategy", "dense")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["dlp", "solve", "--bogus"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "stats", "rho", "--eta", "19", "--q", "6")
    assert code == 3 and "not prime" in err
