import json
import shutil
import subprocess

import pytest

from minklab.cli import build_parser, config_from_args, main
from minklab.plane import Plane


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_build_writes_counts(tmp_path, capsys):
    out = tmp_path / "p7.mink"
    code, text = run(["build", "--pgl2", "7", "--out", str(out)], capsys)
    assert code == 0 and "points=64 circles=336" in text
    P = Plane.load(out)
    assert (P.n_points, P.n_circles) == (64, 336)


def test_symmetry_check_fails_on_nearfield(capsys):
    code, text = run(["check", "--axiom", "S", "--nearfield9"], capsys)
    assert code == 1 and "witness" in text


def test_check_structured(capsys):
    code, text = run(["check", "--pgl2", "4", "--format", "structured"], capsys)
    tree = json.loads(text)
    assert code == 0
    assert set(tree["reports"]) == {"H", "T", "S", "G"}
    assert tree["run"]["model"] == "pgl2(4)"


def test_direct_mode_is_labelled(capsys):
    code, text = run(["check", "--pgl2", "4", "--axiom", "G", "--mode", "direct", "--budget", "500"], capsys)
    assert code == 0 and "G/direct" in text and "sampled(seed=0, n=500)" in text


def test_matrix_deterministic_and_exit_3(capsys):
    outs = set()
    for w in ("1", "4", "1"):
        code, text = run(["matrix", "--pgl2", "4", "--workers", w], capsys)
        assert code == 3  # char-2 statements for odd characteristic are skipped
        outs.add(text)
    assert len(outs) == 1
    assert "FAIL" not in outs.pop()


def test_matrix_round_trip(tmp_path, capsys):
    path = tmp_path / "p4.mink"
    run(["build", "--pgl2", "4", "--out", str(path)], capsys)
    _, direct = run(["matrix", "--pgl2", "4"], capsys)
    _, loaded = run(["matrix", "--file", str(path)], capsys)
    assert direct.splitlines()[1:] == loaded.splitlines()[1:]


def test_verify_selected(capsys):
    code, text = run(["verify", "--pgl2", "5", "--stmt", "P2.1,L4.1", "--stmt", "T4.1"], capsys)
    assert code == 0
    assert [ln.split()[0] for ln in text.splitlines()[1:] if not ln.startswith(" ")] == ["P2.1", "L4.1", "T4.1"]


def test_perm_commands(capsys):
    code, text = run(["perm", "--pgl2", "5", "--base-circle", "auto", "--closure", "--decompose", "5", "7"], capsys)
    assert code == 0 and "closure" in text and "decompose" in text
    code, text = run(["perm", "--pgl2", "4", "--base-circle", "0", "--stmt", "R4.2"], capsys)
    assert code == 0


def test_decompose_hypothesis_failure_skips(capsys):
    # circle 0 is the base circle; find an orthogonal one through the CLI
    from conftest import model
    from minklab.symmetry import orth_matrix

    P = model("pgl2", 4)
    K = int(orth_matrix(P)[0].nonzero()[0][0])
    q = next(int(x) for x in P.circles[0] if not P.mask[K, x])
    code, text = run(["perm", "--pgl2", "4", "--decompose", str(K), str(q)], capsys)
    assert code == 3 and "hypothesis-not-met" in text


@pytest.mark.parametrize("argv", [
    ["check"],
    ["check", "--pgl2", "5", "--nearfield9"],
    ["verify", "--pgl2", "5", "--stmt", "Z1.1"],
    ["bogus", "--pgl2", "5"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_input_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.mink"
    bad.write_text("MINK v1 n=3\nGEN1\n")
    assert main(["check", "--file", str(bad)]) == 2
    assert main(["check", "--pgl2", "6"]) == 2
    assert main(["perm", "--pgl2", "5"]) == 2
    assert main(["perm", "--pgl2", "5", "--closure", "--base-circle", "999"]) == 2


def test_seed_from_environment(monkeypatch):
    p = build_parser()
    monkeypatch.setenv("MINKLAB_SEED", "42")
    assert config_from_args(p.parse_args(["check", "--pgl2", "5"])).seed == 42
    assert config_from_args(p.parse_args(["check", "--pgl2", "5", "--seed", "1"])).seed == 1
    monkeypatch.delenv("MINKLAB_SEED")
    assert config_from_args(p.parse_args(["check", "--pgl2", "5"])).seed == 0


@pytest.mark.skipif(shutil.which("minklab") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["minklab", "check", "--pgl2", "3", "--axiom", "H"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[1].startswith("H ")
