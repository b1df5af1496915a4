from __future__ import annotations

from pathlib import Path

import pytest

from qdimer.cli import run

DOMAINS = Path(__file__).resolve().parents[1] / "domains"


def cli(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_partition(capsys):
    code, out, _ = cli(capsys, "partition", "--domain", DOMAINS / "hex222.dom", "--q", "1")
    assert code == 0
    assert out.startswith("[config]")
    assert "Z = 20/1" in out and "seed: 0" in out


def test_partition_q_triple(capsys):
    code, out, _ = cli(capsys, "partition", "--domain", DOMAINS / "hex111.dom",
                       "--q12", "2", "--q23", "3", "--q31", "1/2")
    assert code == 0 and "Z = 4/1" in out


def test_param_mismatch(capsys):
    code, _, err = cli(capsys, "partition", "--domain", DOMAINS / "hex111.dom",
                       "--q", "2", "--q12", "3", "--q23", "1", "--q31", "1")
    assert code == 1 and "ParamMismatch" in err


def test_containment_exit_code(capsys):
    code, _, err = cli(capsys, "domain-check", "--domain", DOMAINS / "bad_containment.dom")
    assert code == 1 and "ContainmentViolated" in err


def test_usage_errors_exit_one(capsys):
    assert cli(capsys, "partition", "--domain", DOMAINS / "hex111.dom")[0] == 1
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == 1


def test_domain_check(capsys):
    code, out, _ = cli(capsys, "domain-check", "--domain", DOMAINS / "deg3-small.dom")
    assert code == 0
    assert "deg: 3" in out and "[segments]" in out


def test_resolution_summary(capsys):
    code, out, _ = cli(capsys, "resolution", "--domain", DOMAINS / "hex333.dom", "--q", "2/3")
    assert code == 0
    assert "generators: 2 @ deg 1; relations: 2 @ deg 2" in out


def test_marked_resolution_jumps_at_q_one(capsys):
    code, _, err = cli(capsys, "resolution", "--domain", DOMAINS / "hex333.dom", "--q", "1", "--marked")
    assert code == 2 and "NongenericQ" in err


def test_kernel_and_boundary(capsys):
    code, out, _ = cli(capsys, "kernel", "--domain", DOMAINS / "hex222.dom", "--q", "2/3")
    assert code == 0
    code, out, _ = cli(capsys, "boundary", "--domain", DOMAINS / "hex333.dom", "--q", "2/3")
    assert code == 0 and "height" in out


def test_move(capsys):
    code, out, _ = cli(capsys, "move", "--domain", DOMAINS / "hex222.dom", "--q", "3/7", "--segment", "0")
    assert code == 0


def test_annihilator(capsys):
    code, out, _ = cli(capsys, "annihilator", "--domain", DOMAINS / "hex333.dom", "--q", "3/7")
    assert code == 0


def test_inverse_csv(capsys):
    code, out, _ = cli(capsys, "inverse", "--domain", DOMAINS / "hex111.dom", "--q", "1")
    assert code == 0 and "," in out


def test_sample_deterministic(capsys):
    args = ("sample", "--domain", DOMAINS / "hex222.dom", "--q", "1/2", "--count", "3", "--seed", "7")
    a = cli(capsys, *args)[1]
    b = cli(capsys, *args)[1]
    assert a == b and "[tiling 2]" in a


def test_sample_mcmc_and_svg(capsys, tmp_path):
    code, out, _ = cli(capsys, "sample", "--domain", DOMAINS / "hex222.dom", "--q", "1", "--method", "mcmc",
                       "--format", "svg", "--out-dir", tmp_path)
    assert code == 0
    assert (tmp_path / "sample.svg").read_text().startswith("<svg")


def test_heatmap_files(capsys, tmp_path):
    code, out, _ = cli(capsys, "heatmap", "--domain", DOMAINS / "hex222.dom", "--q", "1", "--samples", "20",
                       "--out-dir", tmp_path, "--name", "h")
    assert code == 0
    assert (tmp_path / "h.svg").exists() and (tmp_path / "h.csv").exists()


def test_bad_sample_count(capsys):
    code, _, err = cli(capsys, "sample", "--domain", DOMAINS / "hex111.dom", "--q", "1", "--count", "0")
    assert code == 1


def test_selftest_single(capsys, tmp_path):
    code, out, _ = cli(capsys, "selftest", "--criteria", "2", "--out-dir", tmp_path)
    assert code == 0 and "[PASS] criterion 2" in out
