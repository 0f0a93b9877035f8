import pytest

from bandcorr import cli, lattice_sums, verify
from bandcorr.config import ConfigError, RunConfig, load_config


def write(tmp_path, text, name="run.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_config_roundtrip(tmp_path):
    cfg = load_config(write(tmp_path, 'dim = 2\nL = 64\nW = 4\nprofile = "gaussian"\neta = 0.001\n'))
    assert cfg.model().d == 2 and cfg.eta == 1e-3 and cfg.E1 == RunConfig().E1


def test_config_rejects_unknown_and_mistyped(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "Lx = 3\n"))
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, 'L = "big"\n'))
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(precision="quad")


def test_params_meanfield_exit_0(tmp_path, capsys):
    path = write(tmp_path, "L = 64\nW = 16\nE1 = -0.0005\nE2 = 0.0005\neta = 1e-5\n")
    assert cli.main(["params", "--config", path]) == 0
    assert "regime = mean-field" in capsys.readouterr().out


def test_params_W_equals_L_exit_1(tmp_path):
    assert cli.main(["params", "--config", write(tmp_path, "L = 16\nW = 16\n")]) == 1


def test_params_eta_above_omega_exit_1(tmp_path):
    path = write(tmp_path, "E1 = -0.001\nE2 = 0.001\neta = 0.01\n")
    assert cli.main(["params", "--config", path]) == 1


def test_malformed_config_exit_2(tmp_path, capsys):
    assert cli.main(["params", "--config", write(tmp_path, "L = = 3\n")]) == 2
    assert "config error" in capsys.readouterr().err


def test_usage_error_exit_2():
    assert cli.main(["figure", "4"]) == 2


@pytest.mark.parametrize("fig,header", [
    (1, "b,value"), (2, "b,re_s2"), (3, "b,exact,asymptotic_paper,asymptotic_resolved"),
])
def test_figure_csv_deterministic(tmp_path, fig, header):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["figure", str(fig), "--out", str(a)]) == 0
    assert cli.main(["figure", str(fig), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == header and len(lines) == 401


def test_figure_precision_loss_leaves_empty_field(tmp_path, monkeypatch):
    def lossy(b, precision="auto"):
        raise lattice_sums.PrecisionLossError("lost")

    monkeypatch.setattr(lattice_sums, "re_s2_theta", lossy)
    out = tmp_path / "f2.csv"
    assert cli.main(["figure", "2", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1].endswith(",")


def test_sum_and_corr(capsys):
    assert cli.main(["sum", "s2", "--b", "5", "--R", "512"]) == 0
    assert "re_s2_theta" in capsys.readouterr().out
    assert cli.main(["corr", "--dim", "1"]) == 0
    assert capsys.readouterr().out.startswith("L,W,omega")


def test_crossover_and_zeros(capsys):
    assert cli.main(["crossover", "--L", "1e6", "--W", "1e3", "--omega", "1e-3"]) == 0
    assert "bracket_ok = True" in capsys.readouterr().out
    assert cli.main(["zeros", "--b-max", "20"]) == 0
    assert capsys.readouterr().out.startswith("k,b_k_predicted")


def test_verify_identities_green(capsys):
    assert cli.main(["verify", "identities"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("TAP version 13") and "not ok" not in out


def test_verify_crossover_reports_gamma(capsys):
    assert cli.main(["verify", "crossover"]) == 0
    assert "# gamma = " in capsys.readouterr().out


def test_sign_flip_in_s1_closed_fails_oracles(monkeypatch):
    original = lattice_sums.s1_closed
    monkeypatch.setattr(lattice_sums, "s1_closed", lambda zb: -original(zb))
    checks = verify.run_suite("oracles")
    failed = [c.name for c in checks if not c.ok]
    assert failed and all("s1_closed" in name for name in failed)
    assert cli.main(["verify", "oracles"]) == 1


def test_mc_respects_samples(tmp_path, capsys):
    path = write(tmp_path, "L = 64\nW = 4\nE1 = -0.1\nE2 = 0.1\neta = 0.05\n")
    out = tmp_path / "mc.csv"
    assert cli.main(["mc", "--config", path, "--samples", "60", "--seed", "3", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 61
    assert "n_samples = 60" in capsys.readouterr().err


def test_verify_mc_budget(capsys):
    assert cli.main(["verify", "mc", "--samples", "20"]) == 0
    assert "# 20 samples" in capsys.readouterr().out
