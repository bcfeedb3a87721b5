from pathlib import Path

import numpy as np
import pytest

from qpwc.checks import (
    CHECKS,
    REPORT_HEADER,
    SWEEP_HEADER,
    format_report,
    run_sweep,
    run_verify,
    select_checks,
)
from qpwc.cli import main
from qpwc.config import DEFAULT_CONFIG, parse_config

ANCHOR_TABLE = {
    "Eq 2.1", "Eq 2.2", "Eq 2.3", "Eq 2.5", "Eq 2.6", "Eq 2.7",
    "Eq 3.3", "Eq 3.4", "Eq 3.5", "Eq 3.6", "Eq 3.7", "Eq 3.9",
    "Eq 3.10", "Eq 3.11", "Eq 3.15", "Eq 3.17", "Eq 3.18", "Eq 3.19",
    "Eq 4.2", "Eq 4.3", "Eq 4.4", "Eq 4.5", "Eq 4.6", "Eq 4.8",
    "Eq 4.9", "Eq 4.10", "Eq 4.11", "Eq 5.1", "Eq 5.2",
}


@pytest.fixture(scope="module")
def default_cfg_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "default.cfg"
    path.write_text(DEFAULT_CONFIG)
    return path


def strip_timing(report: str) -> str:
    lines = report.splitlines()
    return "\n".join([lines[0]] + ["|".join(l.split("|")[:-1]) for l in lines[1:]])


def test_config_parsing_rejects_garbage():
    with pytest.raises(ValueError):
        parse_config("this is not a config")


def test_config_q0_and_psi0_parsers():
    from qpwc.config import parse_psi0, parse_q0
    from qpwc.heisenberg import pauli_algebra_residual

    assert pauli_algebra_residual(parse_q0("pauli")) < 1e-14
    assert pauli_algebra_residual(parse_q0("rotated:0.7,1.3")) < 1e-12
    with pytest.raises(ValueError):
        parse_q0("rotated:0.7")
    with pytest.raises(ValueError):
        parse_q0("mystery")
    assert np.allclose(parse_psi0("zero").amplitudes, [1, 0])
    with pytest.raises(ValueError):
        parse_psi0("sideways")


def test_rotated_q0_universe_passes_descriptor_checks():
    from qpwc.checks import RunContext, CHECKS_BY_ID

    cfg = parse_config(DEFAULT_CONFIG.replace("q0=pauli", "q0=rotated:0.6,2.1"))
    ctx = RunContext(cfg)
    for check_id in ("heis.pauli_universal", "heis.relative_pauli", "heis.no_evolution"):
        check = CHECKS_BY_ID[check_id]
        assert check.fn(ctx) <= check.tolerance


def test_pair_from_config_sweep_scaling():
    from qpwc.config import pair_from_config

    cfg = parse_config(DEFAULT_CONFIG)
    pair = pair_from_config(cfg, d=8)
    assert pair.c1.d == 8 and pair.c2.d == 16  # keeps the shipped 1:2 ratio
    no_d2 = {k: v for k, v in cfg.items() if k not in ("d2", "rate")}
    pair = pair_from_config(no_d2, d=8)
    assert pair.c1.d == pair.c2.d == 8


def test_sweep_result_validation():
    from qpwc.checks import SweepResult

    with pytest.raises(ValueError):
        SweepResult("x", (8, 16), (1.0,), False)
    with pytest.raises(ValueError):
        SweepResult("x", (16, 8), (1.0, 2.0), False)


def test_every_check_has_a_table_anchor_and_unique_id():
    ids = [c.check_id for c in CHECKS]
    assert len(ids) == len(set(ids))
    for c in CHECKS:
        assert c.anchor in ANCHOR_TABLE


def test_report_format_fields():
    cfg = parse_config(DEFAULT_CONFIG)
    results = run_verify(cfg, filter_text="clock.period")
    report = format_report(results)
    lines = report.strip().splitlines()
    assert lines[0] == REPORT_HEADER
    for line in lines[1:]:
        fields = line.split("|")
        assert len(fields) == 7
        assert fields[1] in ANCHOR_TABLE
        assert fields[5] in ("true", "false")


def test_filter_selects_by_anchor_substring():
    selected = select_checks("eq4.8")
    assert selected
    assert all(c.anchor == "Eq 4.8" for c in selected)


def test_filter_selects_by_id_substring():
    selected = select_checks("sync.")
    assert {c.check_id for c in selected} == {
        c.check_id for c in CHECKS if c.check_id.startswith("sync.")
    }


def test_tolerance_override_applies():
    cfg = parse_config(DEFAULT_CONFIG + "tol.clock.period_identity=1e-30\n")
    results = run_verify(cfg, filter_text="clock.period_identity")
    assert len(results) == 1
    assert results[0].tolerance == 1e-30
    assert not results[0].passed


def test_cli_verify_default_config_passes(tmp_path, default_cfg_path):
    out = tmp_path / "report.txt"
    code = main(["verify", "--config", str(default_cfg_path), "--out", str(out),
                 "--no-figures"])
    assert code == 0
    text = out.read_text()
    assert text.startswith(REPORT_HEADER)
    assert "false" not in text


def test_cli_verify_runs_are_deterministic(tmp_path, default_cfg_path):
    out1, out2 = tmp_path / "r1.txt", tmp_path / "r2.txt"
    assert main(["verify", "--config", str(default_cfg_path), "--out", str(out1),
                 "--no-figures"]) == 0
    assert main(["verify", "--config", str(default_cfg_path), "--out", str(out2),
                 "--no-figures"]) == 0
    assert strip_timing(out1.read_text()) == strip_timing(out2.read_text())


def test_cli_verify_renders_figure(tmp_path, default_cfg_path):
    out = tmp_path / "report.txt"
    code = main(["verify", "--config", str(default_cfg_path), "--filter", "clock.",
                 "--out", str(out)])
    assert code == 0
    png = tmp_path / "report.png"
    assert png.exists() and png.stat().st_size > 1000


def test_cli_verify_incommensurate_fails_with_eq48_entry(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(DEFAULT_CONFIG.replace("qubit_omega=1", "qubit_omega=1.37"))
    out = tmp_path / "report.txt"
    code = main(["verify", "--config", str(cfg), "--out", str(out), "--no-figures"])
    assert code == 1
    failing = [l for l in out.read_text().splitlines() if "|false|" in l]
    assert any("Eq 4.8" in l for l in failing)


def test_cli_verify_unreadable_config(tmp_path):
    out = tmp_path / "report.txt"
    code = main(["verify", "--config", str(tmp_path / "missing.cfg"),
                 "--out", str(out), "--no-figures"])
    assert code == 2


def test_cli_sweep_monotone_check(tmp_path, default_cfg_path):
    out = tmp_path / "sweep.txt"
    code = main(["sweep", "--config", str(default_cfg_path),
                 "--dims", "16,32,64,128", "--check", "qcalc.fd_spectral",
                 "--out", str(out), "--no-figures"])
    assert code == 0
    text = out.read_text()
    assert text.startswith(SWEEP_HEADER)
    assert "non_increasing|true" in text


def test_cli_sweep_single_dim_trivially_monotone(tmp_path, default_cfg_path):
    out = tmp_path / "sweep.txt"
    code = main(["sweep", "--config", str(default_cfg_path), "--dims", "16",
                 "--check", "sync.exchange_fd", "--out", str(out), "--no-figures"])
    assert code == 0
    assert "non_increasing|true" in out.read_text()


def test_cli_sweep_reports_growing_projected_norm(tmp_path, default_cfg_path):
    # the projected-norm diagnostic grows; not monotone-required, so exit 0
    out = tmp_path / "sweep.txt"
    code = main(["sweep", "--config", str(default_cfg_path),
                 "--dims", "16,32,64", "--check", "clock.commutator_window",
                 "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert "monotone_required|false" in text
    assert "non_increasing|false" in text
    assert (tmp_path / "sweep.png").exists()


def test_cli_sweep_unknown_check(tmp_path, default_cfg_path):
    code = main(["sweep", "--config", str(default_cfg_path), "--dims", "8",
                 "--check", "nope", "--out", str(tmp_path / "s.txt"),
                 "--no-figures"])
    assert code == 2


def test_cli_sweep_rejects_tiny_dims(tmp_path, default_cfg_path):
    code = main(["sweep", "--config", str(default_cfg_path), "--dims", "1,2",
                 "--check", "qcalc.fd_spectral", "--out", str(tmp_path / "s.txt"),
                 "--no-figures"])
    assert code == 2


def test_run_sweep_result_invariants(default_cfg_path):
    cfg = parse_config(Path(default_cfg_path).read_text())
    result = run_sweep(cfg, [16, 32], "heis.no_evolution")
    assert result.dims == (16, 32)
    assert len(result.residuals) == 2
    assert max(result.residuals) < 1e-9


def test_cli_readout_roundtrip(tmp_path, default_cfg_path, capsys):
    dt = 2 * np.pi / 32
    code = main(["readout", "--config", str(default_cfg_path),
                 "--shift", str(3 * dt)])
    assert code == 0
    outp = capsys.readouterr().out
    assert f"lambda={3 * dt:.12g}" in outp
    assert "ambiguous=false" in outp


def test_cli_readout_zero_shift(default_cfg_path, capsys):
    assert main(["readout", "--config", str(default_cfg_path), "--shift", "0"]) == 0
    assert "lambda=0" in capsys.readouterr().out


def test_cli_readout_no_clock_signal(tmp_path, capsys):
    cfg = tmp_path / "flat.cfg"
    cfg.write_text(DEFAULT_CONFIG.replace("qubit_omega=1", "qubit_omega=0"))
    code = main(["readout", "--config", str(cfg), "--shift", "0.0"])
    assert code == 1
    assert "no clock signal" in capsys.readouterr().err


def test_cli_uses_packaged_default_config(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    out = tmp_path / "r.txt"
    code = main(["verify", "--filter", "clock.period", "--out", str(out),
                 "--no-figures"])
    assert code == 0
