"""Sweeps, tau* searches, achievable parameters, scan report, CSV contract."""

import math

import numpy as np
import pytest

from paramp import (
    DeviceKind,
    ExperimentConfig,
    SingleModeSpec,
    SweepEngine,
    UnboundedError,
    fano_criterion_scan,
    max_parameter,
    records_to_csv,
    standard_scan_configs,
    sweep,
    tau_star,
)
from paramp.experiments import CSV_HEADER, default_tau_max


def bs_config(signal, beta=2.0, **kw):
    return ExperimentConfig(DeviceKind.BEAM_SPLITTER, signal, beta, **kw)


def test_tau_star_bs_coherent_closed_form():
    # exp(-4 |alpha|^2 sin^4(tau/2)) crosses 0.99 at 2 asin((-ln(0.99)/4)^(1/4))
    expected = 2 * math.asin((-math.log(0.99) / 4) ** 0.25)
    got = tau_star(bs_config(SingleModeSpec.coherent(1.0)))
    assert got == pytest.approx(expected, abs=5e-4)
    assert got == pytest.approx(0.451, abs=0.005)


def test_tau_star_bs_fock1_closed_form():
    # a displaced single photon keeps overlap cos^2(tau), independent of beta
    engine = SweepEngine(bs_config(SingleModeSpec.number(1), beta=3.0))
    expected = math.acos(math.sqrt(0.99))
    assert tau_star(engine) == pytest.approx(expected, abs=5e-4)
    taus = np.array([0.05, 0.2, 0.6, 1.0])
    assert np.allclose(engine.overlaps(taus), np.cos(taus) ** 2, atol=1e-8)


def test_tau_star_unbounded_for_bs_vacuum():
    with pytest.raises(UnboundedError) as err:
        tau_star(bs_config(SingleModeSpec.vacuum()))
    assert err.value.min_overlap >= 1.0 - 1e-8


def test_tau_star_respects_custom_threshold():
    engine = SweepEngine(bs_config(SingleModeSpec.coherent(1.0)))
    t99 = tau_star(engine)
    t96 = tau_star(engine, threshold=0.96)
    assert t96 > t99
    assert engine.overlap_at(t96) >= 0.96


def test_tau_star_grid_refinement_stable():
    for config, fine in [
        (bs_config(SingleModeSpec.coherent(1.0)),
         bs_config(SingleModeSpec.coherent(1.0), tau_steps=800)),
        (ExperimentConfig(DeviceKind.DEGENERATE_AMP, SingleModeSpec.vacuum(), 1.0),
         ExperimentConfig(DeviceKind.DEGENERATE_AMP, SingleModeSpec.vacuum(), 1.0,
                          tau_steps=800)),
    ]:
        assert tau_star(config) == pytest.approx(tau_star(fine), abs=1e-3)


def test_max_parameter_formulas():
    cfg = bs_config(SingleModeSpec.coherent(1.0), beta=3.0)
    engine = SweepEngine(cfg)
    ts = tau_star(engine)
    assert max_parameter(engine) == pytest.approx(3.0 * math.sin(ts), rel=1e-9)

    cfg = ExperimentConfig(DeviceKind.DEGENERATE_AMP, SingleModeSpec.vacuum(), 1.0)
    engine = SweepEngine(cfg)
    assert max_parameter(engine) == pytest.approx(2.0 * tau_star(engine), rel=1e-9)

    cfg = ExperimentConfig(
        DeviceKind.NONDEGENERATE_AMP,
        (SingleModeSpec.vacuum(), SingleModeSpec.vacuum()),
        2.0,
    )
    engine = SweepEngine(cfg)
    assert max_parameter(engine) == pytest.approx(2.0 * tau_star(engine), rel=1e-9)


def test_max_parameter_propagates_unbounded():
    with pytest.raises(UnboundedError):
        max_parameter(bs_config(SingleModeSpec.vacuum()))


def test_records_at_tau_zero():
    records = sweep(
        ExperimentConfig(
            DeviceKind.DEGENERATE_AMP, SingleModeSpec.number(1), 1.5, tau_steps=5
        )
    )
    r0 = records[0]
    assert r0.tau == 0.0
    assert r0.overlap == pytest.approx(1.0, abs=1e-9)
    assert r0.fano == pytest.approx(1.0, abs=1e-8)
    assert r0.depletion == pytest.approx(0.0, abs=1e-9)
    assert r0.mean_signal == pytest.approx(1.0, abs=1e-9)


def test_sweep_monotone_grid_and_length():
    cfg = bs_config(SingleModeSpec.coherent(0.5), tau_steps=37)
    records = sweep(cfg)
    taus = [r.tau for r in records]
    assert len(records) == 37
    assert taus == sorted(taus)
    assert taus[-1] == pytest.approx(cfg.tau_max)


def test_csv_schema_and_determinism():
    cfg = ExperimentConfig(
        DeviceKind.DEGENERATE_AMP, SingleModeSpec.vacuum(), 1.0, tau_steps=50
    )
    text1 = records_to_csv(sweep(cfg))
    text2 = records_to_csv(sweep(cfg))
    assert text1 == text2  # bit-identical across fresh engines
    lines = text1.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 51
    assert all(len(line.split(",")) == 6 for line in lines[1:])


def test_default_tau_max():
    assert default_tau_max(DeviceKind.BEAM_SPLITTER, 5.0) == pytest.approx(math.pi)
    assert default_tau_max(DeviceKind.DEGENERATE_AMP, 3.0) == pytest.approx(0.5)
    assert default_tau_max(DeviceKind.NONDEGENERATE_AMP, 5.0) == pytest.approx(0.3)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(DeviceKind.BEAM_SPLITTER, SingleModeSpec.vacuum(), 1.0,
                         tau_steps=1)
    with pytest.raises(ValueError):
        ExperimentConfig(DeviceKind.BEAM_SPLITTER, SingleModeSpec.vacuum(), 1.0,
                         threshold=1.2)


def test_bs_displacement_linearity_and_slope_order():
    """z_M grows linearly with the pump amplitude; vacuum transfers all of
    it, coherent input keeps more reach than a single photon."""
    betas = np.array([1.0, 3.0, 5.0, 7.0])
    slopes = {}
    for name, signal in [
        ("coherent", SingleModeSpec.coherent(1.0)),
        ("fock", SingleModeSpec.number(1)),
    ]:
        z = []
        for b in betas:
            z.append(max_parameter(bs_config(signal, beta=float(b))))
        z = np.array(z)
        slope = float(np.mean(z / betas))
        assert np.abs(z / betas - slope).max() < 0.02 * slope
        slopes[name] = slope
    # vacuum never crosses the threshold; its reach is the full pump swing
    slopes["vacuum"] = 1.0
    assert slopes["vacuum"] >= slopes["coherent"] > slopes["fock"]


def test_fano_scan_report_small_grid():
    configs = [
        ExperimentConfig(DeviceKind.DEGENERATE_AMP, SingleModeSpec.vacuum(), 1.0,
                         tau_steps=60),
        bs_config(SingleModeSpec.coherent(1.0), beta=1.0, tau_steps=60),
    ]
    report = fano_criterion_scan(configs)
    assert report.n_cells == 120
    assert report.n_valid_cells > 0
    assert report.passed
    assert report.max_fano_in_valid <= 1.13


def test_standard_scan_configs_shape():
    configs = standard_scan_configs(betas=(1.0, 3.0), tau_steps=10)
    assert len(configs) == 3 * 4 * 2
    labels = {c.label for c in configs}
    assert len(labels) == len(configs)


def test_npa_signal_idler_symmetry():
    from paramp import mode_mean

    cfg = ExperimentConfig(
        DeviceKind.NONDEGENERATE_AMP,
        (SingleModeSpec.vacuum(), SingleModeSpec.vacuum()),
        2.0,
    )
    engine = SweepEngine(cfg)
    state = engine.state_at(0.3)
    assert mode_mean(state, 0) == pytest.approx(mode_mean(state, 1), abs=1e-9)


def test_engine_snapshot_distributions():
    cfg = ExperimentConfig(DeviceKind.DEGENERATE_AMP, SingleModeSpec.vacuum(), 1.0)
    engine = SweepEngine(cfg)
    dists = engine.mode_distributions(0.4)
    assert set(dists) == {"signal", "pump"}
    for d in dists.values():
        assert d.sum() == pytest.approx(1.0, abs=1e-12)
    # squeezed-vacuum-like signal: odd occupations stay unpopulated
    assert dists["signal"][1::2].max() < 1e-12
