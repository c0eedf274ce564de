"""Reductions, overlaps, photon statistics and Wigner functions."""

import math

import numpy as np
import pytest

from paramp import (
    DeviceKind,
    EvolutionPlan,
    ReducedDensity,
    SingleModeSpec,
    decompose,
    default_max_charge,
    depletion,
    evolve,
    mode_mean,
    number_distribution,
    overlap,
    partial_trace,
    photon_stats,
    product_state,
    pure_state_overlap,
    quadrature_distribution,
    twin_beam,
    wigner,
)
from paramp.observables import WignerGrid
from paramp.targets import twin_beam_diagonal

from conftest import coherent_vector


def make_product(device, signal, pump, pump_cut=14, eps=1e-6):
    # deliberately small cutoffs keep brute-force comparisons cheap, so the
    # acceptable tail is loosened accordingly
    dec = decompose(device, default_max_charge(device, signal, pump_cut))
    return product_state(signal, pump, dec, eps_trunc=eps, pump_cutoff=pump_cut)


def twin_state(chi, cutoff=20):
    """Twin-beam as a nondegenerate-amplifier state with an empty pump."""
    dec = decompose(DeviceKind.NONDEGENERATE_AMP, 2 * cutoff)
    diag = twin_beam_diagonal(chi, cutoff)
    amplitudes = {}
    for n, c in enumerate(diag):
        blk = dec.block((2 * n, n))
        vec = np.zeros(blk.dim, dtype=complex)
        vec[blk.index_of((n, n, 0))] = c
        amplitudes[(2 * n, n)] = vec
    return dec, amplitudes, diag


def test_partial_trace_of_product_is_projector():
    state = make_product(
        DeviceKind.BEAM_SPLITTER,
        SingleModeSpec.coherent(0.7),
        SingleModeSpec.coherent(1.2),
    )
    rho = partial_trace(state, (0,))
    vec = SingleModeSpec.coherent(0.7).fock_coefficients(rho.dim - 1)
    expected = np.outer(vec, vec.conj())
    assert np.abs(rho.matrix - expected).max() < 1e-10
    assert rho.trace() == pytest.approx(1.0 - state.tail_mass, abs=1e-9)


def test_partial_trace_twin_beam_is_geometric():
    from paramp.states import MultiModeState

    chi = 0.8
    dec, amplitudes, diag = twin_state(chi)
    state = MultiModeState(dec, amplitudes, 0.0)
    rho = partial_trace(state, (0,))
    lam2 = math.tanh(chi) ** 2
    p = rho.diagonal()
    expected = (1 - lam2) * lam2 ** np.arange(p.size)
    assert np.allclose(p, expected, atol=1e-10)
    off_diag = rho.matrix - np.diag(np.diag(rho.matrix))
    assert np.abs(off_diag).max() < 1e-14


def test_partial_trace_complementary_modes_preserve_trace():
    state = make_product(
        DeviceKind.NONDEGENERATE_AMP,
        (SingleModeSpec.number(1), SingleModeSpec.number(1)),
        SingleModeSpec.coherent(1.0 - 0.5j),
    )
    plan = EvolutionPlan.for_state(state)
    out = evolve(state, plan, 0.3)
    t_sig = partial_trace(out, (0, 1)).trace()
    t_pump = partial_trace(out, (2,)).trace()
    assert t_sig == pytest.approx(t_pump, abs=1e-12)
    assert t_sig == pytest.approx(1.0 - out.tail_mass, abs=1e-9)


def test_partial_trace_matches_brute_force_contraction():
    state = make_product(
        DeviceKind.NONDEGENERATE_AMP,
        (SingleModeSpec.number(1), SingleModeSpec.number(0)),
        SingleModeSpec.coherent(0.9j),
        pump_cut=10,
    )
    plan = EvolutionPlan.for_state(state)
    out = evolve(state, plan, 0.45)
    tensor = out.dense_tensor()
    rho_brute = np.einsum("abc,dec->abde", tensor, tensor.conj())
    da, db = tensor.shape[0], tensor.shape[1]
    rho_brute = rho_brute.reshape(da * db, da * db)
    rho = partial_trace(out, (0, 1))
    assert rho.matrix.shape == (da * db, da * db)
    assert np.abs(rho.matrix - rho_brute).max() < 1e-12


def test_reduced_density_hermitian_and_psd():
    state = make_product(
        DeviceKind.DEGENERATE_AMP,
        SingleModeSpec.coherent(0.8),
        SingleModeSpec.coherent(1.5),
        pump_cut=16,
    )
    out = evolve(state, EvolutionPlan.for_state(state), 0.7)
    for keep in ((0,), (1,)):
        rho = partial_trace(out, keep)
        assert np.abs(rho.matrix - rho.matrix.conj().T).max() < 1e-12
        assert np.linalg.eigvalsh(rho.matrix).min() >= -1e-9


def test_overlap_pure_examples():
    v = np.array([1.0, 0.0, 0.0])
    w = np.array([0.0, 1.0, 0.0])
    assert overlap(v, v) == pytest.approx(1.0, abs=1e-14)
    assert overlap(v, w) == pytest.approx(0.0, abs=1e-14)


def test_overlap_closed_form_value():
    # coherent signal through a beam splitter at tau = 0.2
    tau, alpha, beta = 0.2, 1.0, 2.0
    state = make_product(
        DeviceKind.BEAM_SPLITTER,
        SingleModeSpec.coherent(alpha),
        SingleModeSpec.coherent(beta),
        pump_cut=40,
    )
    plan = EvolutionPlan.for_state(state)
    out = evolve(state, plan, tau)
    rho = partial_trace(out, (0,))
    target = coherent_vector(alpha - 1j * beta * math.sin(tau), rho.dim)
    got = overlap(target, rho)
    assert got == pytest.approx(math.exp(-4 * math.sin(0.1) ** 4), abs=1e-9)
    assert got == pytest.approx(0.999603, abs=5e-7)


def test_overlap_symmetric_and_unitary_invariant(rng):
    from scipy.stats import unitary_group

    dim = 12
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    b = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    sig = b @ b.conj().T
    sig /= np.trace(sig).real
    assert overlap(rho, sig) == pytest.approx(overlap(sig, rho), rel=1e-12)
    u = unitary_group.rvs(dim, random_state=7)
    assert overlap(u @ rho @ u.conj().T, u @ sig @ u.conj().T) == pytest.approx(
        overlap(rho, sig), rel=1e-10
    )


def test_overlap_pads_smaller_argument():
    v = np.array([1.0, 0.0])
    rho = ReducedDensity(np.diag([0.5, 0.25, 0.25]).astype(complex), (3,))
    assert overlap(v, rho) == pytest.approx(0.5, abs=1e-14)


def test_pure_state_overlap_matches_dense_route():
    state = make_product(
        DeviceKind.DEGENERATE_AMP,
        SingleModeSpec.number(1),
        SingleModeSpec.coherent(1.1),
        pump_cut=12,
    )
    plan = EvolutionPlan.for_state(state)
    out = evolve(state, plan, 0.4)
    rho = partial_trace(out, (0,))
    target = SingleModeSpec.coherent(0.3 - 0.2j).fock_coefficients(rho.dim - 1)
    fast = pure_state_overlap(out, target, (0,))
    assert fast == pytest.approx(overlap(target, rho), abs=1e-12)


def test_pure_state_overlap_two_modes():
    state = make_product(
        DeviceKind.NONDEGENERATE_AMP,
        (SingleModeSpec.vacuum(), SingleModeSpec.vacuum()),
        SingleModeSpec.coherent(1.0),
        pump_cut=31,
    )
    plan = EvolutionPlan.for_state(state)
    out = evolve(state, plan, 0.25)
    target = twin_beam(-1j * 0.25, 10)
    fast = pure_state_overlap(out, target, (0, 1))
    rho = partial_trace(out, (0, 1))
    d = int(math.isqrt(rho.matrix.shape[0]))
    padded = np.zeros((d, d), dtype=complex)
    padded[:11, :11] = target
    assert fast == pytest.approx(overlap(padded.ravel(), rho), abs=1e-12)
    assert fast > 0.9  # early-time prediction is close


def test_photon_stats_coherent_and_fock():
    coherent = np.abs(coherent_vector(1.3, 40)) ** 2
    stats = photon_stats(ReducedDensity(np.diag(coherent).astype(complex), (40,)))
    assert stats.fano == pytest.approx(1.0, abs=1e-8)
    assert stats.mean == pytest.approx(1.3**2, abs=1e-8)
    fock = np.zeros(6)
    fock[3] = 1.0
    stats = photon_stats(ReducedDensity(np.diag(fock).astype(complex), (6,)))
    assert stats.fano == pytest.approx(0.0, abs=1e-12)


def test_photon_stats_vacuum_fano_flagged():
    rho = ReducedDensity(np.diag([1.0, 0.0]).astype(complex), (2,))
    assert photon_stats(rho).fano is None


def test_photon_stats_rejects_negligible_trace():
    rho = ReducedDensity(np.diag([1e-8, 0.0]).astype(complex), (2,))
    with pytest.raises(ValueError):
        photon_stats(rho)


def test_number_distribution_matches_partial_trace():
    state = make_product(
        DeviceKind.DEGENERATE_AMP,
        SingleModeSpec.coherent(0.8),
        SingleModeSpec.coherent(1.5),
        pump_cut=16,
    )
    out = evolve(state, EvolutionPlan.for_state(state), 0.6)
    for mode in (0, 1):
        direct = number_distribution(out, mode)
        via_trace = partial_trace(out, (mode,)).diagonal()
        assert np.allclose(direct, via_trace[: direct.size], atol=1e-12)


def test_depletion_zero_at_start_and_from_density():
    state = make_product(
        DeviceKind.DEGENERATE_AMP,
        SingleModeSpec.vacuum(),
        SingleModeSpec.coherent(1.0),
        pump_cut=30,
    )
    rho = partial_trace(state, (1,))
    assert depletion(rho, 1.0) == pytest.approx(0.0, abs=1e-9)
    assert depletion(0.8, 1.0) == pytest.approx(0.2, rel=1e-12)
    assert depletion(1.2, 1.0) < 0  # pump gained energy


def test_twin_beam_reduced_mean():
    chi = 0.9
    psi = twin_beam(chi, 60)
    p = np.abs(np.diag(psi)) ** 2
    stats = photon_stats(ReducedDensity(np.diag(p).astype(complex), (p.size,)))
    assert stats.mean == pytest.approx(math.sinh(chi) ** 2, abs=1e-6)


# -- Wigner ------------------------------------------------------------------


def grid():
    return np.linspace(-4.5, 4.5, 91)


def test_wigner_vacuum():
    rho = ReducedDensity(np.diag([1.0]).astype(complex), (1,))
    w = wigner(rho, grid(), grid())
    i0 = 45  # x = 0
    assert w.values[i0, i0] == pytest.approx(1 / math.pi, rel=1e-10)
    assert w.integral() == pytest.approx(1.0, abs=1e-3)


def test_wigner_coherent_center():
    beta = 0.9 + 0.6j
    vec = coherent_vector(beta, 25)
    rho = ReducedDensity(np.outer(vec, vec.conj()), (25,))
    w = wigner(rho, grid(), grid())
    i, j = np.unravel_index(np.argmax(w.values), w.values.shape)
    assert w.x_axis[i] == pytest.approx(math.sqrt(2) * beta.real, abs=0.1)
    assert w.p_axis[j] == pytest.approx(math.sqrt(2) * beta.imag, abs=0.1)
    assert w.integral() == pytest.approx(1.0, abs=1e-3)
    # sampled exactly at the displaced center the peak equals the vacuum's
    center = wigner(
        rho,
        np.array([math.sqrt(2) * beta.real]),
        np.array([math.sqrt(2) * beta.imag]),
    )
    assert center.values[0, 0] == pytest.approx(1 / math.pi, rel=1e-9)


def test_wigner_fock1_negative_at_origin():
    rho = ReducedDensity(np.diag([0.0, 1.0]).astype(complex), (2,))
    w = wigner(rho, grid(), grid())
    assert w.values[45, 45] == pytest.approx(-1 / math.pi, rel=1e-10)


@pytest.mark.parametrize(
    "make_rho",
    [
        lambda: np.diag([1.0, 0, 0, 0, 0]).astype(complex),
        lambda: np.outer(coherent_vector(0.8, 30), coherent_vector(0.8, 30).conj()),
        lambda: _squeezed_rho(),
    ],
)
def test_wigner_marginal_equals_quadrature_distribution(make_rho):
    mat = make_rho()
    rho = ReducedDensity(mat, (mat.shape[0],))
    xs = np.linspace(-5, 5, 101)
    ps = np.linspace(-7, 7, 141)
    w = wigner(rho, xs, ps)
    dp = ps[1] - ps[0]
    marg = w.values.sum(axis=1) * dp
    ref = quadrature_distribution(rho, xs)
    assert np.abs(marg - ref).max() < 1e-3


def _squeezed_rho():
    from paramp.targets import squeezed_vacuum_amplitudes

    vec = squeezed_vacuum_amplitudes(0.8, 40)
    return np.outer(vec, vec.conj())


def test_wigner_csv_roundtrip(tmp_path):
    rho = ReducedDensity(np.diag([1.0]).astype(complex), (1,))
    xs = np.linspace(-1, 1, 3)
    w = wigner(rho, xs, xs)
    text = w.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "x,p,w"
    assert len(lines) == 1 + 9
    x, p, val = (float(t) for t in lines[1].split(","))
    assert (x, p) == (-1.0, -1.0)
    assert val == pytest.approx(w.values[0, 0], rel=1e-10)


def test_wigner_dimension_guard():
    rho = ReducedDensity(np.eye(300, dtype=complex) / 300, (300,))
    with pytest.raises(ValueError):
        wigner(rho, grid(), grid())


def test_reduced_density_trimming():
    diag = np.array([0.7, 0.3, 1e-15, 1e-16])
    rho = ReducedDensity(np.diag(diag).astype(complex), (4,))
    trimmed = rho.trimmed(1e-12)
    assert trimmed.dim == 2
    assert trimmed.trace() == pytest.approx(1.0, abs=1e-12)
