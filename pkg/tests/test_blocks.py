"""Block Hamiltonians: couplings, spectra, and brute-force equivalence."""

import math

import numpy as np
import pytest

from paramp import DeviceKind, assemble, decompose, eigendecompose
from paramp.blocks import coupling_radicands

from conftest import dense_hamiltonian, tensor_index


def _block_op(device, max_charge, charges):
    dec = decompose(device, max_charge)
    return assemble(device, dec.block(charges))


def test_bs_single_photon_block():
    op = _block_op(DeviceKind.BEAM_SPLITTER, 2, (1,))
    assert np.array_equal(op.dense(), np.array([[0.0, 1.0], [1.0, 0.0]]))
    eigendecompose(op)
    assert np.allclose(np.sort(op.eigenvalues), [-1.0, 1.0])


def test_dpa_n2_block():
    op = _block_op(DeviceKind.DEGENERATE_AMP, 4, (2,))
    assert op.sub_diagonal == pytest.approx([math.sqrt(2)])
    eigendecompose(op)
    assert np.allclose(np.sort(op.eigenvalues), [-math.sqrt(2), math.sqrt(2)])


def test_npa_n2_k1_block():
    op = _block_op(DeviceKind.NONDEGENERATE_AMP, 4, (2, 1))
    assert op.sub_diagonal == pytest.approx([1.0])
    eigendecompose(op)
    assert np.allclose(np.sort(op.eigenvalues), [-1.0, 1.0])


def test_dim1_block_trivial_eigensystem():
    op = _block_op(DeviceKind.BEAM_SPLITTER, 2, (0,))
    eigendecompose(op)
    assert op.eigenvalues == pytest.approx([0.0])
    assert np.array_equal(op.eigenvectors, [[1.0]])


def test_bs_n2_spectrum():
    op = _block_op(DeviceKind.BEAM_SPLITTER, 3, (2,))
    assert op.sub_diagonal == pytest.approx([math.sqrt(2), math.sqrt(2)])
    eigendecompose(op)
    assert np.allclose(np.sort(op.eigenvalues), [-2.0, 0.0, 2.0], atol=1e-12)


def test_dpa_n4_spectrum():
    op = _block_op(DeviceKind.DEGENERATE_AMP, 6, (4,))
    assert op.sub_diagonal == pytest.approx([math.sqrt(12), 2.0])
    eigendecompose(op)
    assert np.allclose(np.sort(op.eigenvalues), [-4.0, 0.0, 4.0], atol=1e-12)


def test_assemble_rejects_device_mismatch():
    blk = decompose(DeviceKind.BEAM_SPLITTER, 3).block((2,))
    with pytest.raises(ValueError):
        assemble(DeviceKind.DEGENERATE_AMP, blk)


@pytest.mark.parametrize("device", list(DeviceKind))
def test_hermitian_by_construction(device):
    dec = decompose(device, 10)
    for blk in dec.blocks:
        h = assemble(device, blk).dense()
        assert np.array_equal(h, h.T)


@pytest.mark.parametrize("device", list(DeviceKind))
def test_spectrum_symmetric_about_zero(device):
    # zero-diagonal tridiagonal matrices are bipartite for every device
    dec = decompose(device, 20)
    for blk in dec.blocks:
        if blk.dim > 50:
            continue
        op = eigendecompose(assemble(device, blk))
        w = np.sort(op.eigenvalues)
        assert np.allclose(w, -w[::-1], atol=1e-10 * max(1.0, abs(w).max()))


@pytest.mark.parametrize("device", list(DeviceKind))
def test_eigenvectors_orthonormal_and_reconstruct(device):
    dec = decompose(device, 16)
    for blk in dec.blocks:
        op = eigendecompose(assemble(device, blk))
        v = op.eigenvectors
        assert np.abs(v @ v.T - np.eye(blk.dim)).max() < 1e-12
        recon = (v * op.eigenvalues) @ v.T
        h = op.dense()
        assert np.abs(recon - h).max() <= 1e-12 * max(1.0, np.abs(h).max()) * blk.dim


def _brute_force_radicand(device, bra, ket):
    """Integer radicand of <bra|H|ket> from the raw ladder rules."""
    def term(src, dst, lowered, raised):
        # product over modes of n (for each lowering) and n+1 (for raisings)
        rad = 1
        occ = list(src)
        for m in lowered:
            if occ[m] == 0:
                return 0
            rad *= occ[m]
            occ[m] -= 1
        for m in raised:
            rad *= occ[m] + 1
            occ[m] += 1
        return rad if tuple(occ) == dst else 0

    if device is DeviceKind.BEAM_SPLITTER:
        moves = [((0,), (1,)), ((1,), (0,))]
    elif device is DeviceKind.DEGENERATE_AMP:
        moves = [((0, 0), (1,)), ((1,), (0, 0))]
    else:
        moves = [((0, 1), (2,)), ((2,), (0, 1))]
    total = 0
    for lowered, raised in moves:
        total += term(ket, bra, lowered, raised)
    return total


@pytest.mark.parametrize("device", list(DeviceKind))
def test_couplings_equal_brute_force_radicands(device):
    dec = decompose(device, 12)
    for blk in dec.blocks:
        rad = coupling_radicands(device, blk.charges, blk.dim)
        for m in range(blk.dim - 1):
            brute = _brute_force_radicand(device, blk.basis[m + 1], blk.basis[m])
            assert brute == rad[m]
        # entries as floats are then identical sqrt(integer) values
        op = assemble(device, blk)
        assert np.array_equal(op.sub_diagonal, np.sqrt(rad.astype(float)))


@pytest.mark.parametrize(
    "device,dims",
    [
        (DeviceKind.BEAM_SPLITTER, (13, 13)),
        (DeviceKind.DEGENERATE_AMP, (13, 7)),
        (DeviceKind.NONDEGENERATE_AMP, (13, 13, 7)),
    ],
)
def test_blocks_equal_permuted_dense_hamiltonian(device, dims):
    """The full tensor-basis Hamiltonian, gathered block by block, matches the
    assembled tridiagonal matrices entry for entry.

    The dense route multiplies per-ladder square roots, so its entries can
    differ from sqrt(product) in the last bit (e.g. sqrt(2)*sqrt(2) != 2.0);
    equality is therefore asserted to one part in 1e15.  The exact
    entry-for-entry statement lives in
    test_couplings_equal_brute_force_radicands, which compares the integer
    radicands themselves.
    """
    max_charge = 12
    h_full = dense_hamiltonian(device, dims)
    dec = decompose(device, max_charge)
    for blk in dec.blocks:
        idx = [tensor_index(occ, dims) for occ in blk.basis]
        gathered = h_full[np.ix_(idx, idx)].real
        mine = assemble(device, blk).dense()
        assert np.allclose(gathered, mine, rtol=1e-15, atol=0.0)
        assert np.array_equal(gathered != 0.0, mine != 0.0)


def test_apply_matches_dense(rng):
    dec = decompose(DeviceKind.DEGENERATE_AMP, 15)
    blk = dec.block((15,))
    op = assemble(DeviceKind.DEGENERATE_AMP, blk)
    vec = rng.normal(size=blk.dim) + 1j * rng.normal(size=blk.dim)
    assert np.allclose(op.apply(vec), op.dense() @ vec, atol=1e-12)
