"""Device Hamiltonians restricted to invariant blocks.

In the canonical block ordering every Hamiltonian is a real symmetric
tridiagonal matrix with zero diagonal (pure hopping between adjacent ladder
indices), so only the sub-diagonal couplings are stored.  The coupling
constant is fixed to 1; all times are understood as rescaled by it.

Couplings between basis elements ``m`` and ``m+1``:

* beam splitter, sector N:      ``sqrt((m+1) (N-m))``
* degenerate amp, sector N:     ``sqrt((N-2m) (N-2m-1) (m+1))``
* nondegenerate amp, (N2, K):   ``sqrt((K-m) (N2-K-m) (m+1))``

These follow from the ladder action ``a|n> = sqrt(n)|n-1>`` applied to the
interaction terms ``a b† + a† b``, ``a² c† + a†² c`` and
``a b c† + a† b† c``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fock import DeviceKind, InvariantBlock

__all__ = ["BlockOperator", "assemble", "eigendecompose", "coupling_radicands"]

_RECONSTRUCTION_RTOL = 1e-12


def coupling_radicands(device: DeviceKind, charges: tuple[int, ...], dim: int) -> np.ndarray:
    """Integer radicands of the sub-diagonal couplings (exact arithmetic)."""
    m = np.arange(dim - 1, dtype=np.int64)
    if device is DeviceKind.BEAM_SPLITTER:
        (n,) = charges
        return (m + 1) * (n - m)
    if device is DeviceKind.DEGENERATE_AMP:
        (n,) = charges
        return (n - 2 * m) * (n - 2 * m - 1) * (m + 1)
    n2, k = charges
    return (k - m) * (n2 - k - m) * (m + 1)


class BlockOperator:
    """Hamiltonian of one invariant block plus its cached eigendecomposition."""

    __slots__ = ("block", "sub_diagonal", "eigenvalues", "eigenvectors")

    def __init__(self, block: InvariantBlock, sub_diagonal: np.ndarray):
        self.block = block
        self.sub_diagonal = sub_diagonal
        self.eigenvalues: np.ndarray | None = None
        self.eigenvectors: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.block.dim

    def dense(self) -> np.ndarray:
        h = np.zeros((self.dim, self.dim))
        idx = np.arange(self.dim - 1)
        h[idx, idx + 1] = self.sub_diagonal
        h[idx + 1, idx] = self.sub_diagonal
        return h

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Tridiagonal matrix-vector product H @ amplitudes."""
        out = np.zeros_like(amplitudes, dtype=complex)
        if self.dim > 1:
            e = self.sub_diagonal
            out[:-1] += e * amplitudes[1:]
            out[1:] += e * amplitudes[:-1]
        return out

    def ensure_eigendecomposed(self) -> "BlockOperator":
        if self.eigenvalues is None:
            if self.dim == 1:
                self.eigenvalues = np.zeros(1)
                self.eigenvectors = np.ones((1, 1))
            else:
                w, v = eigh_tridiagonal(np.zeros(self.dim), self.sub_diagonal)
                self.eigenvalues = w
                self.eigenvectors = v
        return self

    def evolve_amplitudes(self, amplitudes: np.ndarray, tau: float) -> np.ndarray:
        """Apply exp(-i H tau) through the spectral decomposition.

        ``amplitudes`` may be a vector or a (dim, n_tau) matrix; in the
        latter case ``tau`` must be an array of matching length and each
        column is propagated to its own time.
        """
        self.ensure_eigendecomposed()
        v = self.eigenvectors
        w = v.T @ amplitudes
        if np.ndim(tau) == 0:
            return v @ (np.exp(-1j * self.eigenvalues * tau) * w)
        phases = np.exp(-1j * np.outer(self.eigenvalues, np.asarray(tau)))
        if w.ndim == 1:
            w = w[:, None]
        return v @ (phases * w)


def assemble(device: DeviceKind, block: InvariantBlock) -> BlockOperator:
    """Build the tridiagonal Hamiltonian of ``block``."""
    if block.device is not device:
        raise ValueError(
            f"block belongs to {block.device.value}, not {device.value}"
        )
    radicands = coupling_radicands(device, block.charges, block.dim)
    return BlockOperator(block, np.sqrt(radicands.astype(float)))


def eigendecompose(op: BlockOperator) -> BlockOperator:
    """Populate the cached eigensystem; verifies the reconstruction error."""
    op.ensure_eigendecomposed()
    if op.dim > 1:
        h = op.dense()
        recon = (op.eigenvectors * op.eigenvalues) @ op.eigenvectors.T
        scale = max(np.abs(h).max(), 1.0)
        err = np.abs(recon - h).max()
        if err > _RECONSTRUCTION_RTOL * scale * op.dim:
            raise RuntimeError(
                f"eigendecomposition failed to reconstruct block "
                f"{op.block.charges}: error {err:.3e}"
            )
    return op
