"""Shared brute-force oracles: dense full-tensor operators built straight
from the ladder rules, with no knowledge of the block machinery."""

import math

import numpy as np
import pytest

from paramp import DeviceKind


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator on a truncated single-mode basis."""
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def mode_ops(dims: tuple[int, ...]) -> list[np.ndarray]:
    """Annihilation operators for each mode on the tensor-product basis."""
    ops = []
    for k, d in enumerate(dims):
        factors = [np.eye(dd) if j != k else ladder(d) for j, dd in enumerate(dims)]
        full = factors[0]
        for f in factors[1:]:
            full = np.kron(full, f)
        ops.append(full)
    return ops


def dense_hamiltonian(device: DeviceKind, dims: tuple[int, ...]) -> np.ndarray:
    """Full interaction Hamiltonian on the truncated tensor basis."""
    if device is DeviceKind.BEAM_SPLITTER:
        a, b = mode_ops(dims)
        term = a @ b.conj().T
    elif device is DeviceKind.DEGENERATE_AMP:
        a, c = mode_ops(dims)
        term = a @ a @ c.conj().T
    else:
        a, b, c = mode_ops(dims)
        term = a @ b @ c.conj().T
    return term + term.conj().T


def tensor_index(occ: tuple[int, ...], dims: tuple[int, ...]) -> int:
    idx = 0
    for n, d in zip(occ, dims):
        idx = idx * d + n
    return idx


def coherent_vector(beta: complex, dim: int) -> np.ndarray:
    return np.exp(-0.5 * abs(beta) ** 2) * np.array(
        [beta**n / math.sqrt(math.factorial(n)) for n in range(dim)]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
