"""Fock bases and their decomposition into dynamically invariant charge sectors.

Each supported device conserves one or two photon-number-like charges, so the
multimode Fock space splits into finite blocks that evolve independently.  The
blocks are:

* beam splitter (modes a, b), charge ``n_a + n_b = N``:
  ``{|m, N-m> : m = 0..N}``, dimension ``N + 1``;
* degenerate amplifier (signal a, pump c), charge ``n_a + 2 n_c = N``:
  ``{|N-2m, m> : m = 0..N//2}``, dimension ``N//2 + 1``;
* nondegenerate amplifier (signal a, idler b, pump c), charges
  ``n_a + n_b + 2 n_c = N2`` and ``n_a + n_c = K``:
  ``{|K-m, N2-K-m, m> : m = 0..min(K, N2-K)}``, dimension ``min(K, N2-K) + 1``.

For the nondegenerate device the conserved combination
``(n_a + n_b)/2 + n_c`` can be half-integer, so the doubled value ``N2``
is stored to keep every charge an exact integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterator

import numpy as np

__all__ = [
    "DeviceKind",
    "InvariantBlock",
    "BlockDecomposition",
    "charge_of",
    "decompose",
    "enumerate_fock_vectors",
]


class DeviceKind(Enum):
    """The three devices, identified by their CLI tags."""

    BEAM_SPLITTER = "bs"
    DEGENERATE_AMP = "dpa"
    NONDEGENERATE_AMP = "npa"

    @property
    def n_modes(self) -> int:
        return 3 if self is DeviceKind.NONDEGENERATE_AMP else 2

    @property
    def mode_names(self) -> tuple[str, ...]:
        if self is DeviceKind.BEAM_SPLITTER:
            return ("a", "b")
        if self is DeviceKind.DEGENERATE_AMP:
            return ("a", "c")
        return ("a", "b", "c")

    @property
    def pump_mode(self) -> int:
        """Index of the strong coherent mode (always the last one)."""
        return self.n_modes - 1

    @property
    def signal_modes(self) -> tuple[int, ...]:
        """Indices of the amplified (non-pump) modes."""
        return tuple(range(self.n_modes - 1))

    @property
    def pump_charge_weight(self) -> int:
        """Charge carried by one pump photon (2 for amplifiers, 1 for BS)."""
        return 1 if self is DeviceKind.BEAM_SPLITTER else 2


def charge_of(device: DeviceKind, occupations: tuple[int, ...]) -> tuple[int, ...]:
    """Conserved charge(s) of a Fock vector.

    Beam splitter: ``(n_a + n_b,)``.  Degenerate amplifier:
    ``(n_a + 2 n_c,)``.  Nondegenerate amplifier:
    ``(n_a + n_b + 2 n_c, n_a + n_c)``, the first entry being twice the
    half-integer-valued invariant so that charges stay integers.
    """
    if len(occupations) != device.n_modes:
        raise ValueError(
            f"{device.value} expects {device.n_modes} modes, "
            f"got occupations {occupations!r}"
        )
    if any(n < 0 for n in occupations):
        raise ValueError(f"negative occupation in {occupations!r}")
    if device is DeviceKind.BEAM_SPLITTER:
        na, nb = occupations
        return (na + nb,)
    if device is DeviceKind.DEGENERATE_AMP:
        na, nc = occupations
        return (na + 2 * nc,)
    na, nb, nc = occupations
    return (na + nb + 2 * nc, na + nc)


class InvariantBlock:
    """One invariant subspace: its charge label and ordered Fock basis.

    The basis order is ascending in the ladder index ``m`` (equivalently,
    ascending pump occupation for the amplifiers), which makes every device
    Hamiltonian tridiagonal with a fixed orientation.
    """

    __slots__ = ("device", "charges", "dim", "_basis", "_index")

    def __init__(self, device: DeviceKind, charges: tuple[int, ...]):
        self.device = device
        self.charges = charges
        self.dim = block_dimension(device, charges)
        self._basis: list[tuple[int, ...]] | None = None
        self._index: dict[tuple[int, ...], int] | None = None

    def occupations(self, mode: int) -> np.ndarray:
        """Occupation of ``mode`` for each basis element, as an int array."""
        m = np.arange(self.dim, dtype=np.int64)
        if self.device is DeviceKind.BEAM_SPLITTER:
            (n,) = self.charges
            return m if mode == 0 else n - m
        if self.device is DeviceKind.DEGENERATE_AMP:
            (n,) = self.charges
            return n - 2 * m if mode == 0 else m
        n2, k = self.charges
        if mode == 0:
            return k - m
        if mode == 1:
            return n2 - k - m
        return m

    @property
    def basis(self) -> list[tuple[int, ...]]:
        if self._basis is None:
            cols = [self.occupations(mode) for mode in range(self.device.n_modes)]
            self._basis = [tuple(int(c[i]) for c in cols) for i in range(self.dim)]
        return self._basis

    def index_of(self, occupations: tuple[int, ...]) -> int:
        """Position of a Fock vector inside this block."""
        if charge_of(self.device, occupations) != self.charges:
            raise KeyError(f"{occupations!r} does not belong to block {self.charges}")
        if self.device is DeviceKind.BEAM_SPLITTER:
            return occupations[0]
        return occupations[-1]

    def __contains__(self, occupations: tuple[int, ...]) -> bool:
        try:
            self.index_of(occupations)
        except (KeyError, ValueError):
            return False
        return True

    def __repr__(self) -> str:  # pragma: no cover
        return f"InvariantBlock({self.device.value}, charges={self.charges}, dim={self.dim})"


def block_dimension(device: DeviceKind, charges: tuple[int, ...]) -> int:
    if device is DeviceKind.BEAM_SPLITTER:
        (n,) = charges
        return n + 1
    if device is DeviceKind.DEGENERATE_AMP:
        (n,) = charges
        return n // 2 + 1
    n2, k = charges
    if not 0 <= k <= n2:
        raise ValueError(f"invalid charges {charges} for {device.value}")
    return min(k, n2 - k) + 1


@dataclass
class BlockDecomposition:
    """All invariant blocks of a device up to a charge cutoff.

    ``max_charge`` bounds the first charge (``N`` or ``N2``); for the
    nondegenerate device every ``K`` in ``[0, N2]`` is included.  Block
    objects are created lazily and cached, since large runs touch only the
    sectors actually populated by the input state.
    """

    device: DeviceKind
    max_charge: int
    charge_list: list[tuple[int, ...]] = field(repr=False)
    _cache: dict[tuple[int, ...], InvariantBlock] = field(
        default_factory=dict, repr=False
    )

    def block(self, charges: tuple[int, ...]) -> InvariantBlock:
        blk = self._cache.get(charges)
        if blk is None:
            if not self.contains_charges(charges):
                raise KeyError(f"charges {charges} outside decomposition")
            blk = InvariantBlock(self.device, charges)
            self._cache[charges] = blk
        return blk

    def contains_charges(self, charges: tuple[int, ...]) -> bool:
        if self.device is DeviceKind.NONDEGENERATE_AMP:
            if len(charges) != 2:
                return False
            n2, k = charges
            return 0 <= n2 <= self.max_charge and 0 <= k <= n2
        return len(charges) == 1 and 0 <= charges[0] <= self.max_charge

    @property
    def blocks(self) -> list[InvariantBlock]:
        return [self.block(c) for c in self.charge_list]

    def block_of_vector(self, occupations: tuple[int, ...]) -> tuple[InvariantBlock, int]:
        """Locate a Fock vector: its block and position within it."""
        charges = charge_of(self.device, occupations)
        blk = self.block(charges)
        return blk, blk.index_of(occupations)

    @property
    def total_dimension(self) -> int:
        return sum(block_dimension(self.device, c) for c in self.charge_list)


def decompose(device: DeviceKind, max_charge: int) -> BlockDecomposition:
    """Enumerate all invariant blocks with charge(s) up to ``max_charge``."""
    if max_charge < 0:
        raise ValueError("max_charge must be non-negative")
    if device is DeviceKind.NONDEGENERATE_AMP:
        charges: list[tuple[int, ...]] = [
            (n2, k) for n2 in range(max_charge + 1) for k in range(n2 + 1)
        ]
    else:
        charges = [(n,) for n in range(max_charge + 1)]
    return BlockDecomposition(device, max_charge, charges)


def enumerate_fock_vectors(
    device: DeviceKind, max_charge: int
) -> Iterator[tuple[int, ...]]:
    """All Fock vectors whose first charge is at most ``max_charge``.

    Brute-force companion to :func:`decompose`, used by tests to verify the
    block bases partition the truncated space.
    """
    if device is DeviceKind.BEAM_SPLITTER:
        for na, nb in product(range(max_charge + 1), repeat=2):
            if na + nb <= max_charge:
                yield (na, nb)
    elif device is DeviceKind.DEGENERATE_AMP:
        for nc in range(max_charge // 2 + 1):
            for na in range(max_charge - 2 * nc + 1):
                yield (na, nc)
    else:
        for nc in range(max_charge // 2 + 1):
            for na in range(max_charge - 2 * nc + 1):
                for nb in range(max_charge - 2 * nc - na + 1):
                    yield (na, nb, nc)
