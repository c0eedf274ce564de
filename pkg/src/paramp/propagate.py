"""Exact time evolution, block by block, through cached eigendecompositions.

Each populated block is propagated as ``V exp(-i diag(w) tau) V^T c`` with
``(w, V)`` the eigensystem of the block Hamiltonian.  One decomposition per
block serves every time point of a sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .blocks import BlockOperator, assemble
from .fock import DeviceKind
from .states import MultiModeState

__all__ = ["EvolutionPlan", "evolve", "heisenberg_bs_oracle"]


class EvolutionPlan:
    """Eigendecomposed block Hamiltonians for the sectors a state populates."""

    __slots__ = ("device", "operators")

    def __init__(self, device: DeviceKind, operators: dict[tuple[int, ...], BlockOperator]):
        self.device = device
        self.operators = operators

    @classmethod
    def for_state(cls, state: MultiModeState, workers: int | None = None) -> "EvolutionPlan":
        """Prepare (and eigendecompose) operators for every populated block.

        ``workers`` > 1 runs the per-block eigensolves on a thread pool;
        the solver releases the GIL, so this scales on multicore hosts.
        """
        decomposition = state.decomposition
        ops = {
            charges: assemble(decomposition.device, decomposition.block(charges))
            for charges in state.populated_charges()
        }
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(lambda op: op.ensure_eigendecomposed(), ops.values()))
        else:
            for op in ops.values():
                op.ensure_eigendecomposed()
        return cls(decomposition.device, ops)

    def operator_for(self, charges: tuple[int, ...]) -> BlockOperator:
        op = self.operators.get(charges)
        if op is None:
            raise ValueError(f"plan has no operator for block {charges}")
        return op


def evolve(state: MultiModeState, plan: EvolutionPlan, tau: float) -> MultiModeState:
    """Return exp(-i H tau) applied to ``state``; the input is untouched."""
    if plan.device is not state.device:
        raise ValueError(
            f"plan for {plan.device.value} cannot evolve a {state.device.value} state"
        )
    evolved = {}
    for charges, amps in state.amplitudes.items():
        op = plan.operator_for(charges)
        if op.dim != amps.shape[0]:
            raise ValueError(
                f"dimension mismatch in block {charges}: "
                f"operator {op.dim}, amplitudes {amps.shape[0]}"
            )
        evolved[charges] = op.evolve_amplitudes(amps, tau)
    return MultiModeState(state.decomposition, evolved, state.tail_mass)


def heisenberg_bs_oracle(
    alpha: complex, beta: complex, tau: float
) -> tuple[complex, complex]:
    """Closed-form beam-splitter mode map for coherent amplitudes.

    ``(alpha, beta) -> (alpha cos tau - i beta sin tau,
    beta cos tau - i alpha sin tau)``; test oracle only.
    """
    c, s = math.cos(tau), math.sin(tau)
    return (alpha * c - 1j * beta * s, beta * c - 1j * alpha * s)
