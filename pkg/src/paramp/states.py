"""Input-state construction: single-mode specs and block-organized products.

States are stored per invariant block, keyed by the block charges.  Because
the dynamics conserves those charges, all truncation error is committed here,
at preparation time; evolution adds no further leakage.  States are kept
unnormalized, with the discarded probability recorded in ``tail_mass``, so
downstream overlap values carry an honest error budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import BlockDecomposition, DeviceKind, charge_of

__all__ = [
    "TruncationError",
    "SingleModeSpec",
    "MultiModeState",
    "coherent_coefficients",
    "product_state",
    "default_pump_cutoff",
    "default_max_charge",
    "parse_mode_spec",
]

DEFAULT_EPS_TRUNC = 1e-10


class TruncationError(Exception):
    """Raised when a basis cutoff cannot hold the requested state."""

    def __init__(self, message: str, required_cutoff: int | None = None):
        super().__init__(message)
        self.required_cutoff = required_cutoff


@dataclass(frozen=True)
class SingleModeSpec:
    """One mode's input state: vacuum, number, coherent, or explicit coefficients."""

    kind: str
    n: int = 0
    amplitude: complex = 0j
    coefficients: tuple[complex, ...] = ()

    @classmethod
    def vacuum(cls) -> "SingleModeSpec":
        return cls("vacuum")

    @classmethod
    def number(cls, n: int) -> "SingleModeSpec":
        if n < 0:
            raise ValueError("photon number must be non-negative")
        return cls("number", n=n)

    @classmethod
    def coherent(cls, amplitude: complex) -> "SingleModeSpec":
        return cls("coherent", amplitude=complex(amplitude))

    @classmethod
    def custom(cls, coefficients) -> "SingleModeSpec":
        coeffs = tuple(complex(c) for c in coefficients)
        if not coeffs:
            raise ValueError("custom spec needs at least one coefficient")
        norm_sq = sum(abs(c) ** 2 for c in coeffs)
        if norm_sq > 1 + 1e-12:
            raise ValueError(f"custom coefficients have norm^2 {norm_sq} > 1")
        return cls("custom", coefficients=coeffs)

    def natural_cutoff(self) -> int:
        """Smallest occupation cutoff carrying all but ~1e-10 of the state."""
        if self.kind == "vacuum":
            return 0
        if self.kind == "number":
            return self.n
        if self.kind == "custom":
            return len(self.coefficients) - 1
        return default_pump_cutoff(abs(self.amplitude))

    def fock_coefficients(self, cutoff: int) -> np.ndarray:
        c = np.zeros(cutoff + 1, dtype=complex)
        if self.kind == "vacuum":
            c[0] = 1.0
        elif self.kind == "number":
            if self.n > cutoff:
                raise TruncationError(
                    f"number state |{self.n}> exceeds cutoff {cutoff}",
                    required_cutoff=self.n,
                )
            c[self.n] = 1.0
        elif self.kind == "coherent":
            c[:] = coherent_coefficients(self.amplitude, cutoff)
        else:
            upto = min(cutoff + 1, len(self.coefficients))
            c[:upto] = self.coefficients[:upto]
        return c

    def label(self) -> str:
        if self.kind == "vacuum":
            return "vacuum"
        if self.kind == "number":
            return f"fock:{self.n}"
        if self.kind == "coherent":
            a = self.amplitude
            return f"coherent:{a.real:g},{a.imag:g}"
        return f"custom[{len(self.coefficients)}]"


def coherent_coefficients(amplitude: complex, cutoff: int) -> np.ndarray:
    """Fock expansion of a coherent state, by the stable ratio recurrence.

    ``c_n = exp(-|z|^2/2) z^n / sqrt(n!)`` computed as successive ratios
    ``z / sqrt(n+1)`` so no factorial is ever formed.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    z = complex(amplitude)
    c = np.empty(cutoff + 1, dtype=complex)
    c[0] = math.exp(-0.5 * abs(z) ** 2)
    for n in range(cutoff):
        c[n + 1] = c[n] * z / math.sqrt(n + 1)
    return c


def default_pump_cutoff(amplitude_modulus: float) -> int:
    """Occupation cutoff for a coherent state, ``|z|^2 + 10 |z| + 20``.

    Leaves a Poisson tail below 1e-10 for all amplitudes up to 9.
    """
    b = float(amplitude_modulus)
    return math.ceil(b * b + 10.0 * b + 20.0)


def default_max_charge(
    device: DeviceKind,
    signal: "SingleModeSpec | tuple[SingleModeSpec, SingleModeSpec]",
    pump_cutoff: int,
) -> int:
    """Charge cutoff that holds the full product of truncated inputs."""
    if device is DeviceKind.NONDEGENERATE_AMP:
        spec_a, spec_b = _as_pair(device, signal)
        return spec_a.natural_cutoff() + spec_b.natural_cutoff() + 2 * pump_cutoff
    (spec,) = _as_pair(device, signal)
    return spec.natural_cutoff() + device.pump_charge_weight * pump_cutoff


def _as_pair(device, signal) -> tuple[SingleModeSpec, ...]:
    if device is DeviceKind.NONDEGENERATE_AMP:
        if isinstance(signal, SingleModeSpec):
            raise ValueError("nondegenerate device needs a (signal, idler) pair")
        a, b = signal
        return (a, b)
    if not isinstance(signal, SingleModeSpec):
        raise ValueError(f"{device.value} takes a single signal spec")
    return (signal,)


class MultiModeState:
    """Amplitudes over the block-organized Fock basis of one device."""

    __slots__ = ("decomposition", "amplitudes", "tail_mass")

    def __init__(
        self,
        decomposition: BlockDecomposition,
        amplitudes: dict[tuple[int, ...], np.ndarray],
        tail_mass: float = 0.0,
    ):
        self.decomposition = decomposition
        self.amplitudes = amplitudes
        self.tail_mass = tail_mass

    @property
    def device(self) -> DeviceKind:
        return self.decomposition.device

    def norm_squared(self) -> float:
        return float(
            sum(np.vdot(a, a).real for a in self.amplitudes.values())
        )

    def populated_charges(self) -> list[tuple[int, ...]]:
        return sorted(self.amplitudes)

    def block_norms(self) -> dict[tuple[int, ...], float]:
        return {
            c: float(np.vdot(a, a).real) for c, a in self.amplitudes.items()
        }

    def amplitude_of(self, occupations: tuple[int, ...]) -> complex:
        charges = charge_of(self.device, occupations)
        vec = self.amplitudes.get(charges)
        if vec is None:
            return 0j
        idx = self.decomposition.block(charges).index_of(occupations)
        return complex(vec[idx])

    def charge_moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Mean and variance of each conserved charge."""
        items = sorted(self.amplitudes.items())
        charges = np.array([c for c, _ in items], dtype=float)
        weights = np.array([np.vdot(a, a).real for _, a in items])
        total = weights.sum()
        mean = (weights[:, None] * charges).sum(axis=0) / total
        var = (weights[:, None] * (charges - mean) ** 2).sum(axis=0) / total
        return mean, var

    def dense_tensor(self) -> np.ndarray:
        """Full multimode tensor of amplitudes (small cutoffs only)."""
        shape = tuple(
            max(
                (int(self.decomposition.block(c).occupations(mode).max())
                 for c in self.amplitudes),
                default=0,
            )
            + 1
            for mode in range(self.device.n_modes)
        )
        if np.prod(shape) > 4_000_000:
            raise MemoryError(f"dense tensor of shape {shape} is too large")
        out = np.zeros(shape, dtype=complex)
        for c, vec in self.amplitudes.items():
            blk = self.decomposition.block(c)
            occ = tuple(blk.occupations(mode) for mode in range(self.device.n_modes))
            out[occ] = vec
        return out

    def copy(self) -> "MultiModeState":
        return MultiModeState(
            self.decomposition,
            {c: a.copy() for c, a in self.amplitudes.items()},
            self.tail_mass,
        )


def product_state(
    signal: "SingleModeSpec | tuple[SingleModeSpec, SingleModeSpec]",
    pump: SingleModeSpec,
    decomposition: BlockDecomposition,
    eps_trunc: float = DEFAULT_EPS_TRUNC,
    pump_cutoff: int | None = None,
) -> MultiModeState:
    """Scatter a product input into the block basis.

    Every component with charge inside the decomposition is kept; the rest
    is accounted to ``tail_mass``.  Raises :class:`TruncationError` when the
    discarded probability exceeds ``eps_trunc``.
    """
    device = decomposition.device
    specs = list(_as_pair(device, signal))
    if pump_cutoff is None:
        pump_cutoff = pump.natural_cutoff()
    weight = device.pump_charge_weight
    max_pump = min(pump_cutoff, decomposition.max_charge // weight)
    coeffs = [
        spec.fock_coefficients(min(spec.natural_cutoff(), decomposition.max_charge))
        for spec in specs
    ]
    coeffs.append(pump.fock_coefficients(max_pump))

    amplitudes: dict[tuple[int, ...], np.ndarray] = {}
    kept = 0.0
    if device is DeviceKind.NONDEGENERATE_AMP:
        ca, cb, cp = coeffs
        for na in range(len(ca)):
            if ca[na] == 0:
                continue
            for nb in range(len(cb)):
                ab = ca[na] * cb[nb]
                if ab == 0:
                    continue
                for nc in range(len(cp)):
                    amp = ab * cp[nc]
                    if amp == 0:
                        continue
                    n2 = na + nb + 2 * nc
                    if n2 > decomposition.max_charge:
                        break
                    vec = _block_vector(amplitudes, decomposition, (n2, na + nc))
                    vec[nc] = amp
                    kept += abs(amp) ** 2
    else:
        cs, cp = coeffs
        for ns in range(len(cs)):
            if cs[ns] == 0:
                continue
            for nc in range(len(cp)):
                amp = cs[ns] * cp[nc]
                if amp == 0:
                    continue
                n = ns + weight * nc
                if n > decomposition.max_charge:
                    break
                vec = _block_vector(amplitudes, decomposition, (n,))
                idx = ns if device is DeviceKind.BEAM_SPLITTER else nc
                vec[idx] = amp
                kept += abs(amp) ** 2

    tail = max(0.0, 1.0 - kept)
    if tail > eps_trunc:
        required = _required_max_charge(device, specs, pump, eps_trunc)
        raise TruncationError(
            f"truncation tail {tail:.3e} exceeds eps_trunc {eps_trunc:.3e} at "
            f"max_charge {decomposition.max_charge}; need about {required}",
            required_cutoff=required,
        )
    return MultiModeState(decomposition, amplitudes, tail)


def _block_vector(amplitudes, decomposition, charges) -> np.ndarray:
    vec = amplitudes.get(charges)
    if vec is None:
        vec = np.zeros(decomposition.block(charges).dim, dtype=complex)
        amplitudes[charges] = vec
    return vec


def _required_max_charge(device, specs, pump, eps_trunc) -> int:
    """Charge cutoff that would make the product tail acceptable."""
    per_mode = eps_trunc / (len(specs) + 1) / 2
    cuts = [_cutoff_for_tail(s, per_mode) for s in specs]
    pump_cut = _cutoff_for_tail(pump, per_mode)
    if device is DeviceKind.NONDEGENERATE_AMP:
        return cuts[0] + cuts[1] + 2 * pump_cut
    return cuts[0] + device.pump_charge_weight * pump_cut


def _cutoff_for_tail(spec: SingleModeSpec, tail: float) -> int:
    if spec.kind in ("vacuum", "number", "custom"):
        return spec.natural_cutoff()
    z2 = abs(spec.amplitude) ** 2
    mass = term = math.exp(-z2)
    n = 0
    while mass < 1.0 - tail and n < 100_000:
        n += 1
        term *= z2 / n
        mass += term
    return n


def parse_mode_spec(text: str) -> "SingleModeSpec | tuple[SingleModeSpec, SingleModeSpec]":
    """Parse a CLI signal spec.

    Grammar: ``vacuum`` | ``fock:n`` | ``coherent:re,im`` | ``fock2:n,m``
    (the last one denotes a signal-idler number pair for the nondegenerate
    amplifier).
    """
    text = text.strip()
    if text == "vacuum":
        return SingleModeSpec.vacuum()
    kind, _, arg = text.partition(":")
    try:
        if kind == "fock" and arg:
            return SingleModeSpec.number(int(arg))
        if kind == "coherent" and arg:
            re_part, im_part = (arg.split(",") + ["0"])[:2] if "," in arg else (arg, "0")
            return SingleModeSpec.coherent(complex(float(re_part), float(im_part)))
        if kind == "fock2" and arg:
            n, m = arg.split(",")
            return (SingleModeSpec.number(int(n)), SingleModeSpec.number(int(m)))
    except ValueError as exc:
        raise ValueError(f"malformed mode spec {text!r}: {exc}") from None
    raise ValueError(
        f"unknown mode spec {text!r}; expected vacuum, fock:n, coherent:re,im "
        f"or fock2:n,m"
    )
