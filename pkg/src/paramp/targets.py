"""Target states predicted by replacing the pump with a classical amplitude.

For a pump prepared at amplitude ``beta`` and interaction time ``tau`` the
predicted effective operations are

* beam splitter:        displacement by ``z = -i beta sin(tau)``,
* degenerate amp:       squeezing  ``S(zeta) = exp[(zeta a'^2 - conj(zeta) a^2)/2]``
                        with ``zeta = -2i tau beta``,
* nondegenerate amp:    two-mode squeezing
                        ``S2(chi) = exp[chi a'b' - conj(chi) ab]`` with
                        ``chi = -i tau beta``.

Coefficients of the targets are produced two ways.  Closed recurrences give
pointwise-exact Fock amplitudes for vacuum, number and coherent inputs at any
parameter size (needed to evaluate overlaps honestly deep in the broken
regime, where the target no longer fits in any reachable cutoff).  A
truncated matrix exponential of the generator covers arbitrary custom inputs
and doubles as an independent cross-check of the recurrences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fock import DeviceKind
from .states import SingleModeSpec, TruncationError, coherent_coefficients

__all__ = [
    "displacement_parameter",
    "crude_displacement_parameter",
    "squeeze_parameter",
    "twin_parameter",
    "displaced_state",
    "squeezed_state",
    "twin_beam",
    "two_mode_squeezed",
    "displaced_number_amplitudes",
    "squeezed_vacuum_amplitudes",
    "squeezed_number_amplitudes",
    "squeezed_coherent_amplitudes",
    "twin_beam_diagonal",
    "two_mode_squeezed_number_matrix",
    "displacement_generator",
    "squeeze_generator",
    "two_mode_squeeze_generator",
    "check_sufficient_conditions",
    "ConditionReport",
]

_NORM_DEFICIT_TOL = 1e-8
_MAX_SQUEEZE = 6.0
_MAX_TWO_MODE_EXPM_DIM = 4096


def displacement_parameter(beta: complex, tau: float) -> complex:
    """Effective displacement of the beam splitter, ``-i beta sin(tau)``."""
    return -1j * beta * math.sin(tau)


def crude_displacement_parameter(beta: complex, tau: float) -> complex:
    """First-order displacement ``-i beta tau`` (diagnostic comparison only)."""
    return -1j * beta * tau


def squeeze_parameter(beta: complex, tau: float) -> complex:
    """Effective squeeze argument of the degenerate amplifier, ``-2i tau beta``."""
    return -2j * tau * beta


def twin_parameter(beta: complex, tau: float) -> complex:
    """Effective two-mode squeeze argument, ``-i tau beta``."""
    return -1j * tau * beta


def _polar(zeta: complex) -> tuple[float, float]:
    return abs(zeta), cmath.phase(zeta)


# ---------------------------------------------------------------------------
# pointwise-exact coefficient constructions


def displaced_number_amplitudes(n: int, z: complex, cutoff: int) -> np.ndarray:
    """Fock coefficients of ``D(z)|n>``.

    Built by applying the displaced creation operator
    ``(a' - conj(z))/sqrt(k)`` repeatedly to the coherent state ``|z>``.
    The raising action never reads above the cutoff, so every returned
    entry is exact.
    """
    v = coherent_coefficients(z, cutoff)
    zbar = complex(z).conjugate()
    root = np.sqrt(np.arange(cutoff + 1))
    for k in range(1, n + 1):
        out = -zbar * v
        out[1:] += root[1:] * v[:-1]
        v = out / math.sqrt(k)
    return v


def squeezed_vacuum_amplitudes(zeta: complex, cutoff: int) -> np.ndarray:
    """Fock coefficients of ``S(zeta)|0>``.

    Even amplitudes only: ``c_{n+2} = e^{i phi} tanh(r) sqrt((n+1)/(n+2)) c_n``
    with ``c_0 = 1/sqrt(cosh r)``; odd entries are exactly zero.
    """
    r, phi = _polar(zeta)
    c = np.zeros(cutoff + 1, dtype=complex)
    c[0] = 1.0 / math.sqrt(math.cosh(r))
    ratio = cmath.exp(1j * phi) * math.tanh(r)
    for n in range(0, cutoff - 1, 2):
        c[n + 2] = ratio * math.sqrt((n + 1) / (n + 2)) * c[n]
    return c


def _squeezed_raise(v: np.ndarray, zeta: complex, step: int) -> np.ndarray:
    """Apply ``S a' S^-1 / sqrt(step) = (cosh(r) a' - e^{-i phi} sinh(r) a)/sqrt(step)``."""
    r, phi = _polar(zeta)
    ch, sh = math.cosh(r), math.sinh(r)
    phase = cmath.exp(-1j * phi)
    n = np.arange(v.size - 1)
    out = -phase * sh * np.sqrt(n + 1) * v[1:]
    out[1:] += ch * np.sqrt(n[1:]) * v[: v.size - 2]
    return out / math.sqrt(step)


def squeezed_number_amplitudes(n: int, zeta: complex, cutoff: int) -> np.ndarray:
    """Fock coefficients of ``S(zeta)|n>`` via transformed creation operators."""
    v = squeezed_vacuum_amplitudes(zeta, cutoff + n)
    for k in range(1, n + 1):
        v = _squeezed_raise(v, zeta, k)
    return v[: cutoff + 1]


def squeezed_coherent_amplitudes(alpha: complex, zeta: complex, cutoff: int) -> np.ndarray:
    """Fock coefficients of ``S(zeta)|alpha> = D(alpha~) S(zeta)|0>``.

    ``alpha~ = alpha cosh(r) + conj(alpha) e^{i phi} sinh(r)``.  The state is
    Gaussian, hence annihilated by ``mu a - nu a' - t`` with ``mu = cosh r``,
    ``nu = e^{i phi} sinh r`` and ``t = mu gamma - nu conj(gamma)``; that
    yields a stable three-term recurrence seeded with the exact vacuum
    component ``<0|D(gamma)S(zeta)|0>``.
    """
    r, phi = _polar(zeta)
    mu = math.cosh(r)
    nu = cmath.exp(1j * phi) * math.sinh(r)
    gamma = alpha * mu + complex(alpha).conjugate() * nu
    t = mu * gamma - nu * gamma.conjugate()
    c = np.zeros(cutoff + 1, dtype=complex)
    log_c0 = (
        -0.5 * abs(gamma) ** 2
        + 0.5 * gamma.conjugate() ** 2 * cmath.exp(1j * phi) * math.tanh(r)
        - 0.5 * math.log(math.cosh(r))
    )
    if log_c0.real < -700.0:
        return c  # target carries no weight below any reachable cutoff
    c[0] = cmath.exp(log_c0)
    if cutoff >= 1:
        c[1] = t * c[0] / mu
    for n in range(1, cutoff):
        c[n + 1] = (t * c[n] + nu * math.sqrt(n) * c[n - 1]) / (mu * math.sqrt(n + 1))
    return c


def twin_beam_diagonal(chi: complex, cutoff: int) -> np.ndarray:
    """Coefficients on ``|n, n>`` of the twin-beam ``S2(chi)|0,0>``.

    Geometric: ``sqrt(1 - |lam|^2) lam^n`` with
    ``lam = e^{i arg chi} tanh|chi|``.
    """
    r, theta = _polar(chi)
    lam = cmath.exp(1j * theta) * math.tanh(r)
    c = np.zeros(cutoff + 1, dtype=complex)
    c[0] = math.sqrt(max(0.0, 1.0 - abs(lam) ** 2))
    for n in range(cutoff):
        c[n + 1] = c[n] * lam
    return c


def two_mode_squeezed_number_matrix(
    n_a: int, n_b: int, chi: complex, shape: tuple[int, int]
) -> np.ndarray:
    """Amplitude matrix ``psi[n_a, n_b]`` of ``S2(chi)|n_a, n_b>``.

    Applies the transformed creation operators
    ``S2 a' S2^-1 = cosh(r) a' - e^{-i theta} sinh(r) b`` (and the mirrored
    form for the second mode, which commutes with it) to the twin-beam.
    """
    r, theta = _polar(chi)
    ch, sh = math.cosh(r), math.sinh(r)
    phase = cmath.exp(-1j * theta)
    rows = shape[0] + n_a + n_b
    cols = shape[1] + n_a + n_b
    psi = np.zeros((rows, cols), dtype=complex)
    diag = twin_beam_diagonal(chi, min(rows, cols) - 1)
    np.fill_diagonal(psi, diag)
    ia = np.sqrt(np.arange(rows))[:, None]
    ib = np.sqrt(np.arange(cols))[None, :]
    for k in range(1, n_a + 1):
        out = np.zeros_like(psi)
        out[1:, :] = ch * ia[1:] * psi[:-1, :]
        out[:, :-1] -= phase * sh * ib[:, 1:] * psi[:, 1:]
        psi = out / math.sqrt(k)
    for k in range(1, n_b + 1):
        out = np.zeros_like(psi)
        out[:, 1:] = ch * ib[:, 1:] * psi[:, :-1]
        out[:-1, :] -= phase * sh * ia[1:] * psi[1:, :]
        psi = out / math.sqrt(k)
    return psi[: shape[0], : shape[1]]


# ---------------------------------------------------------------------------
# generator matrices and exponential-map routes


def displacement_generator(z: complex, dim: int) -> np.ndarray:
    """Matrix of ``z a' - conj(z) a`` on the truncated basis."""
    g = np.zeros((dim, dim), dtype=complex)
    n = np.arange(dim - 1)
    root = np.sqrt(n + 1)
    g[n + 1, n] = z * root
    g[n, n + 1] = -np.conj(z) * root
    return g


def squeeze_generator(zeta: complex, dim: int) -> np.ndarray:
    """Matrix of ``(zeta a'^2 - conj(zeta) a^2)/2`` on the truncated basis."""
    g = np.zeros((dim, dim), dtype=complex)
    n = np.arange(dim - 2)
    root = np.sqrt((n + 1) * (n + 2))
    g[n + 2, n] = 0.5 * zeta * root
    g[n, n + 2] = -0.5 * np.conj(zeta) * root
    return g


def two_mode_squeeze_generator(chi: complex, shape: tuple[int, int]) -> np.ndarray:
    """Matrix of ``chi a'b' - conj(chi) ab`` on the composite truncated basis."""
    da, db = shape
    dim = da * db
    g = np.zeros((dim, dim), dtype=complex)
    for na in range(da - 1):
        for nb in range(db - 1):
            src = na * db + nb
            dst = (na + 1) * db + (nb + 1)
            amp = chi * math.sqrt((na + 1) * (nb + 1))
            g[dst, src] = amp
            g[src, dst] = -amp.conjugate()
    return g


def _padded_dim(cutoff: int) -> int:
    return cutoff + 1 + max(16, (cutoff + 1) // 4)


def _check_norm(vec: np.ndarray, what: str) -> np.ndarray:
    deficit = 1.0 - float(np.vdot(vec, vec).real)
    if deficit > _NORM_DEFICIT_TOL:
        raise TruncationError(
            f"{what} loses {deficit:.3e} probability at the requested cutoff",
            required_cutoff=None,
        )
    return vec


def displaced_state(spec: SingleModeSpec, z: complex, cutoff: int) -> np.ndarray:
    """Fock vector of ``D(z)`` applied to a single-mode input.

    Coherent input stays coherent (``|alpha + z>``, global phase dropped);
    any other input goes through the exponential of the displacement
    generator on a padded basis.
    """
    if spec.kind == "coherent":
        return _check_norm(
            coherent_coefficients(spec.amplitude + z, cutoff), "displaced state"
        )
    dim = _padded_dim(cutoff)
    u = expm(displacement_generator(z, dim))
    vec = u @ spec.fock_coefficients(dim - 1)
    return _check_norm(vec[: cutoff + 1], "displaced state")


def squeezed_state(spec: SingleModeSpec, zeta: complex, cutoff: int) -> np.ndarray:
    """Fock vector of ``S(zeta)`` applied to a single-mode input.

    Vacuum, number and coherent inputs use the exact recurrences; custom
    inputs use the exponential of the squeeze generator.  ``|zeta|`` is
    capped because no practical cutoff holds the state beyond that.
    """
    if abs(zeta) >= _MAX_SQUEEZE:
        raise ValueError(
            f"squeeze parameter |zeta| = {abs(zeta):.3f} >= {_MAX_SQUEEZE}; "
            f"the truncated state would be meaningless"
        )
    if spec.kind == "vacuum":
        vec = squeezed_vacuum_amplitudes(zeta, cutoff)
    elif spec.kind == "number":
        vec = squeezed_number_amplitudes(spec.n, zeta, cutoff)
    elif spec.kind == "coherent":
        vec = squeezed_coherent_amplitudes(spec.amplitude, zeta, cutoff)
    else:
        dim = _padded_dim(cutoff)
        u = expm(squeeze_generator(zeta, dim))
        vec = (u @ spec.fock_coefficients(dim - 1))[: cutoff + 1]
    return _check_norm(vec, "squeezed state")


def twin_beam(chi: complex, cutoff: int) -> np.ndarray:
    """Two-mode amplitude matrix of the twin-beam ``S2(chi)|0,0>``."""
    if abs(chi) >= _MAX_SQUEEZE:
        raise ValueError(
            f"two-mode squeeze parameter |chi| = {abs(chi):.3f} >= {_MAX_SQUEEZE}"
        )
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    np.fill_diagonal(psi, twin_beam_diagonal(chi, cutoff))
    return _check_norm(psi.ravel(), "twin-beam").reshape(psi.shape)


def two_mode_squeezed(
    spec_pair: tuple[SingleModeSpec, SingleModeSpec], chi: complex, cutoff: int
) -> np.ndarray:
    """Two-mode amplitude matrix of ``S2(chi)`` applied to a product input."""
    if abs(chi) >= _MAX_SQUEEZE:
        raise ValueError(
            f"two-mode squeeze parameter |chi| = {abs(chi):.3f} >= {_MAX_SQUEEZE}"
        )
    spec_a, spec_b = spec_pair
    shape = (cutoff + 1, cutoff + 1)
    if spec_a.kind == "vacuum" and spec_b.kind == "vacuum":
        return twin_beam(chi, cutoff)
    if spec_a.kind in ("vacuum", "number") and spec_b.kind in ("vacuum", "number"):
        psi = two_mode_squeezed_number_matrix(spec_a.n, spec_b.n, chi, shape)
        return _check_norm(psi.ravel(), "two-mode squeezed state").reshape(shape)
    dim = _padded_dim(cutoff)
    if dim * dim > _MAX_TWO_MODE_EXPM_DIM**2:
        raise TruncationError(
            f"two-mode exponential route needs composite dimension {dim * dim}, "
            f"beyond the supported {_MAX_TWO_MODE_EXPM_DIM**2}"
        )
    u = expm(two_mode_squeeze_generator(chi, (dim, dim)))
    inp = np.outer(spec_a.fock_coefficients(dim - 1), spec_b.fock_coefficients(dim - 1))
    psi = (u @ inp.ravel()).reshape(dim, dim)[: cutoff + 1, : cutoff + 1]
    return _check_norm(psi.ravel(), "two-mode squeezed state").reshape(shape)


# ---------------------------------------------------------------------------
# textbook sufficient conditions


@dataclass(frozen=True)
class ConditionReport:
    """Numeric values of the published sufficient conditions for one device."""

    device: DeviceKind
    conditions: tuple[tuple[str, float], ...]
    threshold: float

    @property
    def satisfied(self) -> bool:
        return all(value <= self.threshold for _, value in self.conditions)

    def as_dict(self) -> dict[str, float]:
        return dict(self.conditions)


def check_sufficient_conditions(
    device: DeviceKind, beta: complex, tau: float, threshold: float = 0.1
) -> ConditionReport:
    """Evaluate the textbook smallness conditions at finite ``(beta, tau)``.

    Each entry is a quantity that the respective asymptotic argument needs to
    be much smaller than one; it counts as satisfied below ``threshold``.
    These are diagnostics only: the exact simulation shows the approximation
    can hold where they fail.
    """
    b = abs(beta)
    if device is DeviceKind.BEAM_SPLITTER:
        conditions = (
            ("inverse_pump_amplitude", 1.0 / b if b > 0 else math.inf),
            ("abs_sin_tau", abs(math.sin(tau))),
        )
    elif device is DeviceKind.DEGENERATE_AMP:
        growth = math.exp(min(4.0 * b * tau, 700.0))
        conditions = (
            ("inverse_pump_amplitude", 1.0 / b if b > 0 else math.inf),
            ("tau", tau),
            ("tau_times_growth", tau * growth),
            ("growth_over_pump", growth / b if b > 0 else math.inf),
        )
    else:
        raise ValueError(
            "sufficient conditions are tabulated for the beam splitter and "
            "the degenerate amplifier only"
        )
    return ConditionReport(device, conditions, threshold)
