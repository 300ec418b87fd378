"""Spatio-temporal photon field scattered by the qubit pair.

The right- and left-moving field envelopes are frequency integrals of the
scattered mode amplitudes.  Every one of those integrals collapses onto a
single master kernel

    K(s1, t; a) = int_0^inf (e^{i(w-a)t} - 1)/(w - a) * e^{i w (s1 - t)} dw
                = e^{i a s2} [E1(i a s1) - E1(i a s2) + 2 pi i * 1(s1 > 0)],

with s2 = s1 - t, evaluated at s1 = +-(shifted coordinate)/v_g and at a
center ``a`` that is either a complex collective pole, the drive carrier,
or the bare qubit frequency.  This module evaluates that kernel (through
the scaled E1, so the decaying channels neither under- nor overflow),
assembles the forward, backward, and inter-qubit fields in both their
transient and long-time steady forms, and provides the scattering spectra
and closed-form resonance peak heights.

The first E1 argument above follows from closing the frequency contour;
an alternative reading with the argument a*s1 instead of i*a*s1 circulates
and can be selected with ``set_kernel_convention("printed")``.  The
acceptance suite resolves the choice empirically against the quadrature
oracle; the default "rotated" convention is the one that survives.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import (CollectiveRates, ModelParams, Regime, classify_regime,
                    coupling_weights, snapped_phase_factor)
from .specfun import cosine_integral, e1_scaled, si_lower

TWO_PI_I = 2j * np.pi

KERNEL_CONVENTIONS = ("rotated", "printed")
_kernel_convention = "rotated"

# Steady-state acceptance gates: transients must have decayed to this level
# and the algebraic 1/t tails must be below this before "auto" picks the
# steady branch.
_STEADY_DECAY_GATE = 1e-8
_STEADY_TAIL_GATE = 1e-6

# Closest approach to a qubit allowed on observation grids, as a fraction
# of the separation d; any nearer, the point-qubit cosine-integral
# divergence dominates and the field value is an artifact.
EXCLUSION_FRACTION = 0.05

_PARALLEL_THRESHOLD = 16384


def set_kernel_convention(name: str) -> None:
    """Select the E1-argument convention of the damped kernels.

    "rotated" (default) uses E1(i a s1) for the launch term, as the
    contour derivation gives; "printed" uses E1(a s1).  The latter is only
    evaluable for positive shifted coordinates (elsewhere the argument
    lands on E1's branch cut) and fails the quadrature cross-check, but is
    kept selectable so the comparison stays reproducible.
    """
    global _kernel_convention
    if name not in KERNEL_CONVENTIONS:
        raise ValueError(f"unknown kernel convention {name!r}")
    _kernel_convention = name


def kernel_convention() -> str:
    """Currently selected E1-argument convention."""
    return _kernel_convention


def _thread_count() -> int:
    env = os.environ.get("WQED_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return min(4, os.cpu_count() or 1)


def _eval_chunked(fn, *arrays):
    """Apply ``fn`` over equal index chunks of flat arrays, maybe threaded.

    numpy releases the GIL inside the heavy kernels, so a small thread
    pool helps on big grids; chunks are reassembled in index order, so the
    result is bit-identical to the serial evaluation.
    """
    n = arrays[0].size
    threads = _thread_count()
    if threads <= 1 or n < _PARALLEL_THRESHOLD:
        return fn(*arrays)
    bounds = np.linspace(0, n, threads + 1, dtype=int)
    pieces = [tuple(a[lo:hi] for a in arrays)
              for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda piece: fn(*piece), pieces))
    return np.concatenate(results)


# ---------------------------------------------------------------------------
# the master kernel

def _wave_kernel_core(s1, t, a):
    """Master kernel for retarded coordinate s1 and elapsed time t.

    Broadcasts over numpy arrays.  ``a`` is the complex center; its
    imaginary part must be <= 0 (decaying channels), which is what the
    closing of the contour assumed.
    """
    s1 = np.asarray(s1, dtype=float)
    t = np.asarray(t, dtype=float)
    s1, t = np.broadcast_arrays(s1, t)
    s2 = s1 - t
    if np.any(s1 == 0) or np.any(s2 == 0):
        raise ValueError(
            "kernel singularity: a shifted coordinate or the light front "
            "passes exactly through a grid point"
        )
    if _kernel_convention == "rotated":
        launch = np.exp(-1j * a * t) * e1_scaled(1j * a * s1)
    else:
        arg = a * np.asarray(s1, dtype=complex)
        if np.any((arg.imag == 0) & (arg.real <= 0)) or np.any(s1 < 0):
            raise ValueError(
                "printed kernel convention undefined for non-positive "
                "shifted coordinates (E1 branch cut)"
            )
        launch = np.exp(-1j * a * t + (1j - 1.0) * a * s1) * e1_scaled(arg)
    front = -e1_scaled(1j * a * s2)
    # Winding bookkeeping of the two contour closings; in the physical
    # region s2 < 0 this reduces to +2*pi*i for s1 > 0 and nothing else.
    circ = TWO_PI_I * np.exp(1j * a * s2) \
        * ((s2 < 0).astype(float) - (s1 < 0).astype(float))
    return launch + front + circ


def _wave_kernel(s1, t, a):
    s1 = np.asarray(s1, dtype=float)
    t = np.asarray(t, dtype=float)
    s1b, tb = np.broadcast_arrays(s1, t)
    shape = s1b.shape
    flat_s = np.ascontiguousarray(s1b).ravel()
    flat_t = np.ascontiguousarray(tb).ravel()
    out = _eval_chunked(lambda ss, tt: _wave_kernel_core(ss, tt, a),
                        flat_s, flat_t)
    out = out.reshape(shape)
    return out if shape else complex(out)


def decay_kernel_fwd(x_shift, t, omega_c, params: ModelParams):
    """Forward-propagating damped kernel at complex center ``omega_c``.

    Parameters
    ----------
    x_shift : float or array_like
        Shifted coordinate (x or x - d) in meters.
    t : float or array_like
        Elapsed time in seconds.
    omega_c : complex
        Channel center Omega - i*gamma_channel.
    params : ModelParams
    """
    return _wave_kernel(np.asarray(x_shift) / params.v_g, t, complex(omega_c))


def decay_kernel_bwd(x_shift, t, omega_c, params: ModelParams):
    """Backward-propagating damped kernel at complex center ``omega_c``."""
    return _wave_kernel(-np.asarray(x_shift) / params.v_g, t, complex(omega_c))


def drive_kernel_fwd(x_shift, t, params: ModelParams):
    """Forward kernel at the (real) drive carrier."""
    return _wave_kernel(np.asarray(x_shift) / params.v_g, t,
                        complex(params.omega_s))


def drive_kernel_bwd(x_shift, t, params: ModelParams):
    """Backward kernel at the (real) drive carrier."""
    return _wave_kernel(-np.asarray(x_shift) / params.v_g, t,
                        complex(params.omega_s))


def resonant_kernel(direction: str, x_shift, t, params: ModelParams):
    """Kernel pinned at the bare qubit frequency (dark-channel carrier).

    ``direction`` is "fwd" or "bwd".
    """
    if direction not in ("fwd", "bwd"):
        raise ValueError("direction must be 'fwd' or 'bwd'")
    sign = 1.0 if direction == "fwd" else -1.0
    return _wave_kernel(sign * np.asarray(x_shift) / params.v_g, t,
                        complex(params.omega_q))


def _wave_kernel_trig(s1, t, omega):
    """Second writing of the real-center kernel, via sine/cosine integrals.

    Mathematically identical to ``_wave_kernel`` at a real center; the
    numerical path is completely different (real ci/si of absolute-value
    arguments instead of the complex continued fraction), which makes the
    agreement between the two a strong internal consistency check.
    """
    s1 = np.asarray(s1, dtype=float)
    t = np.asarray(t, dtype=float)
    s1, t = np.broadcast_arrays(s1, t)
    s2 = s1 - t
    if np.any(s2 >= 0):
        raise ValueError("trig writing implemented for the causal region s1 < t")
    if np.any(s1 == 0):
        raise ValueError("kernel singularity at a qubit position")
    w1 = omega * np.abs(s1)
    w2 = omega * np.abs(s2)
    launch = np.where(s1 > 0,
                      TWO_PI_I - cosine_integral(w1) + 1j * si_lower(w1),
                      -cosine_integral(w1) - 1j * si_lower(w1))
    front = cosine_integral(w2) + 1j * si_lower(w2)
    return np.exp(1j * omega * s2) * (launch + front)


# ---------------------------------------------------------------------------
# space-time grids and field slices

class Region(str, enum.Enum):
    """Which side of the qubit pair the observation points sit on."""

    BEFORE = "Before"      # x < 0
    BETWEEN = "Between"    # 0 < x < d
    BEHIND = "Behind"      # x > d

    def __str__(self):
        return self.value


class FieldBranch(str, enum.Enum):
    TRANSIENT = "transient"
    STEADY = "steady"
    AUTO = "auto"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Validated observation grid (outer product of positions and times)."""

    x: np.ndarray
    t: np.ndarray
    region: Region


def space_time_grid(params: ModelParams, x, t,
                    region: Region | None = None) -> SpaceTimeGrid:
    """Build and validate an observation grid.

    Checks that all positions fall in one region, that every (x, t) pair
    is causally reachable (the incident front has passed for forward
    fields, the first backward emission has arrived for backward ones),
    and that no point sits exactly on a qubit or on the light front, where
    the closed forms are logarithmically singular.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(t))):
        raise ValueError("grid coordinates must be finite")
    if np.any(t <= 0):
        raise ValueError("times must be strictly positive")
    d = params.distance
    if np.all(x < 0):
        inferred = Region.BEFORE
    elif np.all((x > 0) & (x < d)):
        inferred = Region.BETWEEN
    elif np.all(x > d):
        inferred = Region.BEHIND
    else:
        raise ValueError(
            "positions must lie strictly within one region "
            "(x < 0, 0 < x < d, or x > d)"
        )
    if region is not None and Region(region) is not inferred:
        raise ValueError(f"positions lie in {inferred}, not {Region(region)}")
    # Point-qubit regularization: the cosine-integral divergence makes the
    # field nonphysical within 0.05 d of either qubit, so such grid points
    # are refused outright.  The tiny slack keeps exact-boundary points
    # like x = 1.05 d from tripping on one-ulp rounding.
    closest = np.minimum(np.abs(x), np.abs(x - d))
    if np.any(closest < (EXCLUSION_FRACTION - 1e-9) * d):
        raise ValueError(
            f"positions within {EXCLUSION_FRACTION:g}*d of a qubit are "
            "excluded (point-qubit divergence)"
        )
    horizon = params.v_g * t.min()
    if inferred is Region.BEFORE:
        if x.min() + horizon <= 0:
            raise ValueError("backward field not yet reachable: need x + v_g t > 0")
    else:
        if x.max() >= horizon:
            raise ValueError("incident front has not passed: need x < v_g t")
    # exact singular alignments
    vt = params.v_g * t[:, None]
    for shift in (x, x - d, -x, -(x - d)):
        if np.any(shift[None, :] == vt):
            raise ValueError("a grid point sits exactly on the light front")
    return SpaceTimeGrid(x=x, t=t, region=inferred)


@dataclass(frozen=True)
class FieldSlice:
    """Field envelopes on a grid; arrays are indexed [time, position].

    ``u`` is the right-moving envelope (incident plus scattered), ``v``
    the left-moving one, ``w`` their sum where both exist.  The energy
    arrays are the corresponding |field|^2 densities.
    """

    grid: SpaceTimeGrid
    branch: FieldBranch
    regime: Regime
    u: np.ndarray | None = None
    v: np.ndarray | None = None
    w: np.ndarray | None = None
    energy_u: np.ndarray | None = None
    energy_v: np.ndarray | None = None
    energy_w: np.ndarray | None = None


def incident_plane_wave(x, t, params: ModelParams):
    """Incident right-moving envelope A e^{i omega_s (x/v_g - t)}."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return params.amplitude * np.exp(
        1j * params.omega_s * (x / params.v_g - t))


def _scattered_sum(y1, y2, t, rates: CollectiveRates, params: ModelParams):
    """Scattered envelope from kernels at shifted coordinates (y1, y2).

    For the forward field pass (x, x-d); for the backward field pass
    (-x, -(x-d)).  The channel pattern (symmetric adds the two shifts,
    antisymmetric subtracts) is the same in both directions.
    """
    a_plus = params.omega_q - 1j * rates.gamma_plus
    a_minus = params.omega_q - 1j * rates.gamma_minus
    v_g = params.v_g
    k_plus_1 = _wave_kernel(y1 / v_g, t, a_plus)
    k_plus_2 = _wave_kernel(y2 / v_g, t, a_plus)
    k_minus_1 = _wave_kernel(y1 / v_g, t, a_minus)
    k_minus_2 = _wave_kernel(y2 / v_g, t, a_minus)
    k_s_1 = _wave_kernel(y1 / v_g, t, complex(params.omega_s))
    k_s_2 = _wave_kernel(y2 / v_g, t, complex(params.omega_s))
    return -0.5 * params.coupling * (
        rates.c_plus * (k_plus_1 + k_plus_2 - k_s_1 - k_s_2)
        + rates.c_minus * (k_minus_1 - k_minus_2 - k_s_1 + k_s_2)
    )


# ---------------------------------------------------------------------------
# steady-state forms

def _steady_plane(y, t, carrier, params: ModelParams):
    """Long-time plane-wave component e^{i a (y/v - t)} M(a y / v).

    M(w) collects what survives of the kernel when every transient has
    decayed: 2 pi i - ci(w) + i si(w) on the outgoing side (w > 0) and
    -(ci(|w|) + i si(|w|)) on the other.
    """
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    w = carrier * y / params.v_g
    if np.any(w == 0):
        raise ValueError("steady field singular at a qubit position")
    mag = np.abs(w)
    ci = cosine_integral(mag)
    si = si_lower(mag)
    m = np.where(w > 0, TWO_PI_I - ci + 1j * si, -(ci + 1j * si))
    return np.exp(1j * carrier * (y / params.v_g - t)) * m


def _steady_scattered(y1, y2, t, rates: CollectiveRates, params: ModelParams):
    """Steady-state limit of ``_scattered_sum`` (same coordinate slots)."""
    g = params.coupling
    total = 0.5 * g * (
        (rates.c_plus + rates.c_minus)
        * _steady_plane(y1, t, params.omega_s, params)
        + (rates.c_plus - rates.c_minus)
        * _steady_plane(y2, t, params.omega_s, params)
    )
    # A dark channel never decays: its kernel survives as a plane wave
    # pinned at the bare qubit frequency.
    if rates.regime is Regime.EVEN_PI:
        total = total - 0.5 * g * rates.c_minus * (
            _steady_plane(y1, t, params.omega_q, params)
            - _steady_plane(y2, t, params.omega_q, params)
        )
    elif rates.regime is Regime.ODD_PI:
        total = total - 0.5 * g * rates.c_plus * (
            _steady_plane(y1, t, params.omega_q, params)
            + _steady_plane(y2, t, params.omega_q, params)
        )
    return total


def steady_forward(x, t, rates: CollectiveRates, params: ModelParams):
    """Steady-state right-moving field behind the pair (x > d)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= params.distance):
        raise ValueError("steady_forward expects x > d")
    return incident_plane_wave(x, t, params) \
        + _steady_scattered(x, x - params.distance, t, rates, params)


def steady_backward(x, t, rates: CollectiveRates, params: ModelParams):
    """Steady-state left-moving field before the pair (x < 0)."""
    x = np.asarray(x, dtype=float)
    if np.any(x >= 0):
        raise ValueError("steady_backward expects x < 0")
    return _steady_scattered(-x, -(x - params.distance), t, rates, params)


def steady_ready(grid: SpaceTimeGrid, rates: CollectiveRates,
                 params: ModelParams) -> bool:
    """Whether the steady forms are converged everywhere on the grid."""
    span = np.max(np.abs(np.concatenate([grid.x, grid.x - params.distance])))
    lag = grid.t.min() - span / params.v_g
    if lag <= 0:
        return False
    positive = [r.real for r in (rates.gamma_plus, rates.gamma_minus)
                if r.real > 0]
    slowest = min(positive)
    if np.exp(-slowest * lag) >= _STEADY_DECAY_GATE:
        return False
    if min(params.omega_s, params.omega_q) * lag <= 1.0 / _STEADY_TAIL_GATE:
        return False
    return True


def _resolve_branch(grid, rates, params, branch) -> FieldBranch:
    branch = FieldBranch(branch)
    if branch is FieldBranch.AUTO:
        return (FieldBranch.STEADY if steady_ready(grid, rates, params)
                else FieldBranch.TRANSIENT)
    return branch


# ---------------------------------------------------------------------------
# assembled fields

def forward_field(grid: SpaceTimeGrid, rates: CollectiveRates,
                  params: ModelParams, branch="auto") -> FieldSlice:
    """Right-moving field u(x, t) between or behind the qubits.

    Parameters
    ----------
    grid : SpaceTimeGrid
        Region must be Between or Behind.
    rates : CollectiveRates
    params : ModelParams
    branch : str or FieldBranch
        "transient" for the exact finite-time forms, "steady" for the
        long-time limit, "auto" to pick steady once it is converged.

    Returns
    -------
    FieldSlice with ``u`` and ``energy_u`` filled.
    """
    if grid.region is Region.BEFORE:
        raise ValueError("forward field is defined between or behind the qubits")
    use = _resolve_branch(grid, rates, params, branch)
    tt = grid.t[:, None]
    xx = grid.x[None, :]
    if use is FieldBranch.STEADY:
        scattered = _steady_scattered(xx, xx - params.distance, tt,
                                      rates, params)
    else:
        scattered = _scattered_sum(xx, xx - params.distance, tt,
                                   rates, params)
    u = incident_plane_wave(xx, tt, params) + scattered
    return FieldSlice(grid=grid, branch=use, regime=rates.regime,
                      u=u, energy_u=np.abs(u) ** 2)


def backward_field(grid: SpaceTimeGrid, rates: CollectiveRates,
                   params: ModelParams, branch="auto") -> FieldSlice:
    """Left-moving field v(x, t) before or between the qubits."""
    if grid.region is Region.BEHIND:
        raise ValueError("backward field is defined before or between the qubits")
    use = _resolve_branch(grid, rates, params, branch)
    tt = grid.t[:, None]
    xx = grid.x[None, :]
    if use is FieldBranch.STEADY:
        v = _steady_scattered(-xx, -(xx - params.distance), tt, rates, params)
    else:
        v = _scattered_sum(-xx, -(xx - params.distance), tt, rates, params)
    return FieldSlice(grid=grid, branch=use, regime=rates.regime,
                      v=v, energy_v=np.abs(v) ** 2)


def interqubit_field(grid: SpaceTimeGrid, rates: CollectiveRates,
                     params: ModelParams, branch="auto") -> FieldSlice:
    """Total field w = u + v between the qubits (0 < x < d)."""
    if grid.region is not Region.BETWEEN:
        raise ValueError("inter-qubit field needs a Between grid")
    use = _resolve_branch(grid, rates, params, branch)
    tt = grid.t[:, None]
    xx = grid.x[None, :]
    if use is FieldBranch.STEADY:
        scattered_u = _steady_scattered(xx, xx - params.distance, tt,
                                        rates, params)
        v = _steady_scattered(-xx, -(xx - params.distance), tt, rates, params)
    else:
        scattered_u = _scattered_sum(xx, xx - params.distance, tt,
                                     rates, params)
        v = _scattered_sum(-xx, -(xx - params.distance), tt, rates, params)
    u = incident_plane_wave(xx, tt, params) + scattered_u
    w = u + v
    return FieldSlice(grid=grid, branch=use, regime=rates.regime,
                      u=u, v=v, w=w,
                      energy_u=np.abs(u) ** 2, energy_v=np.abs(v) ** 2,
                      energy_w=np.abs(w) ** 2)


# ---------------------------------------------------------------------------
# stationary scattering spectra

def transmittance(omega, rates: CollectiveRates, params: ModelParams):
    """Transmission probability of a monochromatic photon at ``omega``.

    Uses the collective channels of the Markov reduction; valid in every
    interference regime (the channel weights are re-evaluated at the probe
    frequency).
    """
    omega = np.asarray(omega, dtype=float)
    c_plus, c_minus = coupling_weights(params, rates.regime, omega)
    phase = snapped_phase_factor(params, rates.regime, omega)
    g_over_a = params.coupling / params.amplitude
    amp = 1.0 + 1j * np.pi * g_over_a * (
        c_plus * (1.0 + np.conj(phase)) + c_minus * (1.0 - np.conj(phase)))
    return np.abs(amp) ** 2


def reflectance(omega, rates: CollectiveRates, params: ModelParams):
    """Reflection probability of a monochromatic photon at ``omega``."""
    omega = np.asarray(omega, dtype=float)
    c_plus, c_minus = coupling_weights(params, rates.regime, omega)
    phase = snapped_phase_factor(params, rates.regime, omega)
    bracket = c_plus * (1.0 + phase) + c_minus * (1.0 - phase)
    return params.gamma * np.pi / (4.0 * params.amplitude ** 2) \
        * np.abs(bracket) ** 2


def flux_defect(omega, rates: CollectiveRates, params: ModelParams):
    """T + R - 1; a diagnostic, nonzero outside the weak-coupling window."""
    return transmittance(omega, rates, params) \
        + reflectance(omega, rates, params) - 1.0


def nonmarkov_transmittance(omega, params: ModelParams):
    """Transmission with the inter-qubit retardation kept exactly."""
    omega = np.asarray(omega, dtype=float)
    half = 0.5 * params.gamma
    detune = omega - params.omega_q
    kd = params.phase_across(omega)
    denom = (detune + 1j * half) ** 2 + half ** 2 * np.exp(2j * kd)
    guard = np.abs(denom) == 0
    amp = np.where(guard, 0.0,
                   detune ** 2 / np.where(guard, 1.0, denom))
    return np.abs(amp) ** 2


def nonmarkov_reflectance(omega, params: ModelParams):
    """Reflection with the inter-qubit retardation kept exactly."""
    omega = np.asarray(omega, dtype=float)
    half = 0.5 * params.gamma
    detune = omega - params.omega_q
    kd = params.phase_across(omega)
    denom = (detune + 1j * half) ** 2 + half ** 2 * np.exp(2j * kd)
    guard = np.abs(denom) == 0
    num = detune * np.cos(kd) + half * np.sin(kd)
    amp = np.where(guard, 1.0,
                   params.gamma * num / np.where(guard, 1.0, denom))
    return np.abs(amp) ** 2


# ---------------------------------------------------------------------------
# closed-form resonance peaks of the steady energy density

def transmitted_resonance_peak(x, params: ModelParams,
                               regime: Regime | None = None):
    """Steady |u|^2/A^2 behind the pair for a resonant drive.

    Generic regime: (ci^2 + si^2)(Omega x / v_g) / (4 pi^2).
    Even-pi regime: the two shifted coordinates contribute coherently,
    ((ci + ci_d)^2 + (si + si_d)^2) / (16 pi^2).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= params.distance):
        raise ValueError("transmitted peak formula needs x > d")
    if regime is None:
        regime = classify_regime(params)
    w = params.omega_q * x / params.v_g
    ci = cosine_integral(w)
    si = si_lower(w)
    if regime is Regime.GENERIC:
        return (ci ** 2 + si ** 2) / (4.0 * np.pi ** 2)
    if regime is Regime.EVEN_PI:
        wd = params.omega_q * (x - params.distance) / params.v_g
        ci_d = cosine_integral(wd)
        si_d = si_lower(wd)
        return ((ci + ci_d) ** 2 + (si + si_d) ** 2) / (16.0 * np.pi ** 2)
    raise ValueError("no closed transmitted-peak formula in the odd-pi regime")


def reflected_resonance_peak(x, params: ModelParams,
                             regime: Regime | None = None):
    """Steady |v|^2/A^2 before the pair for a resonant drive.

    Generic: 1 + si(w)/pi + (ci^2 + si^2)(w)/(4 pi^2) with w = Omega|x|/v_g.
    Even-pi: coherent two-coordinate version with 1/(2 pi) and 1/(16 pi^2).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x >= 0):
        raise ValueError("reflected peak formula needs x < 0")
    if regime is None:
        regime = classify_regime(params)
    w = params.omega_q * np.abs(x) / params.v_g
    ci = cosine_integral(w)
    si = si_lower(w)
    if regime is Regime.GENERIC:
        return 1.0 + si / np.pi + (ci ** 2 + si ** 2) / (4.0 * np.pi ** 2)
    if regime is Regime.EVEN_PI:
        wd = params.omega_q * np.abs(x - params.distance) / params.v_g
        ci_d = cosine_integral(wd)
        si_d = si_lower(wd)
        return 1.0 + (si + si_d) / (2.0 * np.pi) \
            + ((ci + ci_d) ** 2 + (si + si_d) ** 2) / (16.0 * np.pi ** 2)
    raise ValueError("no closed reflected-peak formula in the odd-pi regime")


def interqubit_resonance_peak(x, params: ModelParams):
    """Steady |w|^2/A^2 between the qubits at resonance (generic regime).

    (1/pi^2) * (ci(w) cos w + si(w) sin w)^2 with w = Omega x / v_g.
    """
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= params.distance)):
        raise ValueError("inter-qubit peak formula needs 0 < x < d")
    w = params.omega_q * x / params.v_g
    ci = cosine_integral(w)
    si = si_lower(w)
    return (ci * np.cos(w) + si * np.sin(w)) ** 2 / np.pi ** 2


# ---------------------------------------------------------------------------
# beat-note scan of the steady forward energy density

def beat_note_series(params: ModelParams, rates: CollectiveRates,
                     x0: float, n_periods: int = 40, n_samples: int = 4096):
    """Steady |u(x0, t)|^2 sampled uniformly over ``n_periods`` beats.

    The window starts just after the incident front has passed x0 (the
    steady forms presume x0 < v_g t) and spans ``n_periods`` periods of
    the drive detuning.  Returns (t, energy).
    """
    detune = params.omega_s - params.omega_q
    if detune == 0:
        raise ValueError("beat note needs a detuned drive")
    period = 2.0 * np.pi / abs(detune)
    t0 = 1.05 * x0 / params.v_g
    window = n_periods * period
    t = t0 + np.linspace(0.0, window, n_samples, endpoint=False)
    u = steady_forward(np.asarray([x0]), t[:, None], rates, params)[:, 0]
    return t, np.abs(u) ** 2


def beat_note_spectrum(params: ModelParams, rates: CollectiveRates,
                       x0: float, n_periods: int = 40, n_samples: int = 4096):
    """FFT of the steady |u(x0, t)|^2 over ``n_periods`` detuning beats.

    Off resonance the steady energy density behind the pair oscillates at
    the drive detuning; this samples a uniform window (starting just after
    the front has passed x0) and returns (frequencies, |spectrum|,
    peak_frequency, expected_frequency) with frequencies in Hz.
    """
    _, energy = beat_note_series(params, rates, x0,
                                 n_periods=n_periods, n_samples=n_samples)
    detune = params.omega_s - params.omega_q
    window = n_periods * 2.0 * np.pi / abs(detune)
    spectrum = np.fft.rfft(energy - energy.mean())
    freqs = np.fft.rfftfreq(n_samples, d=window / n_samples)
    peak = freqs[int(np.argmax(np.abs(spectrum)))]
    return freqs, np.abs(spectrum), float(peak), abs(detune) / (2.0 * np.pi)
