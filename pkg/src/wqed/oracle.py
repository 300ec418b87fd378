"""Brute-force reference evaluations for validating the closed forms.

Nothing in here reuses the engine's special functions or kernel algebra:
the defining frequency integrals are done by composite Gauss-Legendre
panels with an analytic high-frequency tail (scipy's sine/cosine integrals,
an implementation independent of the hand-built ones), the driven two-qubit
system is integrated in time by a plain RK4, and the full qubit+continuum
Schroedinger equation is evolved on a discretized frequency comb.  Slow and
dumb on purpose; every closed form in the package is required to agree with
these to stated tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .amplitudes import QubitState, qubit_amplitudes
from .model import CollectiveRates, ModelParams

# ---------------------------------------------------------------------------
# frequency-integral oracle for the wave kernels

KERNEL_IDS = (
    "fwd_decay_plus", "fwd_decay_minus", "fwd_drive", "fwd_resonant",
    "bwd_decay_plus", "bwd_decay_minus", "bwd_drive", "bwd_resonant",
)

# kernel id -> (direction sign for s1 = sign * x_shift / v_g, center key)
_KERNEL_TABLE = {
    "fwd_decay_plus": (+1, "plus"),
    "fwd_decay_minus": (+1, "minus"),
    "fwd_drive": (+1, "drive"),
    "fwd_resonant": (+1, "resonant"),
    "bwd_decay_plus": (-1, "plus"),
    "bwd_decay_minus": (-1, "minus"),
    "bwd_drive": (-1, "drive"),
    "bwd_resonant": (-1, "resonant"),
}


@dataclass(frozen=True)
class QuadSpec:
    """Knobs of the panel quadrature.

    ``cutoff_factor`` sets the hard frequency cutoff as a multiple of the
    largest scale in the problem; beyond it the integrand's 1/omega and
    a/omega^2 tails are added in closed form.  ``points_per_period``
    controls the panel width against the fastest oscillation present.
    """

    cutoff_factor: float = 20.0
    points_per_period: int = 16
    panel_order: int = 8
    max_nodes: float = 2.0e7
    chunk_nodes: int = 262144


def _kernel_center(kernel_id: str, params: ModelParams,
                   rates: CollectiveRates | None) -> complex:
    key = _KERNEL_TABLE[kernel_id][1]
    if key == "drive":
        return complex(params.omega_s)
    if key == "resonant":
        return complex(params.omega_q)
    if rates is None:
        raise ValueError(f"kernel {kernel_id!r} needs collective rates")
    gamma = rates.gamma_plus if key == "plus" else rates.gamma_minus
    return params.omega_q - 1j * gamma


def _tail_inverse_omega(s: float, cutoff: float) -> complex:
    """Closed form of int_W^inf e^{i omega s} / omega domega (s != 0)."""
    y = abs(s) * cutoff
    si_y, ci_y = special.sici(y)
    return -ci_y - 1j * np.sign(s) * (si_y - 0.5 * np.pi)


def _tail_inverse_omega_sq(s: float, cutoff: float) -> complex:
    """Closed form of int_W^inf e^{i omega s} / omega^2 domega."""
    return np.exp(1j * cutoff * s) / cutoff + 1j * s * _tail_inverse_omega(s, cutoff)


def quad_kernel(kernel_id: str, x_shift: float, t: float,
                params: ModelParams, rates: CollectiveRates | None = None,
                quad: QuadSpec | None = None) -> complex:
    """Defining frequency integral of one wave kernel, by brute force.

    Evaluates int_0^inf phi(omega - a, t) e^{i omega (s1 - t)} domega with
    phi(z, t) = (e^{izt} - 1)/z, s1 = +-x_shift/v_g according to the
    kernel's direction, and the center a picked by ``kernel_id``.

    Parameters
    ----------
    kernel_id : str
        One of ``KERNEL_IDS``.
    x_shift : float
        Shifted coordinate (x or x - d) in meters.
    t : float
        Elapsed time in seconds, > 0.
    params : ModelParams
    rates : CollectiveRates, optional
        Required for the decay kernels.
    quad : QuadSpec, optional

    Returns
    -------
    complex
    """
    if kernel_id not in _KERNEL_TABLE:
        raise ValueError(f"unknown kernel id {kernel_id!r}")
    spec_q = quad or QuadSpec()
    if t <= 0:
        raise ValueError("t must be positive")
    sign = _KERNEL_TABLE[kernel_id][0]
    s1 = sign * x_shift / params.v_g
    s2 = s1 - t
    if s1 == 0 or s2 == 0:
        raise ValueError("kernel is singular where a shifted coordinate "
                         "or the light front vanishes exactly")
    a = _kernel_center(kernel_id, params, rates)

    cutoff = spec_q.cutoff_factor * max(params.omega_q, params.omega_s, abs(a))
    fastest = max(abs(s1), abs(s2), t)
    h = 2.0 * np.pi / (spec_q.points_per_period * fastest)
    line_width = -a.imag
    if line_width > 0:
        h = min(h, line_width / 4.0)
    n_panels = int(np.ceil(cutoff / h))
    order = spec_q.panel_order
    if n_panels * order > spec_q.max_nodes:
        raise ValueError(
            f"quadrature would need {n_panels * order:.3g} nodes "
            f"(> {spec_q.max_nodes:.3g}); reduce t or the cutoff"
        )
    width = cutoff / n_panels
    ref_x, ref_w = np.polynomial.legendre.leggauss(order)
    ref_x = 0.5 * (ref_x + 1.0)          # map to [0, 1]
    ref_w = 0.5 * ref_w * width

    total = 0.0 + 0.0j
    panels_per_chunk = max(1, spec_q.chunk_nodes // order)
    for start in range(0, n_panels, panels_per_chunk):
        stop = min(start + panels_per_chunk, n_panels)
        left = (np.arange(start, stop) * width)[:, None]
        omega = left + ref_x[None, :] * width
        z = omega - a
        zt = z * t
        small = np.abs(zt) < 1e-8
        phi = np.where(
            small,
            1j * t * (1.0 + 0.5j * zt),
            (np.exp(1j * zt) - 1.0) / np.where(small, 1.0, z),
        )
        vals = phi * np.exp(1j * omega * s2)
        total += np.sum(vals * ref_w[None, :])

    # Analytic tail: 1/(omega - a) ~ 1/omega + a/omega^2 beyond the cutoff.
    tail = np.exp(-1j * a * t) * (_tail_inverse_omega(s1, cutoff)
                                  + a * _tail_inverse_omega_sq(s1, cutoff)) \
        - (_tail_inverse_omega(s2, cutoff)
           + a * _tail_inverse_omega_sq(s2, cutoff))
    return complex(total + tail)


def quad_field_forward(x: float, t: float, rates: CollectiveRates,
                       params: ModelParams, quad: QuadSpec | None = None) -> complex:
    """Scattered forward field at (x, t) assembled from quadrature kernels."""
    g = params.coupling
    kp1 = quad_kernel("fwd_decay_plus", x, t, params, rates, quad)
    kp2 = quad_kernel("fwd_decay_plus", x - params.distance, t, params, rates, quad)
    km1 = quad_kernel("fwd_decay_minus", x, t, params, rates, quad)
    km2 = quad_kernel("fwd_decay_minus", x - params.distance, t, params, rates, quad)
    ks1 = quad_kernel("fwd_drive", x, t, params, rates, quad)
    ks2 = quad_kernel("fwd_drive", x - params.distance, t, params, rates, quad)
    return -0.5 * g * (rates.c_plus * (kp1 + kp2 - ks1 - ks2)
                       + rates.c_minus * (km1 - km2 - ks1 + ks2))


def quad_field_backward(x: float, t: float, rates: CollectiveRates,
                        params: ModelParams, quad: QuadSpec | None = None) -> complex:
    """Scattered backward field at (x, t) assembled from quadrature kernels."""
    g = params.coupling
    kp1 = quad_kernel("bwd_decay_plus", x, t, params, rates, quad)
    kp2 = quad_kernel("bwd_decay_plus", x - params.distance, t, params, rates, quad)
    km1 = quad_kernel("bwd_decay_minus", x, t, params, rates, quad)
    km2 = quad_kernel("bwd_decay_minus", x - params.distance, t, params, rates, quad)
    ks1 = quad_kernel("bwd_drive", x, t, params, rates, quad)
    ks2 = quad_kernel("bwd_drive", x - params.distance, t, params, rates, quad)
    return -0.5 * g * (rates.c_plus * (kp1 + kp2 - ks1 - ks2)
                       + rates.c_minus * (km1 - km2 - ks1 + ks2))


# ---------------------------------------------------------------------------
# scaled-E1 oracle

def e1_scaled_quad(z: complex) -> complex:
    """e^z E1(z) by adaptive quadrature of int_0^inf e^{-u}/(z+u) du."""
    from scipy.integrate import quad as _quad

    z = complex(z)
    if z.imag == 0 and z.real <= 0:
        raise ValueError("argument on the branch cut")

    def real_part(u):
        return (np.exp(-u) / (z + u)).real

    def imag_part(u):
        return (np.exp(-u) / (z + u)).imag

    re, _ = _quad(real_part, 0.0, np.inf, limit=400)
    im, _ = _quad(imag_part, 0.0, np.inf, limit=400)
    return re + 1j * im


# ---------------------------------------------------------------------------
# driven two-qubit ODE oracle (delta-pulse drive, retardation dropped)

def markov_ode(params: ModelParams, t_final: float, n_steps: int | None = None,
               keep_every: int = 1) -> QubitState:
    """RK4 integration of the driven dissipative two-qubit system.

    Uses the raw propagation phases (no regime snapping) and the analytic
    delta-pulse drive, so it shares no algebra with the closed qubit
    amplitudes it is used to check.

    Parameters
    ----------
    params : ModelParams
    t_final : float
        End time in seconds.
    n_steps : int, optional
        Fixed RK4 step count; defaults to resolving both the decay rate
        and the drive detuning with step 0.005 of the fastest scale.
    keep_every : int
        Store every that-many-th step (plus both endpoints).

    Returns
    -------
    QubitState
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    gamma, g = params.gamma, params.coupling
    detuning = params.omega_s - params.omega_q
    if n_steps is None:
        fastest = max(gamma, abs(detuning), 1.0 / t_final)
        n_steps = int(np.ceil(t_final * fastest / 0.005))
    dt = t_final / n_steps

    phase_q = np.exp(1j * params.qubit_phase)     # e^{i k_Omega d}, raw
    phase_s = np.exp(1j * params.drive_phase)     # e^{i k_omega_s d}, raw
    amp = -1j * g * params.amplitude

    def rhs(t, beta):
        drive = amp * np.exp(-1j * detuning * t)
        b1, b2 = beta
        return np.array([
            drive - 0.5 * gamma * b1 - 0.5 * gamma * phase_q * b2,
            drive * phase_s - 0.5 * gamma * b2 - 0.5 * gamma * phase_q * b1,
        ])

    beta = np.zeros(2, dtype=np.complex128)
    times = [0.0]
    saved = [beta.copy()]
    t = 0.0
    scale = abs(amp) / max(0.5 * gamma, abs(detuning), 1.0 / t_final)
    for step in range(1, n_steps + 1):
        k1 = rhs(t, beta)
        k2 = rhs(t + 0.5 * dt, beta + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, beta + 0.5 * dt * k2)
        k4 = rhs(t + dt, beta + dt * k3)
        beta_next = beta + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % 64 == 1:
            # step-doubling local error estimate on this step
            half = 0.5 * dt
            ka = rhs(t, beta)
            kb = rhs(t + 0.5 * half, beta + 0.5 * half * ka)
            kc = rhs(t + 0.5 * half, beta + 0.5 * half * kb)
            kd_ = rhs(t + half, beta + half * kc)
            mid = beta + half / 6.0 * (ka + 2 * kb + 2 * kc + kd_)
            ka = rhs(t + half, mid)
            kb = rhs(t + half + 0.5 * half, mid + 0.5 * half * ka)
            kc = rhs(t + half + 0.5 * half, mid + 0.5 * half * kb)
            kd_ = rhs(t + dt, mid + half * kc)
            fine = mid + half / 6.0 * (ka + 2 * kb + 2 * kc + kd_)
            err = np.max(np.abs(fine - beta_next))
            if err > 1e-9 * max(scale, 1e-300):
                raise RuntimeError(
                    f"RK4 local error {err:.3g} above budget at t={t:.3g}; "
                    "increase n_steps"
                )
        beta = beta_next
        t = step * dt
        if step % keep_every == 0 or step == n_steps:
            times.append(t)
            saved.append(beta.copy())
    saved = np.array(saved)
    return QubitState(t=np.array(times), beta_1=saved[:, 0], beta_2=saved[:, 1])


# ---------------------------------------------------------------------------
# spectral-amplitude oracle: straight time quadrature of the formal solution

def quad_spectral(omega: float, t: float, rates: CollectiveRates,
                  params: ModelParams):
    """Scattered (forward, backward) mode amplitudes by time quadrature.

    Integrates the closed qubit amplitudes against e^{i(omega-Omega)t'}
    with adaptive quadrature, which checks every step of the spectral
    algebra downstream of the qubit dynamics.
    """
    from scipy.integrate import quad as _quad

    g = params.coupling
    kd = omega * params.distance / params.v_g
    rot = omega - params.omega_q

    def beta(tp):
        st = qubit_amplitudes(rates, params, np.array([tp]))
        return st.beta_1[0], st.beta_2[0]

    def integrand(tp, which, part):
        b = beta(tp)[which] * np.exp(1j * rot * tp)
        return b.real if part == 0 else b.imag

    pieces = []
    for which in (0, 1):
        re, _ = _quad(integrand, 0.0, t, args=(which, 0), limit=400)
        im, _ = _quad(integrand, 0.0, t, args=(which, 1), limit=400)
        pieces.append(re + 1j * im)
    int_b1, int_b2 = pieces
    forward = -1j * g * (int_b1 + np.exp(-1j * kd) * int_b2)
    backward = -1j * g * (int_b1 + np.exp(+1j * kd) * int_b2)
    return forward, backward


# ---------------------------------------------------------------------------
# full qubits+continuum evolution on a frequency comb

@dataclass(frozen=True)
class ContinuumGrid:
    """Discretized frequency continuum with trapezoid weights."""

    omega: np.ndarray
    weights: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.omega.size


def make_continuum_grid(params: ModelParams, n_modes: int = 4096,
                        span=(0.5, 1.5), width_factor: float = 8.0) -> ContinuumGrid:
    """Uniform frequency comb covering the qubit line and the pulse.

    Spans at least [span[0], span[1]] * Omega, widened if needed so the
    incident Gaussian is covered out to ``width_factor`` widths.
    """
    lo = span[0] * params.omega_q
    hi = span[1] * params.omega_q
    if params.pulse_width is not None:
        lo = min(lo, params.omega_s - width_factor * params.pulse_width)
        hi = max(hi, params.omega_s + width_factor * params.pulse_width)
    if lo <= 0:
        raise ValueError("continuum grid would reach non-positive frequencies")
    omega = np.linspace(lo, hi, n_modes)
    weights = np.full(n_modes, omega[1] - omega[0])
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return ContinuumGrid(omega=omega, weights=weights)


@dataclass
class ContinuumResult:
    """Trajectory of the discretized qubits+field system."""

    t: np.ndarray
    beta_1: np.ndarray
    beta_2: np.ndarray
    norm: np.ndarray
    grid: ContinuumGrid
    gamma_final: np.ndarray = field(repr=False, default=None)
    delta_final: np.ndarray = field(repr=False, default=None)

    @property
    def transmitted_flux(self) -> float:
        """Final forward-continuum population sum(w |gamma|^2)."""
        return float(np.sum(self.grid.weights * np.abs(self.gamma_final) ** 2))

    @property
    def reflected_flux(self) -> float:
        """Final backward-continuum population sum(w |delta|^2)."""
        return float(np.sum(self.grid.weights * np.abs(self.delta_final) ** 2))


def gaussian_spectrum(params: ModelParams, omega):
    """Initial forward spectrum (2/(pi Delta^2))^{1/4} e^{-(w-w_s)^2/Delta^2}."""
    if params.pulse_width is None:
        raise ValueError("params.pulse_width must be set for a Gaussian drive")
    delta = params.pulse_width
    return (2.0 / (np.pi * delta ** 2)) ** 0.25 \
        * np.exp(-((np.asarray(omega) - params.omega_s) / delta) ** 2)


def continuum_evolve(params: ModelParams, t_final: float,
                     n_modes: int = 4096, grid: ContinuumGrid | None = None,
                     dt: float | None = None, keep_every: int = 200,
                     launch_delay: float = 0.0) -> ContinuumResult:
    """RK4 evolution of the full single-excitation Schroedinger equation.

    The state is (beta_1, beta_2, gamma_k, delta_k) on a frequency comb;
    the continuous-time system conserves the discrete norm exactly (the
    comb weights enter both the norm and the qubit equations), so any norm
    drift in the result measures pure integrator truncation.

    Parameters
    ----------
    params : ModelParams
        ``pulse_width`` must be set; the initial forward spectrum is the
        corresponding unit-norm Gaussian.
    t_final : float
    n_modes : int
        Comb size when ``grid`` is not given.
    grid : ContinuumGrid, optional
    dt : float, optional
        RK4 step; defaults to 0.02 over the largest rotating-frame
        frequency on the comb.
    keep_every : int
        Trajectory storage stride.
    launch_delay : float
        Time at which the packet centre crosses the first qubit.  Zero
        starts the packet on top of the qubit (the sudden-switch-on
        drive of the closed-form amplitudes); a delay of several inverse
        pulse widths prepares a clean incoming scattering state instead.

    Returns
    -------
    ContinuumResult
    """
    if grid is None:
        grid = make_continuum_grid(params, n_modes=n_modes)
    omega, w = grid.omega, grid.weights
    g = params.coupling
    rot = omega - params.omega_q
    if dt is None:
        dt = 0.02 / np.max(np.abs(rot))
    n_steps = int(np.ceil(t_final / dt))
    dt = t_final / n_steps

    gamma0 = gaussian_spectrum(params, omega).astype(np.complex128)
    if launch_delay:
        gamma0 *= np.exp(1j * omega * launch_delay)
    norm0 = np.sum(w * np.abs(gamma0) ** 2)
    if abs(norm0 - 1.0) > 1e-6:
        raise ValueError(
            f"discretized initial spectrum has norm {norm0:.8f}; "
            "refine the continuum grid"
        )

    kd = omega * params.distance / params.v_g
    fwd_phase = np.exp(1j * kd)      # e^{+i k d}
    bwd_phase = np.conj(fwd_phase)

    beta = np.zeros(2, dtype=np.complex128)
    gam = gamma0.copy()
    delt = np.zeros_like(gam)

    def rhs(t, b, gm, dl):
        rotator = np.exp(-1j * rot * t)
        overlap_plain = np.sum(w * (gm + dl) * rotator)
        overlap_shift = np.sum(w * (gm * fwd_phase + dl * bwd_phase) * rotator)
        db1 = -1j * g * overlap_plain
        db2 = -1j * g * overlap_shift
        src = np.conj(rotator)
        dgm = -1j * g * (b[0] + b[1] * bwd_phase) * src
        ddl = -1j * g * (b[0] + b[1] * fwd_phase) * src
        return np.array([db1, db2]), dgm, ddl

    def norm_of(b, gm, dl):
        return float(np.abs(b[0]) ** 2 + np.abs(b[1]) ** 2
                     + np.sum(w * (np.abs(gm) ** 2 + np.abs(dl) ** 2)))

    times = [0.0]
    b1s, b2s = [beta[0]], [beta[1]]
    norms = [norm_of(beta, gam, delt)]
    t = 0.0
    for step in range(1, n_steps + 1):
        kb1, kg1, kd1 = rhs(t, beta, gam, delt)
        kb2, kg2, kd2 = rhs(t + 0.5 * dt, beta + 0.5 * dt * kb1,
                            gam + 0.5 * dt * kg1, delt + 0.5 * dt * kd1)
        kb3, kg3, kd3 = rhs(t + 0.5 * dt, beta + 0.5 * dt * kb2,
                            gam + 0.5 * dt * kg2, delt + 0.5 * dt * kd2)
        kb4, kg4, kd4 = rhs(t + dt, beta + dt * kb3,
                            gam + dt * kg3, delt + dt * kd3)
        beta = beta + dt / 6.0 * (kb1 + 2 * kb2 + 2 * kb3 + kb4)
        gam = gam + dt / 6.0 * (kg1 + 2 * kg2 + 2 * kg3 + kg4)
        delt = delt + dt / 6.0 * (kd1 + 2 * kd2 + 2 * kd3 + kd4)
        t = step * dt
        if step % keep_every == 0 or step == n_steps:
            times.append(t)
            b1s.append(beta[0])
            b2s.append(beta[1])
            norms.append(norm_of(beta, gam, delt))
    return ContinuumResult(t=np.array(times), beta_1=np.array(b1s),
                           beta_2=np.array(b2s), norm=np.array(norms),
                           grid=grid, gamma_final=gam, delta_final=delt)


# ---------------------------------------------------------------------------
# memory-kernel check behind the Markov reduction

def memory_kernel_coefficients(t: float, params: ModelParams,
                               cutoff_factor: float = 20.0,
                               points_per_period: int = 16):
    """Numeric damping coefficients of the exact qubit memory kernel.

    Returns (self_coef, cross_coef): twice the frequency integrals of
    g^2 I(omega, t) and g^2 cos(k_omega d) I(omega, t), with
    I = int_0^t e^{-i(omega-Omega)tau} dtau.  As t grows these approach
    Gamma/2 (real part; the imaginary part is the cutoff-dependent line
    shift absorbed into Omega) and (Gamma/2) e^{i k_Omega d}.
    """
    g2 = params.coupling ** 2
    cutoff = cutoff_factor * params.omega_q
    fastest = max(t, params.distance / params.v_g)
    h = 2.0 * np.pi / (points_per_period * fastest)
    n_panels = int(np.ceil(cutoff / h))
    order = 8
    ref_x, ref_w = np.polynomial.legendre.leggauss(order)
    ref_x = 0.5 * (ref_x + 1.0)
    width = cutoff / n_panels
    ref_w = 0.5 * ref_w * width

    self_total = 0.0 + 0.0j
    cross_total = 0.0 + 0.0j
    chunk = max(1, 262144 // order)
    for start in range(0, n_panels, chunk):
        stop = min(start + chunk, n_panels)
        left = (np.arange(start, stop) * width)[:, None]
        omega = left + ref_x[None, :] * width
        z = omega - params.omega_q
        zt = z * t
        small = np.abs(zt) < 1e-8
        mem = np.where(
            small,
            t * (1.0 - 0.5j * zt),
            (1.0 - np.exp(-1j * zt)) / np.where(small, 1.0, 1j * z),
        )
        kd = omega * params.distance / params.v_g
        self_total += np.sum(mem * ref_w[None, :])
        cross_total += np.sum(np.cos(kd) * mem * ref_w[None, :])
    return 2.0 * g2 * self_total, 2.0 * g2 * cross_total
