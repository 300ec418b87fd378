"""Self-consistency of the brute-force oracles and their physics checks.

The oracles earn their role as referees here: the ODE integrator is checked
by step doubling, the oscillatory quadrature by cutoff doubling, the memory
kernel against its closed half-line limit, and the discretized continuum by
norm conservation and by scattering a real wavepacket against the exact
lattice transmittance.
"""

import numpy as np
import pytest
from scipy.special import sici

from wqed import fields
from wqed.model import ModelParams, collective_rates
from wqed.oracle import (
    QuadSpec,
    continuum_evolve,
    gaussian_spectrum,
    make_continuum_grid,
    markov_ode,
    memory_kernel_coefficients,
    quad_kernel,
)

OMEGA_Q = 2.0 * np.pi * 5.0e9


def test_markov_ode_step_doubling(weak_generic):
    p = weak_generic.with_drive(1.005 * weak_generic.omega_q)
    t_final = 10.0 / p.gamma
    coarse = markov_ode(p, t_final, n_steps=4000, keep_every=4000)
    fine = markov_ode(p, t_final, n_steps=8000, keep_every=8000)
    err = max(abs(coarse.beta_1[-1] - fine.beta_1[-1]),
              abs(coarse.beta_2[-1] - fine.beta_2[-1]))
    assert err < 1e-10


def test_quad_kernel_sharpens_with_cutoff(weak_generic):
    # doubling the frequency cutoff must shrink the tail error, and the
    # two cutoffs must agree at the coarser one's accuracy
    p = weak_generic.with_drive(1.005 * weak_generic.omega_q)
    r = collective_rates(p)
    x, t = 2.0 * p.distance, 15.0 / p.gamma
    short = quad_kernel("fwd_decay_plus", x, t, p, r,
                        QuadSpec(cutoff_factor=20.0))
    long = quad_kernel("fwd_decay_plus", x, t, p, r,
                       QuadSpec(cutoff_factor=40.0))
    assert abs(short - long) / abs(long) < 1e-3
    assert abs(short - long) > 0  # the tail is genuinely being integrated


def test_memory_kernel_reaches_half_line_limits(strong_odd):
    # at late times the self coefficient settles on Gamma/2 and the cross
    # coefficient on the positive-frequency (half-line) value, which keeps
    # the principal-value correction the Markov form drops
    p = strong_odd
    g2 = p.coupling ** 2
    kd = p.qubit_phase
    self_c, cross_c = memory_kernel_coefficients(400.0 / p.omega_q, p)
    si_v, ci_v = sici(kd)
    exact = 2.0 * g2 * (np.pi * np.cos(kd)
                        + 1j * (np.cos(kd) * ci_v
                                + np.sin(kd) * (si_v + np.pi / 2)))
    half = 0.5 * p.gamma
    assert abs(self_c.real - half) / half < 5e-3
    assert abs(cross_c - exact) / half < 5e-3
    # at k_Omega*d = 5*pi the half-line value is also close to the Markov
    # coupling (Gamma/2) e^{i k d}: the residual integral decays with kd
    markov = half * np.exp(1j * kd)
    assert abs(exact - markov) / half < 5e-3


def test_continuum_grid_covers_pulse_and_normalizes():
    p = ModelParams.from_phase(OMEGA_Q, 0.01 * OMEGA_Q, 0.5,
                               omega_s=1.4 * OMEGA_Q,
                               pulse_width=0.02 * OMEGA_Q)
    grid = make_continuum_grid(p, n_modes=2048)
    assert grid.omega[0] <= p.omega_s - 8.0 * p.pulse_width
    assert grid.omega[-1] >= p.omega_s + 8.0 * p.pulse_width
    # trapezoid end-weights
    step = grid.omega[1] - grid.omega[0]
    assert grid.weights[0] == pytest.approx(0.5 * step)
    assert grid.weights[-1] == pytest.approx(0.5 * step)
    assert grid.weights[1] == pytest.approx(step)
    # the discretized Gaussian is unit-norm on its own grid
    norm = np.sum(np.abs(gaussian_spectrum(p, grid.omega)) ** 2 * grid.weights)
    assert norm == pytest.approx(1.0, abs=1e-10)


def test_continuum_rejects_nonpositive_frequencies():
    p = ModelParams.from_phase(OMEGA_Q, 0.01 * OMEGA_Q, 0.5,
                               omega_s=OMEGA_Q,
                               pulse_width=0.3 * OMEGA_Q)
    with pytest.raises(ValueError):
        make_continuum_grid(p, span=(0.01, 1.99))


def test_continuum_preserves_norm(weak_generic):
    p = ModelParams.create(weak_generic.omega_q, weak_generic.gamma,
                           weak_generic.distance,
                           pulse_width=0.5 * weak_generic.gamma)
    res = continuum_evolve(p, 5.0 / p.gamma, n_modes=1024)
    drift = np.max(np.abs(res.norm - res.norm[0]))
    assert drift < 1e-6


def test_continuum_scatters_onto_exact_lattice_fluxes():
    # launch a detuned Gaussian packet from upstream at k_Omega*d = 5*pi
    # (where the finite comb window is faithful) and compare the settled
    # transmitted and reflected fluxes with the packet-averaged exact
    # lattice transmittance and reflectance
    gam = 0.1 * OMEGA_Q
    p = ModelParams.from_phase(OMEGA_Q, gam, 5.0,
                               omega_s=OMEGA_Q + 5.0 * gam, pulse_width=gam)
    launch = 8.0 / gam
    res = continuum_evolve(p, launch + 15.0 / gam, n_modes=2048,
                           launch_delay=launch)
    grid = res.grid
    weight = np.abs(gaussian_spectrum(p, grid.omega)) ** 2 * grid.weights
    weight /= weight.sum()
    t_bar = float(np.sum(weight * fields.nonmarkov_transmittance(grid.omega, p)))
    r_bar = float(np.sum(weight * fields.nonmarkov_reflectance(grid.omega, p)))
    assert abs(res.transmitted_flux - t_bar) < 2e-3
    assert abs(res.reflected_flux - r_bar) < 2e-3
    # the qubits have emptied out by the end of the run
    assert abs(res.beta_1[-1]) ** 2 + abs(res.beta_2[-1]) ** 2 < 1e-6
