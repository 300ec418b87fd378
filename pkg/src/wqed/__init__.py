"""Single-photon scattering on a pair of distant qubits in a 1D waveguide.

The package evaluates the closed-form spatio-temporal photon field
produced when a single-photon pulse scatters on two identical two-level
qubits coupled to an open one-dimensional waveguide: qubit amplitudes,
forward/backward/inter-qubit field envelopes, transmittance and
reflectance spectra, and the steady-state resonance formulas.  The
``oracle`` module carries independent brute-force cross-checks
(oscillatory quadrature, ODE integration, a discretized-continuum
Schroedinger evolution) used by the validation suite, and ``cli``
exposes the scenario-driven CSV front end.
"""

from .version import __version__
from .model import (
    ModelParams,
    CollectiveRates,
    Regime,
    classify_regime,
    channel_rates,
    collective_rates,
    gaussian_amplitude,
)
from .specfun import (
    exp_integral_e1,
    e1_scaled,
    sine_integral,
    si_lower,
    cosine_integral,
)
from .amplitudes import (
    QubitState,
    SpectralAmplitude,
    phase_integral,
    qubit_amplitudes,
    channel_time_integrals,
    spectral_amplitudes,
)
from .fields import (
    Region,
    FieldBranch,
    SpaceTimeGrid,
    FieldSlice,
    space_time_grid,
    set_kernel_convention,
    kernel_convention,
    incident_plane_wave,
    forward_field,
    backward_field,
    interqubit_field,
    steady_forward,
    steady_backward,
    steady_ready,
    transmittance,
    reflectance,
    flux_defect,
    nonmarkov_transmittance,
    nonmarkov_reflectance,
    transmitted_resonance_peak,
    reflected_resonance_peak,
    interqubit_resonance_peak,
    beat_note_series,
    beat_note_spectrum,
)

__all__ = [
    "__version__",
    "ModelParams", "CollectiveRates", "Regime",
    "classify_regime", "channel_rates", "collective_rates",
    "gaussian_amplitude",
    "exp_integral_e1", "e1_scaled", "sine_integral", "si_lower",
    "cosine_integral",
    "QubitState", "SpectralAmplitude", "phase_integral",
    "qubit_amplitudes", "channel_time_integrals", "spectral_amplitudes",
    "Region", "FieldBranch", "SpaceTimeGrid", "FieldSlice",
    "space_time_grid", "set_kernel_convention", "kernel_convention",
    "incident_plane_wave", "forward_field", "backward_field",
    "interqubit_field", "steady_forward", "steady_backward",
    "steady_ready", "transmittance", "reflectance", "flux_defect",
    "nonmarkov_transmittance", "nonmarkov_reflectance",
    "transmitted_resonance_peak", "reflected_resonance_peak",
    "interqubit_resonance_peak", "beat_note_series", "beat_note_spectrum",
]
