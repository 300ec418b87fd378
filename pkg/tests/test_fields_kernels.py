"""Closed-form field kernels against direct oscillatory quadrature.

Every closed kernel is the frequency integral of the mode phase against a
damped or sharp pole factor; the quadrature oracle evaluates that integral
with phase-resolved panels and an analytic tail.  These tests sweep all
eight kernels in the three interference regimes, exercise the wavefront
winding correction, and pin down the argument convention of the
exponential-integral writing.
"""

import numpy as np
import pytest

from wqed import fields
from wqed.cli import closed_kernel
from wqed.model import ModelParams, collective_rates
from wqed.oracle import KERNEL_IDS, QuadSpec, quad_kernel

OMEGA_Q = 2.0 * np.pi * 5.0e9


def _preset(tag):
    phase = {"generic": 0.8, "even": 2.0, "odd": 5.0}[tag]
    return ModelParams.from_phase(OMEGA_Q, 0.01 * OMEGA_Q, phase,
                                  omega_s=1.005 * OMEGA_Q)


@pytest.mark.parametrize("tag", ["generic", "even", "odd"])
@pytest.mark.parametrize("kernel_id", KERNEL_IDS)
def test_closed_kernels_match_quadrature(tag, kernel_id):
    p = _preset(tag)
    r = collective_rates(p)
    rng = np.random.default_rng(hash((tag, kernel_id)) % 2 ** 32)
    t = rng.uniform(0.3, 1.5) * 40.0 / p.gamma
    if kernel_id.startswith("bwd"):
        x_shift = rng.uniform(-4.0, -0.1) * p.distance
    else:
        x_shift = rng.uniform(1.1, 5.0) * p.distance
    closed = closed_kernel(kernel_id, x_shift, t, r, p)
    brute = quad_kernel(kernel_id, x_shift, t, p, r)
    scale = max(abs(brute), 1e-3)
    assert abs(complex(closed) - brute) / scale < 1e-3


def test_closed_kernels_tight_agreement_with_long_tail():
    # with a longer quadrature cutoff the oracle itself sharpens and the
    # agreement drops well below the routine tolerance
    p = _preset("generic")
    r = collective_rates(p)
    quad = QuadSpec(cutoff_factor=40.0)
    t = 20.0 / p.gamma
    worst = 0.0
    for kernel_id, x_over_d in (("fwd_decay_plus", 2.0), ("bwd_drive", -1.5)):
        x_shift = x_over_d * p.distance
        closed = closed_kernel(kernel_id, x_shift, t, r, p)
        brute = quad_kernel(kernel_id, x_shift, t, p, r, quad)
        worst = max(worst, abs(complex(closed) - brute) / abs(brute))
    assert worst < 1e-5


def test_kernel_winding_across_the_wavefront():
    # the retarded coordinate x - v_g t changes sign across the front and
    # the closed writing picks up a 2*pi*i winding there; sample both sides
    p = _preset("generic")
    r = collective_rates(p)
    x_shift = 2.0 * p.distance
    t_front = x_shift / p.v_g
    for t in (0.8 * t_front, 1.25 * t_front):
        closed = closed_kernel("fwd_decay_plus", x_shift, t, r, p)
        brute = quad_kernel("fwd_decay_plus", x_shift, t, p, r)
        assert abs(complex(closed) - brute) / max(abs(brute), 1e-3) < 1e-3


def test_wavefront_jump_is_i_pi():
    # crossing the front turns on the 2*pi*i winding while the E1 branch
    # jump eats half of it, leaving a discontinuity of exactly i*pi times
    # a unit-modulus carrier; measure it by straddling the front tightly
    p = _preset("generic")
    r = collective_rates(p)
    x_shift = 3.0 * p.distance
    t_front = x_shift / p.v_g
    eps = 1e-5
    after = complex(closed_kernel("fwd_decay_plus", x_shift,
                                  t_front * (1.0 + eps), r, p))
    before = complex(closed_kernel("fwd_decay_plus", x_shift,
                                   t_front * (1.0 - eps), r, p))
    jump = after - before
    assert abs(jump - 1j * np.pi) < 0.01 * np.pi


def test_kernel_convention_flip_breaks_agreement():
    # the rotated-argument convention is the validated one; the printed
    # variant must disagree with quadrature far beyond the tolerance
    p = _preset("generic")
    r = collective_rates(p)
    x_shift = 2.3 * p.distance
    t = 18.0 / p.gamma
    assert fields.kernel_convention() == "rotated"
    try:
        ref = quad_kernel("fwd_decay_plus", x_shift, t, p, r)
        good = closed_kernel("fwd_decay_plus", x_shift, t, r, p)
        fields.set_kernel_convention("printed")
        bad = closed_kernel("fwd_decay_plus", x_shift, t, r, p)
    finally:
        fields.set_kernel_convention("rotated")
    assert abs(complex(good) - ref) / abs(ref) < 1e-3
    assert abs(complex(bad) - ref) / abs(ref) > 1e-2


def test_kernel_convention_rejects_unknown_name():
    with pytest.raises(ValueError):
        fields.set_kernel_convention("sideways")
    assert fields.kernel_convention() == "rotated"
