import math

import numpy as np
import pytest
import scipy.integrate

from tridephase.bath import (DEFAULT_ETA, DEFAULT_KBT, DEFAULT_LAMBDA_CUTOFF,
                             BathSpec, cumulative_decoherence, dephasing_rate,
                             lamb_kernel, make_kernels, markov_rate,
                             spectral_density)
from tridephase.numerics import QuadratureSpec, integrate_semi_infinite

MARKOV = BathSpec(memory="markov")
NON_MARKOV = BathSpec(memory="non_markov")


def high_t_rate(spec: BathSpec, t: float) -> float:
    # flat-coth approximation, valid for kbt well above the cutoff
    return 4.0 * spec.eta * spec.kbt * math.atan(spec.lambda_cutoff * t)


def high_t_cumulative(spec: BathSpec, t: float) -> float:
    lt = spec.lambda_cutoff * t
    return 4.0 * spec.eta * spec.kbt * (
        t * math.atan(lt) - math.log1p(lt * lt) / (2.0 * spec.lambda_cutoff))


# --------------------------------------------------------- spectral density

def test_spectral_density_peak_scale():
    # eta * w * exp(-w/L) at w = L is eta * L / e
    value = spectral_density(NON_MARKOV, DEFAULT_LAMBDA_CUTOFF)
    assert abs(value - 3.6787944117144233e-4) < 1e-16
    assert spectral_density(NON_MARKOV, 0.0) == 0.0


def test_spectral_density_linear_in_eta():
    doubled = BathSpec(eta=0.2, memory="non_markov")
    w = np.linspace(0.0, 0.1, 7)
    assert np.allclose(spectral_density(doubled, w),
                       2.0 * spectral_density(NON_MARKOV, w), rtol=1e-14)


def test_spectral_density_rejects_negative_frequency():
    with pytest.raises(ValueError):
        spectral_density(NON_MARKOV, -0.1)


# ------------------------------------------------------------- markov rate

def test_markov_rate_default_parameters():
    # 4 pi eta kbt with kbt = 1/(4 pi) collapses to eta
    assert abs(markov_rate(MARKOV) - 0.1) < 1e-15


def test_markov_rate_linear_in_eta_and_temperature():
    assert abs(markov_rate(BathSpec(eta=0.3)) - 0.3) < 1e-15
    assert abs(markov_rate(BathSpec(kbt=2.0 * DEFAULT_KBT)) - 0.2) < 1e-15


def test_markov_cumulative_is_exactly_linear():
    g0 = markov_rate(MARKOV)
    for t in (0.0, 0.7, 5.0, 30.0):
        assert cumulative_decoherence(MARKOV, t) == g0 * t


# ----------------------------------------------------- finite-memory kernels

def test_rate_vanishes_at_zero_time():
    assert dephasing_rate(NON_MARKOV, 0.0) == 0.0
    assert cumulative_decoherence(NON_MARKOV, 0.0) == 0.0


def test_rate_at_cutoff_time():
    # at L t = 1 the flat-coth value is exactly g0/4 = 0.025; the full kernel
    # sits 0.08% above it (independent quadrature: 0.02502094)
    rate = dephasing_rate(NON_MARKOV, 100.0)
    assert abs(rate - 0.02502094) / 0.02502094 < 1e-6
    assert abs(rate - 0.025) / 0.025 < 3e-3


def test_rate_long_time_plateau():
    # as L t -> inf, arctan saturates at pi/2 and the rate plateaus at
    # 2 pi eta kbt, half the markov constant
    rate = dephasing_rate(NON_MARKOV, 3000.0)
    plateau = 2.0 * math.pi * DEFAULT_ETA * DEFAULT_KBT
    assert abs(rate - plateau) / plateau < 3e-2
    assert rate < plateau


def test_cumulative_at_early_time():
    # independent quadrature gives 6.382469557875702e-04 at t = 2
    value = cumulative_decoherence(NON_MARKOV, 2.0)
    assert abs(value - 6.382469557875702e-4) / 6.382469557875702e-4 < 1e-8
    # flat-coth closed form lands within a fraction of a percent
    assert abs(value - 6.37e-4) / 6.37e-4 < 3e-2


def test_rate_against_scipy_quadrature():
    spec = NON_MARKOV
    for t in (0.5, 3.0, 40.0):
        def integrand(w):
            return (2.0 * spec.eta * math.exp(-w / spec.lambda_cutoff)
                    * math.sin(w * t) / math.tanh(w / (2.0 * spec.kbt)))

        expected, _ = scipy.integrate.quad(integrand, 0.0, 60.0 * spec.lambda_cutoff,
                                           limit=400)
        assert abs(dephasing_rate(spec, t) - expected) / abs(expected) < 1e-6


def test_cumulative_against_scipy_quadrature():
    spec = NON_MARKOV
    for t in (2.0, 15.0):
        def integrand(w):
            s = math.sin(0.5 * w * t)
            return (2.0 * spec.eta * math.exp(-w / spec.lambda_cutoff)
                    * 2.0 * s * s / (w * math.tanh(w / (2.0 * spec.kbt))))

        expected, _ = scipy.integrate.quad(integrand, 0.0, 60.0 * spec.lambda_cutoff,
                                           limit=400)
        assert abs(cumulative_decoherence(spec, t) - expected) / abs(expected) < 1e-6


def test_rate_matches_flat_coth_envelope_at_high_temperature():
    # default kbt/L is about 8; the flat-coth forms should track the full
    # quadrature to a few tenths of a percent over the plotted window
    for t in np.linspace(1.5, 30.0, 12):
        rate = dephasing_rate(NON_MARKOV, float(t))
        cum = cumulative_decoherence(NON_MARKOV, float(t))
        assert abs(rate - high_t_rate(NON_MARKOV, t)) / high_t_rate(NON_MARKOV, t) < 5e-2
        assert abs(cum - high_t_cumulative(NON_MARKOV, t)) / high_t_cumulative(NON_MARKOV, t) < 5e-2


def test_rate_nonnegative_over_wide_scan():
    for t in np.logspace(-1.0, 3.0, 25):
        assert dephasing_rate(NON_MARKOV, float(t)) >= -1e-15


def test_rate_with_custom_quadrature_spec():
    quad = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-12,
                          cutoff_hint=DEFAULT_LAMBDA_CUTOFF)
    a = dephasing_rate(NON_MARKOV, 10.0, quad=quad)
    b = dephasing_rate(NON_MARKOV, 10.0)
    assert abs(a - b) / abs(b) < 1e-5


# ------------------------------------------------------------ lamb kernels

def test_lamb_shift_closed_form_values():
    mu, big_m = lamb_kernel(NON_MARKOV, 100.0)
    # eta L (Lt)^2 / (1 + (Lt)^2) at Lt = 1 is eta L / 2
    assert abs(mu - 5e-4) < 1e-15
    mu_inf, _ = lamb_kernel(NON_MARKOV, 1e7)
    assert abs(mu_inf - DEFAULT_ETA * DEFAULT_LAMBDA_CUTOFF) / 1e-3 < 1e-3
    _, big_m2 = lamb_kernel(NON_MARKOV, 2.0)
    assert abs(big_m2 - 2.666026849465486e-7) / 2.666026849465486e-7 < 1e-12


def test_lamb_shift_matches_quadrature():
    # mu(t) = integral of J(w) (1 - cos w t) / w; its antiderivative big_m
    # follows by integrating t - sin(w t)/w instead
    spec = NON_MARKOV
    quad = QuadratureSpec(cutoff_hint=spec.lambda_cutoff)
    for t in np.linspace(5.0, 300.0, 20):
        def mu_integrand(w, t=float(t)):
            s = np.sin(0.5 * w * t)
            return spec.eta * np.exp(-w / spec.lambda_cutoff) * 2.0 * s * s

        mu, _ = lamb_kernel(spec, float(t))
        mu_quad = integrate_semi_infinite(mu_integrand, quad)
        assert abs(mu - mu_quad) / abs(mu_quad) < 1e-8

    def big_m_integrand(w, t=2.0):
        return spec.eta * np.exp(-w / spec.lambda_cutoff) * (t - np.sin(w * t) / w)

    # the w -> 0 limit of (t - sin(wt)/w) is 0, but the sampled nodes never
    # include w = 0 exactly except the very first; patch that node
    def guarded(w):
        out = np.zeros_like(w)
        nz = w > 0.0
        out[nz] = big_m_integrand(w[nz])
        return out

    _, big_m = lamb_kernel(spec, 2.0)
    big_m_quad = integrate_semi_infinite(guarded, quad)
    assert abs(big_m - big_m_quad) / abs(big_m_quad) < 1e-6


# ------------------------------------------------------------ kernel bundle

def test_kernel_bundle_markov():
    k = make_kernels(MARKOV)
    g0 = markov_rate(MARKOV)
    assert k.gamma(0.7) == g0
    assert k.big_gamma(0.7) == g0 * 0.7
    assert k.mu(0.7) == 0.0
    assert k.big_m(0.7) == 0.0


def test_kernel_bundle_non_markov_starts_from_zero():
    k = make_kernels(NON_MARKOV)
    assert k.gamma(0.0) == 0.0
    assert k.big_gamma(0.0) == 0.0
    assert k.mu(0.0) == 0.0
    assert k.big_m(0.0) == 0.0


def test_kernel_bundle_non_markov_matches_module_functions():
    k = make_kernels(NON_MARKOV)
    assert k.gamma(7.0) == dephasing_rate(NON_MARKOV, 7.0)
    assert k.big_gamma(7.0) == cumulative_decoherence(NON_MARKOV, 7.0)
    mu, big_m = lamb_kernel(NON_MARKOV, 7.0)
    assert k.mu(7.0) == mu
    assert k.big_m(7.0) == big_m


# ---------------------------------------------------------------- validation

@pytest.mark.parametrize("kwargs", [
    {"eta": -0.1},
    {"lambda_cutoff": 0.0},
    {"lambda_cutoff": -1.0},
    {"kbt": 0.0},
    {"topology": "global"},
    {"memory": "nonmarkov"},
])
def test_bath_spec_validation(kwargs):
    with pytest.raises(ValueError):
        BathSpec(**kwargs)


@pytest.mark.parametrize("func", [dephasing_rate, cumulative_decoherence, lamb_kernel])
def test_negative_time_rejected(func):
    with pytest.raises(ValueError):
        func(NON_MARKOV, -0.5)


def test_zero_coupling_rates_vanish():
    off = BathSpec(eta=0.0, memory="non_markov")
    assert dephasing_rate(off, 5.0) == 0.0
    assert cumulative_decoherence(off, 5.0) == 0.0
