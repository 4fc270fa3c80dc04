"""Ohmic bath spectral density and the dephasing kernels built from it.

Conventions: hbar = 1, frequencies in units of the qubit splitting, and
temperature enters only through kbt.  The spectral density is

    J(w) = eta * w * exp(-w / lambda_cutoff)

and the kernels are

    gamma(t) = 2 * int_0^inf J(w) coth(w / 2 kbt) sin(w t) / w dw
    Gamma(t) = int_0^t gamma(s) ds            (big_gamma below)
    mu(t)    = int_0^inf J(w) (1 - cos(w t)) / w dw
    M(t)     = int_0^t mu(s) ds               (big_m below)

In the Markov limit the flat rate gamma0 = 4 pi eta kbt replaces gamma(t)
and Gamma(t) becomes exactly gamma0 * t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .numerics import QuadratureSpec, integrate_semi_infinite

__all__ = [
    "DEFAULT_ETA",
    "DEFAULT_LAMBDA_CUTOFF",
    "DEFAULT_KBT",
    "TOPOLOGIES",
    "MEMORIES",
    "BathSpec",
    "DecoherenceKernels",
    "spectral_density",
    "markov_rate",
    "dephasing_rate",
    "cumulative_decoherence",
    "lamb_kernel",
    "make_kernels",
]

DEFAULT_ETA = 0.1
DEFAULT_LAMBDA_CUTOFF = 0.01
DEFAULT_KBT = 1.0 / (4.0 * math.pi)

TOPOLOGIES = ("local", "common")
MEMORIES = ("markov", "non_markov")

# Below this x the series coth(x) = 1/x + x/3 is exact to machine precision
# (the dropped x^3/45 term is relatively ~x^4/45 < 1e-13).
_COTH_SERIES_X = 1e-3


@dataclass(frozen=True)
class BathSpec:
    """Bath parameters plus how the three-qubit register couples to it.

    topology "local" gives each qubit its own independent bath; "common"
    couples all three to a single shared one.  memory "markov" selects the
    flat-rate limit, "non_markov" the full time-dependent kernels.
    """

    eta: float = DEFAULT_ETA
    lambda_cutoff: float = DEFAULT_LAMBDA_CUTOFF
    kbt: float = DEFAULT_KBT
    topology: str = "common"
    memory: str = "markov"

    def __post_init__(self):
        if not (isinstance(self.eta, (int, float)) and math.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"eta must be a finite number >= 0, got {self.eta!r}")
        if not (isinstance(self.lambda_cutoff, (int, float)) and math.isfinite(self.lambda_cutoff)
                and self.lambda_cutoff > 0):
            raise ValueError(f"lambda_cutoff must be positive, got {self.lambda_cutoff!r}")
        if not (isinstance(self.kbt, (int, float)) and math.isfinite(self.kbt) and self.kbt > 0):
            raise ValueError(f"kbt must be positive, got {self.kbt!r}")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"topology must be one of {TOPOLOGIES}, got {self.topology!r}")
        if self.memory not in MEMORIES:
            raise ValueError(f"memory must be one of {MEMORIES}, got {self.memory!r}")


@dataclass(frozen=True)
class DecoherenceKernels:
    """The four scalar kernels driving the dephasing master equations."""

    gamma: Callable[[float], float]
    big_gamma: Callable[[float], float]
    mu: Callable[[float], float]
    big_m: Callable[[float], float]


def _check_time(t) -> float:
    t = float(t)
    if not (math.isfinite(t) and t >= 0.0):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    return t


def spectral_density(spec: BathSpec, omega):
    """Ohmic J(w) with exponential cutoff; scalar or ndarray in, same out."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("omega must be finite and >= 0")
    out = spec.eta * w * np.exp(-w / spec.lambda_cutoff)
    return float(out) if np.isscalar(omega) else out


def markov_rate(spec: BathSpec) -> float:
    """Flat Markov dephasing rate gamma0 = 4 pi eta kbt."""
    return 4.0 * math.pi * spec.eta * spec.kbt


def _kernel_quad(lam: float) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13, cutoff_hint=lam, max_subdivisions=4000)


def _gamma_integrand(eta: float, lam: float, kbt: float, t: float) -> Callable:
    def integrand(w: np.ndarray) -> np.ndarray:
        x = w / (2.0 * kbt)
        out = np.empty_like(w)
        small = x < _COTH_SERIES_X
        ws = w[small]
        # the coth pole is removed against sin(w t) analytically
        out[small] = 2.0 * kbt * t * np.sinc(ws * t / np.pi) + ws / (6.0 * kbt) * np.sin(ws * t)
        wl = w[~small]
        out[~small] = np.sin(wl * t) / np.tanh(x[~small])
        return 2.0 * eta * np.exp(-w / lam) * out
    return integrand


def _big_gamma_integrand(eta: float, lam: float, kbt: float, t: float) -> Callable:
    def integrand(w: np.ndarray) -> np.ndarray:
        # 1 - cos(w t) kept as 2 sin^2(w t / 2) for accuracy near w = 0
        x = w / (2.0 * kbt)
        out = np.empty_like(w)
        small = x < _COTH_SERIES_X
        ws = w[small]
        sin_over_w = (t / 2.0) * np.sinc(ws * t / (2.0 * np.pi))
        out[small] = 4.0 * kbt * sin_over_w ** 2 + np.sin(ws * t / 2.0) ** 2 / (3.0 * kbt)
        wl = w[~small]
        out[~small] = 2.0 * np.sin(wl * t / 2.0) ** 2 / (wl * np.tanh(x[~small]))
        return 2.0 * eta * np.exp(-w / lam) * out
    return integrand


@lru_cache(maxsize=None)
def _gamma_cached(eta: float, lam: float, kbt: float, t: float) -> float:
    return integrate_semi_infinite(_gamma_integrand(eta, lam, kbt, t), _kernel_quad(lam))


@lru_cache(maxsize=None)
def _big_gamma_cached(eta: float, lam: float, kbt: float, t: float) -> float:
    return integrate_semi_infinite(_big_gamma_integrand(eta, lam, kbt, t), _kernel_quad(lam))


def dephasing_rate(spec: BathSpec, t, quad: QuadratureSpec | None = None) -> float:
    """Time-dependent dephasing rate gamma(t), by quadrature.

    Results for the default quadrature settings are memoized per
    (eta, lambda_cutoff, kbt, t), so repeated sweeps over one bath are cheap.
    """
    t = _check_time(t)
    if t == 0.0 or spec.eta == 0.0:
        return 0.0
    if quad is None:
        return _gamma_cached(spec.eta, spec.lambda_cutoff, spec.kbt, t)
    return integrate_semi_infinite(_gamma_integrand(spec.eta, spec.lambda_cutoff, spec.kbt, t), quad)


def cumulative_decoherence(spec: BathSpec, t, quad: QuadratureSpec | None = None) -> float:
    """Gamma(t), the integral of the dephasing rate from 0 to t.

    Markov memory returns exactly gamma0 * t; non-Markov memory evaluates the
    (1 - cos) form of the integral directly rather than integrating gamma(t).
    """
    t = _check_time(t)
    if spec.memory == "markov":
        return markov_rate(spec) * t
    if t == 0.0 or spec.eta == 0.0:
        return 0.0
    if quad is None:
        return _big_gamma_cached(spec.eta, spec.lambda_cutoff, spec.kbt, t)
    return integrate_semi_infinite(_big_gamma_integrand(spec.eta, spec.lambda_cutoff, spec.kbt, t), quad)


def lamb_kernel(spec: BathSpec, t) -> tuple[float, float]:
    """Lamb-shift kernels (mu(t), M(t)) in closed form.

    For the exponentially cut off Ohmic density the frequency integrals are
    elementary:

        mu(t) = eta * lam^3 t^2 / (1 + lam^2 t^2)
        M(t)  = eta * (lam t - arctan(lam t))
    """
    t = _check_time(t)
    lam = spec.lambda_cutoff
    mu = spec.eta * lam ** 3 * t * t / (1.0 + lam * lam * t * t)
    big_m = spec.eta * (lam * t - math.atan(lam * t))
    return mu, big_m


def make_kernels(spec: BathSpec) -> DecoherenceKernels:
    """Kernel bundle matching the bath's memory mode."""
    if spec.memory == "markov":
        g0 = markov_rate(spec)
        return DecoherenceKernels(
            gamma=lambda t: g0,
            big_gamma=lambda t: g0 * _check_time(t),
            mu=lambda t: 0.0,
            big_m=lambda t: 0.0,
        )
    return DecoherenceKernels(
        gamma=lambda t: dephasing_rate(spec, t),
        big_gamma=lambda t: cumulative_decoherence(spec, t),
        mu=lambda t: lamb_kernel(spec, t)[0],
        big_m=lambda t: lamb_kernel(spec, t)[1],
    )
