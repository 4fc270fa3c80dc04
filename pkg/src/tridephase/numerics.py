"""Self-contained numerical primitives.

Semi-infinite quadrature for exponentially damped integrands, Hermitian
eigendecomposition, and a fixed-step classical Runge-Kutta integrator.
Nothing in this module knows about baths or qubits; callers drive everything
through the small spec dataclasses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadratureConvergenceError",
    "PropagationError",
    "HermitianEig",
    "integrate_semi_infinite",
    "hermitian_eigendecomposition",
    "ode_propagate",
]

# Truncation of [0, inf) in units of the cutoff hint.  exp(-45) ~ 3e-20, far
# below any tolerance this module accepts, so the discarded tail never matters.
_TAIL_FACTOR = 45

_HERMITICITY_TOL = 1e-8


class QuadratureConvergenceError(RuntimeError):
    """Subdivision budget exhausted before the error target was met.

    Carries the best estimate and its error bound so the caller can decide
    whether the partial answer is still usable.
    """

    def __init__(self, estimate: float, error_bound: float, message: str):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class PropagationError(RuntimeError):
    """ODE state stopped being finite; carries the last good time."""

    def __init__(self, last_good_time: float, message: str):
        super().__init__(message)
        self.last_good_time = last_good_time


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and scales for :func:`integrate_semi_infinite`.

    Attributes:
        rel_tol: relative error target; the result I satisfies
            ``|I - integral| <= max(abs_tol, rel_tol * |I|)``.
        abs_tol: absolute error floor for integrals near zero.
        cutoff_hint: decay scale of the integrand.  Integration is truncated
            at ``_TAIL_FACTOR * cutoff_hint`` and the initial panels have
            width ``cutoff_hint``.
        max_subdivisions: total panel-split budget before giving up.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-13
    cutoff_hint: float = 1.0
    max_subdivisions: int = 4000

    def __post_init__(self):
        for field in ("rel_tol", "abs_tol", "cutoff_hint"):
            value = getattr(self, field)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{field} must be a positive finite number, got {value!r}")
        if not (isinstance(self.max_subdivisions, int) and self.max_subdivisions >= 1):
            raise ValueError(f"max_subdivisions must be a positive integer, got {self.max_subdivisions!r}")


def _eval_integrand(f: Callable, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        raise ValueError("integrand must return one value per abscissa")
    if not np.all(np.isfinite(y)):
        where = x[~np.isfinite(y)]
        raise ValueError(f"integrand is not finite at omega={where[0]!r}")
    return y


def integrate_semi_infinite(f: Callable, spec: QuadratureSpec) -> float:
    """Integrate f over [0, inf) for integrands that decay like exp(-w/cutoff).

    The integrand must be vectorized (ndarray in, ndarray out) and finite
    everywhere it is sampled, including w = 0.  The rule is composite Simpson
    with Richardson extrapolation on each panel; panels whose embedded error
    estimate is too large are halved until the summed bound meets
    ``max(abs_tol, rel_tol * |I|)``.

    Raises:
        ValueError: if the integrand returns a non-finite value.
        QuadratureConvergenceError: if the split budget runs out first.
    """
    upper = _TAIL_FACTOR * spec.cutoff_hint
    n0 = _TAIL_FACTOR
    width = np.full(n0, upper / n0)
    left = np.arange(n0) * (upper / n0)
    offsets = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    nodes = left[:, None] + width[:, None] * offsets[None, :]
    fv = _eval_integrand(f, nodes.ravel()).reshape(n0, 5)

    splits_used = 0
    while True:
        coarse = width / 6.0 * (fv[:, 0] + 4.0 * fv[:, 2] + fv[:, 4])
        fine = width / 12.0 * (fv[:, 0] + 4.0 * fv[:, 1] + 2.0 * fv[:, 2] + 4.0 * fv[:, 3] + fv[:, 4])
        correction = (fine - coarse) / 15.0
        value = fine + correction
        err = np.abs(correction)
        total = float(value.sum())
        bound = float(err.sum())
        target = max(spec.abs_tol, spec.rel_tol * abs(total))
        if bound <= target:
            return total
        if splits_used >= spec.max_subdivisions:
            raise QuadratureConvergenceError(
                total, bound,
                f"no convergence after {splits_used} subdivisions: "
                f"error bound {bound:.3e} > target {target:.3e}")

        mask = err > target / (2.0 * len(err))
        if not mask.any():
            mask = err >= err.max()
        budget = spec.max_subdivisions - splits_used
        if int(mask.sum()) > budget:
            # spend what is left on the worst offenders only
            keep = np.argsort(err)[::-1][:budget]
            mask = np.zeros(len(err), dtype=bool)
            mask[keep] = True
        splits_used += int(mask.sum())

        # each split turns a panel into two halves; three of each half's five
        # nodes are inherited from the parent, so only four are new
        pl, pw, pf = left[mask], width[mask], fv[mask]
        half = pw / 2.0
        la, ra = pl, pl + half
        new_nodes = np.concatenate([
            la + half * 0.25, la + half * 0.75,
            ra + half * 0.25, ra + half * 0.75,
        ])
        nf = _eval_integrand(f, new_nodes).reshape(4, -1)
        left_fv = np.stack([pf[:, 0], nf[0], pf[:, 1], nf[1], pf[:, 2]], axis=1)
        right_fv = np.stack([pf[:, 2], nf[2], pf[:, 3], nf[3], pf[:, 4]], axis=1)

        left = np.concatenate([left[~mask], la, ra])
        width = np.concatenate([width[~mask], half, half])
        fv = np.concatenate([fv[~mask], left_fv, right_fv], axis=0)


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition; eigenvalues descending, eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eigendecomposition(matrix) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized to (H + H^dagger)/2 before factorization; inputs
    further than 1e-8 from Hermitian are rejected.  Column i of the returned
    eigenvectors pairs with eigenvalue i, eigenvalues sorted descending.
    """
    h = np.asarray(matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {h.shape}")
    residual = float(np.max(np.abs(h - h.conj().T)))
    if not math.isfinite(residual):
        raise ValueError("matrix contains non-finite entries")
    if residual > _HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian: max |H - H^dag| = {residual:.3e}")
    sym = (h + h.conj().T) / 2.0
    values, vectors = np.linalg.eigh(sym)
    return HermitianEig(eigenvalues=values[::-1].copy(), eigenvectors=vectors[:, ::-1].copy())


def ode_propagate(derivative: Callable, y0, grid: Sequence[float], max_step: float | None = None) -> np.ndarray:
    """Integrate dy/dt = derivative(t, y) across a time grid with classical RK4.

    The grid must start at 0 and increase strictly; the state is reported at
    every grid point (initial value included).  Between grid points the
    integrator takes uniform substeps no longer than ``max_step``.

    Returns an array of shape (len(grid), len(y0)), or (len(grid),) when y0
    is scalar.

    Raises:
        ValueError: for a malformed grid or non-positive max_step.
        PropagationError: if the state stops being finite; the exception
            carries the last time at which it was still good.
    """
    times = np.asarray(grid, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("time grid must be a nonempty 1-d sequence")
    if times[0] != 0.0:
        raise ValueError(f"time grid must start at 0, got {times[0]!r}")
    if len(times) > 1 and not np.all(np.diff(times) > 0.0):
        raise ValueError("time grid must be strictly increasing")
    if max_step is not None and not (max_step > 0.0 and math.isfinite(max_step)):
        raise ValueError(f"max_step must be positive and finite, got {max_step!r}")

    scalar = np.ndim(y0) == 0
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    out = np.empty((len(times), y.size))
    out[0] = y
    last_good = 0.0
    for k in range(1, len(times)):
        t0, t1 = times[k - 1], times[k]
        span = t1 - t0
        n_sub = 1 if max_step is None else max(1, math.ceil(span / max_step))
        h = span / n_sub
        for j in range(n_sub):
            t = t0 + j * h
            k1 = np.asarray(derivative(t, y), dtype=float)
            k2 = np.asarray(derivative(t + h / 2.0, y + (h / 2.0) * k1), dtype=float)
            k3 = np.asarray(derivative(t + h / 2.0, y + (h / 2.0) * k2), dtype=float)
            k4 = np.asarray(derivative(t + h, y + h * k3), dtype=float)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise PropagationError(last_good, f"state became non-finite between t={last_good!r} and t={t + h!r}")
            last_good = t + h
        out[k] = y
    return out[:, 0] if scalar else out
