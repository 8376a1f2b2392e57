"""Critical efficiency of noisy states.

Colored noise mixes in the diagonal part cos^2(theta/2)|01><01| +
sin^2(theta/2)|10><10|.  It leaves both reduced states untouched, so the
critical efficiency obeys

    1/eta_noise = (1 - eps)/eta_c + eps [mean(cos a_k cos b_k) - C_n cos theta] / [C_n (1 - cos theta)]

with Alice kept at the noiseless optimum.  White noise (the identity/4)
depolarizes the reduced states and multiplies eta_c by
1 + eps / (2 (1 - eps) sin^2(theta/2)).  That factor diverges as theta -> 0.

Efficiencies above 1 are returned unchanged; they mean the steering test
cannot be passed at that point.  A vanishing or negative denominator is
reported as ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .efficiency import (
    DEFAULT_THETA_MIN,
    HALF_PI,
    _alignment_residual,
    _check_aligned,
    _check_theta,
    critical_efficiency,
    default_theta_grid,
    efficiency_forms,
    hemisphere_average,
    lhs_value,
)
from .errors import DomainError
from .lhs import C_CONTINUUM
from .measurements import MeasurementSet
from .qubit import NoiseKind, TwoQubitState

GOLDEN_TOL = 1e-6
CROSSOVER_TOL = 1e-4
_SCAN_POINTS = 65
_INV_GOLDEN = (math.sqrt(5) - 1) / 2


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not (0.0 <= epsilon < 1.0):
        raise DomainError(f"epsilon={epsilon!r} outside [0, 1)")
    return epsilon


def _noise_terms(theta: float, cos_beta):
    """cos(alpha) cos(beta) - cos(theta) cos(beta) at the optimal alpha, without cancellation."""
    cos_beta = np.asarray(cos_beta, dtype=float)
    s2 = math.sin(theta) ** 2
    c = math.cos(theta)
    sin2_beta = 1 - cos_beta**2
    corr = np.sqrt(cos_beta**2 + s2 * sin2_beta)
    return cos_beta * s2 * (cos_beta**2 - c**2 * sin2_beta) / (corr * (cos_beta + c * corr))


def colored_noise_correlation(theta: float, mset: MeasurementSet) -> float:
    """mean_k <a_k.sigma x b_k.sigma> on the colored-noise component, i.e. mean cos(alpha_k) cos(beta_k)."""
    theta = _check_theta(theta)
    if mset.is_continuum:
        return hemisphere_average(lambda u: _noise_terms(theta, u)) + math.cos(theta) * C_CONTINUUM
    cos_beta = mset.as_array()[:, 2]
    return float(np.mean(_noise_terms(theta, cos_beta) + math.cos(theta) * cos_beta))


def _safe_reciprocal(inv: float) -> float:
    return math.inf if inv <= 0 else 1.0 / inv


def eta_colored(theta: float, mset: MeasurementSet, epsilon: float) -> float:
    _check_aligned(mset)
    theta = _check_theta(theta)
    epsilon = _check_epsilon(epsilon)
    eta = critical_efficiency(theta, mset)
    if epsilon == 0.0:
        return eta
    if mset.is_continuum:
        c_n, mean_cos = C_CONTINUUM, C_CONTINUUM
        noise_mean = hemisphere_average(lambda u: _noise_terms(theta, u))
    else:
        c_n = lhs_value(mset)
        cos_beta = mset.as_array()[:, 2]
        mean_cos = float(np.mean(cos_beta))
        noise_mean = float(np.mean(_noise_terms(theta, cos_beta)))
    # mean(cos a cos b) - C_n cos(theta), split as above plus the exact residual cos(theta)(mean cos b - C_n)
    noise_num = noise_mean - math.cos(theta) * _alignment_residual(c_n, mean_cos)
    one_minus_cos = 2 * math.sin(theta / 2) ** 2
    inv = (1 - epsilon) / eta + epsilon * noise_num / (c_n * one_minus_cos)
    return _safe_reciprocal(inv)


def eta_white(theta: float, mset: MeasurementSet, epsilon: float) -> float:
    _check_aligned(mset)
    theta = _check_theta(theta)
    epsilon = _check_epsilon(epsilon)
    factor = 1 + epsilon / (2 * (1 - epsilon) * math.sin(theta / 2) ** 2)
    return factor * critical_efficiency(theta, mset)


def eta_noise(theta: float, mset: MeasurementSet, epsilon: float, kind="colored") -> float:
    kind = NoiseKind(kind)
    if kind is NoiseKind.COLORED:
        return eta_colored(theta, mset, epsilon)
    if kind is NoiseKind.WHITE:
        return eta_white(theta, mset, epsilon)
    return critical_efficiency(theta, mset)


def eta_noise_direct(theta: float, mset: MeasurementSet, epsilon: float, kind="colored") -> float:
    """Same quantity built from the noisy 4x4 density matrix (finite sets only)."""
    kind = NoiseKind(kind)
    if epsilon == 0.0:
        kind = NoiseKind.NONE
    state = TwoQubitState(theta, kind, epsilon)
    eta = efficiency_forms(state, mset)[1]
    return eta if eta > 0 else math.inf


@dataclass(frozen=True)
class NoiseCurve:
    label: str
    n: float
    epsilon: float
    kind: str
    thetas: np.ndarray
    etas: np.ndarray

    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.thetas.tolist(), self.etas.tolist()))


def noise_curve(mset: MeasurementSet, epsilon: float, theta_grid=None, kind="colored") -> NoiseCurve:
    thetas = default_theta_grid() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    etas = np.array([eta_noise(t, mset, epsilon, kind) for t in thetas])
    return NoiseCurve(mset.label.value, mset.n, float(epsilon), NoiseKind(kind).value, thetas, etas)


def golden_section_minimize(f, lo: float, hi: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    """Minimize a unimodal f on [lo, hi] until the bracket is narrower than tol."""
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def min_over_theta(
    mset: MeasurementSet,
    epsilon: float,
    kind="colored",
    lo: float = DEFAULT_THETA_MIN,
    hi: float = HALF_PI,
    tol: float = GOLDEN_TOL,
) -> tuple[float, float]:
    """(theta_star, eta_star) minimizing the noisy critical efficiency over [lo, hi].

    A coarse scan picks the bracket around the lowest grid point and golden
    section refines inside it.  Both endpoints are candidates too, because
    the noiseless and low-noise colored curves decrease all the way to lo.
    """
    def f(t):
        return eta_noise(t, mset, epsilon, kind)

    grid = np.linspace(lo, hi, _SCAN_POINTS)
    values = np.array([f(t) for t in grid])
    i = int(np.argmin(values))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    candidates = [golden_section_minimize(f, a, b, tol), (lo, float(values[0])), (hi, float(values[-1]))]
    theta_star, eta_star = min(candidates, key=lambda p: p[1])
    return float(theta_star), float(eta_star)


def crossover_epsilon(mset: MeasurementSet, tol: float = CROSSOVER_TOL) -> float:
    """Largest epsilon for which some partially entangled state still beats C_n under colored noise."""
    c_n = C_CONTINUUM if mset.is_continuum else lhs_value(mset)

    def beats(eps):
        return min_over_theta(mset, eps, "colored")[1] < c_n

    lo, hi = 0.0, 1.0 - 1e-9
    if not beats(lo):
        return 0.0
    if beats(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if beats(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
