"""Critical detection efficiency of Alice's device.

For an aligned set, where the C_n-maximizing direction sum points along +z,
Alice's optimal projector for direction b_k at polar angle beta_k satisfies
tan(alpha_k) = sin(theta) tan(beta_k) with the same azimuth.  The optimized
correlation is then sqrt(cos^2 beta + sin^2 theta sin^2 beta), and

    eta_c = [C_n + mean <b_k.sigma>_B] / mean[<a_k.sigma x b_k.sigma> + <b_k.sigma>_B].

Near theta = 0 both numerator and denominator are O(theta^2).  The fast path
:func:`critical_efficiency` rewrites each difference so that nothing cancels.
:func:`efficiency_forms` evaluates the same ratio from scratch on the 4x4
density matrix, in both its probability and Pauli forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AlignmentError, DomainError
from .lhs import C_CONTINUUM, lhs_bound
from .measurements import MeasurementSet
from .qubit import (
    TwoQubitState,
    bloch_to_projector,
    build_state,
    correlation,
    joint_probability,
    local_expectation,
    partial_trace,
)
from .steering import AliceSettings

DEFAULT_THETA_MIN = 1e-3
DEFAULT_GRID_POINTS = 200
QUAD_START_NODES = 64
QUAD_TOL = 1e-10
HALF_PI = math.pi / 2


def default_theta_grid(points: int = DEFAULT_GRID_POINTS, start: float = DEFAULT_THETA_MIN) -> np.ndarray:
    return np.linspace(start, HALF_PI, points)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 < theta <= HALF_PI + 1e-12):
        raise DomainError(
            f"theta={theta!r} outside (0, pi/2]; use limit_zero_entanglement for theta -> 0"
        )
    return min(theta, HALF_PI)


def _check_aligned(mset: MeasurementSet) -> None:
    if not mset.aligned:
        raise AlignmentError("measurement set must be aligned (see align_set)")


@lru_cache(maxsize=256)
def lhs_value(mset: MeasurementSet) -> float:
    return lhs_bound(mset).c_n


def optimal_alpha(theta: float, beta):
    """Solution of tan(alpha) = sin(theta) tan(beta) in [0, pi]."""
    beta = np.asarray(beta, dtype=float)
    return np.arctan2(math.sin(theta) * np.sin(beta), np.cos(beta))


def optimal_correlation(theta: float, beta):
    """max over alpha of sin(theta) sin(alpha) sin(beta) + cos(alpha) cos(beta)."""
    beta = np.asarray(beta, dtype=float)
    return np.sqrt(np.cos(beta) ** 2 + math.sin(theta) ** 2 * np.sin(beta) ** 2)


def optimal_alice(theta: float, mset: MeasurementSet) -> AliceSettings:
    _check_aligned(mset)
    if mset.is_continuum:
        raise DomainError("the continuum set has no explicit Alice settings")
    theta = _check_theta(theta)
    alphas = optimal_alpha(theta, mset.polar_angles())
    return AliceSettings(tuple(alphas), tuple(mset.azimuths()))


def _denominator_terms(theta: float, cos_beta: np.ndarray) -> np.ndarray:
    """corr_k - cos(theta) cos(beta_k), using corr^2 - cos^2(theta) cos^2(beta) = sin^2(theta)."""
    corr = np.sqrt(cos_beta**2 + math.sin(theta) ** 2 * (1 - cos_beta**2))
    direct = corr - math.cos(theta) * cos_beta
    stable = math.sin(theta) ** 2 / (corr + math.cos(theta) * cos_beta)
    return np.where(cos_beta >= 0, stable, direct)


def _alignment_residual(c_n: float, mean_cos_beta: float) -> float:
    """C_n - mean(cos beta): zero on a properly aligned set, so pure round-off is dropped."""
    residual = c_n - mean_cos_beta
    if abs(residual) <= 64 * np.finfo(float).eps * c_n:
        return 0.0
    return residual


def _numerator(theta: float, c_n: float, mean_cos_beta: float) -> float:
    """C_n - cos(theta) mean(cos beta), split so the leading term is C_n (1 - cos theta)."""
    one_minus_cos = 2 * math.sin(theta / 2) ** 2
    return c_n * one_minus_cos + math.cos(theta) * _alignment_residual(c_n, mean_cos_beta)


def critical_efficiency(theta: float, mset: MeasurementSet) -> float:
    """Critical efficiency of the pure state at entanglement parameter ``theta``."""
    _check_aligned(mset)
    if mset.is_continuum:
        theta = _check_theta(theta)
        return C_CONTINUUM if theta >= HALF_PI else eta_infinity(theta)
    theta = _check_theta(theta)
    c_n = lhs_value(mset)
    cos_beta = mset.as_array()[:, 2]
    num = _numerator(theta, c_n, float(np.mean(cos_beta)))
    den = float(np.mean(_denominator_terms(theta, cos_beta)))
    return num / den


def efficiency_forms(state, mset: MeasurementSet, alice: AliceSettings | None = None) -> tuple[float, float]:
    """Critical efficiency evaluated directly on the density matrix, in two ways.

    Returns ``(probability_form, pauli_form)``.  The probability form uses
    projector traces Tr[Pi_a x Pi_b rho] and the like.  The Pauli form uses
    <a.sigma x b.sigma> and <b.sigma>_B.  ``state`` is a TwoQubitState or a
    4x4 matrix.  ``alice`` defaults to the noiseless optimum for the state's
    theta.
    """
    if mset.is_continuum:
        raise DomainError("density-matrix evaluation needs a finite set")
    if isinstance(state, TwoQubitState):
        if alice is None:
            alice = optimal_alice(state.theta, mset)
        rho = build_state(state)
    else:
        rho = np.asarray(state, dtype=complex)
        if alice is None:
            raise DomainError("alice settings are required when passing a raw density matrix")
    c_n = lhs_value(mset)
    n = len(mset.directions)
    rho_a, rho_b = partial_trace(rho, "A"), partial_trace(rho, "B")

    num_p = den_p = 0.0
    for proj_a, b in zip(alice.projectors(), mset.directions):
        proj_b = bloch_to_projector(b)
        num_p += float(np.real(np.trace(proj_b @ rho_b)))
        den_p += 2 * joint_probability(rho, proj_a, proj_b) - float(np.real(np.trace(proj_a @ rho_a)))
    prob_form = ((c_n - 1) / 2 + num_p / n) / (den_p / n)

    num_s = den_s = 0.0
    for a, b in zip(alice.bloch_vectors(), mset.directions):
        local_b = local_expectation(rho, "B", b)
        num_s += local_b
        den_s += correlation(rho, a, b) + local_b
    pauli_form = (c_n + num_s / n) / (den_s / n)
    return prob_form, pauli_form


def eta_infinity(theta: float) -> float:
    """Closed form for infinitely many settings: 1 / [1 + (1 + sec theta) arccosh(csc theta)]."""
    theta = float(theta)
    if not (0.0 < theta < HALF_PI):
        raise DomainError(f"theta={theta!r} outside (0, pi/2); the pi/2 limit is C_inf = 1/2")
    c = math.cos(theta)
    # arccosh(csc theta) = log((1 + cos)/sin); near pi/2 use log1p with 1 - cos = 2 sin^2(theta/2)
    if theta < math.pi / 4:
        arc = math.log((1.0 + c) / math.sin(theta))
    else:
        arc = 0.5 * math.log1p(c / math.sin(theta / 2) ** 2)
    return 1.0 / (1.0 + (1.0 + 1.0 / c) * arc)


def hemisphere_average(f, tol: float = QUAD_TOL, start_nodes: int = QUAD_START_NODES, max_nodes: int = 8192) -> float:
    """(1/2pi) int dphi int_0^1 du f(u) for an azimuth-independent integrand f(u) of u = cos(beta).

    Gauss-Legendre in u; the node count doubles until two successive results
    agree to ``tol``.
    """
    def rule(m):
        x, w = np.polynomial.legendre.leggauss(m)
        u = 0.5 * (x + 1)
        return float(0.5 * np.sum(w * f(u)))

    m = start_nodes
    prev = rule(m)
    while m < max_nodes:
        m *= 2
        cur = rule(m)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def eta_infinity_quadrature(theta: float) -> float:
    """Continuum critical efficiency by hemispheric quadrature of numerator and denominator."""
    theta = _check_theta(theta)
    s, c = math.sin(theta), math.cos(theta)
    num = hemisphere_average(lambda u: u * (1 - c))
    den = hemisphere_average(lambda u: np.sqrt(u**2 + s**2 * (1 - u**2)) - c * u)
    return num / den


def limit_zero_entanglement(mset: MeasurementSet) -> float:
    """theta -> 0 limit of the critical efficiency: sum(cos beta_k) / sum(sec beta_k)."""
    _check_aligned(mset)
    if mset.is_continuum:
        return 0.0
    cos_beta = mset.as_array()[:, 2]
    if np.any(cos_beta <= 1e-12):
        raise DomainError("a direction on or below the equator makes the zero-entanglement limit diverge")
    return float(np.sum(cos_beta) / np.sum(1.0 / cos_beta))


@dataclass(frozen=True)
class EfficiencyCurve:
    label: str
    n: float
    thetas: np.ndarray
    etas: np.ndarray

    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.thetas.tolist(), self.etas.tolist()))


def efficiency_curve(mset: MeasurementSet, theta_grid=None) -> EfficiencyCurve:
    thetas = default_theta_grid() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    if np.any(np.diff(thetas) < 0):
        raise DomainError("theta grid must be ordered")
    etas = np.array([critical_efficiency(t, mset) for t in thetas])
    return EfficiencyCurve(mset.label.value, mset.n, thetas, etas)
