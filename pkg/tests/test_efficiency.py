import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steering_loophole.efficiency import (
    critical_efficiency,
    default_theta_grid,
    efficiency_curve,
    efficiency_forms,
    eta_infinity,
    eta_infinity_quadrature,
    hemisphere_average,
    limit_zero_entanglement,
    optimal_alice,
    optimal_alpha,
    optimal_correlation,
)
from steering_loophole.errors import AlignmentError, DomainError
from steering_loophole.lhs import lhs_bound
from steering_loophole.measurements import NAMED_SETS, MeasurementSet, SetLabel, continuum_set, named_set, platonic_set
from steering_loophole.qubit import BlochVector, TwoQubitState, alice_ket, bob_ket, build_state, local_expectation

HALF_PI = math.pi / 2
SQRT13 = math.sqrt(13)
FORM_GRID = [k * math.pi / 40 for k in range(1, 21)]


def eta2(t):
    return (1 - math.cos(t)) / (math.sqrt(1 + math.sin(t) ** 2) - math.cos(t))


def eta3(t):
    return (1 - math.cos(t)) / (math.sqrt(1 + 2 * math.sin(t) ** 2) - math.cos(t))


def corr_fn(theta, alpha, beta):
    return math.sin(theta) * np.sin(alpha) * math.sin(beta) + np.cos(alpha) * math.cos(beta)


class TestOptimalAlice:
    def test_maximal_entanglement(self, icosahedron):
        alice = optimal_alice(HALF_PI, icosahedron)
        assert np.allclose(alice.alphas, icosahedron.polar_angles(), atol=1e-12)
        assert np.allclose(alice.phis, icosahedron.azimuths(), atol=0)

    def test_pole(self):
        assert optimal_alpha(0.3, 0.0) == 0.0

    def test_worked_example(self):
        theta, beta = math.pi / 6, math.pi / 4
        alpha = float(optimal_alpha(theta, beta))
        assert alpha == pytest.approx(math.atan(0.5), abs=1e-14)
        assert float(optimal_correlation(theta, beta)) == pytest.approx(math.sqrt(5 / 8), abs=1e-14)
        grid = np.arange(0, math.pi, 1e-6)
        best = grid[np.argmax(corr_fn(theta, grid, beta))]
        assert abs(best - alpha) < 2e-6

    def test_grid_search_never_wins(self):
        rng = np.random.default_rng(12)
        grid = np.arange(0, math.pi + 1e-6, 1e-6)
        for _ in range(100):
            theta, beta = rng.uniform(1e-3, HALF_PI), rng.uniform(0, math.pi)
            closed = corr_fn(theta, float(optimal_alpha(theta, beta)), beta)
            assert closed == pytest.approx(float(optimal_correlation(theta, beta)), abs=1e-12)
            assert corr_fn(theta, grid, beta).max() <= closed + 1e-9

    def test_correlation_against_density_matrix(self, icosahedron):
        # the optimal kets reproduce the closed-form correlation on the 4x4 state
        theta = 0.8
        rho = build_state(TwoQubitState(theta))
        alice = optimal_alice(theta, icosahedron)
        for proj_a, b, beta in zip(alice.projectors(), icosahedron.directions, icosahedron.polar_angles()):
            a_sig = 2 * proj_a - np.eye(2)
            b_sig = 2 * bob_ket(beta, b.azimuth).projector() - np.eye(2)
            val = float(np.real(np.trace(np.kron(a_sig, b_sig) @ rho)))
            assert val == pytest.approx(float(optimal_correlation(theta, beta)), abs=1e-12)

    def test_unaligned_rejected(self):
        with pytest.raises(AlignmentError):
            optimal_alice(0.5, platonic_set("octahedron"))


class TestCriticalEfficiency:
    def test_boundary(self, named_sets):
        for mset in named_sets.values():
            assert critical_efficiency(HALF_PI, mset) == pytest.approx(lhs_bound(mset).c_n, abs=1e-10)

    def test_continuum_boundary(self):
        assert critical_efficiency(HALF_PI, continuum_set()) == 0.5

    def test_closed_forms_on_grid(self, named_sets):
        grid = np.linspace(0.02, HALF_PI, 50)
        for t in grid:
            assert critical_efficiency(t, named_sets["square"]) == pytest.approx(eta2(t), abs=1e-10)
            assert critical_efficiency(t, named_sets["octahedron"]) == pytest.approx(eta3(t), abs=1e-10)

    @pytest.mark.parametrize("t", [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5])
    def test_closed_forms_listed_points(self, t, named_sets):
        assert critical_efficiency(t, named_sets["square"]) == pytest.approx(eta2(t), abs=1e-12)
        assert critical_efficiency(t, named_sets["octahedron"]) == pytest.approx(eta3(t), abs=1e-12)

    def test_dual_forms(self, named_sets):
        worst = 0.0
        for mset in named_sets.values():
            for t in FORM_GRID:
                prob, pauli = efficiency_forms(TwoQubitState(t), mset)
                worst = max(worst, abs(prob - pauli), abs(pauli - critical_efficiency(t, mset)))
        assert worst < 1e-12

    def test_numerator_identity(self, named_sets):
        for mset in named_sets.values():
            c = lhs_bound(mset).c_n
            for t in (0.2, 0.9, 1.4):
                rho = build_state(TwoQubitState(t))
                mean = np.mean([local_expectation(rho, "B", b) for b in mset.directions])
                assert mean == pytest.approx(-c * math.cos(t), abs=1e-12)

    def test_stable_at_small_theta(self, named_sets):
        # eta2 rewritten without cancellation: 1 - cos = 2 sin^2(t/2), sqrt(1 + s^2) - c = 2 s^2 / (sqrt(1 + s^2) + c)
        for t in (1e-8, 1e-6, 1e-4, 1e-2):
            s, c = math.sin(t), math.cos(t)
            stable = math.sin(t / 2) ** 2 * (math.sqrt(1 + s * s) + c) / (s * s)
            assert critical_efficiency(t, named_sets["square"]) == pytest.approx(stable, rel=1e-13)

    def test_domain(self, octahedron):
        for bad in (0.0, -0.1, 1.6, math.nan):
            with pytest.raises(DomainError):
                critical_efficiency(bad, octahedron)

    def test_raw_matrix_needs_settings(self, octahedron):
        with pytest.raises(DomainError):
            efficiency_forms(build_state(TwoQubitState(1.0)), octahedron)


class TestContinuum:
    def test_quarter_pi(self):
        closed = eta_infinity(math.pi / 4)
        assert closed == pytest.approx(0.31971107660899, abs=1e-12)
        assert eta_infinity_quadrature(math.pi / 4) == pytest.approx(closed, abs=1e-8)

    def test_quadrature_grid(self):
        for t in np.linspace(0.05, 1.5, 30):
            assert eta_infinity_quadrature(t) == pytest.approx(eta_infinity(t), abs=1e-8)

    def test_limits(self):
        assert eta_infinity(HALF_PI - 1e-7) == pytest.approx(0.5, abs=1e-6)
        assert eta_infinity(1e-8) < 0.06
        assert eta_infinity(1e-300) < 0.002

    def test_hemisphere_average(self):
        assert hemisphere_average(lambda u: u) == pytest.approx(0.5, abs=1e-15)
        assert hemisphere_average(lambda u: u**2) == pytest.approx(1 / 3, abs=1e-14)

    def test_domain(self):
        for bad in (0.0, HALF_PI):
            with pytest.raises(DomainError):
                eta_infinity(bad)


class TestZeroEntanglement:
    @pytest.mark.parametrize("label,value", [("square", 0.5), ("octahedron", 1 / 3),
                                             ("custom4", (1 + SQRT13) / (5 + 3 * SQRT13))])
    def test_exact_values(self, label, value, named_sets):
        assert limit_zero_entanglement(named_sets[label]) == pytest.approx(value, abs=1e-14)

    @pytest.mark.parametrize("label,value", [("custom4", 0.291), ("custom5", 0.268), ("icosahedron", 0.266)])
    def test_rounded_values(self, label, value, named_sets):
        assert abs(limit_zero_entanglement(named_sets[label]) - value) < 5e-4

    def test_matches_small_theta(self, named_sets):
        for mset in named_sets.values():
            assert abs(limit_zero_entanglement(mset) - critical_efficiency(1e-4, mset)) < 1e-3

    def test_continuum(self):
        assert limit_zero_entanglement(continuum_set()) == 0.0

    def test_equator_diverges(self):
        # pole plus three equatorial directions: the sum is +z but three secants blow up
        ring = [BlochVector.from_angles(HALF_PI, 2 * math.pi * j / 3) for j in range(3)]
        mset = MeasurementSet(SetLabel.USER, (BlochVector(0, 0, 1), *ring), aligned=True)
        with pytest.raises(DomainError):
            limit_zero_entanglement(mset)


class TestCurves:
    def test_default_grid(self):
        g = default_theta_grid()
        assert len(g) == 200 and g[0] == 1e-3 and g[-1] == HALF_PI

    def test_icosahedron_endpoint(self, icosahedron):
        curve = efficiency_curve(icosahedron)
        assert curve.etas[-1] == pytest.approx((1 + math.sqrt(5)) / 6, abs=1e-9)
        assert curve.samples()[0][0] == 1e-3

    def test_square_small_theta(self, named_sets):
        assert efficiency_curve(named_sets["square"]).etas[0] == pytest.approx(0.5, abs=1e-3)

    def test_monotone(self, named_sets):
        for mset in list(named_sets.values()) + [continuum_set()]:
            etas = efficiency_curve(mset).etas
            assert np.all(np.diff(etas) >= -1e-12)

    def test_ordering(self, named_sets):
        c = {l: efficiency_curve(m).etas for l, m in named_sets.items()}
        inf = efficiency_curve(continuum_set()).etas
        chain = [c["square"], c["octahedron"], c["custom4"], c["icosahedron"], inf]
        for hi, lo in zip(chain, chain[1:]):
            assert np.all(hi >= lo)
        assert np.all(c["custom5"] >= c["icosahedron"])

    def test_unordered_grid(self, octahedron):
        with pytest.raises(DomainError):
            efficiency_curve(octahedron, [1.0, 0.5])


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, HALF_PI), st.sampled_from([l.value for l in NAMED_SETS]))
def test_forms_property(theta, label):
    mset = named_set(label)
    prob, pauli = efficiency_forms(TwoQubitState(theta), mset)
    assert prob == pytest.approx(pauli, abs=1e-12)
    assert pauli == pytest.approx(critical_efficiency(theta, mset), abs=1e-12)
