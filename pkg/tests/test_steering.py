import math

import numpy as np
import pytest

from steering_loophole.efficiency import critical_efficiency, optimal_alice
from steering_loophole.errors import DomainError
from steering_loophole.lhs import lhs_bound
from steering_loophole.measurements import continuum_set, named_set
from steering_loophole.qubit import NoiseKind, TwoQubitState, build_state
from steering_loophole.steering import (
    AliceSettings,
    ScenarioProbabilities,
    exact_probabilities,
    s_prime,
    s_standard,
)


def antipodal_alice(mset):
    """Alice settings whose Bloch vectors are -b_k (the ket's Bloch vector points opposite its polar angle)."""
    return AliceSettings(tuple(mset.polar_angles()), tuple(mset.azimuths()))


def random_rho(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_alice(rng, n):
    return AliceSettings(tuple(rng.uniform(0, math.pi, n)), tuple(rng.uniform(0, 2 * math.pi, n)))


class TestExactProbabilities:
    def test_singlet_antipodal(self, octahedron):
        singlet = TwoQubitState(math.pi / 2)
        alice = antipodal_alice(octahedron)
        p = exact_probabilities(singlet, alice, octahedron, 1.0)
        assert np.allclose(p.p_joint, 0.5, atol=1e-12)
        assert np.allclose(p.p_alice, 0.5, atol=1e-12)
        assert np.allclose(p.p_bob, 0.5, atol=1e-12)

    def test_eta_zero(self, icosahedron):
        state = TwoQubitState(0.7)
        alice = optimal_alice(0.7, icosahedron)
        p1 = exact_probabilities(state, alice, icosahedron, 1.0)
        p0 = exact_probabilities(state, alice, icosahedron, 0.0)
        assert np.all(p0.p_joint == 0) and np.all(p0.p_alice == 0)
        assert np.allclose(p0.p_bob, p1.p_bob, atol=0)

    def test_product_state_bob_zero(self):
        mset = named_set("custom4")  # first direction is +z
        p = exact_probabilities(TwoQubitState(0.0), AliceSettings((0.0,) * 4, (0.0,) * 4), mset)
        assert p.p_bob[0] == pytest.approx(0.0, abs=1e-15)

    def test_no_signaling(self, icosahedron):
        rng = np.random.default_rng(5)
        rho = random_rho(rng)
        ref = exact_probabilities(rho, random_alice(rng, 6), icosahedron).p_bob
        for _ in range(20):
            pb = exact_probabilities(rho, random_alice(rng, 6), icosahedron).p_bob
            assert np.allclose(pb, ref, atol=1e-12)

    def test_eta_range(self, octahedron):
        with pytest.raises(DomainError):
            exact_probabilities(TwoQubitState(1.0), antipodal_alice(octahedron), octahedron, 1.2)

    def test_continuum_rejected(self):
        with pytest.raises(DomainError):
            exact_probabilities(TwoQubitState(1.0), AliceSettings((0.0,), (0.0,)), continuum_set())

    def test_length_mismatch(self, octahedron):
        with pytest.raises(DomainError):
            exact_probabilities(TwoQubitState(1.0), AliceSettings((0.0,), (0.0,)), octahedron)

    def test_probability_invariant(self):
        with pytest.raises(DomainError):
            ScenarioProbabilities([0.6], [0.5], [0.7])


class TestSPrime:
    def test_singlet_zero(self, named_sets):
        for mset in named_sets.values():
            alice = antipodal_alice(mset)
            singlet = TwoQubitState(math.pi / 2)
            assert s_standard(singlet, alice, mset) == pytest.approx(1.0, abs=1e-12)
            assert s_prime(exact_probabilities(singlet, alice, mset)) == pytest.approx(0.0, abs=1e-12)

    def test_arithmetic(self):
        p = ScenarioProbabilities(np.zeros(3), np.zeros(3), np.full(3, 0.5))
        assert s_prime(p) == -0.5

    def test_product_state_below_bound(self, named_sets):
        rng = np.random.default_rng(1)
        for mset in named_sets.values():
            c = lhs_bound(mset).c_n
            for _ in range(20):
                alice = random_alice(rng, len(mset.directions))
                assert s_standard(TwoQubitState(0.0), alice, mset) <= c + 1e-12


def test_affine_bridge():
    rng = np.random.default_rng(8)
    labels = ["square", "octahedron", "custom4", "custom5", "icosahedron", "dodecahedron"]
    sets = {l: named_set(l) for l in labels}
    worst = 0.0
    for i in range(200):
        mset = sets[labels[i % len(labels)]]
        rho = random_rho(rng)
        alice = random_alice(rng, len(mset.directions))
        s = s_standard(rho, alice, mset)
        sp = s_prime(exact_probabilities(rho, alice, mset, 1.0))
        worst = max(worst, abs(sp - (s - 1) / 2))
    assert worst < 1e-12


def test_affine_in_eta(octahedron):
    state = TwoQubitState(0.9, NoiseKind.COLORED, 0.2)
    alice = optimal_alice(0.9, octahedron)
    vals = [s_prime(exact_probabilities(state, alice, octahedron, e)) for e in (0.0, 0.25, 0.5, 0.75, 1.0)]
    diffs = np.diff(vals)
    assert np.all(diffs > 0)
    assert np.allclose(diffs, diffs[0], atol=1e-12)


@pytest.mark.parametrize("label", ["square", "octahedron", "custom4", "custom5", "icosahedron", "dodecahedron"])
def test_threshold_consistency(label):
    mset = named_set(label)
    c_prime = lhs_bound(mset).c_prime_n
    for theta in np.linspace(0.05, math.pi / 2, 12):
        eta_c = critical_efficiency(theta, mset)
        alice = optimal_alice(theta, mset)
        state = TwoQubitState(theta)
        for eta in np.linspace(0.0, 1.0, 41):
            if abs(eta - eta_c) < 1e-9:
                continue
            violated = s_prime(exact_probabilities(state, alice, mset, eta)) > c_prime
            assert violated == (eta > eta_c)


def test_raw_matrix_input(octahedron):
    state = TwoQubitState(1.1, NoiseKind.WHITE, 0.3)
    alice = optimal_alice(1.1, octahedron)
    a = exact_probabilities(state, alice, octahedron, 0.8)
    b = exact_probabilities(build_state(state), alice, octahedron, 0.8)
    assert np.allclose(a.p_joint, b.p_joint) and np.allclose(a.p_bob, b.p_bob)
