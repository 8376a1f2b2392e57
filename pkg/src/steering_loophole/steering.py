"""Exact steering parameters from quantum states or LHS strategies.

S_n averages the two-outcome correlations <A_k x b_k.sigma>.  S'_n keeps only
+1 events:

    S'_n = (1/n) sum_k [2 p(A_k, Pi_k) - p(A_k) - p(Pi_k)]

Alice's inefficiency enters through p(A_k, Pi_k) and p(A_k), which both pick
up a factor eta.  A lost event counts as a -1 outcome.  Bob's device is
trusted, so only his detected rounds are kept and his efficiency never
appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lhs import LHSStrategy
from .measurements import MeasurementSet
from .qubit import (
    TwoQubitState,
    alice_ket,
    bloch_to_projector,
    build_state,
    joint_probability,
    partial_trace,
    pauli_operator,
)


@dataclass(frozen=True)
class AliceSettings:
    """Alice's projector angles (alpha_k, phi_k), one pair per setting."""

    alphas: tuple[float, ...]
    phis: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
        if len(self.alphas) != len(self.phis):
            raise DomainError("alphas and phis must have equal length")
        for a in self.alphas:
            if not (-1e-12 <= a <= math.pi + 1e-12):
                raise DomainError(f"alpha={a!r} outside [0, pi]")
        for p in self.phis:
            if not (-1e-12 <= p <= 2 * math.pi + 1e-12):
                raise DomainError(f"phi={p!r} outside [0, 2 pi]")

    def __len__(self):
        return len(self.alphas)

    def projectors(self) -> list[np.ndarray]:
        return [alice_ket(a, p).projector() for a, p in zip(self.alphas, self.phis)]

    def bloch_vectors(self) -> np.ndarray:
        return np.array([alice_ket(a, p).bloch().as_array() for a, p in zip(self.alphas, self.phis)])


@dataclass(frozen=True)
class ScenarioProbabilities:
    p_joint: np.ndarray
    p_alice: np.ndarray
    p_bob: np.ndarray

    def __post_init__(self):
        for name in ("p_joint", "p_alice", "p_bob"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(self.p_joint > np.minimum(self.p_alice, self.p_bob) + 1e-12):
            raise DomainError("joint probability exceeds a marginal")

    @property
    def n(self) -> int:
        return len(self.p_joint)


def _check_finite(mset: MeasurementSet, alice: AliceSettings | None = None) -> None:
    if mset.is_continuum:
        raise DomainError("finite sums are not defined for the continuum set")
    if alice is not None and len(alice) != len(mset.directions):
        raise DomainError(f"{len(alice)} Alice settings for {len(mset.directions)} Bob directions")


def _as_matrix(state) -> np.ndarray:
    return build_state(state) if isinstance(state, TwoQubitState) else np.asarray(state, dtype=complex)


def exact_probabilities(state, alice: AliceSettings, mset: MeasurementSet, eta: float = 1.0) -> ScenarioProbabilities:
    """Single-outcome probabilities for a quantum state with Alice efficiency ``eta``.

    ``state`` may be a :class:`TwoQubitState` or a 4x4 density matrix.
    """
    if not (0.0 <= eta <= 1.0):
        raise DomainError(f"eta={eta!r} outside [0, 1]")
    _check_finite(mset, alice)
    rho = _as_matrix(state)
    rho_a, rho_b = partial_trace(rho, "A"), partial_trace(rho, "B")
    joint, pa, pb = [], [], []
    for proj_a, b in zip(alice.projectors(), mset.directions):
        proj_b = bloch_to_projector(b)
        joint.append(eta * joint_probability(rho, proj_a, proj_b))
        pa.append(eta * float(np.real(np.trace(proj_a @ rho_a))))
        pb.append(float(np.real(np.trace(proj_b @ rho_b))))
    return ScenarioProbabilities(np.array(joint), np.array(pa), np.array(pb))


def lhs_probabilities(strategy: LHSStrategy, mset: MeasurementSet) -> ScenarioProbabilities:
    """Single-outcome probabilities produced by an LHS model."""
    _check_finite(mset)
    if strategy.n != len(mset.directions):
        raise DomainError("strategy length does not match the measurement set")
    p = np.asarray(strategy.probabilities)
    alice_plus = (np.asarray(strategy.responses) == 1).astype(float)  # (lambda, k)
    bob_plus = np.array(
        [[float(np.real(np.vdot(st.as_array(), bloch_to_projector(b) @ st.as_array()))) for b in mset.directions]
         for st in strategy.states]
    )
    return ScenarioProbabilities(p @ (alice_plus * bob_plus), p @ alice_plus, p @ bob_plus)


def s_prime(probs: ScenarioProbabilities) -> float:
    return float(np.mean(2 * probs.p_joint - probs.p_alice - probs.p_bob))


def s_standard(state, alice: AliceSettings, mset: MeasurementSet) -> float:
    """(1/n) sum_k <a_k.sigma x b_k.sigma> for a quantum state at unit efficiency."""
    _check_finite(mset, alice)
    rho = _as_matrix(state)
    total = 0.0
    for a, b in zip(alice.bloch_vectors(), mset.directions):
        total += float(np.real(np.trace(np.kron(pauli_operator(a), pauli_operator(b)) @ rho)))
    return total / len(mset.directions)


def s_standard_lhs(strategy: LHSStrategy, mset: MeasurementSet) -> float:
    """sum_lambda p_lambda (1/n) sum_k A_k(lambda) <b_k.sigma>_{rho_lambda}."""
    _check_finite(mset)
    total = 0.0
    for p, resp, st in zip(strategy.probabilities, strategy.responses, strategy.states):
        v = st.as_array()
        for a, b in zip(resp, mset.directions):
            total += p * a * float(np.real(np.vdot(v, pauli_operator(b) @ v)))
    return total / len(mset.directions)
