"""Local-hidden-state bound of the n-setting steering inequality.

C_n is the largest value of (1/n) lambda_max(sum_k s_k b_k . sigma) over
deterministic responses s in {-1, +1}^n.  The top eigenvalue of v . sigma is
|v|, so the search reduces to maximizing |sum_k s_k b_k| over all sign
patterns.  The search is exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .measurements import MeasurementSet
from .qubit import QubitKet, hermitian2_eigen, pauli_operator

MAX_ENUMERATION_N = 20
TIE_TOL = 1e-12
_CHUNK_BITS = 16

C_CONTINUUM = 0.5


@dataclass(frozen=True)
class SteeringBound:
    """C_n, the single-outcome bound C'_n = (C_n - 1)/2, and the patterns attaining C_n.

    Patterns are listed with first entry +1 (the global flip s -> -s gives
    the same norm) in lexicographic order.  The first pattern is the
    canonical one.
    """

    c_n: float
    maximizing_patterns: tuple[tuple[int, ...], ...]
    saturating_states: tuple[QubitKet, ...]

    @property
    def c_prime_n(self) -> float:
        return (self.c_n - 1) / 2

    @property
    def canonical_pattern(self) -> tuple[int, ...]:
        return self.maximizing_patterns[0]


@dataclass(frozen=True)
class LHSStrategy:
    """Mixture of deterministic Alice responses paired with Bob hidden states."""

    probabilities: tuple[float, ...]
    responses: tuple[tuple[int, ...], ...]
    states: tuple[QubitKet, ...]

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
            raise DomainError("LHS probabilities must be nonnegative and sum to 1")
        if not (len(self.probabilities) == len(self.responses) == len(self.states)):
            raise DomainError("LHS strategy fields have mismatched lengths")
        lengths = {len(r) for r in self.responses}
        if len(lengths) != 1:
            raise DomainError("all response vectors must have the same length")
        for r in self.responses:
            if any(a not in (-1, 1) for a in r):
                raise DomainError("responses must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.responses[0])


def sign_patterns(n: int, first_positive: bool = True) -> np.ndarray:
    """All sign vectors of length n as rows, in lexicographic order (-1 < +1)."""
    free = n - 1 if first_positive else n
    idx = np.arange(2**free, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(free - 1, -1, -1)) & 1
    pats = (2 * bits - 1).astype(np.int8)
    if first_positive:
        pats = np.hstack([np.ones((len(idx), 1), dtype=np.int8), pats])
    return pats


def _chunked_norms(b: np.ndarray):
    """Yield (patterns, |sum_k s_k b_k|) over all patterns with s_1 = +1."""
    n = len(b)
    free = n - 1
    if free <= _CHUNK_BITS:
        pats = sign_patterns(n)
        yield pats, np.linalg.norm(pats @ b, axis=1)
        return
    tail = sign_patterns(_CHUNK_BITS, first_positive=False)
    for head in sign_patterns(n - _CHUNK_BITS):
        pats = np.hstack([np.broadcast_to(head, (len(tail), len(head))), tail])
        yield pats, np.linalg.norm(pats @ b, axis=1)


def lhs_bound(mset: MeasurementSet) -> SteeringBound:
    if mset.is_continuum:
        return SteeringBound(C_CONTINUUM, (), ())
    n = len(mset.directions)
    if n == 0:
        raise DomainError("empty measurement set")
    if n > MAX_ENUMERATION_N:
        raise CapacityError(f"exhaustive enumeration supports n <= {MAX_ENUMERATION_N}, got {n}")
    b = mset.as_array()
    candidates, chunk_tops = [], []
    for pats, norms in _chunked_norms(b):
        scaled = norms / n
        top = float(scaled.max())
        chunk_tops.append(top)
        candidates.append((pats[scaled >= top - TIE_TOL], scaled[scaled >= top - TIE_TOL]))
    best = max(chunk_tops)
    winners = [p for pats, vals in candidates for p, v in zip(pats, vals) if v >= best - TIE_TOL]
    patterns = tuple(tuple(int(s) for s in w) for w in winners)
    states = tuple(top_eigenvector(b, w) for w in winners)
    return SteeringBound(best, patterns, states)


def top_eigenvector(b: np.ndarray, pattern) -> QubitKet:
    op = pauli_operator(np.asarray(pattern, dtype=float) @ b) / len(b)
    _, (top, _) = hermitian2_eigen(op)
    return top


def saturating_strategy(mset: MeasurementSet, bound: SteeringBound | None = None) -> LHSStrategy:
    """Uniform mixture over the maximizing patterns, each with its top eigenvector as hidden state."""
    if bound is None:
        bound = lhs_bound(mset)
    if mset.is_continuum:
        raise DomainError("no finite LHS strategy for the continuum set")
    k = len(bound.maximizing_patterns)
    return LHSStrategy((1.0 / k,) * k, bound.maximizing_patterns, bound.saturating_states)


def random_strategy(rng: np.random.Generator, n: int, max_components: int = 4) -> LHSStrategy:
    """Random LHS model: a few deterministic responses with Haar-random pure hidden states."""
    m = int(rng.integers(1, max_components + 1))
    p = rng.dirichlet(np.ones(m))
    responses = tuple(tuple(int(s) for s in rng.choice((-1, 1), size=n)) for _ in range(m))
    states = []
    for _ in range(m):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z = z / np.linalg.norm(z)
        states.append(QubitKet(complex(z[0]), complex(z[1])))
    return LHSStrategy(tuple(float(x) for x in p), responses, tuple(states))
