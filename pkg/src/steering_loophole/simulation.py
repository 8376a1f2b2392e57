"""Monte Carlo simulation of the finite-sample single-outcome steering test.

Rounds are processed in fixed chunks of ``CHUNK_ROUNDS``.  Chunk ``i`` draws
from ``SeedSequence(seed, spawn_key=(i,))``, so a tally depends only on the
seed and the round count, never on how many workers ran the chunks.  Within
a chunk the per-round process is sampled through its sufficient statistics.
The setting counts are multinomial.  The outcome pairs within a setting are
multinomial.  Alice's erasures and Bob's optional losses are binomial
thinnings.  This is distributionally identical to looping over rounds.

The standard error treats p_joint, p_alice and p_bob within a setting as
independent binomials.  Their correlations are ignored, which overstates the
error bar for these estimators.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError
from .lhs import LHSStrategy, SteeringBound
from .measurements import MeasurementSet
from .qubit import TwoQubitState, bloch_to_projector, build_state, joint_probability
from .steering import AliceSettings

CHUNK_ROUNDS = 1 << 18
DEFAULT_SIGMA = 5.0
WORKERS_ENV = "STEERING_WORKERS"
ERROR_BAR_NOTE = (
    "std_error propagates independent binomial errors per setting; "
    "correlations between joint and marginal counts are ignored"
)


@dataclass(frozen=True)
class ExperimentTally:
    n_joint: np.ndarray
    n_alice: np.ndarray
    n_bob: np.ndarray
    n_rounds: np.ndarray
    rounds: int
    seed: int

    def __post_init__(self):
        for name in ("n_joint", "n_alice", "n_bob", "n_rounds"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.int64))
        if np.any(self.n_joint > np.minimum(self.n_alice, self.n_bob)):
            raise DomainError("joint count exceeds a marginal count")
        if np.any(np.maximum(self.n_alice, self.n_bob) > self.n_rounds):
            raise DomainError("marginal count exceeds the setting's round count")

    @property
    def n(self) -> int:
        return len(self.n_rounds)


@dataclass(frozen=True)
class Verdict:
    s_prime_hat: float
    std_error: float
    c_prime_n: float
    sigmas: float
    steering_claimed: bool


def _worker_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, workers)


def _chunk_sizes(rounds: int) -> list[int]:
    full, rest = divmod(rounds, CHUNK_ROUNDS)
    return [CHUNK_ROUNDS] * full + ([rest] if rest else [])


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_chunks(seed: int, rounds: int, chunk_fn, n: int, workers: int | None) -> ExperimentTally:
    if rounds < 1:
        raise DomainError("rounds must be at least 1")
    if not (0 <= seed < 2**64):
        raise DomainError("seed must be a 64-bit unsigned integer")
    sizes = _chunk_sizes(rounds)
    jobs = [(_chunk_rng(seed, i), m) for i, m in enumerate(sizes)]
    w = _worker_count(workers)
    if w == 1 or len(jobs) == 1:
        parts = [chunk_fn(rng, m) for rng, m in jobs]
    else:
        with ThreadPoolExecutor(max_workers=w) as pool:
            parts = list(pool.map(lambda job: chunk_fn(*job), jobs))
    total = np.zeros((4, n), dtype=np.int64)
    for p in parts:
        total += p
    return ExperimentTally(total[0], total[1], total[2], total[3], rounds, seed)


def _outcome_table(rho: np.ndarray, alice: AliceSettings, mset: MeasurementSet) -> np.ndarray:
    """Per setting, probabilities of (A+,B+), (A+,B-), (A-,B+), (A-,B-)."""
    eye = np.eye(2)
    table = []
    for proj_a, b in zip(alice.projectors(), mset.directions):
        proj_b = bloch_to_projector(b)
        probs = [
            joint_probability(rho, pa, pb)
            for pa in (proj_a, eye - proj_a)
            for pb in (proj_b, eye - proj_b)
        ]
        probs = np.clip(probs, 0.0, None)
        table.append(probs / probs.sum())
    return np.array(table)


def simulate_quantum(
    state: TwoQubitState,
    alice: AliceSettings,
    mset: MeasurementSet,
    eta: float,
    rounds: int,
    seed: int = 0,
    bob_eta: float = 1.0,
    workers: int | None = None,
) -> ExperimentTally:
    """Honest source: quantum outcomes, Alice's +1 erased with probability 1 - eta.

    ``bob_eta < 1`` also drops Bob's events at random.  Those rounds are
    discarded entirely, which mirrors postselection on his trusted detector.
    """
    if mset.is_continuum:
        raise DomainError("cannot simulate the continuum set")
    if len(alice) != len(mset.directions):
        raise DomainError("Alice settings do not match the measurement set")
    if not (0.0 <= eta <= 1.0) or not (0.0 <= bob_eta <= 1.0):
        raise DomainError("efficiencies must lie in [0, 1]")
    n = len(mset.directions)
    table = _outcome_table(build_state(state), alice, mset)

    def chunk(rng, m):
        per_setting = rng.multinomial(m, np.full(n, 1.0 / n))
        cells = np.array([rng.multinomial(per_setting[k], table[k]) for k in range(n)])  # (n, 4)
        if bob_eta < 1.0:
            cells = rng.binomial(cells, bob_eta)
        kept_pp = rng.binomial(cells[:, 0], eta)
        kept_pm = rng.binomial(cells[:, 1], eta)
        out = np.empty((4, n), dtype=np.int64)
        out[0] = kept_pp
        out[1] = kept_pp + kept_pm
        out[2] = cells[:, 0] + cells[:, 2]
        out[3] = cells.sum(axis=1)
        return out

    return _run_chunks(seed, rounds, chunk, n, workers)


def simulate_lhs(
    strategy: LHSStrategy,
    mset: MeasurementSet,
    rounds: int,
    seed: int = 0,
    bob_eta: float = 1.0,
    workers: int | None = None,
) -> ExperimentTally:
    """Adversarial source: lambda drawn per round, Alice answers A_k(lambda), Bob measures rho_lambda."""
    if mset.is_continuum:
        raise DomainError("cannot simulate the continuum set")
    n = len(mset.directions)
    if strategy.n != n:
        raise DomainError("strategy length does not match the measurement set")
    p = np.asarray(strategy.probabilities)
    alice_plus = np.asarray(strategy.responses).T == 1  # (k, lambda)
    bob_plus = np.array(
        [[float(np.real(np.vdot(st.as_array(), bloch_to_projector(b) @ st.as_array()))) for st in strategy.states]
         for b in mset.directions]
    )
    bob_plus = np.clip(bob_plus, 0.0, 1.0)

    def chunk(rng, m):
        per_setting = rng.multinomial(m, np.full(n, 1.0 / n))
        lam = rng.multinomial(per_setting, p)  # (k, lambda)
        if bob_eta < 1.0:
            lam = rng.binomial(lam, bob_eta)
        bplus = rng.binomial(lam, bob_plus)
        out = np.empty((4, n), dtype=np.int64)
        out[0] = np.where(alice_plus, bplus, 0).sum(axis=1)
        out[1] = np.where(alice_plus, lam, 0).sum(axis=1)
        out[2] = bplus.sum(axis=1)
        out[3] = lam.sum(axis=1)
        return out

    return _run_chunks(seed, rounds, chunk, n, workers)


def estimate(tally: ExperimentTally) -> tuple[float, float]:
    """Plug-in estimate of S'_n and its standard error."""
    if np.any(tally.n_rounds == 0):
        raise InsufficientDataError("a setting has no detected rounds")
    N = tally.n_rounds.astype(float)
    pj, pa, pb = tally.n_joint / N, tally.n_alice / N, tally.n_bob / N
    s_hat = float(np.mean(2 * pj - pa - pb))
    var = (4 * pj * (1 - pj) + pa * (1 - pa) + pb * (1 - pb)) / N
    se = float(math.sqrt(var.sum()) / tally.n)
    return s_hat, se


def verdict(tally: ExperimentTally, bound: SteeringBound, sigma_threshold: float = DEFAULT_SIGMA) -> Verdict:
    s_hat, se = estimate(tally)
    diff = s_hat - bound.c_prime_n
    if se > 0:
        sigmas = diff / se
    else:
        sigmas = 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return Verdict(s_hat, se, bound.c_prime_n, sigmas, bool(sigmas > sigma_threshold))


def tally_to_dict(tally: ExperimentTally, v: Verdict) -> dict:
    return {
        "n": tally.n,
        "seed": tally.seed,
        "rounds": tally.rounds,
        "per_setting": [
            {
                "k": k,
                "n_joint": int(tally.n_joint[k]),
                "n_alice": int(tally.n_alice[k]),
                "n_bob": int(tally.n_bob[k]),
                "n_rounds": int(tally.n_rounds[k]),
            }
            for k in range(tally.n)
        ],
        "s_prime_hat": v.s_prime_hat,
        "std_error": v.std_error,
        "c_prime_n": v.c_prime_n,
        "sigmas": v.sigmas,
        "steering_claimed": v.steering_claimed,
    }


def tally_from_dict(d: dict) -> ExperimentTally:
    rows = sorted(d["per_setting"], key=lambda r: r["k"])
    return ExperimentTally(
        [r["n_joint"] for r in rows],
        [r["n_alice"] for r in rows],
        [r["n_bob"] for r in rows],
        [r["n_rounds"] for r in rows],
        int(d["rounds"]),
        int(d["seed"]),
    )


def tally_to_json(tally: ExperimentTally, v: Verdict, **extra) -> str:
    d = tally_to_dict(tally, v)
    d.update(extra)
    return json.dumps(d, indent=2)
