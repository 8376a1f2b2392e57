"""EPR-steering with inefficient detectors: LHS bounds, critical efficiencies, simulation."""

__version__ = "0.1.0"

from .efficiency import (
    critical_efficiency,
    efficiency_curve,
    efficiency_forms,
    eta_infinity,
    eta_infinity_quadrature,
    limit_zero_entanglement,
    optimal_alice,
)
from .errors import (
    AlignmentError,
    CapacityError,
    DomainError,
    InsufficientDataError,
    NormalizationError,
    SteeringError,
)
from .lhs import LHSStrategy, SteeringBound, lhs_bound, saturating_strategy
from .measurements import MeasurementSet, SetLabel, align_set, continuum_set, custom_set, load_set_file, named_set, platonic_set
from .noise import crossover_epsilon, eta_colored, eta_white, min_over_theta, noise_curve
from .qubit import BlochVector, NoiseKind, QubitKet, TwoQubitState, build_state
from .simulation import ExperimentTally, Verdict, simulate_lhs, simulate_quantum, verdict
from .steering import AliceSettings, ScenarioProbabilities, exact_probabilities, s_prime, s_standard
