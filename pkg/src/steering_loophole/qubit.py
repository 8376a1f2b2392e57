"""Small exact linear algebra for one and two qubits.

Two-qubit matrices use the basis order |00>, |01>, |10>, |11>, with Alice's
qubit first.  Everything here is deliberately brute force: 4x4 traces and
partial traces, so that the closed forms elsewhere have something independent
to be checked against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NormalizationError

UNIT_TOL = 1e-12
HERMITIAN_TOL = 1e-10

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class BlochVector:
    """Unit direction on the Bloch sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not abs(norm2 - 1.0) <= UNIT_TOL:
            raise NormalizationError(f"Bloch vector has squared norm {norm2!r}, expected 1")

    @classmethod
    def from_array(cls, v, normalize: bool = False) -> BlochVector:
        v = np.asarray(v, dtype=float).reshape(3)
        if normalize:
            norm = np.linalg.norm(v)
            if norm == 0.0:
                raise NormalizationError("cannot normalize the zero vector")
            v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_angles(cls, polar: float, azimuth: float) -> BlochVector:
        s = math.sin(polar)
        return cls.from_array([s * math.cos(azimuth), s * math.sin(azimuth), math.cos(polar)], normalize=True)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def polar(self) -> float:
        return math.atan2(math.hypot(self.x, self.y), self.z)

    @property
    def azimuth(self) -> float:
        """Azimuth in [0, 2*pi); zero for vectors on the z axis."""
        if math.hypot(self.x, self.y) < 1e-15:
            return 0.0
        return math.atan2(self.y, self.x) % (2 * math.pi)

    def __neg__(self) -> BlochVector:
        return BlochVector(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class QubitKet:
    amplitude0: complex
    amplitude1: complex

    def __post_init__(self):
        norm2 = abs(self.amplitude0) ** 2 + abs(self.amplitude1) ** 2
        if not abs(norm2 - 1.0) <= UNIT_TOL:
            raise NormalizationError(f"ket has squared norm {norm2!r}, expected 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.amplitude0, self.amplitude1], dtype=complex)

    def projector(self) -> np.ndarray:
        v = self.as_array()
        return np.outer(v, v.conj())

    def bloch(self) -> BlochVector:
        """Bloch vector with components <ket|sigma_i|ket>."""
        v = self.as_array()
        comps = [float(np.real(v.conj() @ p @ v)) for p in PAULIS]
        return BlochVector.from_array(comps, normalize=True)


class NoiseKind(str, enum.Enum):
    NONE = "none"
    COLORED = "colored"
    WHITE = "white"


@dataclass(frozen=True)
class TwoQubitState:
    """The state cos(theta/2)|01> - sin(theta/2)|10>, optionally mixed with noise.

    ``theta`` runs from 0 (product state) to pi/2 (singlet).  ``epsilon`` is
    the weight of the noise component; ``noise_kind=NONE`` forces the pure state.
    """

    theta: float
    noise_kind: NoiseKind = NoiseKind.NONE
    epsilon: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2 + 1e-12):
            raise DomainError(f"theta={self.theta!r} outside [0, pi/2]")
        if not (0.0 <= self.epsilon < 1.0):
            raise DomainError(f"epsilon={self.epsilon!r} outside [0, 1)")
        object.__setattr__(self, "noise_kind", NoiseKind(self.noise_kind))
        if self.noise_kind is NoiseKind.NONE and self.epsilon != 0.0:
            raise DomainError("epsilon must be 0 when noise_kind is 'none'")

    @property
    def is_maximally_entangled(self) -> bool:
        return self.noise_kind is NoiseKind.NONE and abs(self.theta - math.pi / 2) < 1e-12


def pauli_operator(v) -> np.ndarray:
    """v . sigma for any real 3-vector (BlochVector or array)."""
    if isinstance(v, BlochVector):
        v = v.as_array()
    v = np.asarray(v, dtype=float)
    return v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z


def bloch_to_projector(v: BlochVector) -> np.ndarray:
    """Projector onto the +1 eigenstate of v . sigma, i.e. (1 + v . sigma)/2."""
    if not isinstance(v, BlochVector):
        v = BlochVector.from_array(v)
    return 0.5 * (IDENTITY2 + pauli_operator(v))


def _check_angle(name: str, value: float, upper: float) -> None:
    if not (-1e-12 <= value <= upper + 1e-12):
        raise DomainError(f"{name}={value!r} outside [0, {upper}]")


def alice_ket(alpha: float, phi: float) -> QubitKet:
    """sin(alpha/2)|0> - e^{i phi} cos(alpha/2)|1>."""
    _check_angle("alpha", alpha, math.pi)
    _check_angle("phi", phi, 2 * math.pi)
    return QubitKet(complex(math.sin(alpha / 2)), -np.exp(1j * phi) * math.cos(alpha / 2))


def bob_ket(beta: float, phi: float) -> QubitKet:
    """cos(beta/2)|0> + e^{i phi} sin(beta/2)|1>."""
    _check_angle("beta", beta, math.pi)
    _check_angle("phi", phi, 2 * math.pi)
    return QubitKet(complex(math.cos(beta / 2)), np.exp(1j * phi) * math.sin(beta / 2))


def nmes_ket(theta: float) -> np.ndarray:
    psi = np.zeros(4, dtype=complex)
    psi[1] = math.cos(theta / 2)
    psi[2] = -math.sin(theta / 2)
    return psi


def colored_noise_matrix(theta: float) -> np.ndarray:
    return np.diag([0.0, math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2, 0.0]).astype(complex)


def build_state(s: TwoQubitState) -> np.ndarray:
    psi = nmes_ket(s.theta)
    pure = np.outer(psi, psi.conj())
    if s.noise_kind is NoiseKind.NONE:
        return pure
    if s.noise_kind is NoiseKind.COLORED:
        noise = colored_noise_matrix(s.theta)
    else:
        noise = np.eye(4, dtype=complex) / 4
    return (1 - s.epsilon) * pure + s.epsilon * noise


def check_density_matrix(rho: np.ndarray) -> None:
    rho = np.asarray(rho)
    if not np.allclose(rho, rho.conj().T, atol=UNIT_TOL, rtol=0):
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > UNIT_TOL:
        raise DomainError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise DomainError("density matrix has a negative eigenvalue")


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduced 2x2 state of side 'A' or 'B'."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise DomainError(f"side must be 'A' or 'B', got {keep!r}")


def correlation(rho: np.ndarray, a, b) -> float:
    """Tr[(a . sigma  x  b . sigma) rho]."""
    op = np.kron(pauli_operator(a), pauli_operator(b))
    return float(np.real(np.trace(op @ rho)))


def local_expectation(rho: np.ndarray, side: str, v) -> float:
    return float(np.real(np.trace(pauli_operator(v) @ partial_trace(rho, side))))


def joint_probability(rho: np.ndarray, proj_a: np.ndarray, proj_b: np.ndarray) -> float:
    return float(np.real(np.trace(np.kron(proj_a, proj_b) @ rho)))


def hermitian2_eigen(m) -> tuple[tuple[float, float], tuple[QubitKet, QubitKet]]:
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix.

    Eigenvalues are returned in descending order with matching unit kets.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return ((0.0, 0.0), (QubitKet(1, 0), QubitKet(0, 1)))
    # eigenvectors from the rescaled matrix so tiny entries do not underflow
    ms = m / scale
    a, d = ms[0, 0].real, ms[1, 1].real
    b = 0.5 * (ms[0, 1] + np.conj(ms[1, 0]))
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(b))
    lam_hi, lam_lo = scale * (mean + radius), scale * (mean - radius)
    if abs(b) < 1e-150:
        # numerically diagonal: order the basis kets by their diagonal entries
        e0, e1 = QubitKet(1, 0), QubitKet(0, 1)
        return ((lam_hi, lam_lo), (e0, e1) if a >= d else (e1, e0))

    half = 0.5 * (a - d)

    def vec(sign):
        # null vectors of (m - lam) with lam - a = -half + sign*radius, lam - d = half + sign*radius
        u = np.array([b, -half + sign * radius])
        w = np.array([half + sign * radius, np.conj(b)])
        v = u if np.linalg.norm(u) >= np.linalg.norm(w) else w
        v = v / np.linalg.norm(v)
        return QubitKet(complex(v[0]), complex(v[1]))

    return ((lam_hi, lam_lo), (vec(1.0), vec(-1.0)))
