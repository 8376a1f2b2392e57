"""Bob's measurement direction sets.

Platonic sets keep one vertex from each antipodal pair.  The representative
is the one with z > 0, falling back to y > 0 and then x > 0 on ties.  The
custom four- and five-direction sets are aligned by construction.  Every
other set has to go through :func:`align_set` before it can be used in
efficiency calculations.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .errors import AlignmentError, DomainError
from .qubit import BlochVector

log = logging.getLogger(__name__)

GOLDEN = (1 + math.sqrt(5)) / 2
COS_BETA0 = (math.sqrt(13) - 1) / 6
DUPLICATE_TOL = 1e-9
ALIGN_TOL = 1e-9


class SetLabel(str, enum.Enum):
    SQUARE = "square"
    OCTAHEDRON = "octahedron"
    CUSTOM4 = "custom4"
    CUSTOM5 = "custom5"
    ICOSAHEDRON = "icosahedron"
    DODECAHEDRON = "dodecahedron"
    CUBE4 = "cube4"
    CONTINUUM = "continuum"
    USER = "user"


PLATONIC = (SetLabel.SQUARE, SetLabel.OCTAHEDRON, SetLabel.ICOSAHEDRON, SetLabel.DODECAHEDRON, SetLabel.CUBE4)
# the sets whose C_n and limits are quoted, in order of n
NAMED_SETS = (
    SetLabel.SQUARE,
    SetLabel.OCTAHEDRON,
    SetLabel.CUSTOM4,
    SetLabel.CUSTOM5,
    SetLabel.ICOSAHEDRON,
    SetLabel.DODECAHEDRON,
)


@dataclass(frozen=True)
class MeasurementSet:
    label: SetLabel
    directions: tuple[BlochVector, ...]
    aligned: bool = False

    def __post_init__(self):
        object.__setattr__(self, "label", SetLabel(self.label))
        object.__setattr__(self, "directions", tuple(self.directions))
        if self.is_continuum:
            if self.directions:
                raise DomainError("the continuum set carries no explicit directions")
            return
        if not self.directions:
            raise DomainError("measurement set is empty")
        b = self.as_array()
        gram = b @ b.T
        off = np.abs(gram[~np.eye(len(b), dtype=bool)])
        if off.size and np.max(off) > 1 - DUPLICATE_TOL:
            raise DomainError("measurement set contains equal or antipodal directions")
        if self.aligned:
            s = b.sum(axis=0)
            norm = np.linalg.norm(s)
            if norm == 0 or np.hypot(s[0], s[1]) > ALIGN_TOL * max(norm, 1.0) or s[2] <= 0:
                raise AlignmentError("set marked aligned but its direction sum is not along +z")

    @property
    def is_continuum(self) -> bool:
        return self.label is SetLabel.CONTINUUM

    @property
    def n(self) -> float:
        """Number of settings; ``math.inf`` for the continuum."""
        return math.inf if self.is_continuum else len(self.directions)

    def as_array(self) -> np.ndarray:
        return np.array([d.as_array() for d in self.directions]).reshape(-1, 3)

    def polar_angles(self) -> np.ndarray:
        return np.array([d.polar for d in self.directions])

    def azimuths(self) -> np.ndarray:
        return np.array([d.azimuth for d in self.directions])


def _representative(v: np.ndarray) -> np.ndarray:
    for c in (v[2], v[1], v[0]):
        if abs(c) > 1e-12:
            return v if c > 0 else -v
    raise DomainError("zero vector has no representative")


def _antipodal_reps(vertices) -> list[np.ndarray]:
    reps: list[np.ndarray] = []
    for v in vertices:
        v = np.asarray(v, dtype=float)
        r = _representative(v / np.linalg.norm(v))
        if not any(np.allclose(r, q, atol=1e-12) for q in reps):
            reps.append(r)
    return reps


def _cyclic(v):
    x, y, z = v
    return [(x, y, z), (z, x, y), (y, z, x)]


def _platonic_vertices(label: SetLabel) -> list:
    if label is SetLabel.SQUARE:
        return [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    if label is SetLabel.OCTAHEDRON:
        return [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    if label is SetLabel.CUBE4:
        return [(sx, sy, 1) for sx, sy in product((1, -1), repeat=2)]
    if label is SetLabel.ICOSAHEDRON:
        return [p for s1, s2 in product((1, -1), repeat=2) for p in _cyclic((0, s1, s2 * GOLDEN))]
    if label is SetLabel.DODECAHEDRON:
        cube = list(product((1, -1), repeat=3))
        ring = [p for s1, s2 in product((1, -1), repeat=2) for p in _cyclic((0, s1 / GOLDEN, s2 * GOLDEN))]
        return cube + ring
    raise DomainError(f"{label.value!r} is not a platonic set label")


def platonic_set(label) -> MeasurementSet:
    """One direction per antipodal vertex pair of a platonic solid, unaligned."""
    try:
        label = SetLabel(label)
    except ValueError:
        raise DomainError(f"unknown set label {label!r}") from None
    if label not in PLATONIC:
        raise DomainError(f"{label.value!r} is not a platonic set label")
    reps = _antipodal_reps(_platonic_vertices(label))
    return MeasurementSet(label, tuple(BlochVector.from_array(r, normalize=True) for r in reps))


def custom_set(n: int) -> MeasurementSet:
    """The pole plus n-1 directions at polar angle beta_0 with cos(beta_0) = (sqrt(13) - 1)/6."""
    if n not in (4, 5):
        raise DomainError(f"custom sets exist for n=4 and n=5 only, got {n!r}")
    beta0 = math.acos(COS_BETA0)
    dirs = [BlochVector(0.0, 0.0, 1.0)]
    dirs += [BlochVector.from_angles(beta0, 2 * math.pi * j / (n - 1)) for j in range(n - 1)]
    return MeasurementSet(SetLabel.CUSTOM4 if n == 4 else SetLabel.CUSTOM5, tuple(dirs), aligned=True)


def continuum_set() -> MeasurementSet:
    return MeasurementSet(SetLabel.CONTINUUM, (), aligned=True)


def _rotation_to_z(s: np.ndarray) -> np.ndarray:
    """Rodrigues rotation taking the direction of s onto +z."""
    u = s / np.linalg.norm(s)
    z = np.array([0.0, 0.0, 1.0])
    axis = np.cross(u, z)
    sin = np.linalg.norm(axis)
    cos = float(u @ z)
    if sin < 1e-15:
        if cos > 0:
            return np.eye(3)
        return np.diag([1.0, -1.0, -1.0])
    k = axis / sin
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + sin * kx + (1 - cos) * (kx @ kx)


def _rotation_about_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def align_set(mset: MeasurementSet) -> MeasurementSet:
    """Rotate so that the C_n-maximizing signed sum of directions points along +z.

    If the all-plus sign pattern is among the maximizers the result is a rigid
    rotation of the input.  Otherwise the directions carrying a -1 in the
    canonical maximizing pattern are flipped first.  A flipped direction is the
    same observable with its outcomes relabelled.  Afterwards the first
    direction off the z axis is rotated to azimuth 0.
    """
    if mset.is_continuum:
        return mset
    from .lhs import lhs_bound

    bound = lhs_bound(mset)
    n = len(mset.directions)
    plus = (1,) * n
    pattern = plus if plus in bound.maximizing_patterns else bound.maximizing_patterns[0]
    b = mset.as_array() * np.asarray(pattern, dtype=float)[:, None]
    s = b.sum(axis=0)
    if np.linalg.norm(s) < 1e-12:
        raise AlignmentError("maximizing direction sum vanishes; set cannot be aligned")
    rot = _rotation_to_z(s)
    b = b @ rot.T
    for v in b:
        if math.hypot(v[0], v[1]) > 1e-12:
            b = b @ _rotation_about_z(-math.atan2(v[1], v[0])).T
            break
    # renormalize against round-off from the two rotations
    dirs = tuple(BlochVector.from_array(v, normalize=True) for v in b)
    return MeasurementSet(mset.label, dirs, aligned=True)


def named_set(label) -> MeasurementSet:
    """Aligned set for any named label, ready for efficiency calculations."""
    label = SetLabel(label)
    if label is SetLabel.CONTINUUM:
        return continuum_set()
    if label is SetLabel.CUSTOM4:
        return custom_set(4)
    if label is SetLabel.CUSTOM5:
        return custom_set(5)
    if label is SetLabel.USER:
        raise DomainError("user sets are loaded with load_set_file")
    return align_set(platonic_set(label))


def load_set_file(path, align: bool = False) -> MeasurementSet:
    """Read one direction per line as three decimals; '#' starts a comment line."""
    vectors = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise DomainError(f"{path}:{lineno}: expected 3 numbers, got {len(parts)}")
        try:
            v = np.array([float(p) for p in parts])
        except ValueError:
            raise DomainError(f"{path}:{lineno}: could not parse {line!r}") from None
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise DomainError(f"{path}:{lineno}: zero vector")
        if abs(norm - 1) > 1e-6:
            log.warning("%s:%d: direction has norm %.9g, normalizing", path, lineno, norm)
        vectors.append(BlochVector.from_array(v / norm, normalize=True))
    mset = MeasurementSet(SetLabel.USER, tuple(vectors))
    return align_set(mset) if align else mset
