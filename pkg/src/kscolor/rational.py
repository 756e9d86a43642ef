"""Rational directions, rational rotations and totally incompatible perturbations.

Rational unit vectors are primitive Pythagorean quadruples ``(x, y, z)/n``.
Rotations come from integer quaternions, so their matrices are exactly
orthogonal over Q and they carry Q(sqrt2) points to Q(sqrt2) points.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import ExactScalar, ExactVec3
from .geometry import (
    DirectionSet,
    DuplicateDirectionError,
    ProjectivePoint,
    _norm_factor,
    _point_from_ints,
    build_direction_set,
    canonicalize,
    frame_distance,
    min_separation,
)

__all__ = [
    "PythagoreanQuadruple",
    "RationalRotation",
    "PerturbationPlan",
    "PerturbationError",
    "ApproximationError",
    "enumerate_quadruples",
    "rational_frames",
    "make_rotation",
    "rotate_set",
    "perturb_frames",
    "replay_plan",
    "is_totally_incompatible",
    "approximate_direction",
]


@dataclass(frozen=True, order=True)
class PythagoreanQuadruple:
    """``x^2 + y^2 + z^2 == n^2`` with ``gcd(x, y, z) == 1``.

    Field order makes the natural sort ``(n, x, y, z)``.
    """

    n: int
    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError("n must be positive")
        if self.x * self.x + self.y * self.y + self.z * self.z != self.n * self.n:
            raise ValueError(f"{self.x}^2+{self.y}^2+{self.z}^2 != {self.n}^2")
        if math.gcd(math.gcd(self.x, self.y), self.z) != 1:
            raise ValueError("quadruple is not primitive")
        if next(c for c in (self.x, self.y, self.z) if c) < 0:
            raise ValueError("first nonzero coordinate must be positive")

    def point(self) -> ProjectivePoint:
        return _point_from_ints(self.x, self.y, self.z)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.z, self.n)


def enumerate_quadruples(max_n: int) -> list[PythagoreanQuadruple]:
    """Every primitive quadruple with ``n <= max_n``, one per line through 0."""
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    out = []
    for n in range(1, max_n + 1):
        nn = n * n
        for x in range(0, n + 1):
            for y in range(-n, n + 1):
                rest = nn - x * x - y * y
                if rest < 0:
                    continue
                z = math.isqrt(rest)
                if z * z != rest:
                    continue
                for zz in {z, -z}:
                    if math.gcd(math.gcd(x, y), zz) != 1:
                        continue
                    first = next(c for c in (x, y, zz) if c)
                    if first < 0:
                        continue
                    out.append(PythagoreanQuadruple(n, x, y, zz))
    out.sort()
    return out


def rational_frames(max_n: int) -> DirectionSet:
    """All rational directions of height ``<= max_n`` with their frames."""
    quads = enumerate_quadruples(max_n)
    return build_direction_set([q.point() for q in quads], name=f"rational-{max_n}")


@dataclass(frozen=True)
class RationalRotation:
    """Rotation matrix of the integer quaternion ``(w, x, y, z)``."""

    quaternion: tuple[int, int, int, int]
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def scale(self) -> int:
        return sum(c * c for c in self.quaternion)

    @property
    def cos_angle(self) -> Fraction:
        w, x, y, z = self.quaternion
        v2 = x * x + y * y + z * z
        return Fraction(w * w - v2, w * w + v2)

    @property
    def sin_angle(self) -> float:
        """Sine of the rotation angle, taken in ``[0, pi]``."""
        w, x, y, z = self.quaternion
        v2 = x * x + y * y + z * z
        return 2 * abs(w) * math.sqrt(v2) / (w * w + v2)

    def _int_matrix(self) -> list[list[int]]:
        s = self.scale
        return [[int(e * s) for e in row] for row in self.matrix]

    def apply_vec(self, v: ExactVec3) -> ExactVec3:
        m = self.matrix
        c = list(v)
        return ExactVec3(*(sum((c[j] * m[i][j] for j in range(3)), ExactScalar(0)) for i in range(3)))

    def apply(self, p: ProjectivePoint) -> ProjectivePoint:
        # the 1/scale factor is irrelevant projectively
        m = self._int_matrix()
        k = p.key
        rat = (k[0], k[2], k[4])
        irr = (k[1], k[3], k[5])
        out = []
        for i in range(3):
            out.append(ExactScalar(sum(m[i][j] * rat[j] for j in range(3)),
                                   sum(m[i][j] * irr[j] for j in range(3))))
        return canonicalize(ExactVec3(*out))

    def to_json(self) -> list[int]:
        return list(self.quaternion)


def _quaternion_matrix(w: int, x: int, y: int, z: int) -> tuple[tuple[Fraction, ...], ...]:
    s = w * w + x * x + y * y + z * z
    rows = (
        (w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)),
        (2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)),
        (2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z),
    )
    return tuple(tuple(Fraction(e, s) for e in row) for row in rows)


def _det3(m) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def is_exact_rotation(m) -> bool:
    for i in range(3):
        for j in range(3):
            s = sum(m[k][i] * m[k][j] for k in range(3))
            if s != (1 if i == j else 0):
                return False
    return _det3(m) == 1


def make_rotation(q: Sequence[int]) -> RationalRotation:
    w, x, y, z = (int(c) for c in q)
    if not (w or x or y or z):
        raise ValueError("zero quaternion does not define a rotation")
    m = _quaternion_matrix(w, x, y, z)
    if not is_exact_rotation(m):  # pragma: no cover - algebraic identity
        raise AssertionError(f"quaternion {q} produced a non-orthogonal matrix")
    return RationalRotation((w, x, y, z), m)


def rotate_set(ds: DirectionSet, rotation: RationalRotation) -> DirectionSet:
    """Apply one rotation to every point (keeps all orthogonality links)."""
    return build_direction_set([rotation.apply(p) for p in ds.points], name=f"{ds.name}-rotated")


def is_totally_incompatible(ds: DirectionSet) -> bool:
    """True iff no point lies in more than one frame."""
    seen = set()
    for tri in ds.frames:
        for i in tri:
            if i in seen:
                return False
            seen.add(i)
    return True


class PerturbationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PerturbationPlan:
    source: DirectionSet
    rotations: tuple[RationalRotation, ...]
    epsilon: float
    seed: int
    result: DirectionSet
    norm: str = "operator"
    attempts: int = 1

    def frame_distances(self) -> list[float]:
        return [
            frame_distance(self.source.frame(k), self.result.frame(k), self.norm)
            for k in range(len(self.source.frames))
        ]

    def to_json(self) -> dict:
        return {
            "source": self.source.name,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "norm": self.norm,
            "quaternions": [r.to_json() for r in self.rotations],
            "result": self.result.to_dict(),
        }


def _apply_per_frame(ds: DirectionSet, rotations: Sequence[RationalRotation]) -> list[ProjectivePoint]:
    pts = []
    for tri, rot in zip(ds.frames, rotations):
        pts.extend(rot.apply(ds.points[i]) for i in tri)
    return pts


def _draw_rotation(rng: random.Random, epsilon: float, spread: int = 3) -> RationalRotation:
    while True:
        r = (rng.randint(-spread, spread), rng.randint(-spread, spread), rng.randint(-spread, spread))
        if any(r):
            break
    v = math.sqrt(r[0] ** 2 + r[1] ** 2 + r[2] ** 2)
    # sin(angle) = 2Nv/(N^2+v^2) < 2v/N <= epsilon
    n_min = math.ceil(2 * v / epsilon) + 1
    n = n_min + rng.randrange(0, n_min)
    return make_rotation((n, *r))


def perturb_frames(
    ds: DirectionSet,
    epsilon: float,
    seed: int,
    *,
    norm: str = "operator",
    max_retries: int = 200,
    require_incompatible: bool = True,
) -> PerturbationPlan:
    """Rotate each frame of ``ds`` by its own small rational rotation.

    The result keeps every frame exactly orthogonal, moves each frame by less
    than ``epsilon`` (max-min projector distance) and, unless
    ``require_incompatible`` is off, shares no point between two frames.
    """
    if not ds.frames:
        raise ValueError("direction set has no frames to perturb")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    sep = min_separation(ds, norm)
    if not epsilon < sep / 2:
        raise ValueError(
            f"epsilon {epsilon} must be below half the minimum separation {sep:.6g} of {ds.name or 'the set'}"
        )
    # a rotation by angle t moves lines by at most sin t in operator norm
    op_eps = epsilon / _norm_factor(norm)
    rng = random.Random(seed)
    nframes = len(ds.frames)
    for attempt in range(1, max_retries + 1):
        rotations = tuple(_draw_rotation(rng, op_eps) for _ in range(nframes))
        pts = _apply_per_frame(ds, rotations)
        try:
            result = build_direction_set(pts, name=f"{ds.name}~{seed}")
        except DuplicateDirectionError:
            continue
        if require_incompatible and not is_totally_incompatible(result):
            continue
        if result.frames[:nframes] != tuple((3 * k, 3 * k + 1, 3 * k + 2) for k in range(nframes)):
            continue
        plan = PerturbationPlan(ds, rotations, epsilon, seed, result, norm, attempt)
        if all(d < epsilon for d in plan.frame_distances()):
            return plan
    raise PerturbationError(
        f"no admissible perturbation in {max_retries} attempts; "
        "try a larger epsilon or a different seed"
    )


def replay_plan(data: dict, source: DirectionSet) -> PerturbationPlan:
    """Rebuild a plan from its JSON form and the source set it was drawn from."""
    rotations = tuple(make_rotation(q) for q in data["quaternions"])
    if len(rotations) != len(source.frames):
        raise ValueError(
            f"plan has {len(rotations)} rotations but {source.name!r} has {len(source.frames)} frames"
        )
    pts = _apply_per_frame(source, rotations)
    result = build_direction_set(pts, name=f"{source.name}~{data['seed']}")
    return PerturbationPlan(
        source, rotations, data["epsilon"], data["seed"], result, data.get("norm", "operator")
    )


class ApproximationError(LookupError):
    def __init__(self, message: str, best: PythagoreanQuadruple | None, best_distance: float):
        self.best = best
        self.best_distance = best_distance
        super().__init__(message)


def _sin_to(target: tuple[float, float, float], tnorm: float, x: int, y: int, z: int, n: int) -> float:
    tx, ty, tz = target
    cx = ty * z - tz * y
    cy = tz * x - tx * z
    cz = tx * y - ty * x
    return math.sqrt(cx * cx + cy * cy + cz * cz) / (tnorm * n)


def approximate_direction(
    target: Sequence[float], epsilon: float, max_n: int = 2000
) -> PythagoreanQuadruple:
    """Closest rational direction at the smallest height ``n`` within ``epsilon``.

    Raises :class:`ApproximationError` carrying the best quadruple seen when no
    height up to ``max_n`` gets within ``epsilon``.
    """
    t = tuple(float(c) for c in target)
    tnorm = math.sqrt(sum(c * c for c in t))
    if tnorm == 0:
        raise ValueError("target direction must be nonzero")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    best: PythagoreanQuadruple | None = None
    best_d = math.inf
    for n in range(1, max_n + 1):
        nn = n * n
        level_best = None
        level_d = math.inf
        for x in range(0, n + 1):
            for y in range(-n, n + 1):
                rest = nn - x * x - y * y
                if rest < 0:
                    continue
                z = math.isqrt(rest)
                if z * z != rest:
                    continue
                for zz in (z, -z) if z else (0,):
                    if math.gcd(math.gcd(x, y), zz) != 1:
                        continue
                    if next(c for c in (x, y, zz) if c) < 0:
                        continue
                    d = _sin_to(t, tnorm, x, y, zz, n)
                    if d < level_d:
                        level_d = d
                        level_best = (x, y, zz)
        if level_best is not None and level_d < best_d:
            best_d = level_d
            best = PythagoreanQuadruple(n, *level_best)
        if best_d < epsilon:
            return best
    raise ApproximationError(
        f"no rational direction within {epsilon} up to height {max_n}; best {best} at {best_d:.3g}",
        best,
        best_d,
    )
