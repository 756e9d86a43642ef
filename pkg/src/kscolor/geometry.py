"""Projective points, frames and finite direction sets in R^3.

A direction is stored as a primitive integer representative over Z[sqrt2]:
six integers ``(x, x', y, y', z, z')`` standing for
``(x + x'sqrt2, y + y'sqrt2, z + z'sqrt2)``.  Orthogonality and equality are
decided on those integers; only distances are floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .exact import ExactScalar, ExactVec3, format_scalar, parse_scalar

__all__ = [
    "ProjectivePoint",
    "Frame",
    "DirectionSet",
    "DuplicateDirectionError",
    "canonicalize",
    "projector_distance",
    "frame_distance",
    "build_direction_set",
    "sin2_ratio",
    "unit_vectors",
    "NORMS",
    "close_pairs",
    "min_separation",
    "complete_frames",
    "is_orthogonal",
]

NORMS = ("operator", "frobenius")


class DuplicateDirectionError(ValueError):
    def __init__(self, duplicates: list[tuple[int, int, "ProjectivePoint"]]):
        self.duplicates = duplicates
        desc = ", ".join(f"#{i} == #{j} {p}" for i, j, p in duplicates)
        super().__init__(f"duplicate directions after canonicalization: {desc}")


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A line through the origin, held in canonical form.

    ``key`` is the primitive integer representative described in the module
    docstring; the first nonzero coordinate is a positive integer.
    """

    key: tuple[int, int, int, int, int, int]

    @property
    def vec(self) -> ExactVec3:
        k = self.key
        return ExactVec3(ExactScalar(k[0], k[1]), ExactScalar(k[2], k[3]), ExactScalar(k[4], k[5]))

    @property
    def is_rational(self) -> bool:
        return self.key[1] == self.key[3] == self.key[5] == 0

    def int_coords(self) -> tuple[int, int, int]:
        if not self.is_rational:
            raise ValueError(f"{self} has irrational coordinates")
        return (self.key[0], self.key[2], self.key[4])

    def to_float(self) -> np.ndarray:
        return np.array(self.vec.to_float())

    def text(self) -> list[str]:
        return [format_scalar(c) for c in self.vec]

    def __str__(self) -> str:
        return "(" + ", ".join(self.text()) + ")"

    def __repr__(self) -> str:
        return f"ProjectivePoint{self}"


def canonicalize(v: ExactVec3 | Sequence) -> ProjectivePoint:
    """Canonical representative of the line spanned by ``v``.

    Scaling ``v`` by any nonzero element of Q(sqrt2) gives the same point.
    """
    if not isinstance(v, ExactVec3):
        v = ExactVec3.of(*(parse_scalar(c) if isinstance(c, str) else c for c in v))
    coords = list(v)
    lead = next((c for c in coords if not c.is_zero()), None)
    if lead is None:
        raise ValueError("cannot canonicalize the zero vector")
    if lead.irr != 0:
        # multiply by the conjugate so the leading coordinate becomes rational
        conj = lead.conjugate()
        coords = [c * conj for c in coords]
    parts: list[Fraction] = []
    for c in coords:
        parts.append(c.rat)
        parts.append(c.irr)
    den = reduce(_lcm, (p.denominator for p in parts), 1)
    ints = [int(p * den) for p in parts]
    g = reduce(math.gcd, ints, 0)
    ints = [i // g for i in ints]
    first = next(i for i in ints if i != 0)
    if first < 0:
        ints = [-i for i in ints]
    return ProjectivePoint(tuple(ints))


def _point_from_ints(x: int, y: int, z: int) -> ProjectivePoint:
    g = math.gcd(math.gcd(x, y), z)
    if g == 0:
        raise ValueError("cannot canonicalize the zero vector")
    x, y, z = x // g, y // g, z // g
    if next(c for c in (x, y, z) if c) < 0:
        x, y, z = -x, -y, -z
    return ProjectivePoint((x, 0, y, 0, z, 0))


def _dot_keys(a: tuple, b: tuple) -> tuple[int, int]:
    """Exact dot product of two keys as ``(rational part, sqrt2 part)``."""
    r = a[0] * b[0] + a[2] * b[2] + a[4] * b[4] + 2 * (a[1] * b[1] + a[3] * b[3] + a[5] * b[5])
    i = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] + a[3] * b[2] + a[4] * b[5] + a[5] * b[4]
    return r, i


def is_orthogonal(p: ProjectivePoint, q: ProjectivePoint) -> bool:
    return _dot_keys(p.key, q.key) == (0, 0)


def sin2_ratio(p: ProjectivePoint, q: ProjectivePoint) -> ExactScalar:
    """Exact ``1 - (p.q)^2 / ((p.p)(q.q))``, the squared sine of the angle."""
    d = ExactScalar(*_dot_keys(p.key, q.key))
    pp = ExactScalar(*_dot_keys(p.key, p.key))
    qq = ExactScalar(*_dot_keys(q.key, q.key))
    return 1 - (d * d) / (pp * qq)


def _norm_factor(norm: str) -> float:
    if norm == "operator":
        return 1.0
    if norm == "frobenius":
        return math.sqrt(2.0)
    raise ValueError(f"unknown norm {norm!r}; expected one of {NORMS}")


def projector_distance(p: ProjectivePoint, q: ProjectivePoint, norm: str = "operator") -> float:
    """Norm of ``P_p - P_q``.

    With the operator norm this is the sine of the angle between the lines;
    the Frobenius norm is larger by a factor sqrt2.
    """
    factor = _norm_factor(norm)
    if p == q:
        return 0.0
    s2 = float(sin2_ratio(p, q))
    return factor * math.sqrt(min(max(s2, 0.0), 1.0))


@dataclass(frozen=True)
class Frame:
    """Ordered triple of pairwise orthogonal, distinct projective points."""

    points: tuple[ProjectivePoint, ProjectivePoint, ProjectivePoint]

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        if len(pts) != 3:
            raise ValueError("a frame has exactly three points")
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != 3:
            raise ValueError(f"frame points are not distinct: {pts}")
        for a, b in itertools.combinations(pts, 2):
            if not is_orthogonal(a, b):
                raise ValueError(f"frame points {a} and {b} are not orthogonal")

    @classmethod
    def of(cls, *vectors) -> "Frame":
        return cls(tuple(v if isinstance(v, ProjectivePoint) else canonicalize(v) for v in vectors))

    def orderings(self) -> list["Frame"]:
        return [Frame(p) for p in itertools.permutations(self.points)]

    def __iter__(self):
        return iter(self.points)


def frame_distance(f: Frame, g: Frame, norm: str = "operator") -> float:
    """``max_i min_j`` of the projector distances between frame points."""
    return max(min(projector_distance(a, b, norm) for b in g.points) for a in f.points)


@dataclass(frozen=True)
class DirectionSet:
    """A finite set of directions with its exact orthogonality graph.

    ``edges`` holds every orthogonal index pair ``(i, j)``, ``i < j``; ``frames``
    holds every triangle of that graph as a sorted index triple.
    """

    points: tuple[ProjectivePoint, ...]
    edges: tuple[tuple[int, int], ...]
    frames: tuple[tuple[int, int, int], ...]
    name: str = ""
    _index: dict = dc_field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __len__(self) -> int:
        return len(self.points)

    @property
    def field(self) -> str:
        return "rational" if all(p.is_rational for p in self.points) else "sqrt2"

    def index(self, p: ProjectivePoint) -> int:
        return self._index[p]

    def __contains__(self, p: ProjectivePoint) -> bool:
        return p in self._index

    def frame(self, k: int) -> Frame:
        i, j, l = self.frames[k]
        return Frame((self.points[i], self.points[j], self.points[l]))

    def frames_of_point(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.points]
        for k, tri in enumerate(self.frames):
            for i in tri:
                out[i].append(k)
        return out

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.points]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def with_name(self, name: str) -> "DirectionSet":
        return DirectionSet(self.points, self.edges, self.frames, name)

    def unit_vectors(self) -> np.ndarray:
        return unit_vectors(self.points)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "field": self.field,
            "directions": [p.text() for p in self.points],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DirectionSet":
        points = [canonicalize(row) for row in data["directions"]]
        return build_direction_set(points, name=data.get("name", ""))


def unit_vectors(points: Iterable[ProjectivePoint]) -> np.ndarray:
    arr = np.array([p.vec.to_float() for p in points], dtype=float).reshape(-1, 3)
    if len(arr):
        arr /= np.linalg.norm(arr, axis=1)[:, None]
    return arr


def orthogonality_edges(points: Sequence[ProjectivePoint]) -> list[tuple[int, int]]:
    keys = [p.key for p in points]
    n = len(keys)
    edges = []
    if all(p.is_rational for p in points):
        xyz = [(k[0], k[2], k[4]) for k in keys]
        for i in range(n):
            a0, a1, a2 = xyz[i]
            for j in range(i + 1, n):
                b0, b1, b2 = xyz[j]
                if a0 * b0 + a1 * b1 + a2 * b2 == 0:
                    edges.append((i, j))
        return edges
    for i in range(n):
        for j in range(i + 1, n):
            if _dot_keys(keys[i], keys[j]) == (0, 0):
                edges.append((i, j))
    return edges


def triangles(n: int, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """All triangles ``i < j < k`` of a graph, in sorted order."""
    adj: list[set[int]] = [set() for _ in range(n)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    out = []
    for i in range(n):
        for j in sorted(x for x in adj[i] if x > i):
            for k in sorted(x for x in adj[i] & adj[j] if x > j):
                out.append((i, j, k))
    return out


def build_direction_set(points: Iterable[ProjectivePoint], name: str = "") -> DirectionSet:
    """Index ``points`` and compute the orthogonality graph and its frames.

    Raises :class:`DuplicateDirectionError` if two entries name the same line.
    """
    pts = tuple(p if isinstance(p, ProjectivePoint) else canonicalize(p) for p in points)
    seen: dict[ProjectivePoint, int] = {}
    dups = []
    for i, p in enumerate(pts):
        if p in seen:
            dups.append((seen[p], i, p))
        else:
            seen[p] = i
    if dups:
        raise DuplicateDirectionError(dups)
    edges = orthogonality_edges(pts)
    frames = triangles(len(pts), edges)
    return DirectionSet(pts, tuple(edges), tuple(frames), name)


def pairwise_sin(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Float sines between rows of two unit-vector arrays (prefilter only)."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    cos = np.clip(np.abs(a @ b.T), 0.0, 1.0)
    return np.sqrt(np.maximum(0.0, 1.0 - cos * cos))


def close_pairs(
    left: Sequence[ProjectivePoint],
    right: Sequence[ProjectivePoint] | None = None,
    radius: float = 0.0,
    norm: str = "operator",
) -> list[tuple[int, int, float]]:
    """Index pairs whose projector distance is strictly below ``radius``.

    With ``right`` omitted, pairs ``i < j`` within ``left`` are returned.
    Floats only prefilter; each candidate's distance is recomputed from the
    exact cosine ratio.
    """
    factor = _norm_factor(norm)
    same = right is None
    right = left if same else right
    s = pairwise_sin(unit_vectors(left), unit_vectors(right)) * factor
    # generous slack so the float prefilter can never drop a true pair
    cand = np.argwhere(s < radius + 1e-6)
    out = []
    for i, j in cand:
        i, j = int(i), int(j)
        if same and j <= i:
            continue
        d = projector_distance(left[i], right[j], norm)
        if d < radius:
            out.append((i, j, d))
    out.sort(key=lambda t: (t[2], t[0], t[1]))
    return out


def min_separation(ds: DirectionSet, norm: str = "operator") -> float:
    """Smallest projector distance between two distinct points of ``ds``."""
    if len(ds) < 2:
        return math.inf
    s = pairwise_sin(ds.unit_vectors(), ds.unit_vectors()) * _norm_factor(norm)
    s[np.tril_indices(len(ds))] = np.inf
    lo = float(s.min())
    pairs = close_pairs(ds.points, radius=lo + 1e-6, norm=norm)
    return min(d for _, _, d in pairs)


def complete_frames(ds: DirectionSet, name: str | None = None) -> DirectionSet:
    """Close every orthogonal pair that lies in no frame with its cross product.

    In the result every edge belongs to a frame, so the frame conditions alone
    already forbid orthogonal 0-0 pairs.
    """
    from .exact import cross

    in_frame = {e for tri in ds.frames for e in itertools.combinations(tri, 2)}
    added: dict[ProjectivePoint, None] = {}
    for i, j in ds.edges:
        if (i, j) in in_frame:
            continue
        w = canonicalize(cross(ds.points[i].vec, ds.points[j].vec))
        if w not in ds:
            added[w] = None
    return build_direction_set(
        list(ds.points) + list(added), name=name if name is not None else f"{ds.name}+completed"
    )
