"""Colorings, frame functions and the colorability search.

A coloring assigns 0 or 1 to every point of a :class:`DirectionSet` so that
each frame sums to 2 and no orthogonal pair is 0-0.  Antipodal symmetry needs
no constraint: ``a`` and ``-a`` are already the same :class:`ProjectivePoint`.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import _backend
from .geometry import DirectionSet

__all__ = [
    "COLORABLE",
    "UNCOLORABLE",
    "OUTCOMES",
    "Coloring",
    "FrameFunction",
    "Violation",
    "SolveReport",
    "InvalidColoringError",
    "FrameFunctionConflictError",
    "solve",
    "verify_coloring",
    "count_colorings",
    "coloring_to_frame_function",
    "frame_function_to_coloring",
    "verify_frame_function",
    "variable_order",
    "export_cnf",
]

COLORABLE = "COLORABLE"
UNCOLORABLE = "UNCOLORABLE"

# the outcome set of a joint measurement on one frame
OUTCOMES = ((1, 1, 0), (1, 0, 1), (0, 1, 1))

COUNT_GUARD = 30


class InvalidColoringError(ValueError):
    pass


class FrameFunctionConflictError(ValueError):
    def __init__(self, conflicts):
        self.conflicts = conflicts
        desc = "; ".join(
            f"frames {k1} and {k2} disagree at point {p} ({v1} vs {v2})"
            for k1, k2, p, v1, v2 in conflicts[:5]
        )
        more = f" (+{len(conflicts) - 5} more)" if len(conflicts) > 5 else ""
        super().__init__(f"frame function is contextual: {desc}{more}")


@dataclass(frozen=True)
class Coloring:
    """Total 0/1 assignment, indexed like ``DirectionSet.points``."""

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(self.assignment))

    @classmethod
    def from_mapping(cls, ds: DirectionSet, mapping: Mapping[int, int]) -> "Coloring":
        missing = [i for i in range(len(ds)) if i not in mapping]
        if missing:
            raise InvalidColoringError(f"coloring is partial; missing points {missing}")
        return cls(tuple(mapping[i] for i in range(len(ds))))

    def __getitem__(self, i: int) -> int:
        return self.assignment[i]

    def __len__(self) -> int:
        return len(self.assignment)

    def to_json(self, set_name: str) -> dict:
        return {"set": set_name, "assignment": list(self.assignment)}

    @classmethod
    def from_json(cls, data: dict) -> "Coloring":
        values = data["assignment"]
        if any(v not in (0, 1) for v in values):
            raise InvalidColoringError("assignment values must be 0 or 1")
        return cls(tuple(values))


@dataclass(frozen=True)
class FrameFunction:
    """One outcome triple per frame, aligned with ``DirectionSet.frames``."""

    values: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        vals = tuple(tuple(v) for v in self.values)
        for v in vals:
            if v not in OUTCOMES:
                raise ValueError(f"{v} is not an allowed outcome {OUTCOMES}")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, k: int) -> tuple[int, int, int]:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Violation:
    kind: str  # "frame" or "edge"
    indices: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.values)

    def __str__(self) -> str:
        need = "== 2" if self.kind == "frame" else ">= 1"
        return f"{self.kind} {self.indices} values {self.values} sum {self.total} (need {need})"


@dataclass(frozen=True)
class SolveReport:
    verdict: str
    witness: Coloring | None
    nodes: int
    propagations: int
    wall_time: float = field(compare=False)
    backend: str = field(default=_backend.BACKEND, compare=False)

    @property
    def colorable(self) -> bool:
        return self.verdict == COLORABLE

    def to_json(self, set_name: str = "") -> dict:
        return {
            "set": set_name,
            "verdict": self.verdict,
            "witness": None if self.witness is None else list(self.witness.assignment),
            "stats": {
                "nodes": self.nodes,
                "propagations": self.propagations,
                "wall_time": self.wall_time,
                "backend": self.backend,
            },
        }


def variable_order(ds: DirectionSet) -> list[int]:
    """Points by decreasing constraint degree, ties by index."""
    degree = [0] * len(ds)
    for tri in ds.frames:
        for i in tri:
            degree[i] += 1
    for i, j in ds.edges:
        degree[i] += 1
        degree[j] += 1
    return sorted(range(len(ds)), key=lambda i: (-degree[i], i))


def solve(ds: DirectionSet) -> SolveReport:
    """Decide colorability by complete DFS with unit propagation."""
    t0 = time.perf_counter()
    found, assignment, nodes, props = _backend.dfs_solve(
        len(ds), ds.frames, ds.edges, variable_order(ds)
    )
    elapsed = time.perf_counter() - t0
    if not found:
        return SolveReport(UNCOLORABLE, None, nodes, props, elapsed)
    witness = Coloring(tuple(assignment))
    bad = verify_coloring(ds, witness)
    if bad:  # pragma: no cover - would mean a kernel bug
        raise AssertionError(f"solver produced an invalid coloring: {bad[0]}")
    return SolveReport(COLORABLE, witness, nodes, props, elapsed)


def verify_coloring(ds: DirectionSet, c: Coloring) -> list[Violation]:
    """All frame and edge conditions violated by ``c`` (empty when valid)."""
    if len(c) != len(ds):
        raise InvalidColoringError(
            f"coloring has {len(c)} values but the set has {len(ds)} points"
        )
    if any(v not in (0, 1) for v in c.assignment):
        raise InvalidColoringError("coloring values must be 0 or 1")
    a = c.assignment
    out = []
    for tri in ds.frames:
        vals = tuple(a[i] for i in tri)
        if sum(vals) != 2:
            out.append(Violation("frame", tri, vals))
    for i, j in ds.edges:
        if a[i] + a[j] < 1:
            out.append(Violation("edge", (i, j), (a[i], a[j])))
    return out


def count_colorings(ds: DirectionSet) -> int:
    """Exact number of valid colorings by exhaustive enumeration."""
    if len(ds) > COUNT_GUARD:
        raise ValueError(
            f"count_colorings is limited to {COUNT_GUARD} points; set has {len(ds)}"
        )
    return _backend.count_solutions(len(ds), ds.frames, ds.edges)


def coloring_to_frame_function(ds: DirectionSet, c: Coloring) -> FrameFunction:
    bad = verify_coloring(ds, c)
    if bad:
        raise InvalidColoringError(f"coloring violates {len(bad)} condition(s), first: {bad[0]}")
    return FrameFunction(tuple(tuple(c[i] for i in tri) for tri in ds.frames))


def verify_frame_function(ds: DirectionSet, lam: FrameFunction) -> list[tuple]:
    """Pairs of frames that give a shared point different values.

    Each entry is ``(frame1, frame2, point, value1, value2)``.
    """
    if len(lam) != len(ds.frames):
        raise ValueError(f"frame function has {len(lam)} values for {len(ds.frames)} frames")
    seen: dict[int, tuple[int, int]] = {}
    conflicts = []
    for k, tri in enumerate(ds.frames):
        for slot, p in enumerate(tri):
            v = lam[k][slot]
            if p in seen:
                k0, v0 = seen[p]
                if v0 != v:
                    conflicts.append((k0, k, p, v0, v))
            else:
                seen[p] = (k, v)
    return conflicts


def frame_function_to_coloring(ds: DirectionSet, lam: FrameFunction) -> Coloring:
    """Induced coloring; points in no frame get 1, which never breaks an edge."""
    conflicts = verify_frame_function(ds, lam)
    if conflicts:
        raise FrameFunctionConflictError(conflicts)
    values = [1] * len(ds)
    for k, tri in enumerate(ds.frames):
        for slot, p in enumerate(tri):
            values[p] = lam[k][slot]
    c = Coloring(tuple(values))
    bad = verify_coloring(ds, c)
    if bad:
        raise InvalidColoringError(
            f"induced coloring breaks an orthogonality condition: {bad[0]}"
        )
    return c


def export_cnf(ds: DirectionSet) -> str:
    """DIMACS CNF whose models are exactly the colorings of ``ds``.

    Variable ``v`` is point index ``v - 1``; true means color 1.
    """
    clauses: list[Sequence[int]] = []
    for a, b, c in ds.frames:
        clauses.append((-(a + 1), -(b + 1), -(c + 1)))
    for a, b in ds.edges:
        clauses.append((a + 1, b + 1))
    lines = [f"c set {ds.name}" if ds.name else "c set (unnamed)"]
    lines += [f"c point {i + 1} = {p}" for i, p in enumerate(ds.points)]
    lines.append(f"p cnf {len(ds)} {len(clauses)}")
    lines += [" ".join(map(str, cl)) + " 0" for cl in clauses]
    return "\n".join(lines) + "\n"


def parse_cnf(text: str) -> tuple[int, list[list[int]]]:
    """Read back a DIMACS CNF as ``(num_vars, clauses)``."""
    nvars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            _, fmt, v, _c = line.split()
            if fmt != "cnf":
                raise ValueError(f"not a CNF header: {line!r}")
            nvars = int(v)
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if nvars is None:
        raise ValueError("missing 'p cnf' header")
    return nvars, clauses


def brute_force_colorings(ds: DirectionSet) -> list[Coloring]:
    """Every valid coloring by trying all 2^n assignments (tiny sets only)."""
    out = []
    for values in itertools.product((0, 1), repeat=len(ds)):
        c = Coloring(values)
        if not verify_coloring(ds, c):
            out.append(c)
    return out


def dump_coloring(c: Coloring, set_name: str) -> str:
    return json.dumps(c.to_json(set_name))
