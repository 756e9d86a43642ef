"""Two-wing deterministic hidden-variable models built from frame functions.

Each hidden state ``z`` carries a frame function for the A wing (``lam``)
and one for the B wing (``mu``); a wing's outcome depends only on its own
setting and ``z``.  This module checks the exact Nature condition (equal
directions give equal outcomes) and searches for its finite-precision
failure: distinct but nearly equal directions with different outcomes.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import DirectionSet, close_pairs, complete_frames
from .rational import PerturbationPlan, perturb_frames
from .solver import (
    OUTCOMES,
    Coloring,
    FrameFunction,
    FrameFunctionConflictError,
    InvalidColoringError,
    coloring_to_frame_function,
    frame_function_to_coloring,
    solve,
    verify_frame_function,
)

__all__ = [
    "MkcModel",
    "ExperimentRun",
    "NatureViolation",
    "NatureWitness",
    "FwtReport",
    "model_from_colorings",
    "model_from_sides",
    "check_nature",
    "find_nature_fp_witness",
    "run_experiment_grid",
    "check_parameter_independence",
    "merged_frame_function",
    "discontinuity_stats",
    "stats_csv",
    "fwt_pipeline",
]

GRID_GUARD = 2_000_000


@dataclass(frozen=True)
class MkcModel:
    settings_a: DirectionSet
    settings_b: DirectionSet
    hidden_states: tuple[tuple[FrameFunction, FrameFunction], ...]

    def __post_init__(self) -> None:
        states = tuple((lam, mu) for lam, mu in self.hidden_states)
        object.__setattr__(self, "hidden_states", states)
        for z, (lam, mu) in enumerate(states):
            for side, ds, ff in (("A", self.settings_a, lam), ("B", self.settings_b, mu)):
                conflicts = verify_frame_function(ds, ff)
                if conflicts:
                    raise FrameFunctionConflictError(conflicts)

    @property
    def n_states(self) -> int:
        return len(self.hidden_states)

    def response_a(self, a_frame: int, z: int) -> tuple[int, int, int]:
        return self.hidden_states[z][0][a_frame]

    def response_b(self, b_frame: int, z: int) -> tuple[int, int, int]:
        return self.hidden_states[z][1][b_frame]


@dataclass(frozen=True)
class ExperimentRun:
    a_setting: int
    b_setting: int
    z: int
    outcome_f: tuple[int, int, int]
    outcome_g: tuple[int, int, int]


@dataclass(frozen=True, order=True)
class NatureViolation:
    z: int
    a_frame: int
    b_frame: int
    i: int
    j: int
    values: tuple[int, int]


@dataclass(frozen=True)
class NatureWitness:
    distance: float
    z: int
    a_frame: int
    b_frame: int
    i: int
    j: int
    values: tuple[int, int]
    a_point: str = field(default="", compare=False)
    b_point: str = field(default="", compare=False)

    def sort_key(self):
        return (self.distance, self.z, self.a_frame, self.i, self.b_frame, self.j)

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "a_frame": self.a_frame,
            "b_frame": self.b_frame,
            "i": self.i,
            "j": self.j,
            "distance": self.distance,
            "values": list(self.values),
            "a_point": self.a_point,
            "b_point": self.b_point,
        }


def model_from_colorings(
    ds_a: DirectionSet, ds_b: DirectionSet, colorings: Sequence[tuple[Coloring, Coloring]]
) -> MkcModel:
    """One hidden state per ``(A coloring, B coloring)`` pair."""
    states = []
    for pair in colorings:
        if len(pair) != 2:
            raise ValueError("each hidden state needs exactly one coloring per side")
        ca, cb = pair
        states.append((coloring_to_frame_function(ds_a, ca), coloring_to_frame_function(ds_b, cb)))
    return MkcModel(ds_a, ds_b, tuple(states))


def model_from_sides(
    ds_a: DirectionSet,
    ds_b: DirectionSet,
    colorings_a: Sequence[Coloring],
    colorings_b: Sequence[Coloring],
) -> MkcModel:
    if len(colorings_a) != len(colorings_b):
        raise ValueError(
            f"{len(colorings_a)} A-side colorings but {len(colorings_b)} B-side colorings"
        )
    return model_from_colorings(ds_a, ds_b, list(zip(colorings_a, colorings_b)))


def _occurrences(ds: DirectionSet) -> dict[int, list[tuple[int, int]]]:
    """point index -> [(frame index, slot)]"""
    occ: dict[int, list[tuple[int, int]]] = {}
    for k, tri in enumerate(ds.frames):
        for slot, p in enumerate(tri):
            occ.setdefault(p, []).append((k, slot))
    return occ


def check_nature(model: MkcModel) -> list[NatureViolation]:
    """Every place where one direction, measured on both wings, gets two values."""
    occ_a = _occurrences(model.settings_a)
    occ_b = _occurrences(model.settings_b)
    out = []
    for pa, places_a in occ_a.items():
        point = model.settings_a.points[pa]
        if point not in model.settings_b:
            continue
        places_b = occ_b.get(model.settings_b.index(point), [])
        for z, (lam, mu) in enumerate(model.hidden_states):
            for ka, i in places_a:
                for kb, j in places_b:
                    f, g = lam[ka][i], mu[kb][j]
                    if f != g:
                        out.append(NatureViolation(z, ka, kb, i, j, (f, g)))
    out.sort()
    return out


def find_nature_fp_witness(
    model: MkcModel,
    epsilon: float,
    *,
    norm: str = "operator",
    within_a: bool = False,
) -> list[NatureWitness]:
    """Direction pairs closer than ``epsilon`` whose outcomes differ.

    Pairs run across the two wings; with ``within_a`` they run over pairs of
    distinct A-side directions instead.  Sorted by distance.
    """
    if not epsilon > 0:
        return []
    ds_a = model.settings_a
    ds_b = ds_a if within_a else model.settings_b
    occ_a = _occurrences(ds_a)
    occ_b = occ_a if within_a else _occurrences(ds_b)
    a_idx = sorted(occ_a)
    b_idx = sorted(occ_b)
    left = [ds_a.points[i] for i in a_idx]
    right = None if within_a else [ds_b.points[i] for i in b_idx]
    pairs = close_pairs(left, right, radius=epsilon, norm=norm)
    out = []
    for li, ri, d in pairs:
        pa = a_idx[li]
        pb = a_idx[ri] if within_a else b_idx[ri]
        for z, (lam, mu) in enumerate(model.hidden_states):
            other = lam if within_a else mu
            for ka, i in occ_a[pa]:
                for kb, j in occ_b[pb]:
                    f, g = lam[ka][i], other[kb][j]
                    if f != g:
                        out.append(
                            NatureWitness(
                                d, z, ka, kb, i, j, (f, g),
                                str(ds_a.points[pa]), str(ds_b.points[pb]),
                            )
                        )
    out.sort(key=NatureWitness.sort_key)
    return out


def run_experiment_grid(model: MkcModel, guard: int = GRID_GUARD) -> list[ExperimentRun]:
    """Every (A setting, B setting, hidden state) combination with its outcomes."""
    na, nb, nz = len(model.settings_a.frames), len(model.settings_b.frames), model.n_states
    if na * nb * nz > guard:
        raise ValueError(f"experiment grid {na}x{nb}x{nz} exceeds the guard of {guard} runs")
    runs = []
    for a in range(na):
        for b in range(nb):
            for z, (lam, mu) in enumerate(model.hidden_states):
                runs.append(ExperimentRun(a, b, z, lam[a], mu[b]))
    return runs


def check_parameter_independence(runs: Sequence[ExperimentRun]) -> bool:
    """Each wing's outcome is a function of its own setting and ``z`` only."""
    f_seen: dict[tuple[int, int], tuple] = {}
    g_seen: dict[tuple[int, int], tuple] = {}
    for r in runs:
        if f_seen.setdefault((r.a_setting, r.z), r.outcome_f) != r.outcome_f:
            return False
        if g_seen.setdefault((r.b_setting, r.z), r.outcome_g) != r.outcome_g:
            return False
    return True


def merged_frame_function(model: MkcModel, z: int) -> FrameFunction:
    """Combine both wings' responses for ``z`` into one frame function on A.

    Needs identical settings on the two wings.  Raises
    :class:`FrameFunctionConflictError` when some direction would receive
    two values across all frames of both wings.
    """
    a, b = model.settings_a, model.settings_b
    if a.points != b.points or a.frames != b.frames:
        raise ValueError("merging needs identical settings on both wings")
    lam, mu = model.hidden_states[z]
    value: dict[int, tuple[int, int]] = {}
    conflicts = []
    for k, tri in enumerate(a.frames):
        for slot, p in enumerate(tri):
            for ff, tag in ((lam, 0), (mu, len(a.frames))):
                v = ff[k][slot]
                if p in value and value[p][1] != v:
                    conflicts.append((value[p][0], k + tag, p, value[p][1], v))
                value.setdefault(p, (k + tag, v))
    if conflicts:
        raise FrameFunctionConflictError(conflicts)
    return FrameFunction(tuple(tuple(value[p][1] for p in tri) for tri in a.frames))


def discontinuity_stats(
    ds: DirectionSet, c: Coloring, radii: Sequence[float], norm: str = "operator"
) -> list[tuple[float, int, int, float]]:
    """``(radius, close pairs, disagreeing pairs, fraction)`` for each radius."""
    from .solver import verify_coloring

    bad = verify_coloring(ds, c)
    if bad:
        raise InvalidColoringError(f"coloring violates {len(bad)} condition(s), first: {bad[0]}")
    rows = []
    for r in radii:
        pairs = close_pairs(ds.points, radius=r, norm=norm)
        dis = sum(1 for i, j, _ in pairs if c[i] != c[j])
        rows.append((r, len(pairs), dis, dis / len(pairs) if pairs else 0.0))
    return rows


def stats_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["radius", "pairs", "disagreements", "fraction"])
    for r, n, d, f in rows:
        w.writerow([repr(float(r)), n, d, repr(float(f))])
    return buf.getvalue()


# -- the full finite-precision pipeline ---------------------------------------


@dataclass
class FwtReport:
    source: DirectionSet
    base: DirectionSet
    plan_a: PerturbationPlan
    plan_b: PerturbationPlan
    model: MkcModel
    nature_violations: list[NatureViolation]
    witnesses: list[NatureWitness]
    radius: float
    epsilon: float
    seed: int
    norm: str

    @property
    def states_with_witness(self) -> list[int]:
        return sorted({w.z for w in self.witnesses})

    @property
    def nature_holds(self) -> bool:
        return not self.nature_violations

    @property
    def every_state_witnessed(self) -> bool:
        return len(self.states_with_witness) == self.model.n_states

    @property
    def ok(self) -> bool:
        return self.nature_holds and bool(self.witnesses)

    def to_json(self) -> dict:
        return {
            "source": self.source.name,
            "base": {"name": self.base.name, "points": len(self.base), "frames": len(self.base.frames)},
            "epsilon": self.epsilon,
            "radius": self.radius,
            "seed": self.seed,
            "norm": self.norm,
            "plan_a": self.plan_a.to_json(),
            "plan_b": self.plan_b.to_json(),
            "hidden_states": self.model.n_states,
            "nature_violations": [
                {"z": v.z, "a_frame": v.a_frame, "b_frame": v.b_frame, "i": v.i, "j": v.j,
                 "values": list(v.values)}
                for v in self.nature_violations
            ],
            "states_with_witness": self.states_with_witness,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _random_frame_function(ds: DirectionSet, rng: random.Random, tries: int = 100) -> Coloring:
    for _ in range(tries):
        lam = FrameFunction(tuple(rng.choice(OUTCOMES) for _ in ds.frames))
        try:
            return frame_function_to_coloring(ds, lam)
        except (FrameFunctionConflictError, InvalidColoringError):
            continue
    raise RuntimeError("could not draw a valid random frame function")


def fwt_pipeline(
    source: DirectionSet,
    epsilon: float,
    seed: int,
    *,
    n_states: int = 4,
    complete: bool = True,
    shared_settings: bool = True,
    norm: str = "operator",
) -> FwtReport:
    """Perturb, color, build the two-wing model and look for witnesses.

    ``complete`` first closes every orthogonal pair of ``source`` into a
    frame, so that frames alone carry all of its coloring constraints.  With
    ``shared_settings`` both wings use the same perturbed set and the same
    responses; otherwise wing B gets its own perturbation (seed + 1) and its
    own responses.  Witnesses are searched at radius ``2 * epsilon``.
    """
    base = complete_frames(source, name=f"{source.name}+completed") if complete else source
    plan_a = perturb_frames(base, epsilon, seed, norm=norm)
    plan_b = plan_a if shared_settings else perturb_frames(base, epsilon, seed + 1, norm=norm)
    ds_a, ds_b = plan_a.result, plan_b.result
    rep_a = solve(ds_a)
    rep_b = rep_a if shared_settings else solve(ds_b)
    if not (rep_a.colorable and rep_b.colorable):
        raise RuntimeError("perturbed settings are unexpectedly uncolorable")
    rng = random.Random(seed)
    pairs = [(rep_a.witness, rep_b.witness)]
    while len(pairs) < n_states:
        ca = _random_frame_function(ds_a, rng)
        cb = ca if shared_settings else _random_frame_function(ds_b, rng)
        pairs.append((ca, cb))
    model = model_from_colorings(ds_a, ds_b, pairs)
    radius = 2 * epsilon
    return FwtReport(
        source=source,
        base=base,
        plan_a=plan_a,
        plan_b=plan_b,
        model=model,
        nature_violations=check_nature(model),
        witnesses=find_nature_fp_witness(model, radius, norm=norm),
        radius=radius,
        epsilon=epsilon,
        seed=seed,
        norm=norm,
    )
