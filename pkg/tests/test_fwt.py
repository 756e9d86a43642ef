import itertools
import random

import pytest

from kscolor.geometry import build_direction_set, canonicalize, complete_frames, min_separation
from kscolor.rational import perturb_frames, rational_frames
from kscolor.solver import (
    OUTCOMES,
    UNCOLORABLE,
    Coloring,
    FrameFunction,
    FrameFunctionConflictError,
    InvalidColoringError,
    frame_function_to_coloring,
    solve,
    verify_coloring,
    verify_frame_function,
)
from kscolor.fwt import (
    MkcModel,
    check_nature,
    check_parameter_independence,
    discontinuity_stats,
    find_nature_fp_witness,
    fwt_pipeline,
    merged_frame_function,
    model_from_colorings,
    model_from_sides,
    run_experiment_grid,
    stats_csv,
)


def _disjoint_frames(k):
    # k mutually unrelated frames: z-rotations of the standard axes by the
    # angles of (n, 0, 0, 1) quaternions, n = 2..k+1
    from kscolor.rational import make_rotation

    axes = [canonicalize(v) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]]
    pts = list(axes)
    for n in range(2, k + 1):
        r = make_rotation((n, 1, 1, 0))
        pts.extend(r.apply(p) for p in axes)
    return build_direction_set(pts, name=f"disjoint-{k}")


def test_model_trivial(axes):
    c = Coloring((1, 1, 0))
    model = model_from_colorings(axes, axes, [(c, c)])
    assert model.n_states == 1
    assert model.response_a(0, 0) == model.response_b(0, 0) == (1, 1, 0)
    assert check_nature(model) == []


def test_model_count_mismatch(axes):
    c = Coloring((1, 1, 0))
    with pytest.raises(ValueError):
        model_from_sides(axes, axes, [c, c], [c])


def test_model_rejects_invalid(axes):
    with pytest.raises(InvalidColoringError):
        model_from_colorings(axes, axes, [(Coloring((1, 1, 1)), Coloring((1, 1, 0)))])



def test_model_rejects_conflicting_frame_function(two_frames_sharing_e3):
    ds = two_frames_sharing_e3
    bad = FrameFunction(((1, 1, 0), (1, 1, 0)))
    with pytest.raises(FrameFunctionConflictError):
        MkcModel(ds, ds, ((bad, bad),))


def test_check_nature_reports_violation(axes):
    model = model_from_colorings(axes, axes, [(Coloring((1, 1, 0)), Coloring((0, 1, 1)))])
    got = check_nature(model)
    assert {(v.i, v.j, v.values) for v in got} == {(0, 0, (1, 0)), (2, 2, (0, 1))}
    assert all(v.z == 0 for v in got)


def test_check_nature_vacuous_without_shared_points(peres33):
    a = perturb_frames(peres33, 0.02, 0).result
    b = perturb_frames(peres33, 0.02, 1).result
    assert not set(a.points) & set(b.points)
    model = model_from_colorings(a, b, [(solve(a).witness, solve(b).witness)])
    assert check_nature(model) == []


def test_no_witness_below_separation(peres33):
    ds = perturb_frames(peres33, 0.02, 2).result
    c = solve(ds).witness
    model = model_from_colorings(ds, ds, [(c, c)])
    eps = min_separation(ds)
    assert find_nature_fp_witness(model, eps) == []
    assert find_nature_fp_witness(model, 0.0) == []
    assert find_nature_fp_witness(model, -1.0) == []


def test_grid_sizes(axes):
    c = Coloring((1, 1, 0))
    assert len(run_experiment_grid(model_from_colorings(axes, axes, [(c, c)]))) == 1
    a, b = _disjoint_frames(2), _disjoint_frames(3)
    assert (len(a.frames), len(b.frames)) == (2, 3)
    rng = random.Random(0)

    def rand(ds):
        return frame_function_to_coloring(ds, FrameFunction(tuple(rng.choice(OUTCOMES) for _ in ds.frames)))

    model = model_from_colorings(a, b, [(rand(a), rand(b)) for _ in range(2)])
    runs = run_experiment_grid(model)
    assert len(runs) == 12
    assert check_parameter_independence(runs)
    for (ai, z), group in itertools.groupby(sorted(runs, key=lambda r: (r.a_setting, r.z)), key=lambda r: (r.a_setting, r.z)):
        group = list(group)
        assert len(group) == 3 and len({r.outcome_f for r in group}) == 1
    with pytest.raises(ValueError, match="guard"):
        run_experiment_grid(model, guard=11)


def test_parameter_independence_detects_signalling():
    from kscolor.fwt import ExperimentRun

    runs = [ExperimentRun(0, 0, 0, (1, 1, 0), (1, 1, 0)), ExperimentRun(0, 1, 0, (0, 1, 1), (1, 1, 0))]
    assert not check_parameter_independence(runs)


def test_merge_on_random_models():
    rng = random.Random(21)
    for ds in (rational_frames(5), _disjoint_frames(4)):
        for _ in range(10):
            # draw a valid coloring, use it on both wings
            while True:
                try:
                    c = frame_function_to_coloring(
                        ds, FrameFunction(tuple(rng.choice(OUTCOMES) for _ in ds.frames))
                    )
                    if not verify_coloring(ds, c):
                        break
                except FrameFunctionConflictError:
                    continue
            model = model_from_colorings(ds, ds, [(c, c)])
            assert check_nature(model) == []
            lam = merged_frame_function(model, 0)
            assert verify_frame_function(ds, lam) == []


def test_merge_needs_identical_sides(axes):
    b = _disjoint_frames(2)
    model = model_from_colorings(axes, b, [(Coloring((1, 1, 0)), Coloring((1, 1, 0, 1, 1, 0)))])
    with pytest.raises(ValueError):
        merged_frame_function(model, 0)


def test_merge_detects_nature_violation(axes):
    model = model_from_colorings(axes, axes, [(Coloring((1, 1, 0)), Coloring((0, 1, 1)))])
    with pytest.raises(FrameFunctionConflictError):
        merged_frame_function(model, 0)


def test_union_with_ck31_uncolorable(ck31, peres33):
    for extra in (rational_frames(3), peres33):
        union = build_direction_set(sorted(set(ck31.points) | set(extra.points)))
        assert solve(union).verdict == UNCOLORABLE
    assert solve(ck31).witness is None


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("shared", [True, False])
def test_pipeline_forces_witnesses(peres33, seed, shared):
    rep = fwt_pipeline(peres33, 0.02, seed, shared_settings=shared)
    assert rep.nature_holds
    assert rep.every_state_witnessed
    assert rep.ok
    assert all(w.distance < 0.04 for w in rep.witnesses)
    assert [w.sort_key() for w in rep.witnesses] == sorted(w.sort_key() for w in rep.witnesses)
    for w in rep.witnesses:
        assert w.values[0] != w.values[1]
    # exact Nature holds but Nature_FP fails on the same grid
    runs = run_experiment_grid(rep.model)
    assert check_parameter_independence(runs)


def test_forcing_argument(peres33):
    # if every close pair agreed, merging copies would color the completed set
    base = complete_frames(peres33)
    assert solve(base).verdict == UNCOLORABLE
    frames_only = build_direction_set(list(base.points))
    assert set(frames_only.edges) == {e for t in frames_only.frames for e in itertools.combinations(t, 2)}
    plan = perturb_frames(base, 0.02, 4)
    ds = plan.result
    c = solve(ds).witness
    # copies of one source point stay within 2 epsilon of each other
    src_of = [base.frames[k][s] for k in range(len(base.frames)) for s in range(3)]
    from kscolor.geometry import projector_distance

    groups = {}
    for i, p in enumerate(src_of):
        groups.setdefault(p, []).append(i)
    for members in groups.values():
        for i, j in itertools.combinations(members, 2):
            assert projector_distance(ds.points[i], ds.points[j]) < 0.04
    assert any(len({c[i] for i in m}) > 1 for m in groups.values())
    model = model_from_colorings(ds, ds, [(c, c)])
    assert find_nature_fp_witness(model, 0.04, within_a=True)


def test_plain_peres_frames_are_colorable(peres33):
    # frames alone do not carry the Peres contradiction; completion is needed
    frames_only = perturb_frames(peres33, 0.02, 0).result
    assert solve(frames_only).colorable
    assert solve(complete_frames(peres33)).verdict == UNCOLORABLE


def test_discontinuity_stats(axes, peres33):
    rows = discontinuity_stats(axes, Coloring((1, 1, 0)), [0.5, 0.99, 2.0])
    assert rows[0][:3] == (0.5, 0, 0) and rows[1][1] == 0
    assert rows[2][1] == 3 and rows[2][2] == 2
    ds = perturb_frames(complete_frames(peres33), 0.02, 0).result
    c = solve(ds).witness
    rows = discontinuity_stats(ds, c, [0.04, 2.0])
    assert rows[0][2] >= 1
    n = len(ds)
    assert rows[1][1] == n * (n - 1) // 2
    text = stats_csv(rows)
    assert text.splitlines()[0] == "radius,pairs,disagreements,fraction"
    assert len(text.splitlines()) == 3
    with pytest.raises(InvalidColoringError):
        discontinuity_stats(axes, Coloring((1, 1, 1)), [0.1])


def test_pipeline_json(peres33):
    import json

    rep = fwt_pipeline(peres33, 0.02, 0, n_states=2)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["hidden_states"] == 2
    assert data["nature_violations"] == []
    assert data["states_with_witness"] == [0, 1]
    assert data["radius"] == 0.04
