import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kscolor.exact import ExactVec3, dot
from kscolor.geometry import build_direction_set, canonicalize, frame_distance, projector_distance
from kscolor.rational import (
    ApproximationError,
    PerturbationError,
    PythagoreanQuadruple,
    approximate_direction,
    enumerate_quadruples,
    is_exact_rotation,
    is_totally_incompatible,
    make_rotation,
    perturb_frames,
    rational_frames,
    replay_plan,
    rotate_set,
)
from kscolor.solver import COLORABLE, count_colorings, solve, verify_coloring

from oracles import brute_force_count, brute_force_frames

quats = st.tuples(*[st.integers(-50, 50)] * 4).filter(any)


def _quad_oracle(max_n):
    # direct search over the cube, one representative per line
    out = set()
    for x, y, z in itertools.product(range(-max_n, max_n + 1), repeat=3):
        n2 = x * x + y * y + z * z
        n = math.isqrt(n2)
        if n == 0 or n * n != n2 or n > max_n:
            continue
        if math.gcd(math.gcd(x, y), z) != 1 or next(c for c in (x, y, z) if c) < 0:
            continue
        out.add((n, x, y, z))
    return sorted(out)


@pytest.mark.parametrize("max_n", [1, 3, 5, 9])
def test_enumerate_quadruples_matches_oracle(max_n):
    got = [(q.n, q.x, q.y, q.z) for q in enumerate_quadruples(max_n)]
    assert got == _quad_oracle(max_n)


def test_quadruple_counts():
    assert len(enumerate_quadruples(1)) == 3
    assert len(enumerate_quadruples(3)) == 15
    assert PythagoreanQuadruple(3, 1, 2, 2).as_tuple() == (1, 2, 2, 3)
    with pytest.raises(ValueError):
        enumerate_quadruples(0)


@pytest.mark.parametrize(
    "args",
    [(3, 1, 2, 3), (3, 2, 4, 4), (3, -1, 2, 2), (0, 0, 0, 0)],
)
def test_quadruple_validation(args):
    with pytest.raises(ValueError):
        PythagoreanQuadruple(*args)


@pytest.mark.parametrize("max_n, sizes", [(1, (3, 3, 1)), (3, (15, 15, 5)), (5, (27, 33, 11))])
def test_rational_frames_sizes(max_n, sizes):
    ds = rational_frames(max_n)
    assert (len(ds), len(ds.edges), len(ds.frames)) == sizes
    assert ds.field == "rational"
    assert list(ds.frames) == brute_force_frames(ds.points)


def test_rational_frames_colorable():
    for n in (1, 3, 5, 13):
        ds = rational_frames(n)
        rep = solve(ds)
        assert rep.verdict == COLORABLE
        assert verify_coloring(ds, rep.witness) == []


def test_rotation_examples():
    r = make_rotation((1, 0, 0, 1))
    assert r.matrix == ((0, -1, 0), (1, 0, 0), (0, 0, 1))
    assert r.cos_angle == 0
    r = make_rotation((2, 0, 0, 1))
    assert r.matrix[0][:2] == (Fraction(3, 5), Fraction(-4, 5))
    with pytest.raises(ValueError):
        make_rotation((0, 0, 0, 0))


@settings(max_examples=200)
@given(quats)
def test_rotation_exact(q):
    r = make_rotation(q)
    assert is_exact_rotation(r.matrix)
    m = r.matrix
    for i, j in itertools.product(range(3), repeat=2):
        assert sum(m[k][i] * m[k][j] for k in range(3)) == (1 if i == j else 0)


@settings(max_examples=100)
@given(quats, st.tuples(*[st.integers(-5, 5)] * 3), st.tuples(*[st.integers(-5, 5)] * 3))
def test_rotation_preserves_dot(q, u, v):
    r = make_rotation(q)
    a, b = ExactVec3.of(*u), ExactVec3.of(*v)
    assert dot(r.apply_vec(a), r.apply_vec(b)) == dot(a, b)


@pytest.mark.parametrize("n", [1, 7, 50, 1000])
def test_sine_of_z_rotation(n):
    r = make_rotation((n, 0, 0, 1))
    assert r.sin_angle == pytest.approx(2 * n / (n * n + 1), rel=1e-12)
    e1 = canonicalize([1, 0, 0])
    assert projector_distance(e1, r.apply(e1)) == pytest.approx(2 * n / (n * n + 1), abs=1e-12)


def test_not_a_rotation():
    assert not is_exact_rotation(((1, 0, 0), (0, 1, 0), (0, 0, -1)))
    assert not is_exact_rotation(((1, 1, 0), (0, 1, 0), (0, 0, 1)))


@pytest.mark.parametrize("seed", range(5))
def test_perturb_properties(peres33, seed):
    plan = perturb_frames(peres33, 0.02, seed)
    ds = plan.result
    assert len(ds) == 3 * len(peres33.frames)
    assert len(ds.frames) == len(peres33.frames)
    assert ds.frames == tuple((3 * k, 3 * k + 1, 3 * k + 2) for k in range(len(ds.frames)))
    assert is_totally_incompatible(ds)
    assert max(plan.frame_distances()) < 0.02
    for k in range(len(ds.frames)):
        assert frame_distance(peres33.frame(k), ds.frame(k)) < 0.02
    assert solve(ds).verdict == COLORABLE


def test_perturb_frobenius(peres33):
    plan = perturb_frames(peres33, 0.02, 0, norm="frobenius")
    assert max(plan.frame_distances()) < 0.02
    # frobenius distances are sqrt2 times the operator ones
    for k, d in enumerate(plan.frame_distances()):
        op = frame_distance(peres33.frame(k), plan.result.frame(k))
        assert d == pytest.approx(math.sqrt(2) * op, rel=1e-12)


def test_same_rotation_keeps_set_uncolorable(peres33):
    # negative control: one rotation for everything preserves the KS structure
    rot = rotate_set(peres33, make_rotation((100, 1, -2, 3)))
    assert (len(rot.edges), len(rot.frames)) == (72, 16)
    assert not is_totally_incompatible(rot)
    assert not solve(rot).colorable


def test_perturb_rejects_bad_epsilon(peres33):
    with pytest.raises(ValueError, match="separation"):
        perturb_frames(peres33, 0.5, 0)
    with pytest.raises(ValueError):
        perturb_frames(peres33, 0.0, 0)
    with pytest.raises(ValueError):
        perturb_frames(build_direction_set([canonicalize([1, 0, 0])]), 0.01, 0)


def test_perturb_exhausted(peres33):
    with pytest.raises(PerturbationError):
        perturb_frames(peres33, 0.02, 0, max_retries=0)


def test_replay_is_bit_exact(peres33):
    plan = perturb_frames(peres33, 0.02, 7)
    again = replay_plan(plan.to_json(), peres33)
    assert again.result.points == plan.result.points
    assert again.result.frames == plan.result.frames
    assert again.frame_distances() == plan.frame_distances()
    assert perturb_frames(peres33, 0.02, 7).result.points == plan.result.points
    with pytest.raises(ValueError):
        replay_plan(plan.to_json(), rational_frames(3))


def test_count_of_totally_incompatible_sets(peres33):
    # with no orthogonality between frames the count factorises
    sub = build_direction_set(sorted({peres33.points[i] for tri in peres33.frames[:3] for i in tri}))
    ds = perturb_frames(sub, 0.02, 1).result
    cross = [e for e in ds.edges if not any(set(e) <= set(t) for t in ds.frames)]
    assert cross == [] and len(ds) == 9
    assert count_colorings(ds) == 3 ** len(ds.frames) == brute_force_count(ds)


@pytest.mark.parametrize(
    "target, eps, expected",
    [
        ((1, 0, 0), 0.1, (1, 0, 0, 1)),
        ((1, 2, 2), 1e-9, (1, 2, 2, 3)),
        ((1, 1, 1), 0.05, (23, 24, 24, 41)),
    ],
)
def test_approximate_direction(target, eps, expected):
    assert approximate_direction(target, eps).as_tuple() == expected


def test_approximate_direction_accuracy():
    t = (0.3, -0.7, 0.2)
    q = approximate_direction(t, 0.01)
    p = q.point()
    assert projector_distance(p, canonicalize([3, -7, 2])) < 0.01


def test_approximate_direction_gives_up():
    with pytest.raises(ApproximationError) as exc:
        approximate_direction((1, 1, 1), 1e-6, max_n=5)
    assert exc.value.best is not None
    assert exc.value.best_distance > 1e-6
    with pytest.raises(ValueError):
        approximate_direction((0, 0, 0), 0.1)


def test_approximation_is_lowest_height():
    q = approximate_direction((1, 1, 1), 0.05)
    target = canonicalize([1, 1, 1])
    for lower in enumerate_quadruples(q.n - 1):
        assert projector_distance(lower.point(), target) >= 0.05
    assert projector_distance(q.point(), target) < 0.05
