import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maslovkit.errors import NotALoop, NotLagrangian, NotSymplectic, StepTooCoarse
from maslovkit.generators import half_turn, random_framed_family
from maslovkit.lift import (
    FramedLoop,
    FramedPoint,
    lagrangian_loop_index,
    lift_framed_loop,
    maslov_framed_loop,
)
from maslovkit.paths import uniform_grid
from maslovkit.scenarios import constant_scenario, sphere_scenario
from maslovkit.symplectic import (
    CoisotropicSubspace,
    SymplecticSpace,
    induced_map,
    principal_angle,
)
from maslovkit.verify import sample_lifts


def half_turn_loop(n=1, samples=32):
    sp = SymplecticSpace.standard(n)
    grid = uniform_grid(samples)
    base = np.eye(2 * n)[:, :n]
    pts = []
    for i, t in enumerate(grid):
        b = base if i == samples else half_turn(n, 0, t) @ base
        pts.append(FramedPoint(CoisotropicSubspace(sp, b), np.zeros((0, 0))))
    return FramedLoop(grid, pts)


def check_lift(loop, lift, atol=1e-8, from_identity=True):
    """Post conditions: carries W0 to W(t), induces the frame, bounded steps.

    The deterministic lift starts at the identity; a seeded one starts at
    another transitive frame of the base point.
    """
    W0 = loop.base
    if from_identity:
        assert np.max(np.abs(lift.samples[0] - np.eye(lift.dim))) < atol
    inv = lift.inverse_samples()
    for k in range(len(lift) - 1):
        assert np.max(np.abs(lift.samples[k + 1] @ inv[k] - np.eye(lift.dim))) < 0.5
    for pt, psi in zip(loop.points, lift.samples):
        assert principal_angle(psi @ W0.basis, pt.W.basis) < atol
        if pt.frame.size:
            assert np.max(np.abs(induced_map(psi, W0, pt.W) - pt.frame)) < atol


def test_constant_loop_lifts_to_identity():
    sp = SymplecticSpace.standard(2)
    W = CoisotropicSubspace(sp, np.eye(4)[:, :3])
    loop = constant_scenario(W).framed_loop()
    lift = lift_framed_loop(loop)
    assert np.max(np.abs(lift.samples - np.eye(4))) < 1e-12
    assert maslov_framed_loop(loop) == 0.0


def test_half_turn_lift_is_the_rotation():
    loop = half_turn_loop()
    lift = lift_framed_loop(loop)
    check_lift(loop, lift)
    # lifts are unique only up to maps preserving the line; the index is that of the rotation
    assert abs(maslov_framed_loop(loop) - 1) < 1e-9


def test_sphere_scenario_lift_satisfies_post_conditions():
    for n in (1, 2, 3):
        loop = sphere_scenario(n, samples=64).framed_loop()
        lift = lift_framed_loop(loop)
        check_lift(loop, lift)
        check_lift(loop, lift_framed_loop(loop, seed=4), from_identity=False)


def test_sphere_disk_index_is_two_at_n_one():
    assert abs(maslov_framed_loop(sphere_scenario(1).framed_loop()) - 2) <= 1e-6


def test_seeded_lifts_agree_on_the_sphere():
    loop = sphere_scenario(2).framed_loop()
    vals = {round(maslov_framed_loop(loop, seed), 9) for seed in (None, 1, 2, 3)}
    assert len(vals) == 1


def test_coarse_grid_is_detected():
    with pytest.raises(StepTooCoarse):
        lift_framed_loop(half_turn_loop(samples=2))


def test_tighter_step_bound_is_honoured():
    loop = half_turn_loop(samples=8)
    with pytest.raises(StepTooCoarse):
        lift_framed_loop(loop, step_bound=0.05)


def test_framed_loop_validation():
    sp = SymplecticSpace.standard(2)
    W0 = CoisotropicSubspace(sp, np.eye(4)[:, :3])
    W1 = CoisotropicSubspace(sp, np.eye(4)[:, [0, 1, 3]])
    g = uniform_grid(2)
    with pytest.raises(NotALoop):
        FramedLoop(g, [FramedPoint(W0, np.eye(2)), FramedPoint(W0, np.eye(2)), FramedPoint(W1, np.eye(2))])
    with pytest.raises(NotSymplectic):
        FramedLoop(g, [FramedPoint(W0, np.eye(2)), FramedPoint(W0, 2 * np.eye(2)), FramedPoint(W0, np.eye(2))])


# ------------------------------------------------------------------ Lagrangian index

def test_lagrangian_index_examples():
    sp = SymplecticSpace.standard(1)
    g = uniform_grid(16)
    line = np.array([[1.0], [0.0]])
    assert lagrangian_loop_index(g, [line] * g.size, sp) == 0
    loop = half_turn_loop()
    assert lagrangian_loop_index(loop.grid, [p.W for p in loop.points], loop.space) == 1
    loop2 = half_turn_loop(n=2)
    assert lagrangian_loop_index(loop2.grid, [p.W for p in loop2.points], loop2.space) == 1


def test_lagrangian_index_rejects_bad_input():
    sp = SymplecticSpace.standard(2)
    g = uniform_grid(2)
    e = np.eye(4)
    with pytest.raises(NotLagrangian):
        lagrangian_loop_index(g, [e[:, [0, 2]]] * 3, sp)
    with pytest.raises(NotALoop):
        lagrangian_loop_index(g, [e[:, :2], e[:, :2], e[:, [0, 3]]], sp)


# ------------------------------------------------------------------ random families

@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**30), st.integers(1, 3), st.data())
def test_random_lifts_satisfy_post_conditions(seed, n, data):
    k = data.draw(st.integers(n, 2 * n))
    fam = random_framed_family(seed, n, k, nonstandard=data.draw(st.booleans()))
    loop, (a, b) = sample_lifts(fam, [None, seed + 1])
    check_lift(loop, lift_framed_loop(loop), atol=1e-7)
    assert abs(a - b) <= 1e-6


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**30), st.integers(1, 3))
def test_lagrangian_families_agree_with_det_squared(seed, n):
    fam = random_framed_family(seed, n, n, max_weight=2)
    loop, (a,) = sample_lifts(fam, [None])
    assert round(a) == lagrangian_loop_index(loop.grid, [p.W for p in loop.points], loop.space)
    assert abs(a - round(a)) <= 1e-6


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2**30), st.integers(1, 3), st.data())
def test_regular_loops_have_even_integer_index(seed, n, data):
    k = data.draw(st.integers(n, 2 * n))
    fam = random_framed_family(seed, n, k, regular=True)
    _, (a,) = sample_lifts(fam, [None])
    assert abs(a - round(a)) <= 1e-6 and round(a) % 2 == 0


def test_non_orientable_regular_loop_is_odd():
    # a half-turn flip reverses the orientation of W; the regular index is then odd
    fam = random_framed_family(3, 2, 3, regular=True, orientable=False)
    _, (a,) = sample_lifts(fam, [None])
    assert abs(a - round(a)) <= 1e-6 and round(a) % 2 == 1
