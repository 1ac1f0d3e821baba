import warnings

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from maslovkit.errors import (
    DimensionMismatch,
    GapTooLarge,
    NeitherRegularWarning,
    NonIntegerIndex,
    NonUnitSample,
    NotALoop,
    NotSymplectic,
    ValidationError,
)
from maslovkit.generators import random_hamiltonian, winding_loop
from maslovkit.paths import (
    SymplecticPath,
    UnitCirclePath,
    check_grid,
    concatenate,
    concatenate_circle,
    identity_path,
    m0,
    maslov_pair,
    maslov_path,
    nearest_integer,
    pointwise_product,
    rebase,
    reverse,
    uniform_grid,
    winding,
)
from maslovkit.symplectic import standard_form


def circle(k, samples=64):
    g = uniform_grid(samples)
    return UnitCirclePath(g, np.exp(2j * np.pi * k * g))


def rotation_path(weights, samples=64):
    g = uniform_grid(samples)
    s = np.array([winding_loop(weights, t) for t in g])
    s[-1] = np.eye(s.shape[1])
    return SymplecticPath(g, s)


# ------------------------------------------------------------------ grids and winding

def test_grid_must_increase_from_zero_to_one():
    with pytest.raises(ValidationError):
        check_grid(np.array([0.0, 0.5, 0.5, 1.0]))
    with pytest.raises(ValidationError):
        check_grid(np.array([0.0, 0.5, 0.9]))
    assert check_grid(uniform_grid(4)).size == 5


def test_constant_circle_path_has_no_winding():
    g = uniform_grid(10)
    assert winding(UnitCirclePath(g, np.ones(11))) == 0.0


def test_winding_examples_and_refinement():
    assert abs(winding(circle(1)) - 1) < 1e-12
    assert abs(winding(circle(-2)) + 2) < 1e-12
    # refine tenfold: same answer
    assert abs(winding(circle(1, 640)) - winding(circle(1))) < 1e-12


def test_gap_too_large():
    with pytest.raises(GapTooLarge):
        winding(circle(2, samples=4))


def test_off_circle_samples_rejected():
    g = uniform_grid(2)
    with pytest.raises(NonUnitSample):
        UnitCirclePath(g, np.array([1.0, 1.1, 1.0]))


def test_circle_concatenation_adds_windings():
    p = concatenate_circle(circle(1), circle(2))
    assert abs(winding(p) - 3) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(-5, 5), st.integers(64, 200))
def test_winding_of_integer_loops_is_exact(k, samples):
    w = winding(circle(k, samples))
    assert abs(w - k) <= 1e-9
    assert abs(winding(circle(k, 2 * samples)) - w) <= 1e-9


# ------------------------------------------------------------------ maslov_path

def test_constant_path_has_index_zero():
    assert maslov_path(identity_path(uniform_grid(8), 4)) == 0.0


def test_rotation_path_has_index_two():
    assert abs(maslov_path(rotation_path([1])) - 2) < 1e-12


def test_sum_of_rotation_paths_has_index_four():
    assert abs(maslov_path(rotation_path([1, 1])) - 4) < 1e-12


def test_non_symplectic_samples_rejected():
    g = uniform_grid(2)
    s = np.array([np.eye(2), 2 * np.eye(2), np.eye(2)])
    with pytest.raises(NotSymplectic):
        SymplecticPath(g, s)


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        SymplecticPath(uniform_grid(3), np.array([np.eye(2)] * 3))


# ------------------------------------------------------------------ pair index

def test_pair_of_equal_transports_is_zero():
    p = rotation_path([1])
    assert maslov_pair(p, p) == 0.0


def test_rotation_against_identity():
    p = rotation_path([1])
    assert abs(maslov_pair(p, identity_path(p.grid, 2)) - 2) < 1e-12


def test_pair_requires_identity_start():
    p = rotation_path([1])
    bad = p.with_samples(p.samples @ np.diag([2.0, 0.5]))
    with pytest.raises(ValidationError):
        maslov_pair(bad, p)


def test_neither_regular_warns():
    g = uniform_grid(16)
    y = random_hamiltonian(np.random.default_rng(0), standard_form(1), 0.5)
    a = SymplecticPath(g, np.array([sla.expm(t * y) for t in g]))
    b = SymplecticPath(g, np.array([sla.expm(-t * y) for t in g]))
    with pytest.warns(NeitherRegularWarning):
        maslov_pair(a, b)


def test_additivity_on_loops():
    p, q = rotation_path([1, 0]), rotation_path([2, -1])
    ident = identity_path(p.grid, 4)
    whole = maslov_pair(pointwise_product(p, q), ident)
    assert abs(whole - maslov_pair(p, ident) - maslov_pair(q, ident)) <= 1e-8


def _bumped(seed, n=2, samples=48):
    rng = np.random.default_rng(seed)
    g = uniform_grid(samples)
    bump = random_hamiltonian(rng, standard_form(n), 0.8)
    w = rng.integers(-1, 2, n)
    s = np.array([sla.expm(np.sin(np.pi * t) ** 2 * bump) @ winding_loop(w, t) for t in g])
    s[-1] = np.eye(2 * n)
    return SymplecticPath(g, s)


def test_rebasing_keeps_the_pair_index():
    phi = _bumped(1)
    rng = np.random.default_rng(2)
    y = random_hamiltonian(rng, standard_form(2), 0.8)
    psi = SymplecticPath(phi.grid, np.array([sla.expm(t * y) for t in phi.grid]))
    base = maslov_pair(psi, phi)
    for j in range(len(phi) - 1):
        assert abs(maslov_pair(rebase(psi, j), rebase(phi, j)) - base) <= 1e-8


def test_rebase_starts_at_identity_and_keeps_monodromy_class():
    phi = _bumped(3)
    r = rebase(phi, 7)
    assert np.allclose(r.samples[0], np.eye(4), atol=1e-12)
    assert r.grid[0] == 0.0 and r.grid[-1] == 1.0


def test_reverse_negates_the_index():
    p = _bumped(4)
    r = reverse(p)
    back = maslov_pair(r, identity_path(r.grid, 4))
    assert abs(back + maslov_pair(p, identity_path(p.grid, 4))) <= 1e-8


def test_concatenation_adds():
    p, q = rotation_path([1]), rotation_path([-3])
    assert abs(maslov_path(concatenate(p, q)) - (maslov_path(p) + maslov_path(q))) <= 1e-9


# ------------------------------------------------------------------ m0

def test_m0_examples():
    assert m0(identity_path(uniform_grid(8), 2)) == 0
    assert m0(rotation_path([1])) == 1
    assert m0(rotation_path([1, 1])) == 2


def test_m0_needs_a_loop():
    g = uniform_grid(16)
    y = random_hamiltonian(np.random.default_rng(0), standard_form(1), 0.5)
    with pytest.raises(NotALoop):
        m0(SymplecticPath(g, np.array([sla.expm(t * y) for t in g])))


def test_nearest_integer():
    assert nearest_integer(2.0000000001) == 2
    with pytest.raises(NonIntegerIndex):
        nearest_integer(2.4)


def test_regular_open_path_index_is_not_forced_integral():
    # a half rotation: rho goes from 1 to -1, index 1 as a real number
    g = uniform_grid(32)
    s = np.array([winding_loop([0.5], t) for t in g])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val = maslov_path(SymplecticPath(g, s))
    assert abs(val - 1) < 1e-12
