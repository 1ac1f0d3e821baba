import numpy as np
import pytest

from maslovkit.errors import DegenerateTriangulation, NotALoop, ValidationError
from maslovkit.generators import random_framed_family
from maslovkit.lift import lagrangian_loop_index, maslov_framed_loop
from maslovkit.paths import identity_path, reverse, uniform_grid
from maslovkit.scenarios import (
    DiskMap,
    GroupActionScenario,
    chern_from_clutching,
    closed_surface_maslov,
    clutching_scenario,
    conjugate_scenario,
    constant_scenario,
    direct_sum_scenario,
    disk_maslov,
    disk_symplectic_area,
    flat_disk_map,
    gaio_salamon_index,
    lagrangian_embedding,
    monotonicity_ratio,
    planar_surface_maslov,
    rotation_transport,
    scenario_from_loop,
    sphere_action,
    sphere_scenario,
    split_check,
)
from maslovkit.symplectic import CoisotropicSubspace, SymplecticSpace, random_symplectic
from maslovkit.verify import sample_lifts


def family_scenario(seed, n, k, samples=32, **kw):
    loop, _ = sample_lifts(random_framed_family(seed, n, k, **kw), [None], samples=samples)
    return scenario_from_loop(loop)


# ------------------------------------------------------------------ sphere scenario

def test_sphere_n1_has_vacuous_framing():
    s = sphere_scenario(1, samples=32)
    assert all(b.shape == (2, 1) for b in s.bases)
    assert all(f.shape == (0, 0) for f in s.frames)


def test_sphere_n2_framing_is_a_rotation_on_the_quotient():
    s = sphere_scenario(2, samples=32)
    # the classes of e2 and f2 give coordinates on every quotient along the loop
    ef = np.eye(4)[:, [1, 3]]
    c0 = CoisotropicSubspace(s.space, s.bases[0]).quotient.coordinates(ef)
    for t, b, f in zip(s.grid, s.bases, s.frames):
        assert b.shape == (4, 3) and f.shape == (2, 2)
        ct = CoisotropicSubspace(s.space, b).quotient.coordinates(ef)
        r = np.linalg.solve(ct, f @ c0)
        c, sn = np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)
        assert np.allclose(r, [[c, -sn], [sn, c]], atol=1e-9)
    assert np.allclose(s.frames[-1], np.eye(2), atol=1e-12)


def test_sphere_boundary_lies_on_the_sphere():
    s = sphere_scenario(3, samples=16)
    assert np.allclose(np.linalg.norm(s.boundary, axis=1), 1.0)


def test_sphere_index_n1_is_two():
    assert abs(disk_maslov(sphere_scenario(1)) - 2) <= 1e-6


@pytest.mark.parametrize("n", [2, 3])
def test_sphere_index_matches_the_circle_action(n):
    a = disk_maslov(sphere_scenario(n))
    b = gaio_salamon_index(sphere_action(n))
    assert abs(a - b) <= 1e-6
    assert abs(a - 2 * n) <= 1e-6


def test_constant_scenario_has_index_zero():
    W = CoisotropicSubspace(SymplecticSpace.standard(2), np.eye(4)[:, :3])
    assert disk_maslov(constant_scenario(W)) == 0.0


# ------------------------------------------------------------------ circle actions

def test_trivial_group_loop():
    g = uniform_grid(8)
    assert gaio_salamon_index(GroupActionScenario((1,), g, np.ones(9))) == 0.0


def test_weighted_actions():
    assert abs(gaio_salamon_index(sphere_action(1)) - 2) < 1e-9
    assert abs(gaio_salamon_index(sphere_action(2)) - 4) < 1e-9
    assert abs(gaio_salamon_index(sphere_action(2, weights=(2, -1))) - 2) < 1e-9


def test_group_loop_must_close():
    g = uniform_grid(8)
    with pytest.raises(NotALoop):
        GroupActionScenario((1,), g, np.exp(1j * np.pi * g))
    with pytest.raises(ValidationError):
        GroupActionScenario((1,), g, 2 * np.ones(9))


# ------------------------------------------------------------------ clutching and surfaces

@pytest.mark.parametrize("k", [-3, -1, 0, 1, 2, 3])
def test_clutching_chern_number(k):
    assert chern_from_clutching(clutching_scenario(k)) == k


def test_tangent_bundle_of_the_sphere():
    c1 = chern_from_clutching(clutching_scenario(2, n=2))
    assert c1 == 2
    assert closed_surface_maslov(c1) == 4
    assert closed_surface_maslov(0) == 0
    assert closed_surface_maslov(-1) == -2


def test_planar_surfaces():
    rot = rotation_transport(1)
    assert abs(planar_surface_maslov([rot]) - 2) < 1e-9
    assert abs(planar_surface_maslov([rot, reverse(rot)])) < 1e-9
    ident = identity_path(uniform_grid(16), 4)
    assert planar_surface_maslov([ident, ident, ident]) == 0.0


# ------------------------------------------------------------------ splitting

def test_split_with_identity_cut():
    whole, parts = split_check(sphere_scenario(1), identity_path(uniform_grid(64), 2))
    assert abs(whole - 2) <= 1e-6 and abs(parts - 2) <= 1e-6


@pytest.mark.parametrize("k", [-2, 1, 3])
def test_split_with_rotation_cut(k):
    whole, parts = split_check(sphere_scenario(1), rotation_transport(k))
    assert abs(whole - parts) <= 1e-6


def test_split_random_scenario():
    s = family_scenario(12, 2, 3)
    whole, parts = split_check(s, rotation_transport(-1, 2))
    assert abs(whole - parts) <= 1e-6


# ------------------------------------------------------------------ area

def test_flat_disk_area_is_pi():
    d = flat_disk_map(1, 2048)
    assert abs(disk_symplectic_area(d) - np.pi) <= 1e-3


def test_constant_disk_has_zero_area():
    d = flat_disk_map(2, 64)
    const = DiskMap(d.vertices, np.zeros_like(d.values), d.triangles)
    assert disk_symplectic_area(const) == 0.0
    with pytest.raises(DegenerateTriangulation):
        monotonicity_ratio(2, 0.0)


def test_degenerate_triangle_rejected():
    d = DiskMap(np.array([[0.0, 0], [1, 0], [2, 0]]), np.zeros((3, 2)), np.array([[0, 1, 2]]))
    with pytest.raises(DegenerateTriangulation):
        disk_symplectic_area(d)


def test_monotonicity_ratio_of_the_disk():
    s = sphere_scenario(1)
    r = monotonicity_ratio(disk_maslov(s), disk_symplectic_area(s.disk))
    assert abs(r - 2 / np.pi) <= 1e-3


def test_area_refines_towards_pi():
    errs = [abs(disk_symplectic_area(flat_disk_map(1, m)) - np.pi) for m in (64, 256, 1024)]
    assert errs[0] > errs[1] > errs[2]


# ------------------------------------------------------------------ transformations

def test_conjugation_keeps_the_index():
    # a general linear change of coordinates stretches the lift steps, so sample finely
    s = family_scenario(5, 2, 3, samples=256)
    psi = random_symplectic(9, 2, 0.5).matrix
    g = np.eye(4) + 0.2 * np.random.default_rng(1).standard_normal((4, 4))
    for m in (psi, g):
        c = conjugate_scenario(s, m)
        assert abs(disk_maslov(c) - disk_maslov(s)) <= 1e-6


def test_conjugated_sphere_area_is_kept():
    s = sphere_scenario(1, samples=64, segments=256)
    g = np.array([[2.0, 1.0], [0.5, 1.5]])
    c = conjugate_scenario(s, g)
    assert abs(disk_symplectic_area(c.disk, c.space.form) - disk_symplectic_area(s.disk)) < 1e-10


def test_direct_sum_adds_indices():
    sa = scenario_from_loop(random_framed_family(1, 1, 2).loop(256))
    sb = scenario_from_loop(random_framed_family(2, 2, 3).loop(256))
    total = disk_maslov(direct_sum_scenario(sa, sb))
    assert abs(total - disk_maslov(sa) - disk_maslov(sb)) <= 1e-6


def test_product_with_lagrangian_factor():
    # trivial framing in one factor, a loop of Lagrangians in the other
    lag = scenario_from_loop(random_framed_family(8, 2, 2, max_weight=2).loop(256))
    W = CoisotropicSubspace(SymplecticSpace.standard(1), np.eye(2))
    const = constant_scenario(W, samples=256)
    prod = direct_sum_scenario(lag, const)
    expect = lagrangian_loop_index(lag.grid, lag.bases, lag.space)
    assert abs(disk_maslov(prod) - expect) <= 1e-6


def test_lagrangian_embedding_of_regular_loops():
    for seed, n, k in [(0, 2, 3), (1, 1, 2), (5, 3, 4)]:
        s = family_scenario(seed, n, k, regular=True)
        grid, bases, space = lagrangian_embedding(s)
        assert lagrangian_loop_index(grid, bases, space) == round(disk_maslov(s))


def test_lagrangian_embedding_needs_a_regular_loop():
    s = family_scenario(3, 2, 3)
    with pytest.raises(NotALoop):
        lagrangian_loop_index(*lagrangian_embedding(s))


def test_nonstandard_form_scenario():
    s = family_scenario(4, 2, 3, nonstandard=True)
    assert not s.space.is_standard
    assert abs(maslov_framed_loop(s.framed_loop()) - maslov_framed_loop(s.framed_loop(), seed=3)) <= 1e-6
