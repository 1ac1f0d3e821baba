"""End-to-end scenarios: disks with coisotropic boundary data, circle actions,
clutching loops, planar surfaces, splitting along a circle, and symplectic area.

All disks use the constant trivialisation of R^{2n}.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOL
from .errors import DegenerateTriangulation, DimensionMismatch, NotALoop, ValidationError
from .lift import FramedLoop, FramedPoint, lift_framed_loop, maslov_framed_loop
from .paths import (
    SymplecticPath,
    check_grid,
    identity_path,
    m0,
    maslov_pair,
    maslov_path,
    reverse,
    uniform_grid,
)
from .symplectic import (
    CoisotropicSubspace,
    SymplecticSpace,
    darboux_basis,
    induced_map,
    standard_form,
)


@dataclass(frozen=True, eq=False)
class DiskMap:
    """Piecewise linear map of the unit disk: domain vertices, values, triangles."""

    vertices: np.ndarray
    values: np.ndarray
    triangles: np.ndarray


@dataclass(frozen=True, eq=False)
class DiskScenario:
    space: SymplecticSpace
    grid: np.ndarray
    bases: list
    frames: list
    boundary: np.ndarray = None
    disk: DiskMap = None
    tol: object = field(default=DEFAULT_TOL, repr=False)

    @property
    def n(self):
        return self.space.n

    def framed_loop(self):
        pts = [FramedPoint(CoisotropicSubspace(self.space, b), f) for b, f in zip(self.bases, self.frames)]
        return FramedLoop(self.grid, pts, self.tol)


@dataclass(frozen=True, eq=False)
class GroupActionScenario:
    """Circle action ``z (v_1..v_n) = (z^{w_1} v_1, ..)`` along a loop ``g(t)`` in U(1)."""

    weights: tuple
    grid: np.ndarray
    loop: np.ndarray
    tol: object = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        g = check_grid(self.grid)
        z = np.asarray(self.loop, dtype=complex)
        if z.shape != g.shape:
            raise DimensionMismatch("one group element per grid point required")
        if np.max(np.abs(np.abs(z) - 1)) > self.tol.unit:
            raise ValidationError("group elements must have modulus 1")
        if abs(z[-1] - z[0]) > self.tol.closure:
            raise NotALoop("group loop does not close")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "loop", z)

    @property
    def n(self):
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class ClutchingScenario:
    path: SymplecticPath


def action_matrix(weights, z):
    """Real 2n x 2n matrix of ``v -> (z^{w_j} v_j)``."""
    d = np.asarray(z, dtype=complex) ** np.asarray(weights)
    return np.block([[np.diag(d.real), -np.diag(d.imag)], [np.diag(d.imag), np.diag(d.real)]])


def flat_disk_map(n, segments=2048):
    """Fan triangulation of the unit disk mapped by ``z -> (z, 0, .., 0)``."""
    ang = 2 * np.pi * np.arange(segments) / segments
    verts = np.vstack([[0.0, 0.0], np.column_stack([np.cos(ang), np.sin(ang)])])
    vals = np.zeros((segments + 1, 2 * n))
    vals[:, 0] = verts[:, 0]
    vals[:, n] = verts[:, 1]
    i = np.arange(segments)
    tris = np.column_stack([np.zeros(segments, dtype=int), 1 + i, 1 + (i + 1) % segments])
    return DiskMap(verts, vals, tris)


def sphere_scenario(n, samples=128, segments=2048):
    """Flat unit disk in C^n with boundary on the unit sphere.

    ``W(s)`` is the tangent space of the sphere at ``x(s) = (e^{2 pi i s}, 0, ..)``
    and the framing is the quotient action of the diagonal circle action,
    which carries the sphere and its characteristic foliation to themselves.
    """
    if n < 1:
        raise ValidationError("n must be positive")
    space = SymplecticSpace.standard(n)
    grid = uniform_grid(samples)
    eye = np.eye(2 * n)
    base = np.delete(eye, 0, axis=1)
    W0 = CoisotropicSubspace(space, base)
    bases, frames, xs = [], [], []
    for k, s in enumerate(grid):
        z = np.exp(2j * np.pi * s)
        g = action_matrix(np.ones(n, dtype=int), z)
        b = base if k == len(grid) - 1 else g @ base
        W = CoisotropicSubspace(space, b)
        bases.append(b)
        frames.append(induced_map(g, W0, W))
        xs.append(g[:, 0])
    return DiskScenario(space, grid, bases, frames, np.array(xs), flat_disk_map(n, segments))


def constant_scenario(W, samples=16):
    W = CoisotropicSubspace.of(W)
    grid = uniform_grid(samples)
    q = W.quotient.dim
    return DiskScenario(W.space, grid, [W.basis] * len(grid), [np.eye(q)] * len(grid))


def scenario_from_loop(loop, disk=None):
    return DiskScenario(loop.space, loop.grid, [p.W.basis for p in loop.points],
                        [p.frame for p in loop.points], None, disk, loop.tol)


def disk_maslov(s, seed=None):
    """Maslov index of the disk: the framed-loop index of its boundary data."""
    return maslov_framed_loop(s.framed_loop(), seed)


def gaio_salamon_index(s):
    """Maslov index of the loop of linearised actions in the constant trivialisation."""
    n = s.n
    path = SymplecticPath(s.grid, np.array([action_matrix(s.weights, z) for z in s.loop]), standard_form(n), s.tol)
    return maslov_path(path)


def sphere_action(n, samples=128, weights=None):
    grid = uniform_grid(samples)
    w = tuple([1] * n) if weights is None else tuple(weights)
    z = np.exp(2j * np.pi * grid)
    z[-1] = 1.0
    return GroupActionScenario(w, grid, z)


def clutching_scenario(k, n=1, samples=64):
    """Clutching loop ``z -> z^k`` on the first complex coordinate."""
    grid = uniform_grid(samples)
    w = np.zeros(n, dtype=int)
    w[0] = k
    mats = np.array([action_matrix(w, np.exp(2j * np.pi * t)) for t in grid])
    mats[-1] = np.eye(2 * n)
    return ClutchingScenario(SymplecticPath(grid, mats))


def chern_from_clutching(s):
    """First Chern number of the bundle over the 2-sphere clutched by the loop."""
    return m0(s.path)


def closed_surface_maslov(c1):
    return 2 * int(c1)


def planar_surface_maslov(boundaries):
    """Sum of boundary pair indices against the trivial transport.

    Each boundary is a monodromy path oriented as the boundary of the surface.
    """
    total = 0.0
    for phi in boundaries:
        total += maslov_pair(phi, identity_path(phi.grid, phi.dim, phi.form))
    return total


def rotation_transport(k, n=1, samples=64):
    """Regular transport winding ``k`` times in the first complex coordinate."""
    return clutching_scenario(k, n, samples).path


def split_check(disk, cut, seed=None):
    """Index of the disk versus the sum over the two pieces cut along an inner circle.

    ``cut`` is the transport along the cut circle (counter-clockwise monodromy
    path). The inner disk sees it with its own orientation, the annulus with the
    reversed one; the annulus also carries the original boundary data.
    """
    loop = disk.framed_loop()
    lift = lift_framed_loop(loop, seed)
    whole = maslov_path(lift)
    inner = planar_surface_maslov([cut])
    annulus = maslov_path(lift) + planar_surface_maslov([reverse(cut)])
    return whole, inner + annulus


def disk_symplectic_area(disk, form=None):
    """Integral of ``u^* omega`` for a piecewise linear map of the disk.

    On each triangle the pulled-back form is constant, so the centroid rule is
    exact for the interpolant. Triangle orientation comes from the domain.
    """
    v = np.asarray(disk.vertices, dtype=float)
    u = np.asarray(disk.values, dtype=float)
    tris = np.asarray(disk.triangles, dtype=int)
    form = standard_form(u.shape[1] // 2) if form is None else form
    a, b, c = v[tris[:, 0]], v[tris[:, 1]], v[tris[:, 2]]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    if np.any(np.abs(cross) <= 1e-14 * max(1.0, float(np.max(np.abs(cross))))):
        raise DegenerateTriangulation("triangulation has triangles of zero area")
    du = u[tris[:, 1]] - u[tris[:, 0]]
    dw = u[tris[:, 2]] - u[tris[:, 0]]
    om = np.einsum("ki,ij,kj->k", du, form, dw)
    return float(0.5 * np.sum(np.sign(cross) * om))


def monotonicity_ratio(index, area):
    if area == 0:
        raise DegenerateTriangulation("zero symplectic area")
    return index / area


# ---------------------------------------------------------------- transformations

def _reframe_maps(space_from, space_to, bases_from, bases_to, ambient_maps):
    """Induced quotient maps for pointwise ambient maps between two scenarios."""
    return [induced_map(m, CoisotropicSubspace(space_from, b), CoisotropicSubspace(space_to, c))
            for m, b, c in zip(ambient_maps, bases_from, bases_to)]


def conjugate_scenario(s, psi):
    """Push all data forward by the isomorphism ``psi`` onto the form ``psi^{-T} w psi^{-1}``."""
    psi = np.asarray(psi, dtype=float)
    psi_inv = np.linalg.inv(psi)
    form = psi_inv.T @ s.space.form @ psi_inv
    space = SymplecticSpace(0.5 * (form - form.T))
    bases = [psi @ b for b in s.bases]
    # induced maps psi_W(t) : W(t) quotient -> (psi W(t)) quotient
    ind = []
    for b, c in zip(s.bases, bases):
        W = CoisotropicSubspace(s.space, b)
        Wp = CoisotropicSubspace(space, c)
        ind.append(Wp.quotient.coordinates(psi @ W.quotient.representatives))
    frames = [ind[k] @ s.frames[k] @ np.linalg.inv(ind[0]) if s.frames[k].size else s.frames[k]
              for k in range(len(bases))]
    boundary = None if s.boundary is None else s.boundary @ psi.T
    disk = None
    if s.disk is not None:
        disk = DiskMap(s.disk.vertices, s.disk.values @ psi.T, s.disk.triangles)
    return DiskScenario(space, s.grid, bases, frames, boundary, disk, s.tol)


def direct_sum_scenario(s1, s2):
    """Scenario of ``W1 + W2`` in the sum space with the product framing.

    The coordinates of the sum are (x of s1, x of s2, y of s1, y of s2) so the
    standard form stays standard.
    """
    if not np.array_equal(s1.grid, s2.grid):
        raise DimensionMismatch("scenarios must share a grid")
    n1, n2 = s1.n, s2.n
    perm = np.r_[np.arange(n1), 2 * n1 + np.arange(n2), n1 + np.arange(n1), 2 * n1 + n2 + np.arange(n2)]
    P = np.eye(2 * (n1 + n2))[:, perm]  # block coordinates -> interleaved coordinates
    form = P @ sla.block_diag(s1.space.form, s2.space.form) @ P.T
    space = SymplecticSpace(form)
    bases, frames = [], []
    T0 = None
    for k in range(len(s1.grid)):
        b = P @ sla.block_diag(s1.bases[k], s2.bases[k])
        W = CoisotropicSubspace(space, b)
        W1 = CoisotropicSubspace(s1.space, s1.bases[k])
        W2 = CoisotropicSubspace(s2.space, s2.bases[k])
        reps = P @ sla.block_diag(W1.quotient.representatives, W2.quotient.representatives)
        T = W.quotient.coordinates(reps)  # block rep coords -> W rep coords
        if k == 0:
            T0 = T
        f = sla.block_diag(s1.frames[k], s2.frames[k])
        frames.append(T @ f @ np.linalg.inv(T0) if f.size else f)
        bases.append(b)
    return DiskScenario(space, s1.grid, bases, frames, tol=s1.tol)


def lagrangian_embedding(s):
    """Graph of the quotient trivialisation, a loop of Lagrangians in ``V + R^{2p}``.

    For a regular framed loop with ``Phi(0) = I`` the map
    ``v -> N0 Phi(t)^{-1} [v]`` (``[v]`` the quotient coordinates of ``v`` in
    ``W(t)``, ``N0^T J N0 = w_{W0}``) pulls back the standard form ``J`` to
    ``w`` on ``W(t)``. Its graph is Lagrangian for ``w + (-J)``. Returns
    ``(grid, bases, space)``.
    """
    loop = s.framed_loop()
    W0 = loop.base
    q0 = W0.quotient
    p2 = q0.dim
    N0 = np.linalg.inv(darboux_basis(q0.form)) if p2 else np.zeros((0, 0))
    J = standard_form(p2 // 2) if p2 else np.zeros((0, 0))
    form = sla.block_diag(s.space.form, -J)
    space = SymplecticSpace(form)
    bases = []
    for pt in loop.points:
        q = pt.W.quotient.coordinates(pt.W.basis)
        graph = N0 @ np.linalg.solve(pt.frame, q) if p2 else np.zeros((0, pt.W.dim))
        bases.append(np.vstack([pt.W.basis, graph]))
    return loop.grid, bases, space
