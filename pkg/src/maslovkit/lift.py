"""Framed coisotropic loops, their lifts to paths of automorphisms, and the
resulting Maslov index. Also the det^2 index of Lagrangian loops.

Lifting runs in Darboux coordinates ``x = D y`` of the ambient form. There a
unitary frame ``Z_k`` adapted to ``W(t_k)`` is carried from sample to sample by
orthogonal projection followed by polar normalisation, and the quotient part is
corrected to match the prescribed framing.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOL
from .errors import (
    DimensionMismatch,
    NotALoop,
    NotLagrangian,
    NotSymplectic,
    StepTooCoarse,
)
from .paths import SymplecticPath, UnitCirclePath, check_grid, maslov_path, nearest_integer, winding
from .symplectic import (
    CoisotropicSubspace,
    Subspace,
    SymplecticMap,
    SymplecticSpace,
    adapted_darboux_basis,
    canonical_basis,
    frame_from_parts,
    inverse_sqrt_psd,
    is_lagrangian,
    orthonormal_basis,
    principal_angle,
    quotient_columns,
    random_symplectic,
    stabilizer_algebra_element,
    standard_form,
    symplectic_complement,
    to_complex,
    unitary_adapted_frame,
)


@dataclass(frozen=True, eq=False)
class FramedPoint:
    """A coisotropic ``W`` with a symplectic map from the base quotient to ``W``'s quotient.

    ``frame`` is written in the representative bases of ``linear_quotient``.
    """

    W: CoisotropicSubspace
    frame: np.ndarray


@dataclass(frozen=True, eq=False)
class FramedLoop:
    grid: np.ndarray
    points: list
    tol: object = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        g = check_grid(self.grid)
        pts = [FramedPoint(CoisotropicSubspace.of(p.W), np.asarray(p.frame, dtype=float)) for p in self.points]
        if len(pts) != g.size:
            raise DimensionMismatch(f"{len(pts)} framed points for {g.size} grid points")
        base = pts[0].W
        q0 = base.quotient
        for k, p in enumerate(pts):
            if p.W.space is not base.space and not p.W.space.same_as(base.space):
                raise DimensionMismatch("sample lives in a different space", f"subspaces[{k}]")
            if p.W.dim != base.dim:
                raise DimensionMismatch(f"dimension {p.W.dim}, base has {base.dim}", f"subspaces[{k}]")
            qk = p.W.quotient
            if p.frame.shape != (q0.dim, qk.dim):
                raise DimensionMismatch(f"shape {p.frame.shape}, expected {(q0.dim, qk.dim)}", f"frames[{k}]")
            if q0.dim:
                defect = float(np.max(np.abs(p.frame.T @ qk.form @ p.frame - q0.form)))
                if defect > 1e-8:
                    raise NotSymplectic(f"frame is not symplectic (defect {defect:.2e})", f"frames[{k}]")
        if principal_angle(pts[-1].W.basis, base.basis) > self.tol.angle:
            raise NotALoop("W(1) differs from W(0)", "subspaces")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "points", pts)

    @property
    def base(self):
        return self.points[0].W

    @property
    def space(self):
        return self.base.space

    def __len__(self):
        return self.grid.size

    def frame_monodromy(self):
        """``Phi(0)^{-1} Phi(1)`` on the base quotient (identity for regular framed loops)."""
        f0 = self.points[0].frame
        f1 = self.points[-1].frame
        return np.linalg.solve(f0, f1) if f0.size else f0


def framed_loop(grid, subspaces, frames, space=None, tol=DEFAULT_TOL):
    """Build a FramedLoop from bases (or Subspace objects) and frame matrices."""
    pts = []
    for w, f in zip(subspaces, frames):
        if not isinstance(w, CoisotropicSubspace):
            w = CoisotropicSubspace(space, w.basis if hasattr(w, "basis") else w)
        pts.append(FramedPoint(w, f))
    return FramedLoop(grid, pts, tol)


def embed_quotient(K, n, p):
    """Act by ``K`` on the model quotient block, identity elsewhere."""
    E = np.eye(2 * n)
    idx = quotient_columns(n, p)
    E[np.ix_(idx, idx)] = K
    return E


def _sp_inverse_std(A, form):
    # A maps (R^{2n}, standard) to (V, form); inverse is J^{-1} A^T form
    n = A.shape[0] // 2
    return np.linalg.solve(standard_form(n), A.T @ form)


def _quotient_frame(W, A, n, p):
    """Quotient coordinates (in ``W``'s representatives) of the model quotient under ``A``."""
    return W.quotient.coordinates(A[:, quotient_columns(n, p)])


def transitive_frame(W0, target, tol=DEFAULT_TOL):
    """An automorphism carrying ``W0`` onto ``target.W`` and inducing ``target.frame``."""
    W0 = CoisotropicSubspace.of(W0)
    W = CoisotropicSubspace.of(target.W)
    if W.dim != W0.dim:
        raise DimensionMismatch(f"dimensions {W0.dim} and {W.dim} differ")
    space = W0.space
    n, p = space.n, W0.dim - space.n
    A0 = adapted_darboux_basis(W0, tol)
    A = adapted_darboux_basis(W, tol)
    F0 = _quotient_frame(W0, A0, n, p)
    F = _quotient_frame(W, A, n, p)
    K = np.linalg.solve(F, np.asarray(target.frame) @ F0) if p else np.zeros((0, 0))
    return SymplecticMap(space, A @ embed_quotient(K, n, p) @ _sp_inverse_std(A0, space.form), tol.updated(symplectic=1e-8))


def _transport_frame(Z, basis_std, n, p, min_sv=0.5):
    """Move the unitary adapted frame ``Z`` onto the coisotropic with basis ``basis_std``."""
    std = SymplecticSpace.standard(n)
    c_new = symplectic_complement(std, basis_std).basis
    qw = orthonormal_basis(basis_std)
    pw = qw @ qw.T
    pc = c_new @ c_new.T
    d = n - p
    u = Z[:, :p]
    c = Z[:, p : p + d]
    if p:
        U = to_complex((pw - pc) @ u)
        g = U.conj().T @ U
        if np.min(np.linalg.eigvalsh(g)) < min_sv**2:
            raise StepTooCoarse("complex part of W moved too far between samples; refine the grid")
        U = U @ inverse_sqrt_psd(g)
    else:
        U = np.zeros((n, 0), dtype=complex)
    if d:
        C = pc @ c
        g = C.T @ C
        if np.min(np.linalg.eigvalsh(g)) < min_sv**2:
            raise StepTooCoarse("isotropic part of W moved too far between samples; refine the grid")
        C = C @ inverse_sqrt_psd(g).real
    else:
        C = np.zeros((2 * n, 0))
    return frame_from_parts(U, C)


@dataclass(frozen=True)
class LiftGauge:
    """Random data turning the deterministic lift into another admissible one.

    ``darboux`` replaces the ambient Darboux basis ``D`` by ``D S``; ``x0`` and
    ``x1`` are Hamiltonian matrices preserving ``W0`` with trivial quotient
    action, and the lift is right-multiplied by ``expm(x0) expm(t x1)``.
    """

    darboux: np.ndarray
    x0: np.ndarray
    x1: np.ndarray

    @classmethod
    def random(cls, seed, W0, magnitude=0.3):
        rng = np.random.default_rng(seed)
        space = W0.space
        # a mild change of Darboux basis; strong distortion only costs samples
        s = random_symplectic(rng, space.n, magnitude / 2).matrix
        x0 = stabilizer_algebra_element(rng, W0, True, magnitude)
        x1 = stabilizer_algebra_element(rng, W0, True, magnitude)
        return cls(s, x0, x1)


def lift_framed_loop(loop, seed=None, step_bound=None):
    """Path ``Psi(t_k)`` with ``Psi W0 = W(t_k)`` inducing the frame ``Phi(t_k)``.

    With ``seed=None`` the deterministic lift is returned, starting at the
    transitive frame of the base point. Any other seed gives a different
    admissible lift; the Maslov index does not depend on it.
    """
    tol = loop.tol
    bound = tol.step if step_bound is None else step_bound
    space = loop.space
    form = space.form
    n = space.n
    W0 = loop.base
    p = W0.dim - n
    D = space.darboux
    gauge = None if seed is None else LiftGauge.random(seed, W0)
    if gauge is not None:
        D = D @ gauge.darboux
    D_inv = np.linalg.solve(standard_form(n), D.T @ form)
    Z = unitary_adapted_frame(D_inv @ W0.basis, tol)
    A0 = D @ Z
    A0_inv = _sp_inverse_std(A0, form)
    F0 = _quotient_frame(W0, A0, n, p)
    out = np.empty((len(loop), 2 * n, 2 * n))
    for k, pt in enumerate(loop.points):
        if k:
            Z = _transport_frame(Z, D_inv @ pt.W.basis, n, p)
        A = D @ Z
        if p:
            F = _quotient_frame(pt.W, A, n, p)
            K = np.linalg.solve(F, pt.frame @ F0)
        else:
            K = np.zeros((0, 0))
        psi = A @ embed_quotient(K, n, p) @ A0_inv
        if gauge is not None:
            psi = psi @ sla.expm(gauge.x0) @ sla.expm(loop.grid[k] * gauge.x1)
        if k:
            prev_inv = np.linalg.solve(form, out[k - 1].T @ form)
            step = float(np.max(np.abs(psi @ prev_inv - np.eye(2 * n))))
            if step >= bound:
                raise StepTooCoarse(f"lift correction {step:.3f} at sample {k} exceeds {bound}; refine the grid")
        out[k] = psi
    return SymplecticPath(loop.grid, out, form, tol.updated(symplectic=1e-8))


def maslov_framed_loop(loop, seed=None):
    """Maslov index of a framed loop, computed from a lift."""
    return maslov_path(lift_framed_loop(loop, seed), loop.tol)


def lagrangian_loop_index(grid, subspaces, space=None, tol=DEFAULT_TOL):
    """Winding of ``det(U(t))^2 / det(U(0))^2`` for a loop of Lagrangians.

    ``U(t)`` is an orthonormal basis of ``W(t)`` in Darboux coordinates, read
    as a unitary ``n x n`` matrix; the square removes the basis dependence.
    """
    g = check_grid(grid)
    bases = [w.basis if hasattr(w, "basis") else np.asarray(w, dtype=float) for w in subspaces]
    if len(bases) != g.size:
        raise DimensionMismatch("one subspace per grid point required")
    if space is None:
        space = subspaces[0].space if hasattr(subspaces[0], "space") else SymplecticSpace.standard(bases[0].shape[0] // 2)
    n = space.n
    D_inv = space.darboux_inv
    vals = np.empty(g.size, dtype=complex)
    for k, b in enumerate(bases):
        if b.shape != (2 * n, n) or not is_lagrangian(space, Subspace(space, b), tol):
            raise NotLagrangian(f"sample {k} is not Lagrangian")
        c = canonical_basis(D_inv @ b, tol)
        vals[k] = np.linalg.det(to_complex(c)) ** 2
    if principal_angle(bases[0], bases[-1]) > tol.angle:
        raise NotALoop("loop of Lagrangians does not close")
    vals = vals / vals[0]
    vals /= np.abs(vals)
    return nearest_integer(winding(UnitCirclePath(g, vals, tol), tol), tol, "Lagrangian index")
