"""Random instances for property checks: maps, forms, framed loops, homotopies.

Framed loops are built in model coordinates. With ``A`` an adapted basis of the
base ``W0`` (the image of the model coisotropic ``M``), a path ``Gamma(t)`` in
the symplectic group with ``Gamma(1) M = M`` gives the loop

    W(t) = A Gamma(t) M,   Phi(t) = (A Gamma(t) A^{-1})_{W0} K(t)

where ``K(t)`` acts on the quotient of ``W0``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOL
from .lift import FramedLoop, FramedPoint, embed_quotient
from .paths import uniform_grid
from .symplectic import (
    CoisotropicSubspace,
    SymplecticSpace,
    adapted_darboux_basis,
    hamiltonian,
    induced_map,
    model_coisotropic_basis,
    quotient_columns,
    random_symmetric,
    random_symplectic,
    stabilizer_algebra_element,
    standard_form,
    to_real,
)


def _rng(seed):
    return np.random.default_rng(seed)


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def unitary_to_symplectic(u):
    """``X + iY  ->  [[X, -Y], [Y, X]]``."""
    x, y = u.real, u.imag
    return np.block([[x, -y], [y, x]])


def random_hamiltonian(rng, form, magnitude=1.0):
    x = hamiltonian(form, random_symmetric(rng, form.shape[0]))
    return x * (magnitude / max(1.0, np.linalg.norm(x, 2)))


def random_form(rng, n, spread=0.3):
    """A nonstandard symplectic form ``G^{-T} Omega G^{-1}`` with ``G`` near the identity."""
    g = np.eye(2 * n) + spread * rng.standard_normal((2 * n, 2 * n)) / np.sqrt(2 * n)
    gi = np.linalg.inv(g)
    f = gi.T @ standard_form(n) @ gi
    return 0.5 * (f - f.T)


def random_hyperbolic(rng, n):
    """Symplectic matrix without unit-circle spectrum: ``diag(P, P^{-T})`` conjugated."""
    d = rng.uniform(1.3, 3.0, n) * rng.choice([-1.0, 1.0], n)
    d = np.where(rng.random(n) < 0.5, d, 1 / d)
    q = np.eye(n) + 0.3 * rng.standard_normal((n, n))
    p = q @ np.diag(d) @ np.linalg.inv(q)
    h = sla.block_diag(p, np.linalg.inv(p).T)
    s = random_symplectic(rng, n, 0.5).matrix
    return s @ h @ np.linalg.inv(s)


def winding_loop(weights, t):
    """Unitary loop ``diag(e^{2 pi i w_j t})`` as a real symplectic matrix."""
    return unitary_to_symplectic(np.diag(np.exp(2j * np.pi * np.asarray(weights) * t)))


def half_turn(n, j, t):
    """Rotation by ``pi t`` in the (e_j, f_j) plane."""
    w = np.ones(n, dtype=complex)
    w[j] = np.exp(1j * np.pi * t)
    return unitary_to_symplectic(np.diag(w))


@dataclass
class FramedLoopFamily:
    """Random ingredients of a framed loop; ``loop()`` samples it.

    ``deform`` is a Hamiltonian ``X'`` used for the homotopy
    ``Gamma_s(t) = expm(s sin^2(pi t) X') Gamma(t)``.
    """

    space: SymplecticSpace
    n: int
    k: int
    adapted: np.ndarray
    bump: np.ndarray
    weights: np.ndarray
    drift: np.ndarray
    quotient_weights: np.ndarray
    quotient_bump: np.ndarray
    quotient_drift: np.ndarray
    deform: np.ndarray
    flip: bool = False

    @property
    def p(self):
        return self.k - self.n

    def gamma(self, t, s=0.0):
        n = self.n
        g = sla.expm(np.sin(np.pi * t) ** 2 * self.bump) @ winding_loop(self.weights, t) @ sla.expm(t * self.drift)
        if self.flip:
            g = g @ half_turn(n, n - 1, t)
        if s:
            g = sla.expm(s * np.sin(np.pi * t) ** 2 * self.deform) @ g
        return g

    def quotient_path(self, t):
        """Quotient factor ``K(t)`` in model quotient coordinates (standard form on R^{2p})."""
        p = self.p
        if p == 0:
            return np.zeros((0, 0))
        return (
            sla.expm(np.sin(np.pi * t) ** 2 * self.quotient_bump)
            @ winding_loop(self.quotient_weights, t)
            @ sla.expm(t * self.quotient_drift)
        )

    def loop(self, samples=128, s=0.0, grid=None, tol=DEFAULT_TOL):
        grid = uniform_grid(samples) if grid is None else grid
        n, k, p = self.n, self.k, self.p
        A = self.adapted
        A_inv = np.linalg.solve(standard_form(n), A.T @ self.space.form)
        model = model_coisotropic_basis(n, k)
        W0 = CoisotropicSubspace(self.space, A @ model)
        F0 = W0.quotient.coordinates(A[:, quotient_columns(n, p)])
        pts = []
        for i, t in enumerate(grid):
            g = self.gamma(t, s)
            if i == len(grid) - 1:
                # end exactly on the base subspace
                W = W0
            else:
                W = CoisotropicSubspace(self.space, A @ g @ model)
            ambient = A @ g @ A_inv
            if p:
                K = F0 @ self.quotient_path(t) @ np.linalg.inv(F0)
                frame = induced_map(ambient, W0, W) @ K
            else:
                frame = np.zeros((0, 0))
            pts.append(FramedPoint(W, frame))
        return FramedLoop(grid, pts, tol)


def random_framed_family(seed, n, k, regular=False, orientable=True, nonstandard=False, magnitude=0.6, max_weight=1):
    """Random framed loop family in ``R^{2n}`` with coisotropics of dimension ``k``.

    ``regular`` makes the frame monodromy the identity. ``orientable=False``
    (needs ``k < 2n``) adds a half-turn that reverses the orientation of ``W``.
    """
    rng = _rng(seed)
    p = k - n
    form = random_form(rng, n) if nonstandard else standard_form(n)
    space = SymplecticSpace(form)
    A = space.darboux @ random_symplectic(rng, n, magnitude).matrix
    std = standard_form(n)
    bump = random_hamiltonian(rng, std, magnitude)
    deform = random_hamiltonian(rng, std, magnitude)
    model = CoisotropicSubspace(SymplecticSpace(std), model_coisotropic_basis(n, k))
    drift = stabilizer_algebra_element(rng, model, trivial_quotient=regular, magnitude=magnitude)
    weights = rng.integers(-max_weight, max_weight + 1, n)
    if p:
        qstd = standard_form(p)
        qbump = random_hamiltonian(rng, qstd, magnitude)
        qweights = rng.integers(-max_weight, max_weight + 1, p)
        qdrift = np.zeros((2 * p, 2 * p)) if regular else random_hamiltonian(rng, qstd, magnitude)
    else:
        qbump = qdrift = np.zeros((0, 0))
        qweights = np.zeros(0, dtype=int)
    flip = not orientable
    if flip and k == 2 * n:
        raise ValueError("the full space cannot be made non-orientable")
    return FramedLoopFamily(space, n, k, A, bump, weights, drift, qweights, qbump, qdrift, deform, flip)


def random_lagrangian_family(seed, n, nonstandard=False, magnitude=0.6, max_weight=1):
    return random_framed_family(seed, n, n, nonstandard=nonstandard, magnitude=magnitude, max_weight=max_weight)


def random_invariant_automorphism(rng, W, positive=True, magnitude=0.6):
    """Random automorphism preserving the coisotropic ``W``.

    Built as ``A E(K) expm(Y) A^{-1}`` with ``A`` adapted to ``W``, ``K`` a random
    quotient automorphism and ``Y`` in the stabiliser algebra of the model. With
    ``positive=False`` a half-turn in the last (a, b) plane is included half of
    the time, which makes ``det(Psi|W)`` negative.
    """
    space = W.space
    n, k = space.n, W.dim
    p = k - n
    A = adapted_darboux_basis(W)
    A_inv = np.linalg.solve(standard_form(n), A.T @ space.form)
    model = CoisotropicSubspace(SymplecticSpace.standard(n), model_coisotropic_basis(n, k))
    y = stabilizer_algebra_element(rng, model, trivial_quotient=False, magnitude=magnitude)
    K = random_symplectic(rng, p, 1.5).matrix if p else np.zeros((0, 0))
    m = embed_quotient(K, n, p) @ sla.expm(y)
    if not positive and k < 2 * n and rng.random() < 0.5:
        m = m @ half_turn(n, n - 1, 1.0)
    return A @ m @ A_inv


def clutching_loop_samples(k, n=1, samples=64):
    grid = uniform_grid(samples)
    w = np.zeros(n, dtype=int)
    w[0] = k
    return grid, np.array([winding_loop(w, t) for t in grid])


def complex_vector(x):
    return to_real(np.asarray(x, dtype=complex))
