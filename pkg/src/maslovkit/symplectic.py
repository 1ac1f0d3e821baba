"""Tolerant linear symplectic algebra.

Vectors are columns. A form matrix ``Omega`` represents ``w(a, b) = a^T Omega b``.
The standard form on R^{2n} uses coordinates (x_1..x_n, y_1..y_n) and
``Omega = [[0, I], [-I, 0]]``, so ``w(e_i, f_i) = 1``. The standard complex
structure is ``J = -Omega``, i.e. ``(x, y) <-> x + iy`` and ``J`` is
multiplication by ``i``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOL
from .errors import (
    DimensionMismatch,
    NotCoisotropic,
    NotSymplectic,
    RankDeficientInput,
    SubspaceNotPreserved,
    ValidationError,
)


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def standard_form(n):
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def standard_complex_structure(n):
    return -standard_form(n)


# ---------------------------------------------------------------- basic linear algebra

def rank_cutoff(s, tol=DEFAULT_TOL):
    return tol.rank * (s[0] if s.size else 0.0)


def orthonormal_basis(a, tol=DEFAULT_TOL):
    """Orthonormal basis of the column span, relative rank cutoff."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return np.zeros((a.shape[0], 0))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.sum(s > rank_cutoff(s, tol))) if s[0] > 0 else 0
    return u[:, :r]


def null_space(a, tol=DEFAULT_TOL, scale=None):
    """Orthonormal basis of ``ker a``.

    ``scale`` fixes the singular value the relative cutoff refers to; by default
    the largest singular value of ``a``.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    ref = s[0] if scale is None else scale
    if ref == 0:
        return np.eye(cols)
    r = int(np.sum(s > tol.rank * ref))
    return vt[r:].T.copy()


def canonical_basis(a, tol=DEFAULT_TOL):
    """Orthonormal basis that depends on ``span(a)`` only.

    Built from the orthogonal projector by pivoted QR with positive diagonal,
    so the standard basis vectors of a coordinate subspace come back unchanged.
    """
    q0 = orthonormal_basis(a, tol)
    r = q0.shape[1]
    if r == 0:
        return q0
    proj = q0 @ q0.T
    q, rr, _ = sla.qr(proj, pivoting=True)
    signs = np.sign(np.diag(rr)[:r])
    signs[signs == 0] = 1.0
    return q[:, :r] * signs


def principal_angle(a, b):
    """Largest principal angle between two column spans (pi/2 if dims differ)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[1] != b.shape[1]:
        return np.pi / 2
    if a.shape[1] == 0:
        return 0.0
    return float(np.max(sla.subspace_angles(a, b)))


def intersect(a, b, tol=DEFAULT_TOL):
    """Orthonormal basis of ``span(a) & span(b)``."""
    qa = orthonormal_basis(a, tol)
    qb = orthonormal_basis(b, tol)
    if qa.shape[1] == 0 or qb.shape[1] == 0:
        return np.zeros((qa.shape[0], 0))
    k = null_space(np.hstack([qa, -qb]), tol, scale=1.0)
    return canonical_basis(qa @ k[: qa.shape[1]], tol)


def to_complex(v):
    """Real (2n, ...) array in (x, y) coordinates -> complex (n, ...) array."""
    n = v.shape[0] // 2
    return v[:n] + 1j * v[n:]


def to_real(z):
    return np.concatenate([z.real, z.imag], axis=0)


def inverse_sqrt_psd(g):
    w, v = np.linalg.eigh(g)
    return (v / np.sqrt(w)) @ v.conj().T


# ---------------------------------------------------------------- domain types

@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    form: np.ndarray

    def __post_init__(self):
        form = _frozen(self.form)
        object.__setattr__(self, "form", form)
        if form.ndim != 2 or form.shape[0] != form.shape[1] or form.shape[0] % 2:
            raise DimensionMismatch(f"form must be a square even-dimensional matrix, got {form.shape}")
        if form.shape[0] == 0:
            raise DimensionMismatch("zero-dimensional symplectic space")
        scale = max(1.0, float(np.max(np.abs(form))))
        if np.max(np.abs(form + form.T)) > DEFAULT_TOL.symplectic * scale:
            raise ValidationError("form is not skew-symmetric")
        s = np.linalg.svd(form, compute_uv=False)
        if s[-1] <= DEFAULT_TOL.rank * s[0]:
            raise ValidationError("form is degenerate")

    @classmethod
    def standard(cls, n):
        return cls(standard_form(n))

    @property
    def dim(self):
        return self.form.shape[0]

    @property
    def n(self):
        return self.dim // 2

    @cached_property
    def is_standard(self):
        return bool(np.array_equal(self.form, standard_form(self.n)))

    @cached_property
    def darboux(self):
        """Matrix ``D`` with ``D^T Omega D`` equal to the standard form."""
        if self.is_standard:
            return _frozen(np.eye(self.dim))
        return _frozen(darboux_basis(self.form))

    @cached_property
    def darboux_inv(self):
        return _frozen(np.linalg.inv(self.darboux))

    def pair(self, a, b):
        return np.asarray(a).T @ self.form @ np.asarray(b)

    def negated(self):
        return SymplecticSpace(-self.form)

    def direct_sum(self, other):
        return SymplecticSpace(sla.block_diag(self.form, other.form))

    def same_as(self, other):
        return self is other or (
            self.form.shape == other.form.shape and np.array_equal(self.form, other.form)
        )


def symplectic_defect(matrix, form_in, form_out=None):
    """Relative ``max |M^T Omega_out M - Omega_in|``."""
    form_out = form_in if form_out is None else form_out
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(form_in)))) * max(1.0, float(np.max(np.abs(m)))) ** 2
    return float(np.max(np.abs(m.T @ form_out @ m - form_in))) / scale


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    space: SymplecticSpace
    matrix: np.ndarray
    tol: object = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatch(f"expected {self.space.dim}x{self.space.dim} matrix, got {m.shape}")
        defect = symplectic_defect(m, self.space.form)
        if defect > self.tol.symplectic:
            raise NotSymplectic(f"symplectic defect {defect:.3e} exceeds {self.tol.symplectic:.1e}")

    @classmethod
    def identity(cls, space):
        return cls(space, np.eye(space.dim))

    def inverse(self):
        # Psi^{-1} = Omega^{-1} Psi^T Omega avoids a generic inverse
        om = self.space.form
        return SymplecticMap(self.space, np.linalg.solve(om, self.matrix.T @ om), self.tol)

    def __matmul__(self, other):
        if isinstance(other, SymplecticMap):
            return SymplecticMap(self.space, self.matrix @ other.matrix, self.tol)
        return self.matrix @ other


@dataclass(frozen=True, eq=False)
class Subspace:
    space: SymplecticSpace
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim == 1:
            b = b[:, None]
        if b.shape[0] != self.space.dim:
            raise DimensionMismatch(f"basis has {b.shape[0]} rows, space has dimension {self.space.dim}")
        if b.shape[1] > 0:
            s = np.linalg.svd(b, compute_uv=False)
            if s[-1] <= DEFAULT_TOL.rank * max(1.0, s[0]):
                raise RankDeficientInput("basis columns are linearly dependent")
        object.__setattr__(self, "basis", _frozen(b))

    @property
    def dim(self):
        return self.basis.shape[1]

    @cached_property
    def orthonormal(self):
        return _frozen(orthonormal_basis(self.basis))

    def contains(self, vectors, tol=DEFAULT_TOL):
        v = np.asarray(vectors, dtype=float)
        if v.size == 0:
            return True
        q = self.orthonormal
        resid = v - q @ (q.T @ v)
        scale = max(1.0, float(np.max(np.abs(v))))
        return float(np.max(np.abs(resid))) <= tol.angle * scale

    def same_span(self, other, tol=DEFAULT_TOL):
        return principal_angle(self.basis, other.basis) <= tol.angle


def symplectic_complement(space, W, tol=DEFAULT_TOL):
    """``W^w = ker(B^T Omega)``, returned with a span-determined orthonormal basis."""
    b = W.basis if isinstance(W, Subspace) else np.asarray(W, dtype=float)
    if b.shape[1]:
        s = np.linalg.svd(b, compute_uv=False)
        if s[-1] <= tol.rank * s[0]:
            raise RankDeficientInput("basis columns are linearly dependent")
    q = orthonormal_basis(b, tol)
    ker = null_space(q.T @ space.form, tol, scale=float(np.linalg.norm(space.form, 2)))
    return Subspace(space, canonical_basis(ker, tol) if ker.shape[1] else ker)


def is_coisotropic(space, W, tol=DEFAULT_TOL):
    comp = symplectic_complement(space, W, tol)
    sub = W if isinstance(W, Subspace) else Subspace(space, W)
    return sub.contains(comp.basis, tol)


def is_lagrangian(space, W, tol=DEFAULT_TOL):
    return W.dim * 2 == space.dim and is_coisotropic(space, W, tol)


class CoisotropicSubspace(Subspace):
    """A subspace containing its symplectic complement.

    The complement is computed once and kept on the instance.
    """

    def __post_init__(self):
        super().__post_init__()
        comp = symplectic_complement(self.space, self, DEFAULT_TOL)
        if comp.dim != self.space.dim - self.dim or not self.contains(comp.basis):
            raise NotCoisotropic(f"{self.dim}-dimensional subspace is not coisotropic")
        object.__setattr__(self, "complement", comp)

    @classmethod
    def of(cls, W):
        return W if isinstance(W, cls) else cls(W.space, W.basis)

    @property
    def codim(self):
        return self.space.dim - self.dim

    @property
    def quotient_dim(self):
        return 2 * self.dim - self.space.dim

    @cached_property
    def quotient(self):
        return linear_quotient(self)


# ---------------------------------------------------------------- quotients

@dataclass(frozen=True, eq=False)
class QuotientSpace:
    parent: CoisotropicSubspace
    representatives: np.ndarray
    form: np.ndarray

    @property
    def dim(self):
        return self.representatives.shape[1]

    @cached_property
    def _coord_op(self):
        if self.dim == 0:
            return np.zeros((0, self.parent.space.dim))
        return np.linalg.solve(self.form, self.representatives.T @ self.parent.space.form)

    def coordinates(self, vectors):
        """Coordinates of ``vectors + W^w`` in the representative basis."""
        return self._coord_op @ np.asarray(vectors, dtype=float)

    @cached_property
    def space(self):
        return SymplecticSpace(self.form) if self.dim else None


def linear_quotient(W, tol=DEFAULT_TOL):
    """The symplectic quotient ``W / W^w``.

    Representatives are the Euclidean-orthogonal complement of ``W^w`` inside
    ``W``, with the span-determined basis of ``canonical_basis``, so frames
    stored in these coordinates do not depend on the basis chosen for ``W``.
    """
    if not isinstance(W, CoisotropicSubspace):
        W = CoisotropicSubspace(W.space, W.basis)
    c = W.complement.basis
    qw = W.orthonormal
    qdim = W.quotient_dim
    if qdim == 0:
        reps = np.zeros((W.space.dim, 0))
    else:
        reps = canonical_basis(qw @ qw.T - c @ c.T, tol)
        if reps.shape[1] != qdim:
            raise NotCoisotropic("quotient has the wrong dimension")
    form = reps.T @ W.space.form @ reps
    form = 0.5 * (form - form.T)
    return QuotientSpace(W, _frozen(reps), _frozen(form))


def induced_map(psi, W, W2, tol=DEFAULT_TOL):
    """Matrix of ``Psi_W : W/W^w -> W2/W2^w`` in the representative bases."""
    m = psi.matrix if isinstance(psi, SymplecticMap) else np.asarray(psi, dtype=float)
    W = CoisotropicSubspace.of(W)
    W2 = CoisotropicSubspace.of(W2)
    image = m @ W.basis
    if principal_angle(image, W2.basis) > tol.angle * max(1.0, np.linalg.cond(m)):
        raise SubspaceNotPreserved("Psi W does not match W'")
    return W2.quotient.coordinates(m @ W.quotient.representatives)


# ---------------------------------------------------------------- Darboux bases

def symplectic_gram_schmidt(vectors, form, tol=DEFAULT_TOL):
    """Split ``vectors`` into a symplectic basis ``(E, F)`` of their span.

    Each step takes the first remaining vector and pairs it with the remaining
    vector of largest pairing. Returns ``(E, F)`` with ``E^T Omega F = I`` and
    ``E^T Omega E = F^T Omega F = 0``; vectors left without a partner are dropped.
    """
    rest = [np.array(v, dtype=float) for v in np.asarray(vectors, dtype=float).T]
    scale = float(np.max(np.abs(form))) if form.size else 1.0
    es, fs = [], []
    while rest:
        e = rest.pop(0)
        if not rest:
            break
        pairings = np.array([e @ form @ x for x in rest])
        j = int(np.argmax(np.abs(pairings)))
        size = np.linalg.norm(e) * max(np.linalg.norm(x) for x in rest)
        if abs(pairings[j]) <= tol.rank * scale * max(size, 1e-300):
            continue
        f = rest.pop(j) / pairings[j]
        es.append(e)
        fs.append(f)
        rest = [x - (x @ form @ f) * e + (x @ form @ e) * f for x in rest]
    n = len(es)
    dim = form.shape[0]
    if n == 0:
        return np.zeros((dim, 0)), np.zeros((dim, 0))
    return np.column_stack(es), np.column_stack(fs)


def darboux_basis(form, tol=DEFAULT_TOL):
    """``D`` with ``D^T form D`` standard, from Gram-Schmidt on the unit vectors."""
    form = np.asarray(form, dtype=float)
    e, f = symplectic_gram_schmidt(np.eye(form.shape[0]), form, tol)
    if 2 * e.shape[1] != form.shape[0]:
        raise ValidationError("form is degenerate")
    return np.hstack([e, f])


def model_coisotropic_basis(n, k):
    """Basis of ``span{a_1..a_n, b_1..b_{k-n}}`` in standard coordinates."""
    if not n <= k <= 2 * n:
        raise NotCoisotropic(f"no coisotropic subspace of dimension {k} in R^{2 * n}")
    eye = np.eye(2 * n)
    return np.hstack([eye[:, :n], eye[:, n : n + (k - n)]])


def quotient_columns(n, p):
    """Column indices of the quotient block (a_1..a_p, b_1..b_p) in an adapted basis."""
    return list(range(p)) + list(range(n, n + p))


def unitary_adapted_frame(basis_std, tol=DEFAULT_TOL):
    """Unitary symplectic frame adapted to a coisotropic subspace of standard R^{2n}.

    Returns ``Z`` with columns ``[u_1..u_p, c_1..c_d, Ju_1..Ju_p, Jc_1..Jc_d]`` where
    the ``u`` span the complex part ``W & JW`` over C and the ``c`` are an
    orthonormal basis of ``W^w``. ``Z`` maps the model coisotropic subspace onto ``W``.
    """
    dim = basis_std.shape[0]
    n = dim // 2
    std = SymplecticSpace.standard(n)
    c = symplectic_complement(std, basis_std, tol).basis
    d = c.shape[1]
    p = n - d
    qw = orthonormal_basis(basis_std, tol)
    proj_q = qw @ qw.T - c @ c.T
    reps = canonical_basis(proj_q, tol) if p else np.zeros((dim, 0))
    us = []
    for z in to_complex(reps).T:
        for u in us:
            z = z - u * np.vdot(u, z)
        nz = np.linalg.norm(z)
        if nz > 1e-6:
            us.append(z / nz)
        if len(us) == p:
            break
    if len(us) != p:
        raise NotCoisotropic("complex part of W has the wrong dimension")
    return frame_from_parts(np.array(us).T.reshape(n, p), c)


def frame_from_parts(u_complex, c):
    """Assemble ``[u, c, Ju, Jc]`` from complex ``u`` (n x p) and real ``c`` (2n x d)."""
    n = u_complex.shape[0]
    u = to_real(u_complex)
    jmat = standard_complex_structure(n)
    return np.hstack([u, c, jmat @ u, jmat @ c])


def adapted_darboux_basis(W, tol=DEFAULT_TOL):
    """Matrix ``A`` with ``A^T Omega A`` standard that carries the model onto ``W``.

    ``A`` sends ``span{a_1..a_n, b_1..b_{k-n}}`` onto ``W`` and
    ``span{a_{k-n+1}..a_n}`` onto ``W^w``. Built in Darboux coordinates of the
    ambient space from the unitary adapted frame there.
    """
    W = CoisotropicSubspace.of(W)
    space = W.space
    z = unitary_adapted_frame(space.darboux_inv @ W.basis, tol)
    return space.darboux @ z


# ---------------------------------------------------------------- random generators

def hamiltonian(form, sym):
    """The Hamiltonian matrix ``Omega^{-1} S`` (its exponential is symplectic)."""
    return np.linalg.solve(form, sym)


def random_symmetric(rng, dim):
    a = rng.standard_normal((dim, dim))
    return 0.5 * (a + a.T)


def random_symplectic(seed, n, magnitude=1.0, factors=3, space=None):
    """Product of exponentials of random Hamiltonian matrices.

    Deterministic in ``seed`` (an int or a numpy Generator).
    """
    rng = np.random.default_rng(seed)
    space = SymplecticSpace.standard(n) if space is None else space
    dim = space.dim
    out = np.eye(dim)
    if magnitude == 0:
        return SymplecticMap(space, out)
    for _ in range(factors):
        h = hamiltonian(space.form, random_symmetric(rng, dim))
        h *= magnitude / max(1.0, np.linalg.norm(h, 2))
        out = out @ sla.expm(h)
    return SymplecticMap(space, out)


def stabilizer_algebra_element(rng, W, trivial_quotient=True, magnitude=1.0):
    """Random Hamiltonian ``X`` with ``X W`` inside ``W`` (inside ``W^w`` if trivial_quotient).

    Uses ``X = Omega^{-1} S``: the first condition is ``S(W, W^w) = 0``,
    the second ``S(W, W) = 0``.
    """
    W = CoisotropicSubspace.of(W)
    space = W.space
    dim = space.dim
    qw = orthonormal_basis(W.basis)
    k = qw.shape[1]
    full = np.hstack([qw, null_space(qw.T)])
    m = random_symmetric(rng, dim)
    if trivial_quotient:
        m[:k, :k] = 0.0
    else:
        # coordinates of W^w inside the W block
        c_in_w = qw.T @ W.complement.basis
        mask_basis = np.hstack([orthonormal_basis(c_in_w), null_space(c_in_w.T)]) if c_in_w.size else np.eye(k)
        block = mask_basis.T @ m[:k, :k] @ mask_basis
        d = c_in_w.shape[1]
        # pairing between W^w and all of W must vanish
        block[:d, :] = 0.0
        block[:, :d] = 0.0
        m[:k, :k] = mask_basis @ block @ mask_basis.T
    sym = full @ m @ full.T
    x = hamiltonian(space.form, sym)
    return x * (magnitude / max(1.0, np.linalg.norm(x, 2)))


def random_coisotropic(rng, n, k, magnitude=0.7, space=None):
    """Random coisotropic subspace of dimension ``k`` (image of the model under a random map)."""
    space = SymplecticSpace.standard(n) if space is None else space
    a = random_symplectic(rng, n, magnitude, space=space).matrix
    return CoisotropicSubspace(space, a @ space.darboux @ model_coisotropic_basis(n, k))
