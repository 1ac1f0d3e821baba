"""The circle-valued map rho on the symplectic group, from spectral data.

    rho(Psi) = (-1)^{m_-} * prod_{|lambda|=1, lambda != +-1} lambda^{m_+(lambda)}

``m_-`` is half the number (with multiplicity) of negative real eigenvalues and
``m_+(lambda)`` the number of positive eigenvalues of the Hermitian matrix
``H = i B^* Omega B`` on the generalized eigenspace with basis ``B``. With this
sign, multiplication by ``e^{i theta}`` on C = R^2 has rho equal to ``e^{i theta}``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOL
from .errors import (
    ClusterAmbiguity,
    EigenvalueNotAdmissible,
    IntegralityViolation,
    SubspaceNotPreserved,
    TransversalityFailure,
)
from .symplectic import (
    CoisotropicSubspace,
    SymplecticMap,
    SymplecticSpace,
    intersect,
    standard_form,
)


@dataclass(frozen=True)
class Cluster:
    value: complex
    multiplicity: int
    members: np.ndarray
    basis: np.ndarray = None

    def kind(self, tol=DEFAULT_TOL):
        return classify(self.value, tol)


@dataclass(frozen=True)
class SpectralData:
    clusters: list
    near_boundary: bool

    @property
    def dim(self):
        return sum(c.multiplicity for c in self.clusters)


@dataclass(frozen=True)
class RhoResult:
    value: complex
    m_minus: int
    near_boundary: bool


def classify(lam, tol=DEFAULT_TOL):
    """One of 'one', 'minus_one', 'circle', 'negative', 'other'."""
    eps = tol.circle
    if abs(lam - 1) < eps:
        return "one"
    if abs(lam + 1) < eps:
        return "minus_one"
    if abs(abs(lam) - 1) < eps:
        return "circle"
    if abs(lam.imag) < eps and lam.real < 0:
        return "negative"
    return "other"


def _near_band(lam, tol):
    eps = tol.circle
    dists = [abs(abs(lam) - 1), abs(lam - 1), abs(lam + 1)]
    if lam.real < 0:
        dists.append(abs(lam.imag))
    return any(eps / 10 <= d <= 10 * eps for d in dists)


def _as_pair(psi, form):
    if isinstance(psi, SymplecticMap):
        return psi.matrix, psi.space.form
    m = np.asarray(psi, dtype=float)
    return m, standard_form(m.shape[0] // 2) if form is None else np.asarray(form, dtype=float)


def cluster_eigenvalues(eigs, tol=DEFAULT_TOL):
    """Group eigenvalues into clusters.

    Values within ``tol.circle`` of +1 or -1 are snapped into a single cluster
    there (a Jordan block at +-1 splits by roughly sqrt(machine eps)). The rest
    are merged by single linkage at ``tol.cluster / 10``. Distinct clusters closer
    than ``tol.cluster`` raise ClusterAmbiguity.
    """
    eigs = np.asarray(eigs, dtype=complex)
    labels = -np.ones(eigs.size, dtype=int)
    groups = []
    for target in (1.0, -1.0):
        idx = np.flatnonzero((np.abs(eigs - target) < tol.circle) & (labels < 0))
        if idx.size:
            labels[idx] = len(groups)
            groups.append(list(idx))
    dist = np.abs(eigs[:, None] - eigs[None, :])
    link = tol.cluster / 10
    for i in range(eigs.size):
        if labels[i] >= 0:
            continue
        labels[i] = len(groups)
        group = [i]
        stack = [i]
        while stack:
            j = stack.pop()
            near = np.flatnonzero((labels < 0) & (dist[j] < link))
            labels[near] = labels[i]
            group.extend(near)
            stack.extend(near)
        groups.append(group)
    close = (dist < tol.cluster) & (labels[:, None] != labels[None, :])
    if close.any():
        i, j = np.argwhere(close)[0]
        raise ClusterAmbiguity(f"eigenvalue clusters near {eigs[i]:.6g} are {dist[i, j]:.2e} apart")
    return [np.array(sorted(eigs[g], key=lambda z: (z.real, z.imag))) for g in groups]


def _cluster_value(members, tol):
    lam = complex(np.mean(members))
    kind = classify(lam, tol)
    if kind == "one":
        return 1.0 + 0j
    if kind == "minus_one":
        return -1.0 + 0j
    return lam


def _invariant_basis(matrix, all_members, index):
    """Orthonormal basis of the invariant subspace of cluster ``index`` via ordered Schur."""
    flat = np.concatenate([np.asarray(m) for m in all_members])
    labels = np.concatenate([np.full(len(m), i) for i, m in enumerate(all_members)])

    def nearest(x):
        return labels[np.argmin(np.abs(flat - x))] == index

    _, z, sdim = sla.schur(matrix.astype(complex), output="complex", sort=nearest)
    m = len(all_members[index])
    if sdim != m:
        raise ClusterAmbiguity(f"ordered Schur form selected {sdim} eigenvalues, expected {m}")
    return z[:, :m]


def generalized_eigenspaces(psi, form=None, tol=DEFAULT_TOL, bases="all"):
    """Clustered spectrum of ``psi`` with orthonormal generalized eigenspace bases.

    ``bases`` is 'all', 'circle' (only unit-circle clusters other than +-1),
    'upper' (those of them in the upper half plane) or 'none'.
    """
    matrix, _ = _as_pair(psi, form)
    eigs = np.linalg.eigvals(matrix)
    groups = cluster_eigenvalues(eigs, tol)
    near = any(_near_band(complex(lam), tol) for lam in eigs)
    clusters = []
    for i, members in enumerate(groups):
        lam = _cluster_value(members, tol)
        on_circle = classify(lam, tol) == "circle"
        want = (
            bases == "all"
            or (bases == "circle" and on_circle)
            or (bases == "upper" and on_circle and lam.imag > 0)
        )
        basis = _invariant_basis(matrix, groups, i) if want else None
        clusters.append(Cluster(lam, len(members), members, basis))
    return SpectralData(clusters, near)


def krein_positive_index(space, cluster, tol=DEFAULT_TOL):
    """Number of positive eigenvalues of ``i B^* Omega B`` on the cluster's eigenspace."""
    form = space.form if isinstance(space, SymplecticSpace) else np.asarray(space, dtype=float)
    if cluster.kind(tol) != "circle":
        raise EigenvalueNotAdmissible(f"eigenvalue {cluster.value:.6g} is not on the unit circle away from +-1")
    b = cluster.basis
    h = 1j * (b.conj().T @ form @ b)
    h = 0.5 * (h + h.conj().T)
    return int(np.sum(np.linalg.eigvalsh(h) > 0))


def _negative_multiplicity(spectrum, tol):
    return sum(c.multiplicity for c in spectrum.clusters if c.kind(tol) in ("negative", "minus_one"))


def m_minus(psi, form=None, tol=DEFAULT_TOL):
    """Half the total multiplicity of negative real eigenvalues."""
    spectrum = generalized_eigenspaces(psi, form, tol, bases="none")
    total = _negative_multiplicity(spectrum, tol)
    if total % 2:
        raise IntegralityViolation(f"odd number ({total}) of negative real eigenvalues")
    return total // 2


def rho_report(psi, form=None, tol=DEFAULT_TOL):
    matrix, form = _as_pair(psi, form)
    if matrix.size == 0:
        return RhoResult(1.0 + 0j, 0, False)
    spectrum = generalized_eigenspaces(matrix, form, tol, bases="upper")
    total = _negative_multiplicity(spectrum, tol)
    if total % 2:
        raise IntegralityViolation(f"odd number ({total}) of negative real eigenvalues")
    mm = total // 2
    value = -1.0 + 0j if mm % 2 else 1.0 + 0j
    circle = [c for c in spectrum.clusters if c.kind(tol) == "circle"]
    upper = [c for c in circle if c.value.imag > 0]
    lower = [c for c in circle if c.value.imag <= 0]
    for c in upper:
        lam = c.value / abs(c.value)
        m_plus = krein_positive_index(form, c, tol)
        # the conjugate eigenspace has the opposite Krein signature
        value *= lam**m_plus * lam.conjugate() ** (c.multiplicity - m_plus)
    if sum(c.multiplicity for c in upper) != sum(c.multiplicity for c in lower):
        raise ClusterAmbiguity("unit-circle spectrum is not closed under conjugation")
    value /= abs(value)
    return RhoResult(complex(value), mm, spectrum.near_boundary)


def rho(psi, form=None, tol=DEFAULT_TOL):
    """``rho_omega(psi)`` as a unit complex number.

    ``psi`` is a SymplecticMap or a matrix; a bare matrix uses ``form`` (standard
    form when omitted).
    """
    return rho_report(psi, form, tol).value


def deform_invariant_automorphism(W, psi, W_aux, t, tol=DEFAULT_TOL, validate=True):
    """The deformation ``Psi^t`` of a W-preserving automorphism.

    Splits ``V = V0 + V1 + V2`` with ``V0 = W & W_aux``, ``V1 = W^w``,
    ``V2 = W_aux^w`` and, writing ``Psi`` in blocks ``M_ij`` for this splitting,
    returns the map with blocks

        [[M00,     0,  t M02   ],
         [t M10, M11,  t^2 M12 ],
         [0,       0,  M22     ]]

    ``t = 1`` gives back ``Psi``. With ``validate=False`` the bare matrix is
    returned without the symplectic check.
    """
    W = CoisotropicSubspace.of(W)
    W_aux = CoisotropicSubspace.of(W_aux)
    space = W.space
    matrix = psi.matrix if isinstance(psi, SymplecticMap) else np.asarray(psi, dtype=float)
    if W_aux.dim != W.dim:
        raise TransversalityFailure("auxiliary subspace has a different dimension")
    b0 = intersect(W.basis, W_aux.basis, tol)
    b1 = W.complement.orthonormal
    b2 = W_aux.complement.orthonormal
    d0, d1, d2 = b0.shape[1], b1.shape[1], b2.shape[1]
    if d0 + d1 + d2 != space.dim:
        raise TransversalityFailure(f"dimensions {d0}+{d1}+{d2} do not add up to {space.dim}")
    T = np.hstack([b0, b1, b2])
    if np.linalg.cond(T) > 1e8:
        raise TransversalityFailure("W & W', W^w and W'^w are not transverse")
    M = np.linalg.solve(T, matrix @ T)
    s0, s1, s2 = slice(0, d0), slice(d0, d0 + d1), slice(d0 + d1, None)
    scale = max(1.0, float(np.max(np.abs(M))))
    for blk in (M[s2, s0], M[s0, s1], M[s2, s1]):
        if blk.size and np.max(np.abs(blk)) > 1e-8 * scale:
            raise SubspaceNotPreserved("Psi does not preserve W and W^w")
    Mt = np.zeros_like(M)
    Mt[s0, s0] = M[s0, s0]
    Mt[s0, s2] = t * M[s0, s2]
    Mt[s1, s0] = t * M[s1, s0]
    Mt[s1, s1] = M[s1, s1]
    Mt[s1, s2] = t * t * M[s1, s2]
    Mt[s2, s2] = M[s2, s2]
    out = np.linalg.solve(T.T, (T @ Mt).T).T
    if not validate:
        return out
    return SymplecticMap(space, out, tol.updated(symplectic=1e-8))


def _self_check(trials=4, seed=20240601):
    """Check on random rotations that the Hermitian count agrees with the
    imaginary-part description of the Krein index and gives rho = e^{i theta}."""
    rng = np.random.default_rng(seed)
    form = standard_form(1)
    for theta in rng.uniform(0.1, np.pi - 0.1, size=trials):
        c, s = np.cos(theta), np.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        v = np.array([1.0, -1.0j]) / np.sqrt(2)
        # both readings of the positivity condition on the e^{i theta} eigenvector
        hermitian = (1j * (v.conj() @ form @ v)).real
        imag_part = (v.conj() @ form @ v).imag
        if not (hermitian > 0 and imag_part < 0):
            raise RuntimeError("Krein sign conventions disagree")
        if abs(rho(rot, form) - np.exp(1j * theta)) > 1e-10:
            raise RuntimeError("rho fails the determinant normalisation")


_self_check()
