"""Sampled paths: winding numbers, Maslov indices of symplectic paths,
pair indices of circle transports, and the integer loop index ``m0``.

A transport over a circle is stored as its monodromy path
``Phi(t) = transport along z|[0, t]`` with ``Phi(0) = I``; it is regular when
``Phi(1) = I``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .errors import (
    DimensionMismatch,
    GapTooLarge,
    NearBandWarning,
    NeitherRegularWarning,
    NonIntegerIndex,
    NonUnitSample,
    NotALoop,
    NotSymplectic,
    ValidationError,
)
from .rho import rho_report
from .symplectic import standard_form, symplectic_defect


def check_grid(grid, path=None):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ValidationError("grid needs at least two points", path)
    if not np.all(np.isfinite(g)):
        raise ValidationError("grid has non-finite entries", path)
    if g[0] != 0.0 or g[-1] != 1.0:
        raise ValidationError("grid must start at 0 and end at 1", path)
    if np.any(np.diff(g) <= 0):
        raise ValidationError("grid must be strictly increasing", path)
    return g


def uniform_grid(samples):
    """``samples + 1`` equally spaced points, exactly 0 and 1 at the ends."""
    return np.linspace(0.0, 1.0, samples + 1)


@dataclass(frozen=True, eq=False)
class UnitCirclePath:
    grid: np.ndarray
    samples: np.ndarray
    tol: object = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        g = check_grid(self.grid)
        z = np.asarray(self.samples, dtype=complex)
        if z.shape != g.shape:
            raise DimensionMismatch(f"{z.size} samples for {g.size} grid points")
        bad = np.abs(np.abs(z) - 1) > self.tol.unit
        if np.any(bad):
            k = int(np.argmax(bad))
            raise NonUnitSample(f"sample {k} has modulus {abs(z[k]):.12g}")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "samples", z)

    def increments(self):
        z = self.samples
        return np.angle(z[1:] * z[:-1].conj())


def winding(p, tol=None):
    """Total angle swept by ``p``, in full turns.

    Consecutive samples must differ by less than ``pi - tol.gap`` radians.
    """
    tol = p.tol if tol is None else tol
    inc = p.increments()
    limit = np.pi - tol.gap
    if inc.size and np.max(np.abs(inc)) >= limit:
        k = int(np.argmax(np.abs(inc)))
        raise GapTooLarge(
            f"angular step {abs(inc[k]):.3f} rad between samples {k} and {k + 1} "
            f"exceeds {limit:.3f}; refine the grid"
        )
    total = 0.0
    for d in inc:  # sequential on purpose
        total += d
    return total / (2 * np.pi)


def concatenate_circle(p, q):
    """``p`` followed by ``q`` on the grid halves; q must start where p ends."""
    if abs(p.samples[-1] - q.samples[0]) > p.tol.unit:
        raise ValidationError("paths do not meet")
    grid = np.concatenate([0.5 * p.grid, 0.5 + 0.5 * q.grid[1:]])
    return UnitCirclePath(grid, np.concatenate([p.samples, q.samples[1:]]), p.tol)


@dataclass(frozen=True, eq=False)
class SymplecticPath:
    """Samples ``Psi(t_k)`` of a path of automorphisms of ``form``."""

    grid: np.ndarray
    samples: np.ndarray
    form: np.ndarray = None
    tol: object = field(default=DEFAULT_TOL, repr=False)
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        g = check_grid(self.grid)
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 3 or s.shape[0] != g.size or s.shape[1] != s.shape[2] or s.shape[1] % 2:
            raise DimensionMismatch(f"samples of shape {s.shape} do not fit a grid of {g.size} points")
        form = standard_form(s.shape[1] // 2) if self.form is None else np.asarray(self.form, dtype=float)
        if form.shape != s.shape[1:]:
            raise DimensionMismatch("form and samples disagree in dimension")
        if self.validate:
            for k, m in enumerate(s):
                d = symplectic_defect(m, form)
                if d > self.tol.symplectic * 10:
                    raise NotSymplectic(f"sample {k} has symplectic defect {d:.2e}")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "form", form)

    @property
    def dim(self):
        return self.form.shape[0]

    def __len__(self):
        return self.grid.size

    def with_samples(self, samples, grid=None):
        return SymplecticPath(self.grid if grid is None else grid, samples, self.form, self.tol, validate=False)

    def inverse_samples(self):
        om = self.form
        return np.array([np.linalg.solve(om, m.T @ om) for m in self.samples])

    def is_regular(self, tol=None):
        tol = self.tol if tol is None else tol
        return float(np.max(np.abs(self.samples[-1] - np.eye(self.dim)))) <= tol.closure

    def closes(self, tol=None):
        tol = self.tol if tol is None else tol
        return float(np.max(np.abs(self.samples[-1] - self.samples[0]))) <= tol.closure

    def max_step(self):
        return float(np.max(np.abs(np.diff(self.samples, axis=0))))


def rho_path(path, tol=None):
    """``t -> rho(Psi(t))`` as a UnitCirclePath, warning once on near-band spectra."""
    tol = path.tol if tol is None else tol
    vals = np.empty(len(path), dtype=complex)
    near = []
    for k, m in enumerate(path.samples):
        r = rho_report(m, path.form, tol)
        vals[k] = r.value
        if r.near_boundary:
            near.append(k)
    if near:
        warnings.warn(
            f"{len(near)} samples have eigenvalues near a classification band (first at index {near[0]})",
            NearBandWarning,
            stacklevel=3,
        )
    return UnitCirclePath(path.grid, vals, tol)


def maslov_path(path, tol=None):
    """``2 * winding(rho o Psi)``."""
    return 2.0 * winding(rho_path(path, tol), tol)


def _check_monodromy(path):
    if np.max(np.abs(path.samples[0] - np.eye(path.dim))) > path.tol.closure:
        raise ValidationError("monodromy path must start at the identity")


def pair_path(phi, phi_prime):
    """Pointwise ``Phi'(t)^{-1} Phi(t)``."""
    if phi.dim != phi_prime.dim or not np.array_equal(phi.grid, phi_prime.grid):
        raise DimensionMismatch("transports must share dimension and grid")
    return phi.with_samples(np.einsum("kij,kjl->kil", phi_prime.inverse_samples(), phi.samples))


def maslov_pair(phi, phi_prime, tol=None):
    """Pair index of two transports over the same circle.

    Independent of the base point when one of them is regular; otherwise a
    NeitherRegularWarning is issued and the value refers to the given base point.
    """
    _check_monodromy(phi)
    _check_monodromy(phi_prime)
    if not (phi.is_regular(tol) or phi_prime.is_regular(tol)):
        warnings.warn("neither transport is regular; the pair index depends on the base point",
                      NeitherRegularWarning, stacklevel=2)
    return maslov_path(pair_path(phi, phi_prime), tol)


def identity_path(grid, dim, form=None):
    g = check_grid(grid)
    return SymplecticPath(g, np.broadcast_to(np.eye(dim), (g.size, dim, dim)).copy(), form, validate=False)


def rebase(path, j):
    """Monodromy path of the same transport for the circle started at sample ``j``."""
    g = path.grid
    if not 0 <= j < g.size - 1:
        raise ValidationError(f"base index {j} out of range")
    if j == 0:
        return path
    s = path.samples
    inv_j = path.inverse_samples()[j]
    head = [s[i] @ inv_j for i in range(j, g.size)]
    tail = [s[i] @ s[-1] @ inv_j for i in range(1, j + 1)]
    grid = np.concatenate([g[j:] - g[j], 1.0 - g[j] + g[1 : j + 1]])
    grid[-1] = 1.0
    return path.with_samples(np.array(head + tail), grid)


def reverse(path):
    """Monodromy path for the circle run backwards: ``Phi(1 - t) Phi(1)^{-1}``."""
    inv_end = path.inverse_samples()[-1]
    s = path.samples[::-1] @ inv_end
    return path.with_samples(s, (1.0 - path.grid[::-1]).copy())


def concatenate(p, q):
    """``p`` followed by ``q`` (``q`` is applied after ``p(1)``)."""
    grid = np.concatenate([0.5 * p.grid, 0.5 + 0.5 * q.grid[1:]])
    s = np.concatenate([p.samples, q.samples[1:] @ p.samples[-1]])
    return p.with_samples(s, grid)


def pointwise_product(p, q):
    if not np.array_equal(p.grid, q.grid):
        raise DimensionMismatch("paths must share a grid")
    return p.with_samples(np.einsum("kij,kjl->kil", p.samples, q.samples))


def nearest_integer(value, tol=DEFAULT_TOL, what="index"):
    r = round(value)
    if abs(value - r) > tol.integer:
        raise NonIntegerIndex(f"{what} {value:.9f} is not within {tol.integer:g} of an integer")
    return int(r)


def m0(loop, tol=None):
    """Integer Maslov index of a closed loop of symplectic matrices."""
    tol = loop.tol if tol is None else tol
    if not loop.closes(tol):
        raise NotALoop("loop does not close")
    return nearest_integer(maslov_path(loop, tol) / 2, tol, "m0")
