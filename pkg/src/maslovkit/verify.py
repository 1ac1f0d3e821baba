"""Randomised property battery behind ``maslovkit verify``.

Each suite draws its instances from a seeded generator and reports the largest
deviation seen next to the threshold it is held to. Reports carry no timings,
so a fixed seed gives a byte-identical report.
"""

import json
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOL, Tolerances
from .errors import GapTooLarge, NeitherRegularWarning, StepTooCoarse
from .generators import (
    random_hamiltonian,
    random_form,
    random_framed_family,
    random_hyperbolic,
    random_invariant_automorphism,
    random_unitary,
    unitary_to_symplectic,
    winding_loop,
)
from .lift import lagrangian_loop_index, lift_framed_loop
from .paths import (
    SymplecticPath,
    identity_path,
    maslov_pair,
    maslov_path,
    pointwise_product,
    rebase,
    uniform_grid,
)
from .rho import deform_invariant_automorphism, rho
from .scenarios import (
    disk_maslov,
    gaio_salamon_index,
    rotation_transport,
    scenario_from_loop,
    sphere_action,
    sphere_scenario,
    split_check,
)
from .symplectic import (
    SymplecticSpace,
    induced_map,
    orthonormal_basis,
    random_coisotropic,
    random_symplectic,
    standard_form,
)


@dataclass
class PropertyResult:
    name: str
    trials: int
    max_deviation: float
    threshold: float
    passed: bool


@dataclass
class VerifyConfig:
    dim: int = 8
    trials: int = 20
    seed: int = 0
    tol: Tolerances = field(default_factory=lambda: DEFAULT_TOL)


def _result(name, devs, threshold, extra_ok=True):
    devs = [float(d) for d in devs]
    worst = max(devs) if devs else 0.0
    return PropertyResult(name, len(devs), worst, threshold, bool(extra_ok and worst <= threshold))


def _half_dims(rng, max_dim, low=1, trials=1):
    hi = max(low, max_dim // 2)
    return [int(rng.integers(low, hi + 1)) for _ in range(trials)]


# ---------------------------------------------------------------- rho

def rho_axioms(rng, trials, max_dim=8, tol=DEFAULT_TOL):
    """Naturality, direct sum, determinant and normalisation of rho."""
    nat, dsum, det, norm = [], [], [], []
    for n in _half_dims(rng, max_dim, trials=trials):
        om = standard_form(n)
        psi = random_symplectic(rng, n, 1.0).matrix
        # naturality through a general linear isomorphism onto a new form
        phi = np.eye(2 * n) + 0.4 * rng.standard_normal((2 * n, 2 * n)) / np.sqrt(n)
        phi_inv = np.linalg.inv(phi)
        om2 = phi_inv.T @ om @ phi_inv
        nat.append(abs(rho(phi @ psi @ phi_inv, 0.5 * (om2 - om2.T), tol=tol) - rho(psi, om, tol=tol)))
        # direct sum with a map of another dimension
        m = int(rng.integers(1, max(1, max_dim // 2 - n) + 1))
        psi2 = random_symplectic(rng, m, 1.0).matrix
        big_form = sla.block_diag(om, standard_form(m))
        dsum.append(abs(rho(sla.block_diag(psi, psi2), big_form, tol=tol) - rho(psi, om, tol=tol) * rho(psi2, tol=tol)))
        u = random_unitary(rng, n)
        det.append(abs(rho(unitary_to_symplectic(u), tol=tol) - np.linalg.det(u)))
        r = rho(random_hyperbolic(rng, n), tol=tol)
        norm.append(max(abs(r.imag), abs(abs(r) - 1)))
    return [
        _result("rho naturality", nat, 1e-7),
        _result("rho direct sum", dsum, 1e-7),
        _result("rho determinant", det, 1e-7),
        _result("rho normalisation", norm, 1e-8),
    ]


def rho_conjugation(rng, trials, max_dim=8, tol=DEFAULT_TOL):
    devs = []
    for n in _half_dims(rng, max_dim, trials=trials):
        form = random_form(rng, n) if rng.random() < 0.5 else standard_form(n)
        space = SymplecticSpace(form)
        psi = space.darboux @ random_symplectic(rng, n, 1.0).matrix @ space.darboux_inv
        devs.append(abs(rho(psi, -form, tol=tol) - np.conj(rho(psi, form, tol=tol))))
    return [_result("rho conjugation", devs, 1e-7)]


def _restricted_det(psi, W):
    q = orthonormal_basis(W.basis)
    return float(np.linalg.det(q.T @ psi @ q))


def quotient_identity(rng, trials, max_dim=8, t_points=32, tol=DEFAULT_TOL):
    pos, gen, defect, const = [], [], [], []
    tgrid = np.linspace(0.0, 1.0, t_points)
    for n in _half_dims(rng, max_dim, low=2, trials=trials):
        k = int(rng.integers(n, 2 * n + 1))
        W = random_coisotropic(rng, n, k)
        form = W.space.form
        for positive in (True, False):
            psi = random_invariant_automorphism(rng, W, positive=positive)
            psi_w = induced_map(psi, W, W)
            a = rho(psi, form, tol=tol)
            b = rho(psi_w, W.quotient.form, tol=tol) if psi_w.size else 1.0
            if positive:
                if _restricted_det(psi, W) > 0:
                    pos.append(abs(a - b))
            else:
                gen.append(min(abs(a - b), abs(a + b)))
        # deformation through an auxiliary coisotropic of the same dimension
        psi = random_invariant_automorphism(rng, W, positive=True)
        W_aux = random_coisotropic(rng, n, k)
        r0 = rho(deform_invariant_automorphism(W, psi, W_aux, 0.0, validate=False), form, tol=tol)
        for t in tgrid:
            m = deform_invariant_automorphism(W, psi, W_aux, t, validate=False)
            defect.append(float(np.max(np.abs(m.T @ form @ m - form))))
            const.append(abs(rho(m, form, tol=tol) - r0))
    return [
        _result("quotient identity (det > 0)", pos, 1e-6),
        _result("quotient identity (two-valued)", gen, 1e-6),
        _result("deformation symplectic defect", defect, 1e-8),
        _result("deformation rho constancy", const, 1e-6),
    ]


# ---------------------------------------------------------------- lifts

def sample_lifts(family, seeds, samples=32, max_samples=2048, s=0.0, tol=DEFAULT_TOL):
    """Sample the family and lift it once per seed, refining until every lift succeeds."""
    while True:
        loop = family.loop(samples, s=s, tol=tol)
        try:
            return loop, [maslov_path(lift_framed_loop(loop, sd)) for sd in seeds]
        except (StepTooCoarse, GapTooLarge):
            if samples >= max_samples:
                raise
            samples *= 2


def lift_independence(rng, trials, max_dim=8, tol=DEFAULT_TOL):
    devs = []
    for _ in range(trials):
        n = int(rng.integers(2, max(2, max_dim // 2) + 1))
        k = int(rng.integers(n, 2 * n + 1))
        fam = random_framed_family(int(rng.integers(1 << 30)), n, k, nonstandard=bool(rng.random() < 0.5))
        s1, s2 = (int(x) for x in rng.integers(1, 1 << 30, 2))
        _, (a, b) = sample_lifts(fam, [s1, s2], tol=tol)
        devs.append(abs(a - b))
    return [_result("lift independence", devs, 1e-6)]


def lagrangian_agreement(rng, trials, max_dim=6, tol=DEFAULT_TOL):
    devs = []
    exact = True
    for _ in range(trials):
        n = int(rng.integers(1, max(1, min(max_dim, 6) // 2) + 1))
        fam = random_framed_family(int(rng.integers(1 << 30)), n, n, nonstandard=bool(rng.random() < 0.5),
                                   max_weight=2)
        loop, (a,) = sample_lifts(fam, [int(rng.integers(1, 1 << 30))], tol=tol)
        lag = lagrangian_loop_index(loop.grid, [p.W for p in loop.points], loop.space, tol)
        exact = exact and round(a) == lag
        devs.append(abs(a - lag))
    return [_result("Lagrangian agreement", devs, 1e-6, exact)]


def homotopy_invariance(rng, trials, max_dim=8, s_points=5, tol=DEFAULT_TOL):
    devs = []
    for _ in range(trials):
        n = int(rng.integers(1, max(1, max_dim // 2) + 1))
        k = int(rng.integers(n, 2 * n + 1))
        fam = random_framed_family(int(rng.integers(1 << 30)), n, k)
        vals = [sample_lifts(fam, [None], s=s, tol=tol)[1][0] for s in np.linspace(0.0, 1.0, s_points)]
        devs.append(max(abs(v - vals[0]) for v in vals))
    return [_result("homotopy invariance", devs, 1e-6)]


def regular_parity(rng, trials, max_dim=8, tol=DEFAULT_TOL):
    """Regular framed loops have integer index, even when W is orientable."""
    integ, parity_ok = [], True
    for _ in range(trials):
        n = int(rng.integers(1, max(1, max_dim // 2) + 1))
        k = int(rng.integers(n, 2 * n + 1))
        fam = random_framed_family(int(rng.integers(1 << 30)), n, k, regular=True)
        _, (a,) = sample_lifts(fam, [None], tol=tol)
        integ.append(abs(a - round(a)))
        parity_ok = parity_ok and round(a) % 2 == 0
    return [_result("regular loops: integer and even", integ, 1e-6, parity_ok)]


def splitting(rng, trials, max_dim=8, tol=DEFAULT_TOL):
    devs = []
    for cut_k in (0, 1, -2):
        whole, parts = split_check(sphere_scenario(1), rotation_transport(cut_k, 1))
        devs.append(abs(whole - parts))
    for _ in range(trials):
        n = int(rng.integers(1, max(1, max_dim // 2) + 1))
        k = int(rng.integers(n, 2 * n + 1))
        fam = random_framed_family(int(rng.integers(1 << 30)), n, k)
        loop, _ = sample_lifts(fam, [None], tol=tol)
        cut = rotation_transport(int(rng.integers(-2, 3)), n)
        whole, parts = split_check(scenario_from_loop(loop), cut)
        devs.append(abs(whole - parts))
    return [_result("splitting", devs, 1e-6)]


def gaio_salamon(max_dim=8, tol=DEFAULT_TOL):
    devs = []
    for n in range(1, max(1, min(4, max_dim // 2)) + 1):
        devs.append(abs(gaio_salamon_index(sphere_action(n)) - disk_maslov(sphere_scenario(n))))
    return [_result("Gaio-Salamon agreement", devs, 1e-6)]


def pair_base_independence(rng, trials, max_dim=8, samples=64, tol=DEFAULT_TOL):
    devs, add = [], []
    grid = uniform_grid(samples)
    for _ in range(trials):
        n = int(rng.integers(1, max(1, max_dim // 2) + 1))
        w = rng.integers(-1, 2, n)
        bump = random_hamiltonian(rng, standard_form(n), 0.8)
        phi = SymplecticPath(grid, np.array([sla.expm(np.sin(np.pi * t) ** 2 * bump) @ winding_loop(w, t) for t in grid]),
                             validate=False)
        # a non-regular partner
        y = random_hamiltonian(rng, standard_form(n), 0.8)
        psi = SymplecticPath(grid, np.array([sla.expm(t * y) for t in grid]), validate=False)
        base = maslov_pair(psi, phi, tol)
        for j in range(samples):
            a, b = rebase(psi, j), rebase(phi, j)
            devs.append(abs(maslov_pair(a, b, tol) - base))
        w2 = rng.integers(-1, 2, n)
        chi = SymplecticPath(grid, np.array([winding_loop(w2, t) for t in grid]), validate=False)
        ident = identity_path(grid, 2 * n)
        add.append(abs(maslov_pair(pointwise_product(phi, chi), ident, tol)
                       - maslov_pair(phi, ident, tol) - maslov_pair(chi, ident, tol)))
    return [_result("pair index base independence", devs, 1e-8),
            _result("pair index additivity", add, 1e-8)]


SUITES = (
    "rho_axioms",
    "rho_conjugation",
    "quotient_identity",
    "lift_independence",
    "lagrangian_agreement",
    "homotopy_invariance",
    "regular_parity",
    "splitting",
    "gaio_salamon",
    "pair_base_independence",
)


def run_verify(config=None):
    """Run every suite with ``config.trials`` instances each; returns a report dict."""
    config = VerifyConfig() if config is None else config
    rng = np.random.default_rng(config.seed)
    results = []
    if config.trials > 0:
        d = max(2, config.dim)
        tol = config.tol
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NeitherRegularWarning)
            results += rho_axioms(rng, config.trials, d, tol=tol)
            results += rho_conjugation(rng, config.trials, d, tol=tol)
            results += quotient_identity(rng, config.trials, max(4, d), tol=tol)
            results += lift_independence(rng, config.trials, max(4, d), tol=tol)
            results += lagrangian_agreement(rng, config.trials, d, tol=tol)
            results += homotopy_invariance(rng, config.trials, d, tol=tol)
            results += regular_parity(rng, config.trials, d, tol=tol)
            results += splitting(rng, config.trials, d, tol=tol)
            results += gaio_salamon(d, tol=tol)
            results += pair_base_independence(rng, config.trials, d, tol=tol)
    return {
        "seed": config.seed,
        "dim": config.dim,
        "trials": config.trials,
        "tolerances": config.tol.as_dict(),
        "properties": [asdict(r) for r in results],
        "passed": all(r.passed for r in results),
    }


def format_report(report):
    return json.dumps(report, indent=2, sort_keys=True)
