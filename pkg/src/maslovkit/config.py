from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    rank:        relative singular-value cutoff for ranks and kernels
    angle:       largest principal angle (radians) for subspace equality
    symplectic:  relative defect allowed in ``M^T Omega M = Omega``
    cluster:     absolute eigenvalue clustering distance
    circle:      width of the unit-circle / +-1 / real-axis bands
    gap:         margin below pi for consecutive winding increments
    step:        bound on ``|C_k - I|_inf`` for a lifting correction
    integer:     allowed distance from an integer for integral indices
    closure:     allowed ``|Psi(1) - Psi(0)|_inf`` for sampled loops
    unit:        allowed ``||z| - 1|`` for circle-valued samples
    """

    rank: float = 1e-9
    angle: float = 1e-8
    symplectic: float = 1e-9
    cluster: float = 1e-7
    circle: float = 1e-7
    gap: float = 0.1
    step: float = 0.5
    integer: float = 1e-6
    closure: float = 1e-8
    unit: float = 1e-9

    def as_dict(self):
        return asdict(self)

    def updated(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_TOL = Tolerances()
