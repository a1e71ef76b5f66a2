"""Numerical policy: every comparison tolerance used by the package.

All geometry is done in binary64 with explicit tolerances; determinism
comes from fixed evaluation order, not from exact arithmetic.  Tests and
library code import the single ``TOL`` instance rather than scattering
magic numbers.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # matrix hygiene
    det_drift: float = 1e-12          # renormalize when |det-1| exceeds this
    det_drift_bulk: float = 1e-8      # allowed efter long composition chains
    trace_band: float = 1e-9          # |tr|-2 band decided toward Parabolic
    near_identity: float = 1e-6       # discreteness smoke test closeness to +-I

    # group construction
    relator_residual: float = 1e-9
    elliptic_angle: float = 1e-9
    bisection: float = 1e-12          # angle-defect root find

    # lengths
    conjugacy_length: float = 1e-8    # translation length spread over conjugates
    length_recompute: float = 1e-8    # symbolic vs numeric length agreement

    # annulus metric machinery
    clairaut_drift: float = 1e-6
    energy_drift: float = 1e-6
    sinh_match: float = 1e-10         # profile equals sinh on the outer band
    geodesic_match: float = 1e-6      # integrator vs closed-form comparison
    equivariance: float = 1e-6

    # quasigeodesic estimation
    quasigeodesic_bisection: float = 1e-3

    # trigonometric identity checks
    identity_check: float = 1e-6


TOL = Tolerances()
