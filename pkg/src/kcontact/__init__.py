"""Cohomology and closed Reeb orbits of Boothby–Wang circle bundles."""

from .cohomology import (
    ASequence,
    CupPresentation,
    GradedAbelianGroup,
    PresentationError,
    dump_presentation,
    from_a_sequence,
    parse_presentation,
)
from .gysin import Extension, TotalSpaceCohomology, total_space_betti, total_space_cohomology
from .intlinalg import AbelianGroupInvariants, IntMatrix, cokernel, kernel, rank, smith_normal_form
from .reeb import (
    MomentData,
    ReebParameter,
    check_reeb_parameter,
    closed_orbit_census,
    parse_moment_data,
    subtorus_same_fixed_set,
    toric_projective_space,
)
from .relations import integer_relations
from .sphere_flow import SpherePoint, WeightedFlow, flow, orbit_closure, verify_invariance
from .verdicts import Conclusion, Hypotheses, chern_criterion, sphere_verdict

__version__ = "0.1.0"
