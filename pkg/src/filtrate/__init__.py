"""Self-similar gas filtration in porous media with thermodynamic closure."""
from .media import GeneratorDescriptor, MediumFamily, MediumLaw, classify_symmetries, generator_flow
from .perturb import CorrectionSet, corrected_fields, t1_correction, t2_correction
from .regions import RegionSpec, boundary_curves, phase_curves, region_grid
from .selfsim import PressureMode, SelfSimilarSolution, pressure, volume_profile
from .thermo import (
    CoexistenceCollapse,
    ConvergenceError,
    NoRootError,
    PotentialKind,
    PotentialModel,
    ThermoDomainError,
    coexistence_at_T,
    critical_point,
    state_from_potential,
)

__version__ = "0.1.0"
