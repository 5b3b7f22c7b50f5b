"""
Spreading-model estimation at finite scale: sequence generators, shifted-section
estimates, profile decomposition and symmetric profile norms.
"""
from .decompose import Decomposition, Profile, Split, decompose
from .estimates import (
    CesaroReport, SmEstimate, cesaro_diagnostic, check_shift, shift_grid, sm_estimate, sm_exact_schreier,
)
from .generators import (
    BasisGenerator, BlockGenerator, ConstantGenerator, CustomGenerator, SequenceGenerator, ShiftedGenerator,
    create_generator, generator_from_dict, planted_generators, singular_shift,
)
from .profiles import (
    AbsorptionReport, absorption_check, equiv_constants, profile_norm, profile_vector,
)

__all__ = [
    "Decomposition", "Profile", "Split", "decompose",
    "CesaroReport", "SmEstimate", "cesaro_diagnostic", "check_shift", "shift_grid", "sm_estimate",
    "sm_exact_schreier",
    "BasisGenerator", "BlockGenerator", "ConstantGenerator", "CustomGenerator", "SequenceGenerator",
    "ShiftedGenerator", "create_generator", "generator_from_dict", "planted_generators", "singular_shift",
    "AbsorptionReport", "absorption_check", "equiv_constants", "profile_norm",
    "profile_vector",
]
