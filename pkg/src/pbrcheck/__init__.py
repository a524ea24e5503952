"""Finite checks of the one-pair PBR argument and of a four-region toy model."""

from .cabbolet import (
    INSTRUCTIONS,
    REGIONS,
    JointInstruction,
    MismatchReport,
    Region,
    born_mismatch,
    build_cabbolet_model,
    build_cabbolet_pair_model,
    draw_ensemble,
    empirical_instruction_stats,
    local_outcome,
    plus_one_effect,
    run_instruction,
    sample_ensemble,
)
from .ontology import (
    EpistemicState,
    OnticSpace,
    OntologicalModel,
    ResponseFunction,
    fraction_in_region,
    predicted_probability,
    product_model,
    support,
    supports_overlap,
    validate_against_quantum,
)
from .pbr import (
    AntidistinguishabilityCertificate,
    ContradictionWitness,
    antidistinguishes,
    build_xi_basis,
    find_contradiction_witness,
    overlap_fraction_affected,
    product_preparations,
)
from .qlinalg import (
    MINUS,
    ONE,
    PLUS,
    ZERO,
    Effect,
    Ket,
    MeasurementBasis,
    born_probability,
    effect_probability,
    inner,
    is_entangled,
    is_orthonormal_basis,
    tensor,
)

__version__ = "0.1.0"
