"""Classification machinery for conformal almost contact metric manifolds."""
from .errors import AcmError
from .lee import (
    ConformalParams,
    LeeData,
    fundamental_form,
    lee_forms,
    lemma_connection_eq7,
    lemma_L_transform_eq8,
    subgroup_membership,
    synth_w1_F,
    transform_connection_eq6,
    transform_structure,
    w1_residual,
)
from .linalg import Metric, invert_metric, tensor2_inner, tensor2_norm
from .split import DecompositionReport, decompose, project, projections, subspace_dims, traces
from .structure import (
    AcmStructure,
    adapted_basis,
    canonical_structure,
    conjugate_structure,
    random_group_element,
    random_structure,
    validate,
)

__all__ = [
    "AcmError", "AcmStructure", "ConformalParams", "DecompositionReport", "LeeData", "Metric",
    "adapted_basis", "canonical_structure", "conjugate_structure", "decompose",
    "fundamental_form", "invert_metric", "lee_forms", "lemma_L_transform_eq8",
    "lemma_connection_eq7", "project", "projections", "random_group_element",
    "random_structure", "subgroup_membership", "subspace_dims", "synth_w1_F",
    "tensor2_inner", "tensor2_norm", "traces", "transform_connection_eq6",
    "transform_structure", "validate", "w1_residual",
]
