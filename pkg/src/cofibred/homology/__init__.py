"""Integral and field homology for the truncated simplicial objects of
the package: Smith normal form, chain complexes, modules over a finite
category, double complexes and their spectral sequence."""

from .bicomplex import Bicomplex, eilenberg_zilber_check, fibration_bicomplex
from .chains import (
    AbelianGroup,
    ChainComplex,
    ChainMap,
    DegreeAboveGuarantee,
    homology,
    homology_data,
    homology_over_field,
    induced_map_is_iso,
    induced_map_on_homology,
    normalized_chain_complex,
    simplicial_chain_map,
    simplicial_homology,
)
from .modules import (
    FunctorialityFailure,
    ModuleOverCategory,
    PresentedGroup,
    coefficient_homology,
    constant_module,
    fiber_homology_module,
)
from .snf import SNF, smith
from .spectral import (
    NotStabilized,
    PageInconsistency,
    SpectralSequence,
    e2_oracle,
    integral_e2,
    integral_e2_oracle,
    spectral_sequence,
)

smith_normal_form = smith


def total_complex(bc: Bicomplex) -> ChainComplex:
    return bc.total_complex()


__all__ = [
    "AbelianGroup", "Bicomplex", "ChainComplex", "ChainMap", "DegreeAboveGuarantee",
    "FunctorialityFailure", "ModuleOverCategory", "NotStabilized", "PageInconsistency",
    "PresentedGroup", "SNF", "SpectralSequence", "coefficient_homology", "constant_module",
    "e2_oracle", "eilenberg_zilber_check", "fiber_homology_module", "fibration_bicomplex",
    "homology", "homology_data", "homology_over_field", "induced_map_is_iso",
    "induced_map_on_homology", "integral_e2", "integral_e2_oracle",
    "normalized_chain_complex", "simplicial_chain_map", "simplicial_homology", "smith",
    "smith_normal_form", "spectral_sequence", "total_complex",
]
