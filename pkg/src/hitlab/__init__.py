"""Hit problem computations for the polynomial algebra F_2[x1, ..., xk].

Admissible monomial bases of the cohit quotient, Kameko's squaring map,
and invariants under the symmetric and general linear groups.
"""

from .arith import alpha, beta, mu, mu_decomposition, t_threshold, zeta
from .gf2 import EchelonForm
from .group import GL, SIGMA, GroupGenerator, apply_generator, invariants, invariants_stratified_assembly
from .hit import (
    AdmissibleBasis,
    HitSpace,
    NotApplicableError,
    admissible_basis,
    admissible_basis_weighted,
    extend_monomial,
    f_embed,
    hit_space,
    is_hit,
    is_strictly_inadmissible,
    normal_form,
    normal_form_weighted,
    p_contract,
    singer_prefilter,
    split_zero_positive,
    wood_vanishing,
)
from .kameko import check_stabilization, kameko_matrix, phi, psi
from .monomial import (
    compare_monomials,
    compare_weights,
    format_monomial,
    is_spike,
    minimal_spike,
    parse_monomial,
    parse_polynomial,
    weight_vector,
)
from .steenrod import sq, sq_on_monomial

__all__ = [
    "alpha",
    "beta",
    "mu",
    "mu_decomposition",
    "t_threshold",
    "zeta",
    "EchelonForm",
    "GL",
    "SIGMA",
    "GroupGenerator",
    "apply_generator",
    "invariants",
    "invariants_stratified_assembly",
    "AdmissibleBasis",
    "HitSpace",
    "NotApplicableError",
    "admissible_basis",
    "admissible_basis_weighted",
    "extend_monomial",
    "f_embed",
    "hit_space",
    "is_hit",
    "is_strictly_inadmissible",
    "normal_form",
    "normal_form_weighted",
    "p_contract",
    "singer_prefilter",
    "split_zero_positive",
    "wood_vanishing",
    "check_stabilization",
    "kameko_matrix",
    "phi",
    "psi",
    "compare_monomials",
    "compare_weights",
    "format_monomial",
    "is_spike",
    "minimal_spike",
    "parse_monomial",
    "parse_polynomial",
    "weight_vector",
    "sq",
    "sq_on_monomial",
]

__version__ = "0.1.0"
