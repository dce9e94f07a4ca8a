"""Theta hypergeometric series: evaluation, identity verification,
ellipticity and modularity checks."""

from .errors import BranchError, NonConvergenceError, PoleError, ThetaDomainError
from .theta import (
    DEFAULT_POLICY,
    ModularPair,
    Nome,
    PrecisionPolicy,
    apply_modular,
    elliptic_number,
    nome_from_modular,
    p_pochhammer,
    theta,
    theta1,
    theta1_modular_s_multiplier,
    theta_zero_index,
)
from .factorials import (
    FactorialValue,
    elliptic_factorial,
    theta_factor,
    theta_factorial,
    theta_factorial_multi,
)
from .series import (
    SeriesValue,
    ThetaSeriesSpec,
    TruncationDecl,
    VwpSpec,
    classify,
    coefficient,
    eval_E,
    eval_G,
    eval_basic,
    eval_vwp,
    eval_vwp_additive,
    ge_split_check,
    spec_from_json,
    term_ratio,
    term_ratio_at,
    vwp_coefficient,
)
from .identities import (
    BaileyParams,
    FTParams,
    Multi1Params,
    Multi2Params,
    bailey_from_ft,
    bailey_map,
    general_multi_coefficient,
    sample_bailey,
    sample_ft,
    sample_multi1,
    sample_multi2,
    verify_bailey,
    verify_ft_sum,
    verify_multi1,
    verify_multi2,
)
from .ellipticity import (
    HForm,
    check_ellipticity,
    check_modularity,
    check_total_ellipticity_multi1,
    check_total_ellipticity_multi2,
    check_total_ellipticity_wp,
    h_eval,
    multipliers,
    vwp_canonical_h,
)
from .report import EllipticityReport, VerificationReport, complex_from_json, complex_to_json

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "NonConvergenceError",
    "PoleError",
    "ThetaDomainError",
    "DEFAULT_POLICY",
    "ModularPair",
    "Nome",
    "PrecisionPolicy",
    "apply_modular",
    "elliptic_number",
    "nome_from_modular",
    "p_pochhammer",
    "theta",
    "theta1",
    "theta1_modular_s_multiplier",
    "theta_zero_index",
    "FactorialValue",
    "elliptic_factorial",
    "theta_factor",
    "theta_factorial",
    "theta_factorial_multi",
    "SeriesValue",
    "ThetaSeriesSpec",
    "TruncationDecl",
    "VwpSpec",
    "classify",
    "coefficient",
    "eval_E",
    "eval_G",
    "eval_basic",
    "eval_vwp",
    "eval_vwp_additive",
    "ge_split_check",
    "spec_from_json",
    "term_ratio",
    "term_ratio_at",
    "vwp_coefficient",
    "BaileyParams",
    "FTParams",
    "Multi1Params",
    "Multi2Params",
    "bailey_from_ft",
    "bailey_map",
    "general_multi_coefficient",
    "sample_bailey",
    "sample_ft",
    "sample_multi1",
    "sample_multi2",
    "verify_bailey",
    "verify_ft_sum",
    "verify_multi1",
    "verify_multi2",
    "HForm",
    "check_ellipticity",
    "check_modularity",
    "check_total_ellipticity_multi1",
    "check_total_ellipticity_multi2",
    "check_total_ellipticity_wp",
    "h_eval",
    "multipliers",
    "vwp_canonical_h",
    "EllipticityReport",
    "VerificationReport",
    "complex_from_json",
    "complex_to_json",
]
