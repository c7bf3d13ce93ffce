"""High-energy asymptotics of 1D Fokker-Planck / Schroedinger Green functions."""

from .diffpoly import Basis, DiffPoly, dpoly_dx
from .xipoly import XiPoly, apply_M, gen_K, gen_c_tilde
from .coeffs import MAX_ORDER_DEFAULT, gen_alpha, gen_s, vs_to_f
from .seriescomb import AbstractSeriesPoly, gen_b, gen_b_g, gen_g
from .errors import (
    BasisError,
    ConvergenceError,
    DistributionProductError,
    EvaluationDomainError,
    FpgreenError,
    OrderLimitError,
    ParseError,
    PotentialError,
    UnsupportedDomainError,
)
from .potential import (
    JumpRecord,
    Mode,
    PotentialSpec,
    builtin,
    load_potential_file,
    parse_potential_config,
)
from .validity import Regime, ValidityReport, classify_validity, regime_for_point
from .engine import (
    ExpansionSeries,
    G_series,
    LogGreenSeries,
    coeff_a,
    expansion_series,
    logG_series,
    partial_sum_terms,
    shorttime_GF,
    shorttime_series,
)
from .riccati import (
    GreenEval,
    OracleConfig,
    ScatteringTriple,
    SemiInfiniteS,
    finite_scattering,
    oracle_logG,
    semi_infinite_S,
)
from .closedform import (
    closed_form_available,
    exact_GF_time,
    exact_green,
    exact_logG,
)
from .specialfn import SpecialKind, special_eval
from .remainder import (
    Ray,
    RemainderReport,
    RemainderSample,
    parse_ray,
    remainder_report,
)
from .serialize import CSV_HEADER, csv_from_record, golden_diff, report_to_csv, to_json
from .config import RunConfig, load_config_file, resolve_potential

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "DiffPoly",
    "XiPoly",
    "AbstractSeriesPoly",
    "dpoly_dx",
    "apply_M",
    "gen_c_tilde",
    "gen_K",
    "gen_s",
    "gen_alpha",
    "gen_b",
    "gen_g",
    "gen_b_g",
    "vs_to_f",
    "MAX_ORDER_DEFAULT",
    "FpgreenError",
    "OrderLimitError",
    "BasisError",
    "ParseError",
    "PotentialError",
    "DistributionProductError",
    "EvaluationDomainError",
    "ConvergenceError",
    "UnsupportedDomainError",
    "Mode",
    "JumpRecord",
    "PotentialSpec",
    "builtin",
    "parse_potential_config",
    "load_potential_file",
    "Regime",
    "ValidityReport",
    "classify_validity",
    "regime_for_point",
    "ExpansionSeries",
    "LogGreenSeries",
    "coeff_a",
    "expansion_series",
    "partial_sum_terms",
    "logG_series",
    "G_series",
    "shorttime_series",
    "shorttime_GF",
    "OracleConfig",
    "SemiInfiniteS",
    "ScatteringTriple",
    "GreenEval",
    "semi_infinite_S",
    "oracle_logG",
    "finite_scattering",
    "closed_form_available",
    "exact_green",
    "exact_logG",
    "exact_GF_time",
    "SpecialKind",
    "special_eval",
    "Ray",
    "parse_ray",
    "RemainderSample",
    "RemainderReport",
    "remainder_report",
    "CSV_HEADER",
    "to_json",
    "report_to_csv",
    "csv_from_record",
    "golden_diff",
    "RunConfig",
    "load_config_file",
    "resolve_potential",
    "__version__",
]
