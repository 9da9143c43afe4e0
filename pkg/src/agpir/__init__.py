"""Secret sharing and X-secure T-private information retrieval from algebraic geometry codes."""

__version__ = "0.1.0"

from .curve import INFINITY, HyperellipticCurve, Point, ResourceGuardError, curve_search, validate
from .estimator import SecurePIR
from .field import GF, FieldError, FieldSpec, make_field
from .funcspace import FunctionElement, csa_basis_genus0, csa_basis_hyper, noise_basis, rr_basis
from .lincode import LinearCode, dual_distance, grs_code, min_distance, sigma_profile, star_product
from .lsss import Lsss, chen_cramer, reconstruct, shamir, share, verify_security
from .pir import (
    InfeasibleParameters,
    PirScheme,
    decode,
    encode_storage,
    make_queries,
    plan_scheme,
    rate,
    respond_all,
    run_protocol,
    select_gammas,
    server_respond,
    verify_scheme,
)

__all__ = [
    "GF", "FieldError", "FieldSpec", "make_field",
    "HyperellipticCurve", "Point", "INFINITY", "ResourceGuardError", "curve_search", "validate",
    "FunctionElement", "rr_basis", "csa_basis_genus0", "csa_basis_hyper", "noise_basis",
    "LinearCode", "min_distance", "dual_distance", "grs_code", "star_product", "sigma_profile",
    "Lsss", "shamir", "chen_cramer", "share", "reconstruct", "verify_security",
    "PirScheme", "InfeasibleParameters", "plan_scheme", "select_gammas", "encode_storage",
    "make_queries", "server_respond", "respond_all", "decode", "run_protocol", "verify_scheme", "rate",
    "SecurePIR",
]
