"""Exact and numeric verification of theta-constant identities.

The package builds theta constants, normalized theta derivatives and eta
quotients as truncated formal series with exact cyclotomic coefficients,
verifies a registry of identities coefficient-by-coefficient, and cross-checks
everything in floating point. A small textual language describes identities;
the command line front end is `thetaver`.
"""

from .cyclotomic import CycloNumber, cyclotomic_polynomial, from_root_power, zeta
from .identities import (
    IdentityRecord,
    Mutation,
    VerificationReport,
    get_record,
    mutated_record,
    registry,
    verify_all,
    verify_exact,
    verify_numeric,
    verify_record,
)
from .numeric import SamplePlan
from .qseries import QSeries
from .thetaforms import (
    Characteristic,
    EtaQuotientSpec,
    eta_quotient,
    farkas_product,
    theta_constant,
    theta_deriv_normalized,
    triple_product_theta,
)

__all__ = [
    "Characteristic",
    "CycloNumber",
    "EtaQuotientSpec",
    "IdentityRecord",
    "Mutation",
    "QSeries",
    "SamplePlan",
    "VerificationReport",
    "cyclotomic_polynomial",
    "eta_quotient",
    "farkas_product",
    "from_root_power",
    "get_record",
    "mutated_record",
    "registry",
    "theta_constant",
    "theta_deriv_normalized",
    "triple_product_theta",
    "verify_all",
    "verify_exact",
    "verify_numeric",
    "verify_record",
    "zeta",
]

__version__ = "0.1.0"
