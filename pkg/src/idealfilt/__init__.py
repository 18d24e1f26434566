"""Exact jet-space invariants of derivative-closed idealistic filtrations.

The pieces, bottom up: finite fields and the rationals (`fields`), truncated
polynomial arithmetic with Hasse derivatives (`jetring`), filtrations by
rational levels with derivative saturation (`filtration`), the leading-term
invariant sigma and pure generator systems (`leading`), coefficient
expansions along a system with the two order routes (`expansion`), the order
ratio, stratification and the nonsingularity screen (`invariants`), plus
instance files (`instances`), seeded corpora (`suites`) and the CLI (`cli`).
"""

from .errors import (DimensionMismatch, FieldError, IdealfiltError,
                     InvariantViolation, LinearAlgebraError, ParseError,
                     PrecisionMismatch, PreconditionError, PurificationError,
                     RingMismatch, SliceTruncationCaveat, TruncationError)
from .fields import ExtensionField, Field, PrimeField, Rationals, make_field
from .jetring import JetRing
from .filtration import Filtration, d_saturate, generate
from .leading import (LGS, PurifiedLGS, check_uniform_purity, compare_sigma,
                      default_horizon, extract_lgs, jump_degree, purify_at,
                      sigma)
from .expansion import (ExpansionResult, OrdValue, check_associated,
                        check_coefficient_lemma, check_fcl,
                        check_weakly_associated, expand, fcl_iterate,
                        get_expander, ord_h_expansion, ord_h_membership,
                        reassemble)
from .invariants import (check_lgs_independence, check_nsp,
                         level_numerator_product, mu_tilde, stratify)
from .instances import Instance, dump_instance, instance_to_data, load_instance

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatch", "FieldError", "IdealfiltError", "InvariantViolation",
    "LinearAlgebraError", "ParseError", "PrecisionMismatch",
    "PreconditionError", "PurificationError", "RingMismatch",
    "SliceTruncationCaveat", "TruncationError",
    "ExtensionField", "Field", "PrimeField", "Rationals", "make_field",
    "JetRing",
    "Filtration", "d_saturate", "generate",
    "LGS", "PurifiedLGS", "check_uniform_purity", "compare_sigma",
    "default_horizon", "extract_lgs", "jump_degree", "purify_at", "sigma",
    "ExpansionResult", "OrdValue", "check_associated",
    "check_coefficient_lemma", "check_fcl", "check_weakly_associated",
    "expand", "fcl_iterate", "get_expander", "ord_h_expansion",
    "ord_h_membership", "reassemble",
    "check_lgs_independence", "check_nsp", "level_numerator_product",
    "mu_tilde", "stratify",
    "Instance", "dump_instance", "instance_to_data", "load_instance",
    "__version__",
]
