"""Exact Lipschitz-geometry invariants of complex plane curve germs."""

from .cyclo import CycloNumber, root_of_unity
from .equivalence import (
    EquivalenceCertificate,
    Signature,
    decide_equivalence,
    invariant_signature,
    verify_certificate,
)
from .errors import GermError
from .germ import GermPresentation
from .invariants import (
    CharData,
    OrderResult,
    characteristic_data,
    contact,
    intersection_number,
    order_along_halfbranch,
    order_along_parameterized,
    order_of_germ,
)
from .newton import ExpansionReport, expand, germ_from_branch_data, newton_polygon
from .parser import parse_polynomial, parse_series
from .poly import BivariatePoly
from .serialize import read_germ
from .series import Arc, BranchGerm, PuiseuxSeries, valuation

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BivariatePoly",
    "BranchGerm",
    "CharData",
    "CycloNumber",
    "EquivalenceCertificate",
    "ExpansionReport",
    "GermError",
    "GermPresentation",
    "OrderResult",
    "PuiseuxSeries",
    "Signature",
    "characteristic_data",
    "contact",
    "decide_equivalence",
    "expand",
    "germ_from_branch_data",
    "intersection_number",
    "invariant_signature",
    "newton_polygon",
    "order_along_halfbranch",
    "order_along_parameterized",
    "order_of_germ",
    "parse_polynomial",
    "parse_series",
    "read_germ",
    "root_of_unity",
    "valuation",
    "verify_certificate",
]
