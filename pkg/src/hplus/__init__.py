"""Exact computation of l-parts of class numbers h+ for real cyclotomic
fields of conductor pq."""

__version__ = "0.1.0"

from .grpring import GroupRingElement, RingShape
from .groebner import IdealHandle, ideal
from .charfactor import gcd_over_pairs, index_factor
from .frobenius import EtaContext, FrobeniusCache
from .step3 import step3_certificate, verify_power
from .pipeline import LReport, RunConfig, degree_grid, run

__all__ = [
    "GroupRingElement",
    "RingShape",
    "IdealHandle",
    "ideal",
    "gcd_over_pairs",
    "index_factor",
    "EtaContext",
    "FrobeniusCache",
    "step3_certificate",
    "verify_power",
    "LReport",
    "RunConfig",
    "degree_grid",
    "run",
    "__version__",
]
