"""Exact universal coefficients of symmetric dispersionless Toda solutions and
genus-0 double Hurwitz numbers."""

__version__ = "0.1.0"

from .coefficients import FORMULA_VERSION, n_coeff, n_tilde, p_count, t_multi, t_pair
from .errors import BudgetExceeded, CacheVersionError, DomainError, PartitionParseError
from .hurwitz import HurwitzRecord, hurwitz_closed_form, hurwitz_genus0, hurwitz_table
from .oracle import is_transitive, oracle_hurwitz_genus0
from .partitions import (
    CoeffMatrix,
    Partition,
    class_size,
    enumerate_coeff_matrices,
    enumerate_partitions,
    parse_partition,
    rho,
    sigma,
    typed_set_partitions,
)

__all__ = [
    "FORMULA_VERSION",
    "BudgetExceeded",
    "CacheVersionError",
    "CoeffMatrix",
    "DomainError",
    "HurwitzRecord",
    "Partition",
    "PartitionParseError",
    "class_size",
    "enumerate_coeff_matrices",
    "enumerate_partitions",
    "hurwitz_closed_form",
    "hurwitz_genus0",
    "hurwitz_table",
    "is_transitive",
    "n_coeff",
    "n_tilde",
    "oracle_hurwitz_genus0",
    "p_count",
    "parse_partition",
    "rho",
    "sigma",
    "t_multi",
    "t_pair",
    "typed_set_partitions",
]
