from ldpcForge.codes.bounds import bound_report, choose_t, epsilon, weight_bound
from ldpcForge.codes.code_model import (
    BitVector,
    SparseBinaryMatrix,
    StructuredCode,
    from_m_columns,
    sample_code,
    syndrome,
    validate_params,
)
from ldpcForge.codes.encoder import code_dimension, encode
from ldpcForge.codes.models import CodeParams, RowPolicy, SearchConfig, SweepConfig
from ldpcForge.codes.search import SearchResult, exact_min_distance, search_min_weight
from ldpcForge.utils.alist import read_alist, write_alist
from ldpcForge.utils.certificate import read_certificate, verify_certificate, write_certificate

__all__ = [
    "BitVector",
    "CodeParams",
    "RowPolicy",
    "SearchConfig",
    "SearchResult",
    "SparseBinaryMatrix",
    "StructuredCode",
    "SweepConfig",
    "bound_report",
    "choose_t",
    "code_dimension",
    "encode",
    "epsilon",
    "exact_min_distance",
    "from_m_columns",
    "read_alist",
    "read_certificate",
    "sample_code",
    "search_min_weight",
    "syndrome",
    "validate_params",
    "verify_certificate",
    "weight_bound",
    "write_alist",
    "write_certificate",
]
