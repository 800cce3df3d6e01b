"""Operators and functionals of a local chart for quantum SU(2) on finite truncations."""
from .algebra import (
    DiscElement,
    basis_expand,
    encode_generator,
    eta_element,
    from_matrix,
    monomial,
    normal_form_product,
    reconstruct,
    star,
    to_matrix,
)
from .audit import AuditReport, run_audit
from .calculus import (
    ddz_closed_form,
    ddz_commutator,
    ddz_monomial,
    ddzbar_closed_form,
    ddzbar_commutator,
    ddzbar_monomial,
    nabla_q2,
)
from .integration import (
    IntegralResult,
    inner_product,
    integral_alpha,
    integral_alpha_matrix,
    sigma_alpha,
    verify_op_adjoint,
    verify_twisted_trace,
)
from .params import BasisIndex, ChartParams, EtaIndex
from .parse import ParseError, parse_element
from .sparse import SparseOperator
from .spectral import SpectralFunction

__all__ = [
    "AuditReport",
    "BasisIndex",
    "ChartParams",
    "DiscElement",
    "EtaIndex",
    "IntegralResult",
    "ParseError",
    "SparseOperator",
    "SpectralFunction",
    "basis_expand",
    "ddz_closed_form",
    "ddz_commutator",
    "ddz_monomial",
    "ddzbar_closed_form",
    "ddzbar_commutator",
    "ddzbar_monomial",
    "encode_generator",
    "eta_element",
    "from_matrix",
    "inner_product",
    "integral_alpha",
    "integral_alpha_matrix",
    "monomial",
    "nabla_q2",
    "normal_form_product",
    "parse_element",
    "reconstruct",
    "run_audit",
    "sigma_alpha",
    "star",
    "to_matrix",
    "verify_op_adjoint",
    "verify_twisted_trace",
]
