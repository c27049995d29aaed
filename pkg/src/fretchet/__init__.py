"""Symbolic Fréchet derivatives and adjoints for point-free function terms.

Forward mode is :func:`affine` (value plus derivative term), reverse mode is
:func:`affine_adj` (value plus adjoint term); :func:`gradient` applies the
latter to ``1``.
"""

__version__ = "0.1.0"

from .adjoint import adjoint, check_adjoint_law
from .diff import affine, affine_adj, gradient, jvp, vjp
from .errors import DimError, DomainError, FretchetError, ParseError, ShapeError, TermTypeError
from .funterm import eval_fun
from .linterm import annotate, apply, infer_types, term_size
from .oracle import fd_jacobian, lower_matrix
from .simplify import simplify
from .syntax import parse_fun, parse_lin, parse_vec, show_fun, show_lin, show_vec

__all__ = [
    "__version__",
    "adjoint",
    "check_adjoint_law",
    "affine",
    "affine_adj",
    "gradient",
    "jvp",
    "vjp",
    "eval_fun",
    "annotate",
    "apply",
    "infer_types",
    "term_size",
    "fd_jacobian",
    "lower_matrix",
    "simplify",
    "parse_fun",
    "parse_lin",
    "parse_vec",
    "show_fun",
    "show_lin",
    "show_vec",
    "FretchetError",
    "ShapeError",
    "DimError",
    "TermTypeError",
    "DomainError",
    "ParseError",
]
