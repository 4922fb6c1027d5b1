"""Lommel functions s_{mu,nu}, the hypergeometric family phi_k, their zeros,
and numerical checks of Turan- and Laguerre-type inequalities."""

from ._series import EXTENDED, WORKING, get_precision, precision_mode
from .core import (
    ClosedForm,
    LommelParams,
    PhiParams,
    closed_form_half,
    closed_form_half_derivative,
    hyp1F2_unit,
    lommel_s,
    lommel_s_derivative,
    phi,
    pochhammer,
)
from .errors import (
    ConvergenceFailure,
    DomainError,
    LommelError,
    MissingZeroTable,
    NonConvergence,
    PoleHit,
    QuadratureFailure,
    WindowMismatch,
)
from .evaluation import Evaluation, Method
from .inequalities import InequalityKind, WronskianLevel, evaluate, expected_sign
from .quadrature import QuadratureSpec, phi0_by_integral, phi1_by_integral, s_by_convolution
from .scans import (
    InequalityReport,
    ScanConfig,
    conjecture_scan,
    reversed_window_check,
    sign_change_scan,
    verify,
)
from .zeros import (
    RootConfig,
    ZeroTable,
    find_zeros,
    mittag_leffler_ratio,
    product_reconstruct,
    verify_interlacing,
)

__version__ = "0.1.0"
