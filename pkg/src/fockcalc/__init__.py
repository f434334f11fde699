"""Exact formal calculus on the boson Fock space.

Subpackages:

* ``exact``     - rational power series, Bernoulli/zeta values, q-series
* ``fock``      - the partition-indexed state space and oscillator modes
* ``quadratic`` - normal-ordered quadratic operator families and bracket
                  verifiers
* ``series``    - sparse multivariate formal series, delta calculus, the
                  two normal orderings and the generating-function
                  commutator verifier
* ``voa``       - the rank-1 free boson vertex operator algebra and the
                  Jacobi-identity verifiers
* ``cli``       - command-line driver producing deterministic reports
"""

from .exact import (PowerSeries, Rational, ShiftedQSeries, bernoulli,
                    bernoulli_series, check_geometric_bernoulli, chi_s,
                    graded_dimension, zeta_nonpositive)
from .fock import (FockVector, LaurentPolyVector, basis, diff_op_apply,
                   fock_str, h_apply, monomial, vacuum, weight)
from .quadratic import (CentralDecomposition, GradedOperator, L_apply,
                        Lbar_apply, Lr_apply, central_decompose, commutator,
                        to_matrix, verify_diff_op_projection,
                        verify_modified_virasoro, verify_monomial_purity,
                        verify_virasoro)
from .report import VerificationReport
from .series import (ExpansionConvention, LocalizedSeries, MultiSeries,
                     VarSpec, apply_dilation, apply_taylor, contraction_check,
                     delta_series, normal_ordered_pair, one_minus_exp_inverse,
                     plusplus_pair, regularized_commutator_check)
from .voa import (VOAConstants, X_apply, Y_apply, axiom_suite,
                  dilated_jacobi_check, jacobi_check, weak_comm_check,
                  zhu_bracket_apply)

__version__ = "0.1.0"
