"""Exact decision procedures for best unbiased estimators on finite models.

A model is a probability matrix whose rows are pmfs indexed by parameters and
whose columns are the likelihood functions of the samples. The main entry
points are :func:`is_umvue`, :func:`sigma0`, :func:`construct_umvue` and
:func:`certificate`; see the README for the full tour.
"""

from .characterize import (
    Certificate,
    Decision,
    NotUMVUEError,
    certificate,
    check_sufficiency_definition,
    decompose,
    is_complete,
    is_sufficient,
    is_umvue,
    is_umvue_oracle,
    sigma0,
    sigma0_bruteforce,
    verify_certificate,
)
from .construct import (
    check_proposition5,
    conditional_expectation,
    construct_umvue,
    rao_blackwellize,
)
from .generators import (
    BernoulliSpec,
    BetaBernoulliSpec,
    bernoulli,
    beta_bernoulli,
    example1,
    verify_example3_claims,
)
from .kernels import BACKEND
from .linalg import EXACT, Arithmetic, Matrix, approx
from .losses import LossSpec, check_derivative_implication, check_ubue, risk
from .model import (
    CleanModel,
    ModelError,
    StatModel,
    clean,
    e0_basis,
    expectation,
    likelihood,
    null_samples,
    validate,
    variance,
)

__version__ = "0.1.0"
