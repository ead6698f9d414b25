"""UMVUE, sufficiency and completeness decisions for finite statistical models.

Exact models take ints, fractions.Fraction or "a/b" strings and return
Fraction values; models built from floats run in floating point.
"""

from ._umvue import (
    FormatError,
    InvalidModel,
    Model,
    ModeMismatch,
    NotSufficient,
    NotUmvue,
    bernoulli,
    beta_bernoulli,
    certificate,
    check_derivative_implication,
    check_ubue,
    construct_umvue,
    e0_basis,
    example1,
    expectation,
    is_complete,
    is_sufficient,
    is_umvue,
    is_umvue_oracle,
    null_samples,
    rank,
    rao_blackwellize,
    sigma0,
    sigma0_bruteforce,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
