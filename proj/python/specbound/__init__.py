"""Spectral gap lower bounds for diffusion generators."""

from ._specbound import (
    ConfigError,
    DiagonalWeight,
    ExprParseError,
    NoConvergence,
    Potential,
    brute_force_inf_power,
    closed_form_inf_power,
    exp_eps_u_weight,
    first_order_bound,
    from_expression,
    gaussian,
    identity_weight,
    lambda_1_A_analytic,
    lambda_1_A_oracle,
    lowest_eigs,
    optimize_eps,
    power_product,
    prop41,
    run,
)

__all__ = [
    "ConfigError",
    "DiagonalWeight",
    "ExprParseError",
    "NoConvergence",
    "Potential",
    "brute_force_inf_power",
    "closed_form_inf_power",
    "exp_eps_u_weight",
    "first_order_bound",
    "from_expression",
    "gaussian",
    "identity_weight",
    "lambda_1_A_analytic",
    "lambda_1_A_oracle",
    "lowest_eigs",
    "optimize_eps",
    "power_product",
    "prop41",
    "run",
]
