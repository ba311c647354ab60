"""Chart-based numerical tensor calculus for quasi-Einstein geometry.

The heavy lifting lives in the C++ core: order-3 jet arithmetic on closed-form
metric entries, curvature packs (Riemann, Ricci, Weyl, Schouten, Cotton,
divergence of Weyl), conformal transformation laws, and the warped-product
splitting diagnostics. This package exposes the main operations and the
verification runner.
"""

import json as _json

from ._core import (
    ExprDomainError,
    ExprParseError,
    MetricDefinitenessError,
    OutsideChartError,
    SamplingError,
    ScalarExpr,
    classify,
    curvature,
    fit_mu_lambda,
    gqe_residual_norm,
    list_instances,
    radial_weyl_norm,
    run_json,
    sample_points,
)

__all__ = [
    "ExprDomainError",
    "ExprParseError",
    "MetricDefinitenessError",
    "OutsideChartError",
    "SamplingError",
    "ScalarExpr",
    "classify",
    "curvature",
    "fit_mu_lambda",
    "gqe_residual_norm",
    "list_instances",
    "radial_weyl_norm",
    "run",
    "run_json",
    "sample_points",
]


def run(config):
    """Run verification suites from a config dict; returns the report dict.

    The config mirrors the CLI JSON schema: keys ``instance`` (zoo key or
    inline metric object), ``suites``, ``samples``, ``seed``, ``tolerances``
    and ``out``.
    """
    return _json.loads(run_json(_json.dumps(config)))
