#ifndef JETGEOM_RANDOM_METRIC_HPP
#define JETGEOM_RANDOM_METRIC_HPP

#include "jetgeom/metric.hpp"

#include <cstdint>

namespace jetgeom {

/// Seeded analytic metric: identity plus small trigonometric perturbations,
/// positive definite on all of R^n by a Gershgorin bound, so any point of the
/// sampling box is valid. Used by the property suites and the verifier.
MetricField random_analytic_metric(int n, std::uint64_t seed,
                                   double amplitude = 0.15);

/// Seeded smooth potential with O(amplitude) derivatives.
ScalarExpr random_potential(int n, std::uint64_t seed, double amplitude = 0.4);

}  // namespace jetgeom

#endif
