#ifndef JETGEOM_FD_ORACLE_HPP
#define JETGEOM_FD_ORACLE_HPP

#include "jetgeom/metric.hpp"

#include <vector>

namespace jetgeom {

/// Metric jet rebuilt from central finite differences of the metric entry
/// values only (step h): the independent derivative path used to cross-check
/// jet-based Christoffel symbols and Ricci curvature. Third derivatives are
/// left at zero, so only Gamma, Riemann, Ricci and the scalar of a pack
/// computed from this jet are meaningful.
MetricJet fd_metric_jet(const MetricField& M, const std::vector<double>& p,
                        double h = 1e-4);

}  // namespace jetgeom

#endif
