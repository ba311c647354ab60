#ifndef JETGEOM_CONFORMAL_HPP
#define JETGEOM_CONFORMAL_HPP

#include "jetgeom/curvature.hpp"
#include "jetgeom/metric.hpp"

namespace jetgeom {

/// A metric together with its conformal rescaling by e^{-2u}. The rescaled
/// entries are genuine expression trees (a product with the shared factor
/// e^{-2u}), so their jets are analytic, not sampled.
struct ConformalPair {
  MetricField base;
  ScalarExpr u;
  MetricField rescaled;
};

ConformalPair conformal_metric(const MetricField& m, const ScalarExpr& u);

/// Transformation law of the Schouten tensor under g~ = e^{-2u} g:
///   S~ = S + hess u + du (x) du - 1/2 |grad u|^2 g,
/// every right-hand term taken in the base metric. Returns the defect of the
/// directly computed S~ against that combination.
TensorValue schouten_conformal_residual(const ConformalPair& pair,
                                        std::span<const double> p);

/// Transformation law of the Cotton tensor under g~ = e^{-2u} g. In
/// dimension three the Cotton tensor is pointwise conformally invariant and
/// the residual is C~ - C. For n >= 4 the law, with every right-hand term in
/// the base metric and the gradient raised by the base metric, reads
///   C~_abc = C_abc + (n-2) W_cbad grad^d u,
/// the Weyl contraction slot order being the one the commutation identity
/// nabla_c nabla_b nabla_a u - nabla_b nabla_c nabla_a u = R_cbad grad^d u
/// forces. Returns the defect of C~ against the right side.
TensorValue cotton_conformal_residual(const ConformalPair& pair,
                                      std::span<const double> p);

/// Ricci law for the rescaling adapted to the potential, g~ = e^{-2f/(n-2)}g:
///   Ric~ = Ric + hess f + df(x)df/(n-2) + (lap f - |grad f|^2)/(n-2) g.
/// Returns the defect of the directly computed Ric~ against the right side.
TensorValue ricci_conformal_residual(const MetricField& m, const ScalarExpr& f,
                                     std::span<const double> p);

/// Defect of the commutation identity
///   nabla_c nabla_b nabla_a u - nabla_b nabla_c nabla_a u = R_cbad grad^d u
/// at p, slots (c,b,a).
TensorValue ricci_commutation_residual(const MetricField& m, const ScalarExpr& u,
                                       std::span<const double> p);

}  // namespace jetgeom

#endif  // JETGEOM_CONFORMAL_HPP
