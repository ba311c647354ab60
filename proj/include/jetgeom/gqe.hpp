#ifndef JETGEOM_GQE_HPP
#define JETGEOM_GQE_HPP

#include "jetgeom/curvature.hpp"
#include "jetgeom/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetgeom {

/// The three scalar fields of the structural equation
///   Ric + hess f - mu df (x) df = lambda g.
struct GQEData {
  ScalarExpr f, mu, lambda;
};

/// Left minus right side of the structural equation at p.
TensorValue gqe_residual(const MetricField& m, const GQEData& d,
                         std::span<const double> p);

/// Defect of the conformal Ricci identity specialized by the structural
/// equation: Ric~ of g~ = e^{-2f/(n-2)}g against
///   (mu + 1/(n-2)) df (x) df + (lap f - |grad f|^2 + (n-2) lambda)/(n-2) g.
TensorValue gqe_conformal_ricci_residual(const MetricField& m, const GQEData& d,
                                         std::span<const double> p);

struct MuLambdaFit {
  double mu = 0.0;
  double lambda = 0.0;
  bool mu_determined = false;  // false exactly when grad f vanishes at p
  double residual = 0.0;       // g-norm of Ric + hess f - mu df(x)df - lambda g
};

/// Pointwise least-squares inversion of the structural equation over
/// (mu, lambda) in the inner product induced by g. With grad f = 0 the
/// 2x2 system is singular: mu is reported undetermined and lambda comes
/// from the trace equation lambda = (R + lap f)/n.
MuLambdaFit fit_mu_lambda(const MetricField& m, const ScalarExpr& f,
                          std::span<const double> p);

/// W_abcd grad^a f: the first Weyl slot contracted with the gradient raised
/// by g. Identically zero for n = 3 where the Weyl tensor vanishes.
TensorValue radial_weyl(const MetricField& m, const ScalarExpr& f,
                        std::span<const double> p);
double radial_weyl_norm(const MetricField& m, const ScalarExpr& f,
                        std::span<const double> p);

enum class GQETag {
  Trivial,          // f constant (forces an Einstein metric)
  GradientSoliton,  // mu = 0, lambda constant
  AlmostSoliton,    // mu = 0, lambda a function
  QuasiEinstein,    // mu, lambda both constant
  Generic,
  NotGQE,
};

enum class SolitonSign { Shrinking, Steady, Expanding, None };

struct GQETolerances {
  double residual = 1e-8;   // structural equation, scale-aware
  double constancy = 1e-8;  // relative max-minus-min
  double grad_zero = 1e-6;  // |grad f| below which f counts as critical
};

struct GQEClass {
  GQETag tag = GQETag::NotGQE;
  SolitonSign sign = SolitonSign::None;
  bool einstein = false;  // verified Ric = (R/n) g over the samples
  double max_residual = 0.0;
  std::vector<double> worst_point;
  double max_grad_f = 0.0;
  double mu_magnitude = 0.0, mu_spread = 0.0;
  double lambda_value = 0.0, lambda_spread = 0.0;
  std::string describe() const;
};

/// Decide the taxonomy of (m, d) over a sample set: residual gate first,
/// then constancy diagnostics for f, mu, lambda.
GQEClass classify(const MetricField& m, const GQEData& d,
                  std::span<const std::vector<double>> samples,
                  const GQETolerances& tol = {});

}  // namespace jetgeom

#endif  // JETGEOM_GQE_HPP
