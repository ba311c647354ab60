#include "jetgeom/gqe.hpp"

#include "jetgeom/conformal.hpp"

#include <algorithm>
#include <cmath>

namespace jetgeom {

namespace {

using V = Variance;

TensorValue structural_lhs(const CurvaturePack& pk, const ScalarJet& fj,
                           double mu, double lambda) {
  TensorValue df = gradient_covector(fj, pk.n);
  return pk.ricci + hessian(fj, pk) + (-mu) * outer(df, df) +
         (-lambda) * pk.jet.metric_tensor();
}

}  // namespace

TensorValue gqe_residual(const MetricField& m, const GQEData& d,
                         std::span<const double> p) {
  CurvaturePack pk = curvature_pack(m.jet(p));
  ScalarJet fj = d.f.jet(p);
  return structural_lhs(pk, fj, d.mu.value(p), d.lambda.value(p));
}

TensorValue gqe_conformal_ricci_residual(const MetricField& m, const GQEData& d,
                                         std::span<const double> p) {
  const int n = m.dim();
  if (n < 3)
    throw std::invalid_argument("gqe_conformal_ricci_residual: requires n >= 3");
  ConformalPair pair = conformal_metric(m, d.f / double(n - 2));
  CurvaturePack base = curvature_pack(pair.base.jet(p));
  CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
  ScalarJet fj = d.f.jet(p);

  TensorValue df = gradient_covector(fj, n);
  const double mu = d.mu.value(p), lambda = d.lambda.value(p);
  const double c = 1.0 / double(n - 2);
  // e^{2f/(n-2)} g~ is g itself; the isotropic part is written with g
  TensorValue expect =
      (mu + c) * outer(df, df) +
      (c * (laplacian(fj, base) - grad_norm_sq(fj, base)) + lambda) *
          base.jet.metric_tensor();
  return resc.ricci - expect;
}

MuLambdaFit fit_mu_lambda(const MetricField& m, const ScalarExpr& f,
                          std::span<const double> p) {
  const int n = m.dim();
  CurvaturePack pk = curvature_pack(m.jet(p));
  ScalarJet fj = f.jet(p);
  MetricAtPoint mp = pk.metric();

  TensorValue t = pk.ricci + hessian(fj, pk);  // fit T ~ mu P + lambda Q
  TensorValue df = gradient_covector(fj, n);
  TensorValue ppp = outer(df, df);
  TensorValue q = pk.jet.metric_tensor();

  auto inner = [&](const TensorValue& a, const TensorValue& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += mp.up(i, k) * mp.up(j, l) * a(i, j) * b(k, l);
    return s;
  };

  const double gf2 = grad_norm_sq(fj, pk);
  MuLambdaFit fit;
  if (gf2 <= 1e-12) {  // df (x) df and g are dependent exactly here
    fit.mu_determined = false;
    fit.mu = 0.0;
    fit.lambda = (pk.scalar + laplacian(fj, pk)) / double(n);
  } else {
    // 2x2 normal equations: [<P,P> <P,Q>; <P,Q> <Q,Q>] (mu, lambda)
    const double pp = gf2 * gf2, pq = gf2, qq = double(n);
    const double tp = inner(t, ppp), tq = inner(t, q);
    const double det = pp * qq - pq * pq;  // (n-1)|grad f|^4 > 0
    fit.mu_determined = true;
    fit.mu = (qq * tp - pq * tq) / det;
    fit.lambda = (pp * tq - pq * tp) / det;
  }
  fit.residual = tensor_norm(t + (-fit.mu) * ppp + (-fit.lambda) * q, mp);
  return fit;
}

TensorValue radial_weyl(const MetricField& m, const ScalarExpr& f,
                        std::span<const double> p) {
  const int n = m.dim();
  if (n < 3) throw std::invalid_argument("radial_weyl: requires n >= 3");
  TensorValue out(n, {V::Cov, V::Cov, V::Cov});
  if (n == 3) return out;  // Weyl vanishes identically
  CurvaturePack pk = curvature_pack(m.jet(p));
  ScalarJet fj = f.jet(p);
  TensorValue gf = gradient_raised(fj, pk);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += pk.weyl(a, b, c, d) * gf(a);
        out(b, c, d) = s;
      }
  return out;
}

double radial_weyl_norm(const MetricField& m, const ScalarExpr& f,
                        std::span<const double> p) {
  return tensor_norm(radial_weyl(m, f, p), m.at(p));
}

std::string GQEClass::describe() const {
  std::string s;
  switch (tag) {
    case GQETag::Trivial: s = "trivial"; break;
    case GQETag::GradientSoliton: s = "gradient-soliton"; break;
    case GQETag::AlmostSoliton: s = "almost-soliton"; break;
    case GQETag::QuasiEinstein: s = "quasi-einstein"; break;
    case GQETag::Generic: s = "generic"; break;
    case GQETag::NotGQE: s = "not GQE for the given data"; break;
  }
  if (tag == GQETag::GradientSoliton) {
    switch (sign) {
      case SolitonSign::Shrinking: s += "(shrinking)"; break;
      case SolitonSign::Steady: s += "(steady)"; break;
      case SolitonSign::Expanding: s += "(expanding)"; break;
      case SolitonSign::None: break;
    }
  }
  if (einstein && tag == GQETag::Trivial) s += " [einstein]";
  return s;
}

GQEClass classify(const MetricField& m, const GQEData& d,
                  std::span<const std::vector<double>> samples,
                  const GQETolerances& tol) {
  if (samples.empty()) throw std::invalid_argument("classify: no samples");
  const int n = m.dim();
  GQEClass out;

  double mu_lo = 0.0, mu_hi = 0.0, la_lo = 0.0, la_hi = 0.0;
  double max_einstein = 0.0;
  bool first = true;
  double residual_scale = 0.0;

  for (const auto& p : samples) {
    CurvaturePack pk = curvature_pack(m.jet(p));
    ScalarJet fj = d.f.jet(p);
    MetricAtPoint mp = pk.metric();
    const double mu = d.mu.value(p), la = d.lambda.value(p);

    TensorValue res = structural_lhs(pk, fj, mu, la);
    double rn = tensor_norm(res, mp);
    residual_scale = std::max(
        {residual_scale, tensor_norm(pk.ricci, mp),
         tensor_norm(hessian(fj, pk), mp), std::abs(la) * std::sqrt(double(n))});
    if (rn > out.max_residual) {
      out.max_residual = rn;
      out.worst_point = p;
    }

    out.max_grad_f = std::max(
        out.max_grad_f, std::sqrt(std::max(0.0, grad_norm_sq(fj, pk))));
    if (first) {
      mu_lo = mu_hi = mu;
      la_lo = la_hi = la;
      first = false;
    } else {
      mu_lo = std::min(mu_lo, mu);
      mu_hi = std::max(mu_hi, mu);
      la_lo = std::min(la_lo, la);
      la_hi = std::max(la_hi, la);
    }
    out.mu_magnitude = std::max(out.mu_magnitude, std::abs(mu));

    TensorValue eres =
        pk.ricci + (-pk.scalar / double(n)) * pk.jet.metric_tensor();
    max_einstein = std::max(max_einstein, tensor_norm(eres, mp));
  }

  out.mu_spread = mu_hi - mu_lo;
  out.lambda_spread = la_hi - la_lo;
  out.lambda_value = 0.5 * (la_lo + la_hi);
  out.einstein = max_einstein <= tol.residual * (1.0 + residual_scale);

  if (out.max_residual > tol.residual * (1.0 + residual_scale)) {
    out.tag = GQETag::NotGQE;
    return out;
  }

  const double la_mag = std::max(std::abs(la_lo), std::abs(la_hi));
  const bool mu_zero = out.mu_magnitude <= tol.constancy;
  const bool mu_const = out.mu_spread <= tol.constancy * (1.0 + out.mu_magnitude);
  const bool la_const = out.lambda_spread <= tol.constancy * (1.0 + la_mag);

  if (out.max_grad_f <= tol.grad_zero) {
    out.tag = GQETag::Trivial;
    return out;
  }
  if (mu_zero) {
    if (la_const) {
      out.tag = GQETag::GradientSoliton;
      if (std::abs(out.lambda_value) <= tol.constancy * (1.0 + la_mag))
        out.sign = SolitonSign::Steady;
      else
        out.sign = out.lambda_value > 0 ? SolitonSign::Shrinking
                                        : SolitonSign::Expanding;
    } else {
      out.tag = GQETag::AlmostSoliton;
    }
    return out;
  }
  out.tag = (mu_const && la_const) ? GQETag::QuasiEinstein : GQETag::Generic;
  return out;
}

}  // namespace jetgeom
