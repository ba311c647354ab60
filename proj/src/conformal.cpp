#include "jetgeom/conformal.hpp"

namespace jetgeom {

namespace {

using V = Variance;

}  // namespace

ConformalPair conformal_metric(const MetricField& m, const ScalarExpr& u) {
  if (u.dim() != m.dim())
    throw std::invalid_argument("conformal_metric: potential dimension mismatch");
  const int n = m.dim();
  ScalarExpr factor = exp((-2.0) * u);
  std::vector<ScalarExpr> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) upper.push_back(factor * m.entry(i, j));
  MetricField res = MetricField::from_upper(n, std::move(upper));
  res.set_domain(m.domain());
  res.set_box(m.box());
  return ConformalPair{m, u, std::move(res)};
}

TensorValue schouten_conformal_residual(const ConformalPair& pair,
                                        std::span<const double> p) {
  const int n = pair.base.dim();
  if (n < 3)
    throw std::invalid_argument("schouten_conformal_residual: requires n >= 3");
  CurvaturePack base = curvature_pack(pair.base.jet(p));
  CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
  ScalarJet uj = pair.u.jet(p);

  TensorValue hess_u = hessian(uj, base);
  TensorValue du = gradient_covector(uj, n);
  TensorValue dudu = outer(du, du);
  double gn2 = grad_norm_sq(uj, base);

  TensorValue expect = base.schouten + hess_u + dudu +
                       (-0.5 * gn2) * base.jet.metric_tensor();
  return resc.schouten - expect;
}

TensorValue cotton_conformal_residual(const ConformalPair& pair,
                                      std::span<const double> p) {
  const int n = pair.base.dim();
  if (n < 3)
    throw std::invalid_argument("cotton_conformal_residual: requires n >= 3");
  CurvaturePack base = curvature_pack(pair.base.jet(p));
  CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));

  TensorValue residual = resc.cotton - base.cotton;
  if (n == 3) return residual;

  ScalarJet uj = pair.u.jet(p);
  TensorValue gu = gradient_raised(uj, base);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double w = 0.0;
        for (int d = 0; d < n; ++d) w += base.weyl(c, b, a, d) * gu(d);
        residual(a, b, c) -= double(n - 2) * w;
      }
  return residual;
}

TensorValue ricci_conformal_residual(const MetricField& m, const ScalarExpr& f,
                                     std::span<const double> p) {
  const int n = m.dim();
  if (n < 3)
    throw std::invalid_argument("ricci_conformal_residual: requires n >= 3");
  ConformalPair pair = conformal_metric(m, f / double(n - 2));
  CurvaturePack base = curvature_pack(pair.base.jet(p));
  CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
  ScalarJet fj = f.jet(p);

  TensorValue hess_f = hessian(fj, base);
  TensorValue df = gradient_covector(fj, n);
  const double c = 1.0 / double(n - 2);
  TensorValue expect = base.ricci + hess_f + c * outer(df, df) +
                       (c * (laplacian(fj, base) - grad_norm_sq(fj, base))) *
                           base.jet.metric_tensor();
  return resc.ricci - expect;
}

TensorValue ricci_commutation_residual(const MetricField& m, const ScalarExpr& u,
                                       std::span<const double> p) {
  const int n = m.dim();
  CurvaturePack pk = curvature_pack(m.jet(p));
  ScalarJet uj = u.jet(p);
  TensorValue d3u = third_cov_derivative(uj, pk);  // slots (c,b,a)
  TensorValue gu = gradient_raised(uj, pk);

  TensorValue r(n, {V::Cov, V::Cov, V::Cov});
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) {
        double rhs = 0.0;
        for (int d = 0; d < n; ++d) rhs += pk.riemann(c, b, a, d) * gu(d);
        r(c, b, a) = d3u(c, b, a) - d3u(b, c, a) - rhs;
      }
  return r;
}

}  // namespace jetgeom
