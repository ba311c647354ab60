#include "jetgeom/curvature.hpp"

#include <cmath>

namespace jetgeom {

namespace {

using V = Variance;

void require_rank3(const CurvaturePack& pk, const char* who) {
  if (pk.n < 3)
    throw std::invalid_argument(std::string(who) + ": requires dimension >= 3");
}

}  // namespace

CurvaturePack curvature_pack(const MetricJet& J) {
  const int n = J.n;
  CurvaturePack pk;
  pk.n = n;
  pk.jet = J;

  // T(d,a,b) = d_a g_db + d_b g_da - d_d g_ab and its two derivative layers
  auto T0 = [&](int d, int a, int b) {
    return J.dG(a, d, b) + J.dG(b, d, a) - J.dG(d, a, b);
  };
  auto T1 = [&](int e, int d, int a, int b) {
    return J.d2G(e, a, d, b) + J.d2G(e, b, d, a) - J.d2G(e, d, a, b);
  };
  auto T2 = [&](int f, int e, int d, int a, int b) {
    return J.d3G(f, e, a, d, b) + J.d3G(f, e, b, d, a) - J.d3G(f, e, d, a, b);
  };

  pk.gamma = TensorValue(n, {V::Con, V::Cov, V::Cov});
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += J.Ginv(c, d) * T0(d, a, b);
        pk.gamma(c, a, b) = 0.5 * s;
      }

  pk.dgamma = TensorValue(n, {V::Cov, V::Con, V::Cov, V::Cov});
  for (int e = 0; e < n; ++e)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int d = 0; d < n; ++d)
            s += J.dGinv(e, c, d) * T0(d, a, b) + J.Ginv(c, d) * T1(e, d, a, b);
          pk.dgamma(e, c, a, b) = 0.5 * s;
        }

  pk.d2gamma = TensorValue(n, {V::Cov, V::Cov, V::Con, V::Cov, V::Cov});
  for (int f = 0; f < n; ++f)
    for (int e = 0; e < n; ++e)
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int d = 0; d < n; ++d)
              s += J.d2Ginv(f, e, c, d) * T0(d, a, b) +
                   J.dGinv(e, c, d) * T1(f, d, a, b) +
                   J.dGinv(f, c, d) * T1(e, d, a, b) +
                   J.Ginv(c, d) * T2(f, e, d, a, b);
            pk.d2gamma(f, e, c, a, b) = 0.5 * s;
          }

  // mixed Riemann R^d_abc and its coordinate derivative
  TensorValue rm(n, {V::Con, V::Cov, V::Cov, V::Cov});  // (d,a,b,c)
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = pk.dgamma(b, d, a, c) - pk.dgamma(a, d, b, c);
          for (int e = 0; e < n; ++e)
            s += pk.gamma(e, a, c) * pk.gamma(d, b, e) -
                 pk.gamma(e, b, c) * pk.gamma(d, a, e);
          rm(d, a, b, c) = s;
        }

  TensorValue drm(n, {V::Cov, V::Con, V::Cov, V::Cov, V::Cov});  // (f,d,a,b,c)
  for (int f = 0; f < n; ++f)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            double s = pk.d2gamma(f, b, d, a, c) - pk.d2gamma(f, a, d, b, c);
            for (int e = 0; e < n; ++e)
              s += pk.dgamma(f, e, a, c) * pk.gamma(d, b, e) +
                   pk.gamma(e, a, c) * pk.dgamma(f, d, b, e) -
                   pk.dgamma(f, e, b, c) * pk.gamma(d, a, e) -
                   pk.gamma(e, b, c) * pk.dgamma(f, d, a, e);
            drm(f, d, a, b, c) = s;
          }

  pk.riemann = TensorValue(n, {V::Cov, V::Cov, V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += J.G(d, e) * rm(e, a, b, c);
          pk.riemann(a, b, c, d) = s;
        }

  pk.driemann = TensorValue(n, {V::Cov, V::Cov, V::Cov, V::Cov, V::Cov});
  for (int f = 0; f < n; ++f)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int e = 0; e < n; ++e)
              s += J.dG(f, d, e) * rm(e, a, b, c) + J.G(d, e) * drm(f, e, a, b, c);
            pk.driemann(f, a, b, c, d) = s;
          }

  pk.ricci = TensorValue(n, {V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) s += J.Ginv(b, d) * pk.riemann(a, b, c, d);
      pk.ricci(a, c) = s;
    }

  pk.dricci = TensorValue(n, {V::Cov, V::Cov, V::Cov});
  for (int f = 0; f < n; ++f)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d)
            s += J.dGinv(f, b, d) * pk.riemann(a, b, c, d) +
                 J.Ginv(b, d) * pk.driemann(f, a, b, c, d);
        pk.dricci(f, a, c) = s;
      }

  pk.scalar = 0.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) pk.scalar += J.Ginv(a, c) * pk.ricci(a, c);

  pk.dscalar.assign(std::size_t(n), 0.0);
  for (int f = 0; f < n; ++f) {
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        s += J.dGinv(f, a, c) * pk.ricci(a, c) + J.Ginv(a, c) * pk.dricci(f, a, c);
    pk.dscalar[std::size_t(f)] = s;
  }

  pk.cov_ricci = TensorValue(n, {V::Cov, V::Cov, V::Cov});
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = pk.dricci(c, a, b);
        for (int e = 0; e < n; ++e)
          s -= pk.gamma(e, c, a) * pk.ricci(e, b) +
               pk.gamma(e, c, b) * pk.ricci(a, e);
        pk.cov_ricci(c, a, b) = s;
      }

  if (n < 3) return pk;

  const double cw = 1.0 / (double(n - 1) * double(n - 2));
  const double cr = 1.0 / double(n - 2);

  pk.weyl = TensorValue(n, {V::Cov, V::Cov, V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          pk.weyl(a, b, c, d) =
              pk.riemann(a, b, c, d) +
              pk.scalar * cw * (J.G(a, c) * J.G(b, d) - J.G(a, d) * J.G(b, c)) -
              cr * (pk.ricci(a, c) * J.G(b, d) - pk.ricci(a, d) * J.G(b, c) +
                    pk.ricci(b, d) * J.G(a, c) - pk.ricci(b, c) * J.G(a, d));

  pk.schouten = TensorValue(n, {V::Cov, V::Cov});
  const double cs = 1.0 / (2.0 * double(n - 1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      pk.schouten(a, b) = cr * (pk.ricci(a, b) - cs * pk.scalar * J.G(a, b));

  pk.dschouten = TensorValue(n, {V::Cov, V::Cov, V::Cov});
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        pk.dschouten(c, a, b) =
            cr * (pk.dricci(c, a, b) -
                  cs * (pk.dscalar[std::size_t(c)] * J.G(a, b) +
                        pk.scalar * J.dG(c, a, b)));

  pk.cov_schouten = TensorValue(n, {V::Cov, V::Cov, V::Cov});
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = pk.dschouten(c, a, b);
        for (int e = 0; e < n; ++e)
          s -= pk.gamma(e, c, a) * pk.schouten(e, b) +
               pk.gamma(e, c, b) * pk.schouten(a, e);
        pk.cov_schouten(c, a, b) = s;
      }

  pk.cotton = TensorValue(n, {V::Cov, V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        pk.cotton(a, b, c) =
            pk.cov_ricci(c, a, b) - pk.cov_ricci(b, a, c) -
            cs * (pk.dscalar[std::size_t(c)] * J.G(a, b) -
                  pk.dscalar[std::size_t(b)] * J.G(a, c));

  if (n < 4) return pk;

  pk.dweyl = TensorValue(n, {V::Cov, V::Cov, V::Cov, V::Cov, V::Cov});
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double gg = J.G(a, c) * J.G(b, d) - J.G(a, d) * J.G(b, c);
            double dgg = J.dG(e, a, c) * J.G(b, d) + J.G(a, c) * J.dG(e, b, d) -
                         J.dG(e, a, d) * J.G(b, c) - J.G(a, d) * J.dG(e, b, c);
            double rg = pk.dricci(e, a, c) * J.G(b, d) +
                        pk.ricci(a, c) * J.dG(e, b, d) -
                        pk.dricci(e, a, d) * J.G(b, c) -
                        pk.ricci(a, d) * J.dG(e, b, c) +
                        pk.dricci(e, b, d) * J.G(a, c) +
                        pk.ricci(b, d) * J.dG(e, a, c) -
                        pk.dricci(e, b, c) * J.G(a, d) -
                        pk.ricci(b, c) * J.dG(e, a, d);
            pk.dweyl(e, a, b, c, d) =
                pk.driemann(e, a, b, c, d) +
                cw * (pk.dscalar[std::size_t(e)] * gg + pk.scalar * dgg) -
                cr * rg;
          }

  pk.div_weyl = TensorValue(n, {V::Cov, V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int e = 0; e < n; ++e)
          for (int d = 0; d < n; ++d) {
            // nabla_e W_abcd with one correction per slot
            double cov = pk.dweyl(e, a, b, c, d);
            for (int f = 0; f < n; ++f)
              cov -= pk.gamma(f, e, a) * pk.weyl(f, b, c, d) +
                     pk.gamma(f, e, b) * pk.weyl(a, f, c, d) +
                     pk.gamma(f, e, c) * pk.weyl(a, b, f, d) +
                     pk.gamma(f, e, d) * pk.weyl(a, b, c, f);
            s += J.Ginv(e, d) * cov;
          }
        pk.div_weyl(a, b, c) = s;
      }

  return pk;
}

TensorValue christoffel(const MetricJet& j) {
  return curvature_pack(j).gamma;
}

TensorValue riemann(const MetricJet& j) {
  return curvature_pack(j).riemann;
}

const TensorValue& ricci(const CurvaturePack& pk) { return pk.ricci; }

double scalar_curvature(const CurvaturePack& pk) { return pk.scalar; }

const TensorValue& weyl(const CurvaturePack& pk) {
  require_rank3(pk, "weyl");
  return pk.weyl;
}

TensorValue cotton(const MetricJet& j) {
  if (j.n < 3) throw std::invalid_argument("cotton: requires dimension >= 3");
  return curvature_pack(j).cotton;
}

TensorValue div_weyl(const MetricJet& j) {
  if (j.n < 4)
    throw std::invalid_argument(
        "div_weyl: Weyl vanishes identically below dimension 4");
  return curvature_pack(j).div_weyl;
}

TensorValue hessian(const ScalarJet& f, const CurvaturePack& pk) {
  const int n = pk.n;
  TensorValue h(n, {V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = f.second(a, b);
      for (int c = 0; c < n; ++c) s -= pk.gamma(c, a, b) * f.first(c);
      h(a, b) = s;
    }
  return h;
}

TensorValue gradient_covector(const ScalarJet& f, int n) {
  TensorValue df(n, {V::Cov});
  for (int a = 0; a < n; ++a) df(a) = f.first(a);
  return df;
}

TensorValue gradient_raised(const ScalarJet& f, const CurvaturePack& pk) {
  const int n = pk.n;
  TensorValue v(n, {V::Con});
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += pk.jet.Ginv(a, b) * f.first(b);
    v(a) = s;
  }
  return v;
}

double laplacian(const ScalarJet& f, const CurvaturePack& pk) {
  const int n = pk.n;
  TensorValue h = hessian(f, pk);
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += pk.jet.Ginv(a, b) * h(a, b);
  return s;
}

double grad_norm_sq(const ScalarJet& f, const CurvaturePack& pk) {
  const int n = pk.n;
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += pk.jet.Ginv(a, b) * f.first(a) * f.first(b);
  return s;
}

TensorValue third_cov_derivative(const ScalarJet& f, const CurvaturePack& pk) {
  const int n = pk.n;
  TensorValue h = hessian(f, pk);
  // coordinate derivative of the Hessian
  TensorValue dh(n, {V::Cov, V::Cov, V::Cov});
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = f.third(c, a, b);
        for (int e = 0; e < n; ++e)
          s -= pk.dgamma(c, e, a, b) * f.first(e) +
               pk.gamma(e, a, b) * f.second(c, e);
        dh(c, a, b) = s;
      }
  return cov_derivative(h, dh, pk);
}

double riemann_symmetry_residual(const CurvaturePack& pk) {
  const int n = pk.n;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double r = pk.riemann(a, b, c, d);
          worst = std::max(worst, std::abs(r + pk.riemann(b, a, c, d)));
          worst = std::max(worst, std::abs(r + pk.riemann(a, b, d, c)));
          worst = std::max(worst, std::abs(r - pk.riemann(c, d, a, b)));
          worst = std::max(worst, std::abs(r + pk.riemann(b, c, a, d) +
                                           pk.riemann(c, a, b, d)));
        }
  return worst;
}

double weyl_trace_residual(const CurvaturePack& pk) {
  require_rank3(pk, "weyl_trace_residual");
  const int n = pk.n;
  const MetricJet& J = pk.jet;
  double worst = 0.0;
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      double t13 = 0.0, t14 = 0.0, t23 = 0.0, t24 = 0.0, t12 = 0.0, t34 = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          t13 += J.Ginv(a, b) * pk.weyl(a, c, b, d);
          t14 += J.Ginv(a, b) * pk.weyl(a, c, d, b);
          t23 += J.Ginv(a, b) * pk.weyl(c, a, b, d);
          t24 += J.Ginv(a, b) * pk.weyl(c, a, d, b);
          t12 += J.Ginv(a, b) * pk.weyl(a, b, c, d);
          t34 += J.Ginv(a, b) * pk.weyl(c, d, a, b);
        }
      for (double t : {t13, t14, t23, t24, t12, t34})
        worst = std::max(worst, std::abs(t));
    }
  return worst;
}

double cotton_structure_residual(const CurvaturePack& pk) {
  require_rank3(pk, "cotton_structure_residual");
  const int n = pk.n;
  const MetricJet& J = pk.jet;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        worst =
            std::max(worst, std::abs(pk.cotton(a, b, c) + pk.cotton(a, c, b)));
  for (int c = 0; c < n; ++c) {
    double tr = 0.0, tr2 = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        tr += J.Ginv(a, b) * pk.cotton(a, b, c);
        tr2 += J.Ginv(a, b) * pk.cotton(a, c, b);
      }
    worst = std::max({worst, std::abs(tr), std::abs(tr2)});
  }
  return worst;
}

double div_weyl_identity_residual(const CurvaturePack& pk) {
  if (pk.n < 4)
    throw std::invalid_argument("div_weyl_identity_residual: requires n >= 4");
  const int n = pk.n;
  const double k = double(n - 3) / double(n - 2);
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        worst = std::max(
            worst, std::abs(pk.div_weyl(a, b, c) + k * pk.cotton(c, b, a)));
  return worst;
}

double contracted_bianchi_residual(const CurvaturePack& pk) {
  const int n = pk.n;
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    double div = 0.0;
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        div += pk.jet.Ginv(b, c) * pk.cov_ricci(c, a, b);
    worst = std::max(worst, std::abs(div - 0.5 * pk.dscalar[std::size_t(a)]));
  }
  return worst;
}

double cotton_schouten_residual(const CurvaturePack& pk) {
  require_rank3(pk, "cotton_schouten_residual");
  const int n = pk.n;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        worst = std::max(
            worst, std::abs(pk.cotton(a, b, c) -
                            double(n - 2) * (pk.cov_schouten(c, a, b) -
                                             pk.cov_schouten(b, a, c))));
  return worst;
}

double metric_inverse_derivative_residual(const MetricJet& J) {
  const int n = J.n;
  double worst = 0.0;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s1 = 0.0;
        for (int e = 0; e < n; ++e)
          s1 += J.dG(c, a, e) * J.Ginv(e, b) + J.G(a, e) * J.dGinv(c, e, b);
        worst = std::max(worst, std::abs(s1));
      }
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s2 = 0.0;
          for (int e = 0; e < n; ++e)
            s2 += J.d2G(d, c, a, e) * J.Ginv(e, b) +
                  J.dG(c, a, e) * J.dGinv(d, e, b) +
                  J.dG(d, a, e) * J.dGinv(c, e, b) +
                  J.G(a, e) * J.d2Ginv(d, c, e, b);
          worst = std::max(worst, std::abs(s2));
        }
  for (int e = 0; e < n; ++e)
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double s3 = 0.0;
            for (int q = 0; q < n; ++q)
              s3 += J.d3G(e, d, c, a, q) * J.Ginv(q, b) +
                    J.d2G(d, c, a, q) * J.dGinv(e, q, b) +
                    J.d2G(e, c, a, q) * J.dGinv(d, q, b) +
                    J.d2G(e, d, a, q) * J.dGinv(c, q, b) +
                    J.dG(c, a, q) * J.d2Ginv(e, d, q, b) +
                    J.dG(d, a, q) * J.d2Ginv(e, c, q, b) +
                    J.dG(e, a, q) * J.d2Ginv(d, c, q, b) +
                    J.G(a, q) * J.d3Ginv(e, d, c, q, b);
            worst = std::max(worst, std::abs(s3));
          }
  return worst;
}

TensorValue cov_derivative(const TensorValue& t, const TensorValue& dt,
                           const CurvaturePack& pk) {
  const int n = pk.n;
  if (t.dim() != n || dt.dim() != n || dt.rank() != t.rank() + 1)
    throw std::invalid_argument(
        "cov_derivative: derivative data must add one leading slot");
  std::vector<Variance> sig;
  sig.push_back(Variance::Cov);
  sig.insert(sig.end(), t.signature().begin(), t.signature().end());
  if (dt.signature() != sig)
    throw std::invalid_argument("cov_derivative: derivative signature mismatch");

  TensorValue out(n, sig);
  std::vector<int> idx(std::size_t(t.rank()) + 1, 0), tmp(std::size_t(t.rank()), 0);
  do {
    const int c = idx[0];
    double s = dt.at(idx);
    for (int slot = 0; slot < t.rank(); ++slot) {
      const int is = idx[std::size_t(slot) + 1];
      for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = idx[k + 1];
      for (int e = 0; e < n; ++e) {
        tmp[std::size_t(slot)] = e;
        if (t.signature()[std::size_t(slot)] == Variance::Cov)
          s -= pk.gamma(e, c, is) * t.at(tmp);
        else
          s += pk.gamma(is, c, e) * t.at(tmp);
      }
      tmp[std::size_t(slot)] = is;
    }
    out.at(idx) = s;
  } while (next_index(idx, n));
  return out;
}

}  // namespace jetgeom
