#include "jetgeom/splitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace jetgeom {

namespace {

using V = Variance;

double leaf_block_scale(const MetricJet& J) {
  double s = 0.0;
  for (int i = 1; i < J.n; ++i)
    for (int j = 1; j < J.n; ++j) s = std::max(s, std::abs(J.G(i, j)));
  return s;
}

// sigma1 = S_11/g_11, sigma2 = leaf-block trace of S / (n-1), and the
// x1-derivative of sigma2 assembled from the coordinate derivatives
struct SchoutenEigenData {
  double sigma1, sigma2, dsigma2_dx1;
};

SchoutenEigenData schouten_split(const CurvaturePack& pk) {
  const int n = pk.n;
  const MetricJet& J = pk.jet;
  SchoutenEigenData out{};
  out.sigma1 = pk.schouten(0, 0) / J.G(0, 0);
  double tr = 0.0, dtr = 0.0;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      tr += J.Ginv(i, j) * pk.schouten(i, j);
      dtr += J.dGinv(0, i, j) * pk.schouten(i, j) +
             J.Ginv(i, j) * pk.dschouten(0, i, j);
    }
  out.sigma2 = tr / double(n - 1);
  out.dsigma2_dx1 = dtr / double(n - 1);
  return out;
}

}  // namespace

EigenSplit ricci_eigenstructure(const MetricField& m, const ScalarExpr& f,
                                std::span<const double> p, double gap_tol) {
  const int n = m.dim();
  if (n < 3)
    throw std::invalid_argument("ricci_eigenstructure: requires n >= 3");
  ConformalPair pair = conformal_metric(m, f / double(n - 2));
  CurvaturePack pk = curvature_pack(pair.rescaled.jet(p));

  Eigen::MatrixXd ric(n, n), g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      ric(a, b) = pk.ricci(a, b);
      g(a, b) = pk.jet.G(a, b);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ric, g);

  EigenSplit out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  double mag = 0.0;
  for (double v : out.eigenvalues) mag = std::max(mag, std::abs(v));

  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || out.eigenvalues[std::size_t(i)] -
                          out.eigenvalues[std::size_t(i - 1)] >
                      gap_tol * (1.0 + mag)) {
      double sum = 0.0;
      for (int k = start; k < i; ++k) sum += out.eigenvalues[std::size_t(k)];
      out.clusters.emplace_back(sum / double(i - start), i - start);
      start = i;
    }
  }

  // radial alignment against the multiplicity-1 eigenvector, at regular
  // points of f only
  ScalarJet fj = f.jet(p);
  Eigen::VectorXd gf(n);
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += pk.jet.Ginv(a, b) * fj.first(b);
    gf(a) = s;
  }
  double gf_norm2 = gf.transpose() * g * gf;
  if (gf_norm2 > 1e-12 && out.clusters.size() == 2) {
    int mult1_index = -1;
    if (out.clusters[0].second == 1)
      mult1_index = 0;
    else if (out.clusters[1].second == 1)
      mult1_index = n - 1;
    if (mult1_index >= 0) {
      Eigen::VectorXd v = es.eigenvectors().col(mult1_index);
      double vg2 = v.transpose() * g * v;
      double dot = v.transpose() * g * gf;
      out.radial_alignment =
          std::abs(dot) / std::sqrt(vg2 * gf_norm2);
    }
  }
  return out;
}

TensorValue codazzi_residual(const MetricField& m, std::span<const double> p) {
  if (m.dim() < 3)
    throw std::invalid_argument("codazzi_residual: requires n >= 3");
  CurvaturePack pk = curvature_pack(m.jet(p));
  const int n = pk.n;
  TensorValue out(n, {V::Cov, V::Cov, V::Cov});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out(a, b, c) = pk.cov_schouten(c, a, b) - pk.cov_schouten(b, a, c);
  return out;
}

AdaptedChartMetric::AdaptedChartMetric(MetricField m) : metric(std::move(m)) {
  for (int i = 1; i < metric.dim(); ++i)
    if (!metric.entry(0, i).is_number(0.0))
      throw std::invalid_argument(
          "chart not adapted: g_1" + std::to_string(i + 1) +
          " is not the literal zero expression");
}

SecondFundamentalForm second_fundamental_form(const AdaptedChartMetric& a,
                                              std::span<const double> p) {
  const int n = a.dim();
  MetricJet J = a.metric.jet(p);
  TensorValue gamma = christoffel(J);

  SecondFundamentalForm out;
  out.h = TensorValue(n, {V::Cov, V::Cov});
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) out.h(i, j) = -gamma(0, i, j) * J.G(0, 0);

  double H = 0.0;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) H += J.Ginv(i, j) * out.h(i, j);
  out.mean_curvature = H;

  double worst = 0.0;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      worst = std::max(worst, std::abs(out.h(i, j) -
                                       H / double(n - 1) * J.G(i, j)));
  out.umbilicity_residual = worst;
  return out;
}

namespace {

double codazzi_mainardi_from_pack(const CurvaturePack& pk, int i, int j, int k) {
  const int n = pk.n;
  const MetricJet& J = pk.jet;

  // h and its leaf-direction coordinate derivatives
  auto h = [&](int x, int y) { return -pk.gamma(0, x, y) * J.G(0, 0); };
  auto dh = [&](int c, int x, int y) {
    return -pk.dgamma(c, 0, x, y) * J.G(0, 0) - pk.gamma(0, x, y) * J.dG(c, 0, 0);
  };

  // Levi-Civita connection of the induced leaf metric: only leaf-direction
  // derivatives of the leaf block enter
  auto leaf_gamma = [&](int l, int x, int y) {
    double s = 0.0;
    for (int m2 = 1; m2 < n; ++m2)
      s += J.Ginv(l, m2) * (J.dG(x, m2, y) + J.dG(y, m2, x) - J.dG(m2, x, y));
    return 0.5 * s;
  };

  auto cov_leaf = [&](int c, int x, int y) {
    double s = dh(c, x, y);
    for (int l = 1; l < n; ++l)
      s -= leaf_gamma(l, c, x) * h(l, y) + leaf_gamma(l, c, y) * h(x, l);
    return s;
  };

  const double lhs = cov_leaf(i, j, k) - cov_leaf(j, i, k);
  const double rhs = pk.riemann(i, j, k, 0);
  return lhs - rhs;
}

}  // namespace

double codazzi_mainardi_residual(const AdaptedChartMetric& a,
                                 std::span<const double> p, int i, int j,
                                 int k) {
  const int n = a.dim();
  if (i < 1 || j < 1 || k < 1 || i >= n || j >= n || k >= n)
    throw std::invalid_argument(
        "codazzi_mainardi_residual: leaf indices run from 1 to n-1");
  CurvaturePack pk = curvature_pack(a.metric.jet(p));
  return codazzi_mainardi_from_pack(pk, i, j, k);
}

double codazzi_mainardi_max(const AdaptedChartMetric& a,
                            std::span<const double> p) {
  const int n = a.dim();
  CurvaturePack pk = curvature_pack(a.metric.jet(p));
  double worst = 0.0;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      for (int k = 1; k < n; ++k)
        worst = std::max(worst,
                         std::abs(codazzi_mainardi_from_pack(pk, i, j, k)));
  return worst;
}

LeafDiagnostics leaf_mean_curvature_diagnostics(
    const AdaptedChartMetric& a,
    std::span<const std::vector<double>> samples, double gap_tol) {
  const int n = a.dim();
  if (n < 3)
    throw std::invalid_argument(
        "leaf_mean_curvature_diagnostics: requires n >= 3");
  LeafDiagnostics out;
  out.min_sigma_gap = std::numeric_limits<double>::infinity();

  for (const auto& p : samples) {
    CurvaturePack pk = curvature_pack(a.metric.jet(p));
    const MetricJet& J = pk.jet;
    SchoutenEigenData sd = schouten_split(pk);

    double gap = std::abs(sd.sigma1 - sd.sigma2);
    double mag = std::max(std::abs(sd.sigma1), std::abs(sd.sigma2));
    out.min_sigma_gap = std::min(out.min_sigma_gap, gap);
    if (gap <= gap_tol * (1.0 + mag)) {
      ++out.inconclusive_points;
      continue;
    }
    ++out.conclusive_points;

    // (a) H constant along leaves
    for (int dir = 1; dir < n; ++dir) {
      double dH = 0.0;
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
          double h_ij = -pk.gamma(0, i, j) * J.G(0, 0);
          double dh_ij = -pk.dgamma(dir, 0, i, j) * J.G(0, 0) -
                         pk.gamma(0, i, j) * J.dG(dir, 0, 0);
          dH += J.dGinv(dir, i, j) * h_ij + J.Ginv(i, j) * dh_ij;
        }
      out.max_leaf_dH = std::max(out.max_leaf_dH, std::abs(dH));
    }

    // (b) umbilicity factor against the eigenvalue derivative
    SecondFundamentalForm sff = second_fundamental_form(a, p);
    double lhs = sff.mean_curvature / double(n - 1);
    double rhs = sd.dsigma2_dx1 / (sd.sigma1 - sd.sigma2);
    out.h_sigma_residual = std::max(out.h_sigma_residual, std::abs(lhs - rhs));

    // (c) geodesic line distribution: g_11 constant along leaves
    for (int dir = 1; dir < n; ++dir)
      out.max_leaf_dg11 = std::max(out.max_leaf_dg11, std::abs(J.dG(dir, 0, 0)));
  }
  return out;
}

WarpSplit warp_split(const AdaptedChartMetric& a, const WarpGrid& grid) {
  const int n = a.dim();
  if (grid.x1.size() < 2)
    throw std::invalid_argument("warp_split: need at least two grid values");
  if (grid.leaf_points.empty())
    throw std::invalid_argument("warp_split: need at least one leaf point");
  for (const auto& q : grid.leaf_points)
    if (int(q.size()) != n - 1)
      throw std::invalid_argument("warp_split: leaf points have n-1 coordinates");

  auto full_point = [&](double t, const std::vector<double>& leaf) {
    std::vector<double> p(std::size_t(n), 0.0);
    p[0] = t;
    for (int i = 1; i < n; ++i) p[std::size_t(i)] = leaf[std::size_t(i - 1)];
    return p;
  };

  // phi(t) as the entrywise logarithmic x1-derivative of the leaf block
  auto phi_at = [&](double t, double* spread_out) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int count = 0;
    for (const auto& leaf : grid.leaf_points) {
      MetricJet J = a.metric.jet(full_point(t, leaf));
      double scale = leaf_block_scale(J);
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
          if (std::abs(J.G(i, j)) <= 1e-9 * scale) continue;
          double ratio = J.dG(0, i, j) / J.G(i, j);
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
          sum += ratio;
          ++count;
        }
    }
    if (count == 0)
      throw NotWarpedError("warp_split: leaf block vanishes on the grid");
    if (spread_out) *spread_out = hi - lo;
    return sum / double(count);
  };

  WarpSplit out;
  out.x1 = grid.x1;
  out.phi.resize(grid.x1.size());
  out.psi.resize(grid.x1.size());
  for (std::size_t t = 0; t < grid.x1.size(); ++t) {
    double spread = 0.0;
    out.phi[t] = phi_at(grid.x1[t], &spread);
    out.ratio_spread = std::max(out.ratio_spread, spread);
    if (spread > 1e-6 * (1.0 + std::abs(out.phi[t])))
      throw NotWarpedError(
          "warp_split: d_1 g_ij / g_ij is not independent of (i,j) "
          "(spread " + std::to_string(spread) + "); the input is not a "
          "warped product on this chart");
  }

  // psi by a composite trapezoid rule, refined between output nodes so the
  // quadrature error stays far below the reconstruction tolerance
  const int refine = 256;
  out.psi[0] = 0.0;
  for (std::size_t t = 1; t < grid.x1.size(); ++t) {
    const double lo = grid.x1[t - 1], hi = grid.x1[t];
    const double h = (hi - lo) / double(refine);
    double acc = 0.0;
    double prev = out.phi[t - 1];
    for (int s = 1; s <= refine; ++s) {
      double x = lo + h * double(s);
      double cur = (s == refine) ? out.phi[t] : phi_at(x, nullptr);
      acc += 0.5 * (prev + cur) * h;
      prev = cur;
    }
    out.psi[t] = out.psi[t - 1] + acc;
  }

  // fiber metric on the base leaf: G_ij = g_ij(x1_0, .) since psi(x1_0) = 0
  std::vector<int> map(std::size_t(n), -1);
  for (int i = 1; i < n; ++i) map[std::size_t(i)] = i - 1;
  std::vector<ScalarExpr> upper;
  for (int i = 1; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(
          a.metric.entry(i, j).substituted(0, grid.x1[0]).remapped(map, n - 1));
  MetricField fiber = MetricField::from_upper(n - 1, std::move(upper));
  fiber.set_domain(
      a.metric.domain().substituted(0, grid.x1[0]).remapped(map, n - 1));
  std::vector<std::pair<double, double>> fbox(a.metric.box().begin() + 1,
                                              a.metric.box().end());
  fiber.set_box(std::move(fbox));
  out.fiber = fiber;

  // reconstruction defect of g_ij = e^psi G_ij over the grid
  double worst = 0.0;
  for (std::size_t t = 0; t < grid.x1.size(); ++t)
    for (const auto& leaf : grid.leaf_points) {
      MetricJet J = a.metric.jet(full_point(grid.x1[t], leaf));
      MetricAtPoint G = fiber.at(leaf);
      double scale = leaf_block_scale(J);
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
          double expect = std::exp(out.psi[t]) * G.lo(i - 1, j - 1);
          worst = std::max(worst,
                           std::abs(J.G(i, j) - expect) / (1.0 + scale));
        }
    }
  out.reconstruction_residual = worst;
  return out;
}

FiberEinsteinReport fiber_einstein_check(
    const MetricField& fiber, std::span<const std::vector<double>> leaf_points) {
  const int m = fiber.dim();
  FiberEinsteinReport out;
  if (m < 2) {
    out.trivially_satisfied = true;
    return out;
  }
  if (leaf_points.empty())
    throw std::invalid_argument("fiber_einstein_check: no leaf points");

  double klo = 0.0, khi = 0.0, ksum = 0.0;
  bool first = true;
  double sectional = 0.0;
  for (const auto& q : leaf_points) {
    CurvaturePack pk = curvature_pack(fiber.jet(q));
    double kappa = pk.scalar / double(m);
    TensorValue traceless = pk.ricci + (-kappa) * pk.jet.metric_tensor();
    out.max_traceless = std::max(out.max_traceless, max_abs(traceless));
    if (first) {
      klo = khi = kappa;
      first = false;
    } else {
      klo = std::min(klo, kappa);
      khi = std::max(khi, kappa);
    }
    ksum += kappa;

    if (m == 3) {
      double ks = pk.scalar / double(m * (m - 1));
      const MetricJet& J = pk.jet;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d)
              sectional = std::max(
                  sectional,
                  std::abs(pk.riemann(a, b, c, d) -
                           ks * (J.G(a, c) * J.G(b, d) - J.G(a, d) * J.G(b, c))));
    }
  }
  out.einstein_constant = ksum / double(leaf_points.size());
  out.constant_spread = khi - klo;
  if (m == 3) out.sectional_residual = sectional;
  return out;
}

}  // namespace jetgeom
