// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include "jetgeom/conformal.hpp"
#include "jetgeom/fd_oracle.hpp"
#include "jetgeom/gqe.hpp"
#include "jetgeom/random_metric.hpp"
#include "jetgeom/rng.hpp"
#include "jetgeom/splitting.hpp"
#include "jetgeom/verify.hpp"
#include "jetgeom/zoo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace jetgeom;

namespace {

struct Criterion {
  int index = 0;
  std::string label;
  double budget_s = 600.0;
  bool ok = true;
  double worst = 0.0;
  std::string detail;
};

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<std::vector<double>> seeded_points(const MetricField& m, int count,
                                               std::uint64_t seed) {
  return sample_points(m, count, seed);
}

// criterion 1: sphere sign anchor
Criterion criterion1() {
  Criterion c{1, "curvature sign anchor on round spheres", 5.0};
  Rng rng(101);
  for (int n : {3, 4, 5}) {
    ZooInstance z = sphere(n, 1.0);
    auto pts = seeded_points(z.metric, 20, 100 + std::uint64_t(n));
    for (const auto& p : pts) {
      MetricJet J = z.metric.jet(p);
      TensorValue R = riemann(J);
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int cc = 0; cc < n; ++cc)
            for (int d = 0; d < n; ++d)
              worst = std::max(worst,
                               std::abs(R(a, b, cc, d) -
                                        (J.G(a, cc) * J.G(b, d) -
                                         J.G(a, d) * J.G(b, cc))));
      c.worst = std::max(c.worst, worst);
      if (worst > 1e-10) c.ok = false;

      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(std::size_t(n), 0.0), w(std::size_t(n), 0.0);
        double gram = 0.0;
        do {
          for (auto& x : v) x = rng.uniform(-1.0, 1.0);
          for (auto& x : w) x = rng.uniform(-1.0, 1.0);
          double vv = 0, ww = 0, vw = 0;
          for (int i = 0; i < n; ++i) {
            vv += v[std::size_t(i)] * v[std::size_t(i)];
            ww += w[std::size_t(i)] * w[std::size_t(i)];
            vw += v[std::size_t(i)] * w[std::size_t(i)];
          }
          gram = vv * ww - vw * vw;
        } while (gram < 1e-6);  // keep the pair genuinely independent
        double sec = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc)
              for (int d = 0; d < n; ++d)
                sec += R(a, b, cc, d) * v[std::size_t(a)] * w[std::size_t(b)] *
                       v[std::size_t(cc)] * w[std::size_t(d)];
        if (!(sec > 0.0)) c.ok = false;
      }
    }
  }
  char buf1[64];
  std::snprintf(buf1, sizeof buf1, "max |R - g^g| = %.2e", c.worst);
  c.detail = buf1;
  return c;
}

// criterion 2: divergence identity on random metrics
Criterion criterion2() {
  Criterion c{2, "divergence of Weyl against the Cotton tensor", 60.0};
  for (int n : {4, 5}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MetricField m = random_analytic_metric(n, 2000 + 50 * seed + std::uint64_t(n));
      auto pts = seeded_points(m, 20, seed);
      for (const auto& p : pts) {
        CurvaturePack pk = curvature_pack(m.jet(p));
        double scale = std::max(max_abs(pk.div_weyl), max_abs(pk.cotton));
        double r = div_weyl_identity_residual(pk) / (1.0 + scale);
        c.worst = std::max(c.worst, r);
        if (r > 1e-8) c.ok = false;
      }
    }
  }
  char buf2[64];
  std::snprintf(buf2, sizeof buf2, "max scale-aware residual = %.2e", c.worst);
  c.detail = buf2;
  return c;
}

// criterion 3: conformal transformation of Cotton and Schouten tensors
Criterion criterion3() {
  Criterion c{3, "conformal laws for Schouten and Cotton tensors", 60.0};
  double worst_sch = 0.0, worst_cot = 0.0, worst_3d = 0.0;
  for (int n : {4, 5}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MetricField m = random_analytic_metric(n, 3000 + 50 * seed + std::uint64_t(n));
      ScalarExpr u = random_potential(n, 3100 + seed, 0.3);
      ConformalPair pair = conformal_metric(m, u);
      auto pts = seeded_points(m, 10, seed);
      for (const auto& p : pts) {
        CurvaturePack base = curvature_pack(m.jet(p));
        double s = max_abs(schouten_conformal_residual(pair, p)) /
                   (1.0 + max_abs(base.schouten));
        double k = max_abs(cotton_conformal_residual(pair, p)) /
                   (1.0 + max_abs(base.cotton));
        worst_sch = std::max(worst_sch, s);
        worst_cot = std::max(worst_cot, k);
        if (s > 1e-9 || k > 1e-8) c.ok = false;
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MetricField m = random_analytic_metric(3, 3200 + seed);
    ScalarExpr u = random_potential(3, 3300 + seed, 0.3);
    ConformalPair pair = conformal_metric(m, u);
    auto pts = seeded_points(m, 10, seed);
    for (const auto& p : pts) {
      double r = max_abs(cotton_conformal_residual(pair, p));
      worst_3d = std::max(worst_3d, r);
      if (r > 1e-8) c.ok = false;
    }
  }
  c.worst = std::max({worst_sch, worst_cot, worst_3d});
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "schouten %.2e, cotton %.2e, 3d invariance %.2e", worst_sch,
                worst_cot, worst_3d);
  c.detail = buf;
  return c;
}

// criterion 4: commutation identity
Criterion criterion4() {
  Criterion c{4, "Ricci commutation identity", 30.0};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MetricField m = random_analytic_metric(4, 4000 + seed);
    ScalarExpr u = random_potential(4, 4100 + seed, 0.4);
    auto pts = seeded_points(m, 10, seed);
    for (const auto& p : pts) {
      double r = max_abs(ricci_commutation_residual(m, u, p));
      c.worst = std::max(c.worst, r);
      if (r > 1e-8) c.ok = false;
    }
  }
  char buf3[64];
  std::snprintf(buf3, sizeof buf3, "max residual = %.2e", c.worst);
  c.detail = buf3;
  return c;
}

// criterion 5: conformal Ricci formula
Criterion criterion5() {
  Criterion c{5, "conformal Ricci formula", 60.0};
  for (int n : {4, 5}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MetricField m = random_analytic_metric(n, 5000 + 50 * seed + std::uint64_t(n));
      ScalarExpr f = random_potential(n, 5100 + seed, 0.4);
      auto pts = seeded_points(m, 10, seed);
      for (const auto& p : pts) {
        CurvaturePack base = curvature_pack(m.jet(p));
        double r = max_abs(ricci_conformal_residual(m, f, p)) /
                   (1.0 + max_abs(base.ricci));
        c.worst = std::max(c.worst, r);
        if (r > 1e-9) c.ok = false;
      }
    }
  }
  char buf2[64];
  std::snprintf(buf2, sizeof buf2, "max scale-aware residual = %.2e", c.worst);
  c.detail = buf2;
  return c;
}

// criterion 6: the Remark counterexample
Criterion criterion6() {
  Criterion c{6, "Remark counterexample R^2 x S^2", 10.0};
  ZooInstance z = remark_counterexample(2, 4);
  auto pts = seeded_points(z.metric, 50, 606);
  double worst_gqe = 0.0, worst_cotton = 0.0, best_radial = 0.0;
  for (const auto& p : pts) {
    MetricAtPoint mp = z.metric.at(p);
    worst_gqe = std::max(worst_gqe,
                         tensor_norm(gqe_residual(z.metric, *z.gqe, p), mp));
    worst_cotton = std::max(worst_cotton,
                            tensor_norm(cotton(z.metric.jet(p)), mp));
    if (std::abs(p[0]) > 1e-3)
      best_radial = std::max(best_radial, radial_weyl_norm(z.metric, z.gqe->f, p));
  }
  if (worst_gqe > 1e-10 || worst_cotton > 1e-10 || !(best_radial > 0.05))
    c.ok = false;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "gqe %.2e, cotton %.2e, radial weyl %.3f (> 0.05)", worst_gqe,
                worst_cotton, best_radial);
  c.detail = buf;
  c.worst = std::max(worst_gqe, worst_cotton);
  return c;
}

// criterion 7: end-to-end warped splitting pipeline
Criterion criterion7() {
  Criterion c{7, "Theorem 1 end-to-end on warped GQE instances", 120.0};
  std::string detail;
  for (auto z : {warped_sphere_gqe(), warped_flat_gqe()}) {
    const int n = z.metric.dim();
    auto pts = seeded_points(z.metric, 20, 707 + std::uint64_t(n));
    AdaptedChartMetric adapted(z.metric);

    // eigenstructure (1, n-1) with radial alignment at every regular point
    for (const auto& p : pts) {
      EigenSplit es = ricci_eigenstructure(z.metric, z.gqe->f, p);
      bool shape = es.clusters.size() == 2 &&
                   std::min(es.clusters[0].second, es.clusters[1].second) == 1 &&
                   std::max(es.clusters[0].second, es.clusters[1].second) == n - 1;
      if (!shape || !es.radial_alignment ||
          std::abs(*es.radial_alignment - 1.0) > 1e-8)
        c.ok = false;
    }

    double worst_umb = 0.0, worst_cm = 0.0;
    for (const auto& p : pts) {
      worst_umb = std::max(worst_umb,
                           second_fundamental_form(adapted, p).umbilicity_residual);
      worst_cm = std::max(worst_cm, codazzi_mainardi_max(adapted, p));
    }
    if (worst_umb > 1e-10 || worst_cm > 1e-8) c.ok = false;

    LeafDiagnostics ld = leaf_mean_curvature_diagnostics(adapted, pts);
    if (ld.conclusive_points == 0 || ld.max_leaf_dH > 1e-8 ||
        ld.h_sigma_residual > 1e-8 || ld.max_leaf_dg11 > 1e-8)
      c.ok = false;

    WarpGrid grid;
    const auto& box = z.metric.box();
    for (int t = 0; t < 12; ++t)
      grid.x1.push_back(box[0].first + 0.02 +
                        (box[0].second - box[0].first - 0.04) * double(t) / 11.0);
    for (const auto& p : pts) {
      if (grid.leaf_points.size() >= 3) break;
      grid.leaf_points.emplace_back(p.begin() + 1, p.end());
    }
    WarpSplit ws = warp_split(adapted, grid);
    if (ws.reconstruction_residual > 1e-7) c.ok = false;

    FiberEinsteinReport fe = fiber_einstein_check(ws.fiber, grid.leaf_points);
    if (fe.max_traceless > 1e-8 || fe.constant_spread > 1e-8) c.ok = false;
    if (n == 4) {
      if (!fe.sectional_residual || *fe.sectional_residual > 1e-8) c.ok = false;
    }

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "[%s: umb %.1e cm %.1e dH %.1e hsig %.1e warp %.1e fiber %.1e] ",
                  z.name.c_str(), worst_umb, worst_cm, ld.max_leaf_dH,
                  ld.h_sigma_residual, ws.reconstruction_residual,
                  std::max(fe.max_traceless, fe.constant_spread));
    detail += buf;
  }
  c.detail = detail;
  return c;
}

// criterion 8: oracle equivalence
Criterion criterion8() {
  Criterion c{8, "finite-difference oracle equivalence", 30.0};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 3 + int(seed % 3);
    MetricField m = random_analytic_metric(n, 8000 + seed);
    auto pts = seeded_points(m, 3, seed);
    for (const auto& p : pts) {
      CurvaturePack jet_pk = curvature_pack(m.jet(p));
      CurvaturePack fd_pk = curvature_pack(fd_metric_jet(m, p));
      double rg = max_abs_diff(jet_pk.gamma, fd_pk.gamma) /
                  (1.0 + max_abs(jet_pk.gamma));
      double rr = max_abs_diff(jet_pk.ricci, fd_pk.ricci) /
                  (1.0 + max_abs(jet_pk.ricci));
      c.worst = std::max({c.worst, rg, rr});
      if (rg > 1e-5 || rr > 1e-5) c.ok = false;
    }
  }
  char buf4[64];
  std::snprintf(buf4, sizeof buf4, "max relative deviation = %.2e", c.worst);
  c.detail = buf4;
  return c;
}

// criterion 9: byte-identical reports
Criterion criterion9() {
  Criterion c{9, "deterministic reports modulo timestamp", 120.0};
  RunConfig config;
  config.instance = "remark:2,4";
  config.suites = {"curvature-identities", "gqe", "splitting"};
  config.samples = 10;
  config.seed = 909;
  VerificationReport a = run(config);
  VerificationReport b = run(config);
  auto ja = a.to_json(true), jb = b.to_json(true);
  ja.erase("timestamp");
  jb.erase("timestamp");
  std::string da = ja.dump(2), db = jb.dump(2);
  c.ok = (da == db);
  c.detail = c.ok ? "reports identical (" + std::to_string(da.size()) + " bytes)"
                  : "reports differ";
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  Criterion (*criteria[])() = {criterion1, criterion2, criterion3,
                               criterion4, criterion5, criterion6,
                               criterion7, criterion8, criterion9};
  for (auto* fn : criteria) {
    double t0 = now_s();
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& err) {
      c.ok = false;
      c.detail = std::string("exception: ") + err.what();
    }
    double dt = now_s() - t0;
    bool in_budget = dt < c.budget_s;
    bool pass = c.ok && in_budget;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s  [%.2fs < %.0fs]  %s\n",
                pass ? "PASS" : "FAIL", c.index, c.label.c_str(), dt,
                c.budget_s, c.detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
