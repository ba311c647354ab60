#include "doctest.h"
#include "helpers.hpp"
#include "jetgeom/conformal.hpp"
#include "jetgeom/gqe.hpp"
#include "jetgeom/random_metric.hpp"
#include "jetgeom/zoo.hpp"

#include <cmath>

using namespace jetgeom;
using jetgeom::testing::Rng;

TEST_CASE("conformal rescaling of the metric field") {
  SUBCASE("u = 0 is the identity") {
    MetricField m = random_analytic_metric(4, 1);
    ConformalPair pair = conformal_metric(m, ScalarExpr::number(0.0, 4));
    Rng rng(3);
    auto p = jetgeom::testing::random_point(rng, 4);
    MetricJet a = m.jet(p), b = pair.rescaled.jet(p);
    for (std::size_t i = 0; i < a.g.size(); ++i)
      CHECK(a.g[i] == doctest::Approx(b.g[i]).epsilon(1e-15));
  }

  SUBCASE("rescaled entries track e^{-2u} g exactly") {
    MetricField m = random_analytic_metric(3, 2);
    ScalarExpr u = ScalarExpr::parse("0.3*sin(x1) - 0.2*x2", 3);
    ConformalPair pair = conformal_metric(m, u);
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 3);
      double factor = std::exp(-2.0 * u.value(p));
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          CHECK(std::abs(pair.rescaled.entry(i, j).value(p) -
                         factor * m.entry(i, j).value(p)) <= 1e-13);
    }
  }

  SUBCASE("stereographic sphere is a conformal image of flat space") {
    const int n = 3;
    ZooInstance flat = euclidean(n);
    // u = -log(2/(1+|x|^2)) makes e^{-2u} delta the unit-sphere chart
    ScalarExpr u = ScalarExpr::parse("-log(2/(1 + x1^2 + x2^2 + x3^2))", n);
    ConformalPair pair = conformal_metric(flat.metric, u);
    ZooInstance sph = sphere(n, 1.0);
    Rng rng(7);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, n);
      CurvaturePack a = curvature_pack(pair.rescaled.jet(p));
      CurvaturePack b = curvature_pack(sph.metric.jet(p));
      CHECK(max_abs_diff(a.riemann, b.riemann) <= 1e-11);
      CHECK(a.scalar == doctest::Approx(b.scalar).epsilon(1e-12));
    }
  }

  SUBCASE("constant potential is a homothety") {
    MetricField m = random_analytic_metric(4, 3);
    const double c = 0.37;
    ConformalPair pair = conformal_metric(m, ScalarExpr::number(c, 4));
    Rng rng(11);
    auto p = jetgeom::testing::random_point(rng, 4);
    CurvaturePack base = curvature_pack(m.jet(p));
    CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
    double worst_r = 0.0;
    for (std::size_t i = 0; i < base.riemann.size(); ++i)
      worst_r = std::max(worst_r,
                         std::abs(resc.riemann.data()[i] -
                                  std::exp(-2 * c) * base.riemann.data()[i]));
    CHECK(worst_r <= 1e-12);
    CHECK(resc.scalar ==
          doctest::Approx(std::exp(2 * c) * base.scalar).epsilon(1e-12));
  }
}

TEST_CASE("schouten conformal law") {
  SUBCASE("u = 0 gives a zero residual") {
    MetricField m = random_analytic_metric(4, 5);
    ConformalPair pair = conformal_metric(m, ScalarExpr::number(0.0, 4));
    std::vector<double> p = {0.1, -0.3, 0.5, 0.2};
    CHECK(max_abs(schouten_conformal_residual(pair, p)) <= 1e-14);
  }

  SUBCASE("random n = 4 metrics at 50 seeded points") {
    Rng rng(13);
    for (std::uint64_t seed : {41u, 42u}) {
      MetricField m = random_analytic_metric(4, seed);
      ScalarExpr u = random_potential(4, seed + 100, 0.3);
      ConformalPair pair = conformal_metric(m, u);
      for (int rep = 0; rep < 25; ++rep) {
        auto p = jetgeom::testing::random_point(rng, 4);
        CHECK(max_abs(schouten_conformal_residual(pair, p)) <= 1e-9);
      }
    }
  }

  SUBCASE("flat base: S~ = hess u + du du - |grad u|^2 delta / 2") {
    const int n = 4;
    ZooInstance flat = euclidean(n);
    ScalarExpr u = ScalarExpr::parse("0.4*sin(x1) + 0.2*x2*x4", n);
    ConformalPair pair = conformal_metric(flat.metric, u);
    Rng rng(17);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, n);
      CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
      CurvaturePack base = curvature_pack(flat.metric.jet(p));
      ScalarJet uj = u.jet(p);
      TensorValue du = gradient_covector(uj, n);
      TensorValue expect =
          hessian(uj, base) + outer(du, du) +
          (-0.5 * grad_norm_sq(uj, base)) * base.jet.metric_tensor();
      CHECK(max_abs_diff(resc.schouten, expect) <= 1e-10);
    }
  }
}

TEST_CASE("cotton conformal law") {
  SUBCASE("dimension three: pointwise conformal invariance") {
    Rng rng(19);
    for (std::uint64_t seed : {51u, 52u}) {
      MetricField m = random_analytic_metric(3, seed);
      ScalarExpr u = random_potential(3, seed + 7, 0.3);
      ConformalPair pair = conformal_metric(m, u);
      for (int rep = 0; rep < 10; ++rep) {
        auto p = jetgeom::testing::random_point(rng, 3);
        CHECK(max_abs(cotton_conformal_residual(pair, p)) <= 1e-8);
      }
    }
  }

  SUBCASE("conformally flat base at n = 4: Cotton is preserved") {
    ZooInstance sph = sphere(4, 1.0);
    ScalarExpr u = ScalarExpr::parse("0.3*x1 + 0.2*sin(x2)", 4);
    ConformalPair pair = conformal_metric(sph.metric, u);
    Rng rng(23);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 4);
      // W = 0 kills the Weyl term, and C = 0 for the sphere
      CHECK(max_abs(cotton_conformal_residual(pair, p)) <= 1e-8);
      CHECK(max_abs(cotton(pair.rescaled.jet(p))) <= 1e-8);
    }
  }

  SUBCASE("the Remark instance generates Cotton curvature conformally") {
    ZooInstance z = remark_counterexample(2, 4);
    ScalarExpr u = z.gqe->f / 2.0;  // n - 2 = 2
    ConformalPair pair = conformal_metric(z.metric, u);
    Rng rng(29);
    double biggest = 0.0;
    for (int rep = 0; rep < 8; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 4);
      CHECK(max_abs(cotton_conformal_residual(pair, p)) <= 1e-8);
      biggest = std::max(biggest, max_abs(cotton(pair.rescaled.jet(p))));
    }
    // C~ picks up W(grad f) and is genuinely nonzero off the critical set
    CHECK(biggest > 1e-2);
  }

  SUBCASE("random n = 4 and n = 5 metrics") {
    Rng rng(31);
    for (int n : {4, 5}) {
      MetricField m = random_analytic_metric(n, 600 + std::uint64_t(n));
      ScalarExpr u = random_potential(n, 601, 0.3);
      ConformalPair pair = conformal_metric(m, u);
      for (int rep = 0; rep < 10; ++rep) {
        auto p = jetgeom::testing::random_point(rng, n);
        CHECK(max_abs(cotton_conformal_residual(pair, p)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("ricci conformal law") {
  SUBCASE("constant potential changes nothing") {
    MetricField m = random_analytic_metric(4, 71);
    std::vector<double> p = {0.2, 0.1, -0.4, 0.3};
    ScalarExpr f = ScalarExpr::number(1.3, 4);
    ConformalPair pair = conformal_metric(m, f / 2.0);
    CurvaturePack base = curvature_pack(m.jet(p));
    CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
    CHECK(max_abs_diff(base.ricci, resc.ricci) <= 1e-11);
    CHECK(max_abs(ricci_conformal_residual(m, f, p)) <= 1e-11);
  }

  SUBCASE("flat base with the Gaussian potential, closed form") {
    const int n = 4;
    ZooInstance flat = euclidean(n);
    ScalarExpr f = ScalarExpr::parse("(x1^2 + x2^2 + x3^2 + x4^2)/2", n);
    ConformalPair pair = conformal_metric(flat.metric, f / double(n - 2));
    Rng rng(37);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, n);
      CHECK(max_abs(ricci_conformal_residual(flat.metric, f, p)) <= 1e-9);
      // direct form: Ric~ = (3 - |x|^2/2) delta + x x^T / 2
      CurvaturePack resc = curvature_pack(pair.rescaled.jet(p));
      double x2 = 0.0;
      for (double v : p) x2 += v * v;
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double expect = (a == b ? 3.0 - 0.5 * x2 : 0.0) +
                          0.5 * p[std::size_t(a)] * p[std::size_t(b)];
          worst = std::max(worst, std::abs(resc.ricci(a, b) - expect));
        }
      CHECK(worst <= 1e-10);
    }
  }

  SUBCASE("random n = 5 metrics and potentials at 50 points") {
    Rng rng(41);
    for (std::uint64_t seed : {81u, 82u}) {
      MetricField m = random_analytic_metric(5, seed);
      ScalarExpr f = random_potential(5, seed + 5, 0.4);
      for (int rep = 0; rep < 25; ++rep) {
        auto p = jetgeom::testing::random_point(rng, 5);
        CHECK(max_abs(ricci_conformal_residual(m, f, p)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("ricci commutation identity") {
  Rng rng(43);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MetricField m = random_analytic_metric(4, 900 + seed);
    ScalarExpr u = random_potential(4, 900 + seed, 0.4);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 4);
      CHECK(max_abs(ricci_commutation_residual(m, u, p)) <= 1e-8);
    }
  }
}

TEST_CASE("composition of rescalings") {
  Rng rng(47);
  MetricField m = random_analytic_metric(4, 1001);
  ScalarExpr u = ScalarExpr::parse("0.2*sin(x1) + 0.1*x2", 4);
  ScalarExpr v = ScalarExpr::parse("0.15*cos(x3) - 0.1*x4", 4);
  ConformalPair two = conformal_metric(conformal_metric(m, u).rescaled, v);
  ConformalPair one = conformal_metric(m, u + v);
  for (int rep = 0; rep < 10; ++rep) {
    auto p = jetgeom::testing::random_point(rng, 4);
    CurvaturePack a = curvature_pack(two.rescaled.jet(p));
    CurvaturePack b = curvature_pack(one.rescaled.jet(p));
    CHECK(max_abs_diff(a.riemann, b.riemann) <=
          1e-10 * (1.0 + max_abs(b.riemann)));
    CHECK(std::abs(a.scalar - b.scalar) <= 1e-10 * (1.0 + std::abs(b.scalar)));
  }
}

TEST_CASE("structural equation shapes the conformal Ricci tensor") {
  Rng rng(53);
  for (const char* key :
       {"gaussian:4", "remark:2,4", "warped-sphere:4", "almost-soliton:4"}) {
    ZooInstance z = instance_by_key(key);
    const auto& box = z.metric.box();
    for (int rep = 0; rep < 6; ++rep) {
      std::vector<double> p(4, 0.0);
      do {
        for (int i = 0; i < 4; ++i)
          p[std::size_t(i)] = rng.uniform(box[std::size_t(i)].first,
                                          box[std::size_t(i)].second);
      } while (!z.metric.in_domain(p));
      CAPTURE(key);
      CHECK(max_abs(gqe_conformal_ricci_residual(z.metric, *z.gqe, p)) <= 1e-8);
    }
  }
}
