#include "doctest.h"
#include "helpers.hpp"
#include "jetgeom/fd_oracle.hpp"
#include "jetgeom/curvature.hpp"
#include "jetgeom/random_metric.hpp"
#include "jetgeom/zoo.hpp"

#include <cmath>

using namespace jetgeom;
using jetgeom::testing::Rng;

namespace {

// scale-aware residual gate: |r| <= tol * (1 + scale)
bool small(double residual, double tol, double scale) {
  return std::abs(residual) <= tol * (1.0 + scale);
}

TensorValue metric_derivative_data(const MetricJet& J) {
  TensorValue dg(J.n, {Variance::Cov, Variance::Cov, Variance::Cov});
  dg.data() = J.dg;
  return dg;
}

}  // namespace

TEST_CASE("metric jets of canonical charts") {
  SUBCASE("euclidean") {
    ZooInstance z = euclidean(3);
    std::vector<double> p = {0.3, -0.2, 0.9};
    MetricJet J = z.metric.jet(p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(J.G(a, b) == (a == b ? 1.0 : 0.0));
    for (double v : J.dg) CHECK(v == 0.0);
    for (double v : J.d3g) CHECK(v == 0.0);
  }

  SUBCASE("unit sphere stereographic chart at the origin") {
    ZooInstance z = sphere(3, 1.0);
    std::vector<double> p = {0.0, 0.0, 0.0};
    MetricJet J = z.metric.jet(p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK(J.G(a, b) == doctest::Approx(a == b ? 4.0 : 0.0).epsilon(1e-14));
  }

  SUBCASE("polar coordinate plane") {
    MetricField polar = MetricField::from_rows({{"1", "0"}, {"0", "x1^2"}}, 2);
    polar.set_domain(ScalarExpr::parse("x1", 2));
    std::vector<double> p = {2.0, 0.7};
    MetricJet J = polar.jet(p);
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double expect = (c == 0 && a == 1 && b == 1) ? 4.0 : 0.0;
          CHECK(J.dG(c, a, b) == doctest::Approx(expect));
        }
    std::vector<double> outside = {-1.0, 0.0};
    CHECK_THROWS_AS(polar.jet(outside), OutsideDomainError);
  }

  SUBCASE("SPD failure is reported, not skipped") {
    MetricField bad = MetricField::from_rows({{"1", "0"}, {"0", "x1"}}, 2);
    std::vector<double> p = {-0.5, 0.0};
    CHECK_THROWS_AS(bad.jet(p), MetricError);
  }

  SUBCASE("derivative of g g^-1 vanishes to order three") {
    Rng rng(71);
    for (int n : {3, 4}) {
      MetricField m = random_analytic_metric(n, 100 + std::uint64_t(n));
      for (int rep = 0; rep < 5; ++rep) {
        auto p = jetgeom::testing::random_point(rng, n);
        CHECK(metric_inverse_derivative_residual(m.jet(p)) <= 1e-11);
      }
    }
  }
}

TEST_CASE("christoffel symbols") {
  SUBCASE("flat chart has a vanishing connection") {
    ZooInstance z = euclidean(4);
    std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
    CHECK(max_abs(christoffel(z.metric.jet(p))) == 0.0);
  }

  SUBCASE("polar plane") {
    MetricField polar = MetricField::from_rows({{"1", "0"}, {"0", "x1^2"}}, 2);
    polar.set_domain(ScalarExpr::parse("x1", 2));
    std::vector<double> p = {2.0, -0.3};
    TensorValue g = christoffel(polar.jet(p));
    CHECK(g(0, 1, 1) == doctest::Approx(-2.0));  // Gamma^1_22 = -r
    CHECK(g(1, 0, 1) == doctest::Approx(0.5));   // Gamma^2_12 = 1/r
    CHECK(g(1, 1, 0) == doctest::Approx(0.5));
    CHECK(g(0, 0, 0) == doctest::Approx(0.0));
  }

  SUBCASE("conformally flat closed form") {
    // e^{2u} delta: Gamma^c_ab = delta^c_a d_b u + delta^c_b d_a u
    //                            - delta_ab d_c u
    const int n = 3;
    ScalarExpr u = ScalarExpr::parse("0.3*sin(x1) + 0.2*x2*x3", n);
    MetricField m = MetricField::conformally_flat(n, exp(2.0 * u));
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, n);
      TensorValue g = christoffel(m.jet(p));
      ScalarJet uj = u.jet(p);
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double expect = (c == a ? uj.first(b) : 0.0) +
                            (c == b ? uj.first(a) : 0.0) -
                            (a == b ? uj.first(c) : 0.0);
            CHECK(std::abs(g(c, a, b) - expect) <= 1e-12);
          }
    }
  }

  SUBCASE("finite-difference oracle") {
    Rng rng(9);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      MetricField m = random_analytic_metric(4, seed);
      auto p = jetgeom::testing::random_point(rng, 4);
      CurvaturePack jet_pk = curvature_pack(m.jet(p));
      CurvaturePack fd_pk = curvature_pack(fd_metric_jet(m, p));
      CHECK(max_abs_diff(jet_pk.gamma, fd_pk.gamma) <=
            1e-5 * (1.0 + max_abs(jet_pk.gamma)));
      CHECK(max_abs_diff(jet_pk.ricci, fd_pk.ricci) <=
            1e-5 * (1.0 + max_abs(jet_pk.ricci)));
    }
  }
}

TEST_CASE("riemann tensor of the space forms") {
  SUBCASE("flat") {
    ZooInstance z = euclidean(5);
    std::vector<double> p = {0.1, -0.4, 0.2, 0.0, 0.7};
    CHECK(max_abs(riemann(z.metric.jet(p))) <= 1e-14);
  }

  SUBCASE("unit sphere: R_abcd = g_ac g_bd - g_ad g_bc and positivity") {
    Rng rng(13);
    for (int n : {3, 4}) {
      ZooInstance z = sphere(n, 1.0);
      for (int rep = 0; rep < 6; ++rep) {
        auto p = jetgeom::testing::random_point(rng, n, -1.1, 1.1);
        MetricJet J = z.metric.jet(p);
        TensorValue R = riemann(J);
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              for (int d = 0; d < n; ++d)
                worst = std::max(
                    worst, std::abs(R(a, b, c, d) - (J.G(a, c) * J.G(b, d) -
                                                     J.G(a, d) * J.G(b, c))));
        CHECK(worst <= 1e-10);

        // sectional positivity for independent pairs, the sign anchor
        for (int trial = 0; trial < 10; ++trial) {
          std::vector<double> v(std::size_t(n), 0.0), w(std::size_t(n), 0.0);
          for (auto& x : v) x = rng.uniform(-1.0, 1.0);
          for (auto& x : w) x = rng.uniform(-1.0, 1.0);
          double sec = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                  sec += R(a, b, c, d) * v[std::size_t(a)] * w[std::size_t(b)] *
                         v[std::size_t(c)] * w[std::size_t(d)];
          CHECK(sec > 0.0);
        }
      }
    }
  }

  SUBCASE("hyperbolic space has curvature -1") {
    ZooInstance z = hyperbolic(3);
    Rng rng(17);
    for (int rep = 0; rep < 6; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 3, -0.45, 0.45);
      MetricJet J = z.metric.jet(p);
      TensorValue R = riemann(J);
      double worst = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d)
              worst = std::max(
                  worst, std::abs(R(a, b, c, d) + (J.G(a, c) * J.G(b, d) -
                                                   J.G(a, d) * J.G(b, c))));
      CHECK(worst <= 1e-9 * (1.0 + max_abs(R)));
    }
  }
}

TEST_CASE("ricci and scalar curvature") {
  SUBCASE("unit S^4: Ric = 3g, R = 12") {
    ZooInstance z = sphere(4, 1.0);
    std::vector<double> p = {0.2, -0.5, 0.1, 0.8};
    CurvaturePack pk = curvature_pack(z.metric.jet(p));
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        worst = std::max(worst, std::abs(pk.ricci(a, b) - 3.0 * pk.jet.G(a, b)));
    CHECK(worst <= 1e-10);
    CHECK(pk.scalar == doctest::Approx(12.0).epsilon(1e-11));
  }

  SUBCASE("product R^2 x S^2(r) is blockwise") {
    const double r = 1.7;
    ZooInstance z = product_flat_sphere(2, 4, r);
    Rng rng(19);
    for (int rep = 0; rep < 4; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 4);
      CurvaturePack pk = curvature_pack(z.metric.jet(p));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 4; ++b) CHECK(std::abs(pk.ricci(a, b)) <= 1e-11);
      for (int a = 2; a < 4; ++a)
        for (int b = 2; b < 4; ++b)
          CHECK(std::abs(pk.ricci(a, b) - pk.jet.G(a, b) / (r * r)) <= 1e-11);
      CHECK(pk.scalar == doctest::Approx(2.0 / (r * r)).epsilon(1e-10));
    }
  }

  SUBCASE("constant-curvature contraction ties into tensor ops") {
    // g^{bd} R_abcd on the unit S^3 gives (n-1) g = 2 g
    ZooInstance z = sphere(3, 1.0);
    std::vector<double> p = {0.4, 0.1, -0.3};
    MetricJet J = z.metric.jet(p);
    MetricAtPoint mp = J.at_point();
    TensorValue R = riemann(J);
    TensorValue ric = contract(R, 1, 3, &mp);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst, std::abs(ric(a, c) - 2.0 * J.G(a, c)));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("weyl tensor") {
  SUBCASE("constant curvature spaces are conformally flat") {
    ZooInstance s = sphere(4, 1.0);
    std::vector<double> p = {0.3, 0.3, -0.2, 0.5};
    CHECK(max_abs(weyl(curvature_pack(s.metric.jet(p)))) <= 1e-11);
  }

  SUBCASE("weyl vanishes identically in dimension three") {
    Rng rng(23);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      MetricField m = random_analytic_metric(3, seed);
      for (int rep = 0; rep < 5; ++rep) {
        auto p = jetgeom::testing::random_point(rng, 3);
        CHECK(max_abs(weyl(curvature_pack(m.jet(p)))) <= 1e-10);
      }
    }
  }

  SUBCASE("R^2 x S^2 has a genuinely nonzero Weyl tensor") {
    ZooInstance z = product_flat_sphere(2, 4, 1.0);
    Rng rng(29);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 4);
      CurvaturePack pk = curvature_pack(z.metric.jet(p));
      CHECK(tensor_norm(pk.weyl, pk.metric()) > 0.1);
    }
  }

  SUBCASE("n < 3 is rejected") {
    MetricField polar = MetricField::from_rows({{"1", "0"}, {"0", "x1^2"}}, 2);
    polar.set_domain(ScalarExpr::parse("x1", 2));
    std::vector<double> p = {1.5, 0.0};
    CurvaturePack pk = curvature_pack(polar.jet(p));
    CHECK_THROWS_AS(weyl(pk), std::invalid_argument);
  }
}

TEST_CASE("cotton tensor") {
  SUBCASE("einstein metrics") {
    for (auto z : {sphere(4, 1.0), hyperbolic(3)}) {
      Rng rng(31);
      auto p = jetgeom::testing::random_point(rng, z.metric.dim(), -0.4, 0.4);
      CHECK(max_abs(cotton(z.metric.jet(p))) <= 1e-10);
    }
  }

  SUBCASE("product of Einstein factors has harmonic Weyl tensor") {
    ZooInstance z = product_flat_sphere(2, 4, 1.0);
    Rng rng(37);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = jetgeom::testing::random_point(rng, 4);
      CHECK(max_abs(cotton(z.metric.jet(p))) <= 1e-10);
    }
  }

  SUBCASE("random three-dimensional metrics: nonzero but tied to Schouten") {
    Rng rng(41);
    double biggest = 0.0;
    for (std::uint64_t seed : {21u, 22u, 23u}) {
      MetricField m = random_analytic_metric(3, seed);
      for (int rep = 0; rep < 5; ++rep) {
        auto p = jetgeom::testing::random_point(rng, 3);
        CurvaturePack pk = curvature_pack(m.jet(p));
        biggest = std::max(biggest, max_abs(pk.cotton));
        CHECK(cotton_schouten_residual(pk) <= 1e-10 * (1.0 + max_abs(pk.cotton)));
      }
    }
    CHECK(biggest > 1e-4);  // generically nonvanishing
  }
}

TEST_CASE("divergence of the Weyl tensor") {
  SUBCASE("vanishes for Einstein and product instances (n = 4)") {
    for (auto z : {sphere(4, 1.0), product_flat_sphere(2, 4, 1.0)}) {
      Rng rng(43);
      auto p = jetgeom::testing::random_point(rng, 4);
      CHECK(max_abs(div_weyl(z.metric.jet(p))) <= 1e-10);
    }
  }

  SUBCASE("identity against the Cotton tensor at n = 5") {
    Rng rng(47);
    for (std::uint64_t seed : {31u, 32u}) {
      MetricField m = random_analytic_metric(5, seed);
      for (int rep = 0; rep < 5; ++rep) {
        auto p = jetgeom::testing::random_point(rng, 5);
        CurvaturePack pk = curvature_pack(m.jet(p));
        double scale = std::max(max_abs(pk.div_weyl), max_abs(pk.cotton));
        CHECK(div_weyl_identity_residual(pk) <= 1e-8 * (1.0 + scale));
      }
    }
  }

  SUBCASE("n = 3 is rejected") {
    MetricField m = random_analytic_metric(3, 5);
    std::vector<double> p = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(div_weyl(m.jet(p)), std::invalid_argument);
  }
}

TEST_CASE("algebraic symmetry suite on seeded random metrics") {
  // 20 seeded metrics per dimension, 20 in-domain points each
  Rng rng(53);
  for (int n : {3, 4, 5}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MetricField m = random_analytic_metric(n, seed * 1000 + std::uint64_t(n));
      for (int rep = 0; rep < 20; ++rep) {
        auto p = jetgeom::testing::random_point(rng, n);
        CurvaturePack pk = curvature_pack(m.jet(p));
        const double rs = max_abs(pk.riemann);
        CHECK(small(riemann_symmetry_residual(pk), 1e-10, rs));
        CHECK(small(weyl_trace_residual(pk), 1e-10, rs));
        CHECK(small(cotton_structure_residual(pk), 1e-10, max_abs(pk.cotton)));
        CHECK(small(contracted_bianchi_residual(pk), 1e-9,
                    max_abs(pk.cov_ricci)));
        CHECK(small(cotton_schouten_residual(pk), 1e-9, max_abs(pk.cotton)));
        if (n >= 4) {
          double scale = std::max(max_abs(pk.div_weyl), max_abs(pk.cotton));
          CHECK(small(div_weyl_identity_residual(pk), 1e-8, scale));
        }
      }
    }
  }
}

TEST_CASE("hessian, gradient, laplacian") {
  SUBCASE("half the squared distance on flat space") {
    const int n = 4;
    ZooInstance z = euclidean(n);
    ScalarExpr f = ScalarExpr::parse("(x1^2 + x2^2 + x3^2 + x4^2)/2", n);
    std::vector<double> p = {0.3, -0.7, 0.4, 0.9};
    CurvaturePack pk = curvature_pack(z.metric.jet(p));
    ScalarJet fj = f.jet(p);
    TensorValue h = hessian(fj, pk);
    CHECK(max_abs_diff(h, pk.jet.metric_tensor()) <= 1e-13);
    CHECK(laplacian(fj, pk) == doctest::Approx(4.0));
    double x2 = 0.0;
    for (double v : p) x2 += v * v;
    CHECK(grad_norm_sq(fj, pk) == doctest::Approx(x2));
  }

  SUBCASE("constant potential") {
    ZooInstance z = sphere(3, 1.0);
    std::vector<double> p = {0.1, 0.5, -0.2};
    CurvaturePack pk = curvature_pack(z.metric.jet(p));
    ScalarJet fj = ScalarExpr::number(2.5, 3).jet(p);
    CHECK(max_abs(hessian(fj, pk)) == 0.0);
    CHECK(laplacian(fj, pk) == 0.0);
    CHECK(grad_norm_sq(fj, pk) == 0.0);
  }

  SUBCASE("f = x1 on the polar plane picks up the connection") {
    MetricField polar = MetricField::from_rows({{"1", "0"}, {"0", "x1^2"}}, 2);
    polar.set_domain(ScalarExpr::parse("x1", 2));
    std::vector<double> p = {1.8, 0.4};
    CurvaturePack pk = curvature_pack(polar.jet(p));
    ScalarJet fj = ScalarExpr::parse("x1", 2).jet(p);
    TensorValue h = hessian(fj, pk);
    CHECK(h(1, 1) == doctest::Approx(1.8));  // -Gamma^1_22 * 1 = r
    CHECK(std::abs(h(0, 0)) <= 1e-14);
    CHECK(std::abs(h(0, 1)) <= 1e-14);
  }
}

TEST_CASE("covariant derivative") {
  SUBCASE("metric compatibility") {
    Rng rng(59);
    for (int n : {3, 4}) {
      MetricField m = random_analytic_metric(n, 400 + std::uint64_t(n));
      auto p = jetgeom::testing::random_point(rng, n);
      CurvaturePack pk = curvature_pack(m.jet(p));
      TensorValue nabla_g = cov_derivative(pk.jet.metric_tensor(),
                                           metric_derivative_data(pk.jet), pk);
      CHECK(max_abs(nabla_g) <= 1e-11);
    }
  }

  SUBCASE("a constant multiple of the metric is parallel") {
    MetricField m = random_analytic_metric(3, 77);
    std::vector<double> p = {0.2, -0.1, 0.5};
    CurvaturePack pk = curvature_pack(m.jet(p));
    TensorValue t = 2.75 * pk.jet.metric_tensor();
    TensorValue dt = 2.75 * metric_derivative_data(pk.jet);
    CHECK(max_abs(cov_derivative(t, dt, pk)) <= 1e-11);
  }

  SUBCASE("mixed-variance corrections: nabla of the identity vanishes") {
    MetricField m = random_analytic_metric(3, 78);
    std::vector<double> p = {0.4, 0.0, -0.6};
    CurvaturePack pk = curvature_pack(m.jet(p));
    TensorValue id(3, {Variance::Con, Variance::Cov});
    for (int i = 0; i < 3; ++i) id(i, i) = 1.0;
    TensorValue did(3, {Variance::Cov, Variance::Con, Variance::Cov});
    CHECK(max_abs(cov_derivative(id, did, pk)) <= 1e-13);
  }

  SUBCASE("derivative data shape is validated") {
    MetricField m = random_analytic_metric(3, 79);
    std::vector<double> p = {0.0, 0.1, 0.2};
    CurvaturePack pk = curvature_pack(m.jet(p));
    TensorValue t(3, {Variance::Cov});
    TensorValue bad(3, {Variance::Cov});
    CHECK_THROWS_AS(cov_derivative(t, bad, pk), std::invalid_argument);
  }
}
