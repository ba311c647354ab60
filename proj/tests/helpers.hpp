#ifndef JETGEOM_TEST_HELPERS_HPP
#define JETGEOM_TEST_HELPERS_HPP

#include "jetgeom/expr.hpp"
#include "jetgeom/metric.hpp"
#include "jetgeom/rng.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace jetgeom::testing {

using jetgeom::Rng;

inline std::vector<double> random_point(Rng& rng, int n, double lo = -0.7,
                                        double hi = 0.7) {
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (auto& x : p) x = rng.uniform(lo, hi);
  return p;
}

using ScalarFn = std::function<double(std::span<const double>)>;

/// Central first difference of a scalar function of a point.
inline double fd1(const ScalarFn& f, std::vector<double> p, int i,
                  double h = 1e-4) {
  p[std::size_t(i)] += h;
  double up = f(p);
  p[std::size_t(i)] -= 2 * h;
  double dn = f(p);
  return (up - dn) / (2 * h);
}

/// Central second difference, mixed or repeated.
inline double fd2(const ScalarFn& f, std::vector<double> p, int i, int j,
                  double h = 1e-4) {
  if (i == j) {
    double c = f(p);
    p[std::size_t(i)] += h;
    double up = f(p);
    p[std::size_t(i)] -= 2 * h;
    double dn = f(p);
    return (up - 2 * c + dn) / (h * h);
  }
  auto shift = [&](double si, double sj) {
    std::vector<double> q = p;
    q[std::size_t(i)] += si;
    q[std::size_t(j)] += sj;
    return f(q);
  };
  return (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) /
         (4 * h * h);
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace jetgeom::testing

#endif
