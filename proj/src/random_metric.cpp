#include "jetgeom/random_metric.hpp"

#include "jetgeom/rng.hpp"

namespace jetgeom {

namespace {

// c * trig(freq * x_p + freq2 * x_q + phase)
ScalarExpr trig_term(Rng& rng, int n, double c) {
  ScalarExpr arg = ScalarExpr::number(rng.uniform(0.0, 6.0), n) +
                   rng.uniform(0.5, 1.4) * ScalarExpr::var(rng.below(n), n) +
                   rng.uniform(0.5, 1.4) * ScalarExpr::var(rng.below(n), n);
  ScalarExpr t = rng.below(2) ? sin(arg) : cos(arg);
  return ScalarExpr::number(c * rng.uniform(0.5, 1.0), n) * t;
}

}  // namespace

MetricField random_analytic_metric(int n, std::uint64_t seed, double amplitude) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  // diagonal wobble of size a, off-diagonal of size b: Gershgorin keeps all
  // eigenvalues in [1 - a - (n-1) b, 1 + a + (n-1) b]
  const double a = amplitude;
  const double b = amplitude / double(2 * (n - 1));
  std::vector<ScalarExpr> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j)
        upper.push_back(ScalarExpr::number(1.0, n) + trig_term(rng, n, 0.5 * a) +
                        trig_term(rng, n, 0.5 * a));
      else
        upper.push_back(trig_term(rng, n, 0.5 * b) + trig_term(rng, n, 0.5 * b));
    }
  MetricField m = MetricField::from_upper(n, std::move(upper));
  m.set_box(std::vector<std::pair<double, double>>(std::size_t(n), {-0.8, 0.8}));
  return m;
}

ScalarExpr random_potential(int n, std::uint64_t seed, double amplitude) {
  Rng rng(seed * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
  ScalarExpr lin = rng.uniform(0.3, 1.0) * ScalarExpr::var(rng.below(n), n);
  return trig_term(rng, n, amplitude) +
         ScalarExpr::number(0.5 * amplitude, n) *
             ScalarExpr::var(rng.below(n), n) * trig_term(rng, n, 1.0) +
         ScalarExpr::number(0.4 * amplitude, n) * lin;
}

}  // namespace jetgeom
