#ifndef JETGEOM_METRIC_HPP
#define JETGEOM_METRIC_HPP

#include "jetgeom/expr.hpp"
#include "jetgeom/tensor.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace jetgeom {

struct OutsideDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Metric components, inverse, and coordinate derivatives to order 3 at a
/// point, the raw material for every curvature object. Index convention:
/// derivative indices come first, e.g. dg(c,a,b) = d_c g_ab.
struct MetricJet {
  int n = 0;
  std::vector<double> point;
  std::vector<double> g, ginv;          // n^2
  std::vector<double> dg, dginv;        // n^3   (c,a,b)
  std::vector<double> d2g, d2ginv;      // n^4   (d,c,a,b)
  std::vector<double> d3g, d3ginv;      // n^5   (e,d,c,a,b)

  double G(int a, int b) const { return g[std::size_t(a) * n + b]; }
  double Ginv(int a, int b) const { return ginv[std::size_t(a) * n + b]; }
  double dG(int c, int a, int b) const {
    return dg[(std::size_t(c) * n + a) * n + b];
  }
  double dGinv(int c, int a, int b) const {
    return dginv[(std::size_t(c) * n + a) * n + b];
  }
  double d2G(int d, int c, int a, int b) const {
    return d2g[((std::size_t(d) * n + c) * n + a) * n + b];
  }
  double d2Ginv(int d, int c, int a, int b) const {
    return d2ginv[((std::size_t(d) * n + c) * n + a) * n + b];
  }
  double d3G(int e, int d, int c, int a, int b) const {
    return d3g[(((std::size_t(e) * n + d) * n + c) * n + a) * n + b];
  }
  double d3Ginv(int e, int d, int c, int a, int b) const {
    return d3ginv[(((std::size_t(e) * n + d) * n + c) * n + a) * n + b];
  }

  MetricAtPoint at_point() const;
  TensorValue metric_tensor() const;   // g_ab as a (0,2) TensorValue
  TensorValue inverse_tensor() const;  // g^ab as a (2,0) TensorValue
};

/// A Riemannian metric on a single chart: an n x n symmetric array of
/// closed-form entries, a domain predicate (point valid iff the predicate
/// expression is positive) and an axis-aligned sampling box.
class MetricField {
 public:
  MetricField() = default;

  /// `entries` is the upper triangle in row-major order: (0,0), (0,1), ...,
  /// (0,n-1), (1,1), ... Symmetry is by construction: entry (i,j) and (j,i)
  /// are the same tree.
  static MetricField from_upper(int dim, std::vector<ScalarExpr> entries);
  static MetricField from_rows(const std::vector<std::vector<std::string>>& rows,
                               int dim);
  static MetricField diagonal(int dim, std::vector<ScalarExpr> diag);
  /// factor * identity
  static MetricField conformally_flat(int dim, const ScalarExpr& factor);

  int dim() const { return dim_; }
  const ScalarExpr& entry(int i, int j) const;
  const ScalarExpr& domain() const { return domain_; }
  const std::vector<std::pair<double, double>>& box() const { return box_; }

  MetricField& set_domain(ScalarExpr predicate);
  MetricField& set_box(std::vector<std::pair<double, double>> box);

  bool in_domain(std::span<const double> p) const;

  /// Entry values only (no derivatives); validates SPD.
  MetricAtPoint at(std::span<const double> p) const;

  /// Full order-3 jet; throws OutsideDomainError off-chart and MetricError
  /// if the evaluated metric is not SPD.
  MetricJet jet(std::span<const double> p) const;

 private:
  int dim_ = 0;
  std::vector<ScalarExpr> upper_;  // n(n+1)/2 entries
  ScalarExpr domain_;
  std::vector<std::pair<double, double>> box_;
  std::size_t tri(int i, int j) const;
};

}  // namespace jetgeom

#endif  // JETGEOM_METRIC_HPP
