#ifndef JETGEOM_TENSOR_HPP
#define JETGEOM_TENSOR_HPP

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetgeom {

enum class Variance : std::uint8_t { Cov = 0, Con = 1 };

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symmetric positive definite metric and its inverse at a single point.
struct MetricAtPoint {
  int dim = 0;
  std::vector<double> g;     // dim*dim
  std::vector<double> ginv;  // dim*dim

  /// Validates symmetry and positive definiteness (smallest eigenvalue
  /// > 1e-10 * largest) and inverts. Throws MetricError otherwise.
  static MetricAtPoint from_components(int dim, std::span<const double> g);

  double lo(int a, int b) const { return g[std::size_t(a) * dim + b]; }
  double up(int a, int b) const { return ginv[std::size_t(a) * dim + b]; }
};

/// Dense multi-index tensor at a point with a variance signature. Components
/// are stored row-major in declared slot order. Pure value semantics.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int dim, std::vector<Variance> sig)
      : dim_(dim), sig_(std::move(sig)) {
    std::size_t sz = 1;
    for (std::size_t k = 0; k < sig_.size(); ++k) sz *= std::size_t(dim_);
    c_.assign(sz, 0.0);
  }
  TensorValue(int dim, std::initializer_list<Variance> sig)
      : TensorValue(dim, std::vector<Variance>(sig)) {}

  int dim() const { return dim_; }
  int rank() const { return int(sig_.size()); }
  const std::vector<Variance>& signature() const { return sig_; }
  std::vector<double>& data() { return c_; }
  const std::vector<double>& data() const { return c_; }
  std::size_t size() const { return c_.size(); }

  std::size_t flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      f = f * std::size_t(dim_) + std::size_t(idx[k]);
    return f;
  }
  double at(std::span<const int> idx) const { return c_[flat(idx)]; }
  double& at(std::span<const int> idx) { return c_[flat(idx)]; }

  template <class... I>
  double operator()(I... idx) const {
    static_assert((std::is_convertible_v<I, int> && ...));
    std::size_t f = 0;
    ((f = f * std::size_t(dim_) + std::size_t(int(idx))), ...);
    return c_[f];
  }
  template <class... I>
  double& operator()(I... idx) {
    static_assert((std::is_convertible_v<I, int> && ...));
    std::size_t f = 0;
    ((f = f * std::size_t(dim_) + std::size_t(int(idx))), ...);
    return c_[f];
  }

 private:
  int dim_ = 0;
  std::vector<Variance> sig_;
  std::vector<double> c_;
};

/// Advance a multi-index odometer-style; returns false after the last index.
bool next_index(std::span<int> idx, int dim);

/// Contract slots i and j. Slots of opposite variance trace directly; like
/// variance inserts the metric (g for two contravariant slots, its inverse
/// for two covariant ones) and requires `m`.
TensorValue contract(const TensorValue& t, int i, int j,
                     const MetricAtPoint* m = nullptr);

TensorValue raise_slot(const TensorValue& t, int slot, const MetricAtPoint& m);
TensorValue lower_slot(const TensorValue& t, int slot, const MetricAtPoint& m);
TensorValue outer(const TensorValue& a, const TensorValue& b);

/// Average over all permutations of the given slots (same variance required).
TensorValue symmetrize(const TensorValue& t, std::span<const int> slots);

TensorValue operator+(const TensorValue& a, const TensorValue& b);
TensorValue operator-(const TensorValue& a, const TensorValue& b);
TensorValue operator*(double s, const TensorValue& a);

/// Full metric contraction of t with itself, then square root.
double tensor_norm(const TensorValue& t, const MetricAtPoint& m);

double max_abs(const TensorValue& t);
double max_abs_diff(const TensorValue& a, const TensorValue& b);

}  // namespace jetgeom

#endif  // JETGEOM_TENSOR_HPP
