#include "jetgeom/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace jetgeom {

namespace {

void check_slot(const TensorValue& t, int s, const char* who) {
  if (s < 0 || s >= t.rank())
    throw std::invalid_argument(std::string(who) + ": slot out of range");
}

}  // namespace

MetricAtPoint MetricAtPoint::from_components(int dim, std::span<const double> g) {
  if (int(g.size()) != dim * dim)
    throw std::invalid_argument("metric component count mismatch");
  Eigen::MatrixXd m(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) m(a, b) = g[std::size_t(a) * dim + b];
  double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale))
    throw MetricError("metric is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-10 * hi))
    throw MetricError("metric is not positive definite (eigenvalue range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "])");
  Eigen::MatrixXd inv =
      es.eigenvectors() *
      es.eigenvalues().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  MetricAtPoint out;
  out.dim = dim;
  out.g.assign(g.begin(), g.end());
  out.ginv.resize(std::size_t(dim) * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) out.ginv[std::size_t(a) * dim + b] = inv(a, b);
  return out;
}

bool next_index(std::span<int> idx, int dim) {
  for (int k = int(idx.size()) - 1; k >= 0; --k) {
    if (++idx[std::size_t(k)] < dim) return true;
    idx[std::size_t(k)] = 0;
  }
  return false;
}

TensorValue contract(const TensorValue& t, int i, int j, const MetricAtPoint* m) {
  check_slot(t, i, "contract");
  check_slot(t, j, "contract");
  if (i == j) throw std::invalid_argument("contract: slots must be distinct");
  if (i > j) std::swap(i, j);

  const bool like = t.signature()[std::size_t(i)] == t.signature()[std::size_t(j)];
  const double* w = nullptr;
  if (like) {
    if (!m)
      throw std::invalid_argument(
          "contract: metric required for slots of equal variance");
    w = t.signature()[std::size_t(i)] == Variance::Cov ? m->ginv.data()
                                                       : m->g.data();
  }

  const int n = t.dim();
  std::vector<Variance> sig;
  for (int k = 0; k < t.rank(); ++k)
    if (k != i && k != j) sig.push_back(t.signature()[std::size_t(k)]);
  TensorValue out(n, sig);

  std::vector<int> oidx(sig.size(), 0), tidx(std::size_t(t.rank()), 0);
  do {
    int c = 0;
    for (int k = 0; k < t.rank(); ++k)
      if (k != i && k != j) tidx[std::size_t(k)] = oidx[std::size_t(c++)];
    double sum = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        if (!like && p != q) continue;
        tidx[std::size_t(i)] = p;
        tidx[std::size_t(j)] = q;
        double v = t.at(tidx);
        sum += like ? w[std::size_t(p) * n + q] * v : v;
      }
    out.at(oidx) = sum;
  } while (next_index(oidx, n));
  return out;
}

namespace {

TensorValue move_index(const TensorValue& t, int slot, Variance from,
                       Variance to, const double* w) {
  check_slot(t, slot, "raise/lower");
  if (t.signature()[std::size_t(slot)] != from)
    throw std::invalid_argument("raise/lower: slot variance mismatch");
  const int n = t.dim();
  std::vector<Variance> sig = t.signature();
  sig[std::size_t(slot)] = to;
  TensorValue out(n, sig);
  std::vector<int> oidx(std::size_t(t.rank()), 0), tidx(std::size_t(t.rank()), 0);
  do {
    tidx = oidx;
    double sum = 0.0;
    for (int b = 0; b < n; ++b) {
      tidx[std::size_t(slot)] = b;
      sum += w[std::size_t(oidx[std::size_t(slot)]) * n + b] * t.at(tidx);
    }
    out.at(oidx) = sum;
  } while (next_index(oidx, n));
  return out;
}

}  // namespace

TensorValue raise_slot(const TensorValue& t, int slot, const MetricAtPoint& m) {
  return move_index(t, slot, Variance::Cov, Variance::Con, m.ginv.data());
}

TensorValue lower_slot(const TensorValue& t, int slot, const MetricAtPoint& m) {
  return move_index(t, slot, Variance::Con, Variance::Cov, m.g.data());
}

TensorValue outer(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("outer: dimension mismatch");
  std::vector<Variance> sig = a.signature();
  sig.insert(sig.end(), b.signature().begin(), b.signature().end());
  TensorValue out(a.dim(), sig);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.data()[i * b.size() + j] = a.data()[i] * b.data()[j];
  return out;
}

TensorValue symmetrize(const TensorValue& t, std::span<const int> slots) {
  if (slots.size() < 2) return t;
  for (int s : slots) {
    check_slot(t, s, "symmetrize");
    if (t.signature()[std::size_t(s)] != t.signature()[std::size_t(slots[0])])
      throw std::invalid_argument("symmetrize: slots must share a variance");
  }
  std::vector<int> perm(slots.begin(), slots.end());
  std::sort(perm.begin(), perm.end());
  TensorValue out(t.dim(), t.signature());
  std::vector<int> idx(std::size_t(t.rank()), 0), pidx(std::size_t(t.rank()), 0);
  int count = 0;
  std::vector<int> base(slots.begin(), slots.end());
  std::sort(base.begin(), base.end());
  do {
    ++count;
    std::fill(idx.begin(), idx.end(), 0);
    do {
      pidx = idx;
      for (std::size_t k = 0; k < perm.size(); ++k)
        pidx[std::size_t(base[k])] = idx[std::size_t(perm[k])];
      out.at(idx) += t.at(pidx);
    } while (next_index(idx, t.dim()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : out.data()) v /= double(count);
  return out;
}

TensorValue operator+(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.signature() != b.signature())
    throw std::invalid_argument("tensor addition: shape mismatch");
  TensorValue out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

TensorValue operator-(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.signature() != b.signature())
    throw std::invalid_argument("tensor subtraction: shape mismatch");
  TensorValue out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

TensorValue operator*(double s, const TensorValue& a) {
  TensorValue out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

double tensor_norm(const TensorValue& t, const MetricAtPoint& m) {
  TensorValue dual = t;
  for (int s = 0; s < t.rank(); ++s)
    dual = t.signature()[std::size_t(s)] == Variance::Cov
               ? raise_slot(dual, s, m)
               : lower_slot(dual, s, m);
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sum += t.data()[i] * dual.data()[i];
  return std::sqrt(std::max(0.0, sum));
}

double max_abs(const TensorValue& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.signature() != b.signature())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace jetgeom
