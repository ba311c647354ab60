#include "jetgeom/metric.hpp"

#include <cmath>
#include <string>

namespace jetgeom {

namespace {

std::string point_str(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

// C = A * B, n x n row-major
void matmul(int n, const double* A, const double* B, double* C) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += A[std::size_t(i) * n + k] * B[std::size_t(k) * n + j];
      C[std::size_t(i) * n + j] = s;
    }
}

// out -= A * B * C
void sub_triple(int n, const double* A, const double* B, const double* C,
                std::vector<double>& tmp1, std::vector<double>& tmp2,
                double* out) {
  matmul(n, A, B, tmp1.data());
  matmul(n, tmp1.data(), C, tmp2.data());
  for (int i = 0; i < n * n; ++i) out[i] -= tmp2[std::size_t(i)];
}

}  // namespace

MetricAtPoint MetricJet::at_point() const {
  MetricAtPoint m;
  m.dim = n;
  m.g = g;
  m.ginv = ginv;
  return m;
}

TensorValue MetricJet::metric_tensor() const {
  TensorValue t(n, {Variance::Cov, Variance::Cov});
  t.data() = g;
  return t;
}

TensorValue MetricJet::inverse_tensor() const {
  TensorValue t(n, {Variance::Con, Variance::Con});
  t.data() = ginv;
  return t;
}

std::size_t MetricField::tri(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::size_t(i) * dim_ - std::size_t(i) * (i - 1) / 2 + std::size_t(j - i);
}

MetricField MetricField::from_upper(int dim, std::vector<ScalarExpr> entries) {
  if (int(entries.size()) != dim * (dim + 1) / 2)
    throw std::invalid_argument("from_upper: expected n(n+1)/2 entries");
  for (const auto& e : entries)
    if (!e.valid() || e.dim() != dim)
      throw std::invalid_argument("from_upper: entry dimension mismatch");
  MetricField f;
  f.dim_ = dim;
  f.upper_ = std::move(entries);
  f.domain_ = ScalarExpr::number(1.0, dim);
  f.box_.assign(std::size_t(dim), {-1.0, 1.0});
  return f;
}

MetricField MetricField::from_rows(
    const std::vector<std::vector<std::string>>& rows, int dim) {
  if (int(rows.size()) != dim)
    throw std::invalid_argument("from_rows: row count mismatch");
  std::vector<ScalarExpr> upper;
  for (int i = 0; i < dim; ++i) {
    if (int(rows[std::size_t(i)].size()) != dim)
      throw std::invalid_argument("from_rows: column count mismatch");
    for (int j = i; j < dim; ++j)
      upper.push_back(ScalarExpr::parse(rows[std::size_t(i)][std::size_t(j)], dim));
  }
  return from_upper(dim, std::move(upper));
}

MetricField MetricField::diagonal(int dim, std::vector<ScalarExpr> diag) {
  if (int(diag.size()) != dim)
    throw std::invalid_argument("diagonal: expected n entries");
  std::vector<ScalarExpr> upper;
  ScalarExpr zero = ScalarExpr::number(0.0, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      upper.push_back(i == j ? diag[std::size_t(i)] : zero);
  return from_upper(dim, std::move(upper));
}

MetricField MetricField::conformally_flat(int dim, const ScalarExpr& factor) {
  std::vector<ScalarExpr> diag(std::size_t(dim), factor);
  return diagonal(dim, std::move(diag));
}

const ScalarExpr& MetricField::entry(int i, int j) const {
  return upper_[tri(i, j)];
}

MetricField& MetricField::set_domain(ScalarExpr predicate) {
  if (predicate.dim() != dim_)
    throw std::invalid_argument("set_domain: dimension mismatch");
  domain_ = std::move(predicate);
  return *this;
}

MetricField& MetricField::set_box(std::vector<std::pair<double, double>> box) {
  if (int(box.size()) != dim_)
    throw std::invalid_argument("set_box: dimension mismatch");
  box_ = std::move(box);
  return *this;
}

bool MetricField::in_domain(std::span<const double> p) const {
  try {
    return domain_.value(p) > 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

MetricAtPoint MetricField::at(std::span<const double> p) const {
  std::vector<double> g(std::size_t(dim_) * dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = a; b < dim_; ++b)
      g[std::size_t(a) * dim_ + b] = g[std::size_t(b) * dim_ + a] =
          entry(a, b).value(p);
  return MetricAtPoint::from_components(dim_, g);
}

MetricJet MetricField::jet(std::span<const double> p) const {
  if (int(p.size()) != dim_)
    throw std::invalid_argument("jet(): point dimension mismatch");
  if (!in_domain(p))
    throw OutsideDomainError("point " + point_str(p) + " is outside the chart domain");

  const int n = dim_;
  const std::size_t n2 = std::size_t(n) * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n;
  MetricJet J;
  J.n = n;
  J.point.assign(p.begin(), p.end());
  J.g.assign(n2, 0.0);
  J.dg.assign(n3, 0.0);
  J.d2g.assign(n4, 0.0);
  J.d3g.assign(n5, 0.0);

  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      ScalarJet e = entry(a, b).jet(p);
      auto put = [&](int aa, int bb) {
        J.g[std::size_t(aa) * n + bb] = e.value;
        for (int c = 0; c < n; ++c)
          J.dg[(std::size_t(c) * n + aa) * n + bb] = e.first(c);
        for (int d = 0; d < n; ++d)
          for (int c = 0; c < n; ++c)
            J.d2g[((std::size_t(d) * n + c) * n + aa) * n + bb] = e.second(d, c);
        for (int ee = 0; ee < n; ++ee)
          for (int d = 0; d < n; ++d)
            for (int c = 0; c < n; ++c)
              J.d3g[(((std::size_t(ee) * n + d) * n + c) * n + aa) * n + bb] =
                  e.third(ee, d, c);
      };
      put(a, b);
      if (a != b) put(b, a);
    }

  MetricAtPoint m = MetricAtPoint::from_components(n, J.g);
  J.ginv = m.ginv;

  // inverse derivatives via d(g^-1) = -g^-1 (dg) g^-1 and its extensions
  J.dginv.assign(n3, 0.0);
  J.d2ginv.assign(n4, 0.0);
  J.d3ginv.assign(n5, 0.0);
  std::vector<double> t1(n2), t2(n2);
  const double* H = J.ginv.data();
  auto DG = [&](int c) { return J.dg.data() + std::size_t(c) * n2; };
  auto D2G = [&](int d, int c) {
    return J.d2g.data() + (std::size_t(d) * n + c) * n2;
  };
  auto D3G = [&](int e, int d, int c) {
    return J.d3g.data() + ((std::size_t(e) * n + d) * n + c) * n2;
  };
  auto DH = [&](int c) { return J.dginv.data() + std::size_t(c) * n2; };
  auto D2H = [&](int d, int c) {
    return J.d2ginv.data() + (std::size_t(d) * n + c) * n2;
  };
  auto D3H = [&](int e, int d, int c) {
    return J.d3ginv.data() + ((std::size_t(e) * n + d) * n + c) * n2;
  };

  for (int c = 0; c < n; ++c) sub_triple(n, H, DG(c), H, t1, t2, DH(c));

  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c) {
      double* out = D2H(d, c);
      sub_triple(n, DH(d), DG(c), H, t1, t2, out);
      sub_triple(n, H, D2G(d, c), H, t1, t2, out);
      sub_triple(n, H, DG(c), DH(d), t1, t2, out);
    }

  for (int e = 0; e < n; ++e)
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < n; ++c) {
        double* out = D3H(e, d, c);
        sub_triple(n, D2H(e, d), DG(c), H, t1, t2, out);
        sub_triple(n, DH(d), D2G(e, c), H, t1, t2, out);
        sub_triple(n, DH(d), DG(c), DH(e), t1, t2, out);
        sub_triple(n, DH(e), D2G(d, c), H, t1, t2, out);
        sub_triple(n, H, D3G(e, d, c), H, t1, t2, out);
        sub_triple(n, H, D2G(d, c), DH(e), t1, t2, out);
        sub_triple(n, DH(e), DG(c), DH(d), t1, t2, out);
        sub_triple(n, H, D2G(e, c), DH(d), t1, t2, out);
        sub_triple(n, H, DG(c), D2H(e, d), t1, t2, out);
      }

  return J;
}

}  // namespace jetgeom
