#include "jetgeom/fd_oracle.hpp"

namespace jetgeom {

MetricJet fd_metric_jet(const MetricField& M, const std::vector<double>& p,
                        double h) {
  const int n = M.dim();
  const std::size_t n2 = std::size_t(n) * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n;
  MetricJet J;
  J.n = n;
  J.point = p;
  J.g.assign(n2, 0.0);
  J.dg.assign(n3, 0.0);
  J.d2g.assign(n4, 0.0);
  J.d3g.assign(n5, 0.0);

  auto val = [&](int a, int b, const std::vector<double>& q) {
    return M.entry(a, b).value(q);
  };

  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double center = val(a, b, p);
      J.g[std::size_t(a) * n + b] = J.g[std::size_t(b) * n + a] = center;
      for (int c = 0; c < n; ++c) {
        std::vector<double> q = p;
        q[std::size_t(c)] += h;
        double up = val(a, b, q);
        q[std::size_t(c)] -= 2 * h;
        double dn = val(a, b, q);
        double d1 = (up - dn) / (2 * h);
        J.dg[(std::size_t(c) * n + a) * n + b] =
            J.dg[(std::size_t(c) * n + b) * n + a] = d1;
        double d2 = (up - 2 * center + dn) / (h * h);
        J.d2g[((std::size_t(c) * n + c) * n + a) * n + b] =
            J.d2g[((std::size_t(c) * n + c) * n + b) * n + a] = d2;
      }
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          auto shifted = [&](double sc, double sd) {
            std::vector<double> q = p;
            q[std::size_t(c)] += sc;
            q[std::size_t(d)] += sd;
            return val(a, b, q);
          };
          double mixed = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) +
                          shifted(-h, -h)) /
                         (4 * h * h);
          for (auto [i, j] : {std::pair{c, d}, std::pair{d, c}}) {
            J.d2g[((std::size_t(i) * n + j) * n + a) * n + b] = mixed;
            J.d2g[((std::size_t(i) * n + j) * n + b) * n + a] = mixed;
          }
        }
    }

  MetricAtPoint mp = MetricAtPoint::from_components(n, J.g);
  J.ginv = mp.ginv;
  J.dginv.assign(n3, 0.0);
  J.d2ginv.assign(n4, 0.0);
  J.d3ginv.assign(n5, 0.0);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s -= J.Ginv(i, a) * J.dG(c, a, b) * J.Ginv(b, j);
        J.dginv[(std::size_t(c) * n + i) * n + j] = s;
      }
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              s -= J.dGinv(d, i, a) * J.dG(c, a, b) * J.Ginv(b, j) +
                   J.Ginv(i, a) * J.d2G(d, c, a, b) * J.Ginv(b, j) +
                   J.Ginv(i, a) * J.dG(c, a, b) * J.dGinv(d, b, j);
          J.d2ginv[((std::size_t(d) * n + c) * n + i) * n + j] = s;
        }
  return J;
}

}  // namespace jetgeom
