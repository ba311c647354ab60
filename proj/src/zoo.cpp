#include "jetgeom/zoo.hpp"

#include <cmath>
#include <sstream>

namespace jetgeom {

namespace {

ScalarExpr sq_sum(int n, int from, int to) {  // x_from^2 + ... + x_to^2, 0-based
  ScalarExpr s = ScalarExpr::number(0.0, n);
  for (int i = from; i <= to; ++i) {
    ScalarExpr xi = ScalarExpr::var(i, n);
    s = s + xi * xi;
  }
  return s;
}

void require_dim(int n, int lo, const char* who) {
  if (n < lo)
    throw std::invalid_argument(std::string(who) + ": requires n >= " +
                                std::to_string(lo));
}

GQEData constant_gqe(int n, double lambda) {
  return GQEData{ScalarExpr::number(0.0, n), ScalarExpr::number(0.0, n),
                 ScalarExpr::number(lambda, n)};
}

}  // namespace

ZooInstance euclidean(int n) {
  require_dim(n, 1, "euclidean");
  ZooInstance z;
  z.name = "euclidean:" + std::to_string(n);
  z.metric = MetricField::diagonal(
      n, std::vector<ScalarExpr>(std::size_t(n), ScalarExpr::number(1.0, n)));
  z.gqe = constant_gqe(n, 0.0);
  z.flags = {true, true, true, true, "trivial"};
  z.adapted_chart = true;
  return z;
}

ZooInstance sphere(int n, double r) {
  require_dim(n, 2, "sphere");
  if (!(r > 0.0)) throw std::invalid_argument("sphere: radius must be positive");
  ZooInstance z;
  std::ostringstream name;
  name << "sphere:" << n << "," << r;
  z.name = name.str();
  ScalarExpr one = ScalarExpr::number(1.0, n);
  ScalarExpr factor =
      ScalarExpr::number(4.0 * r * r, n) /
      ScalarExpr::pow(one + sq_sum(n, 0, n - 1), 2.0);
  z.metric = MetricField::conformally_flat(n, factor);
  // the chart covers the sphere minus the projection pole; stay in |x| < 3
  z.metric.set_domain(ScalarExpr::number(9.0, n) - sq_sum(n, 0, n - 1));
  z.metric.set_box(std::vector<std::pair<double, double>>(std::size_t(n),
                                                          {-1.2, 1.2}));
  z.gqe = constant_gqe(n, double(n - 1) / (r * r));
  z.flags = {true, true, true, true, "trivial"};
  z.adapted_chart = true;
  return z;
}

ZooInstance hyperbolic(int n) {
  require_dim(n, 2, "hyperbolic");
  ZooInstance z;
  z.name = "hyperbolic:" + std::to_string(n);
  ScalarExpr one = ScalarExpr::number(1.0, n);
  ScalarExpr s2 = sq_sum(n, 0, n - 1);
  ScalarExpr factor = ScalarExpr::number(4.0, n) / ScalarExpr::pow(one - s2, 2.0);
  z.metric = MetricField::conformally_flat(n, factor);
  z.metric.set_domain(one - s2);
  z.metric.set_box(std::vector<std::pair<double, double>>(std::size_t(n),
                                                          {-0.5, 0.5}));
  z.gqe = constant_gqe(n, double(-(n - 1)));
  z.flags = {true, true, true, true, "trivial"};
  z.adapted_chart = true;
  return z;
}

ZooInstance product_flat_sphere(int k, int n, double r) {
  require_dim(n, 4, "product_flat_sphere");
  if (k < 2 || k > n - 2)
    throw std::invalid_argument("product_flat_sphere: need 2 <= k <= n-2");
  if (!(r > 0.0))
    throw std::invalid_argument("product_flat_sphere: radius must be positive");
  ZooInstance z;
  std::ostringstream name;
  name << "product:" << k << "," << n << "," << r;
  z.name = name.str();
  ScalarExpr one = ScalarExpr::number(1.0, n);
  ScalarExpr factor = ScalarExpr::number(4.0 * r * r, n) /
                      ScalarExpr::pow(one + sq_sum(n, k, n - 1), 2.0);
  std::vector<ScalarExpr> diag;
  for (int i = 0; i < n; ++i)
    diag.push_back(i < k ? ScalarExpr::number(1.0, n) : factor);
  z.metric = MetricField::diagonal(n, std::move(diag));
  z.metric.set_domain(ScalarExpr::number(9.0, n) - sq_sum(n, k, n - 1));
  z.metric.set_box(std::vector<std::pair<double, double>>(std::size_t(n),
                                                          {-1.0, 1.0}));
  z.flags = {false, false, true, std::nullopt, ""};
  z.adapted_chart = true;
  return z;
}

ZooInstance gaussian_shrinker(int n) {
  require_dim(n, 2, "gaussian_shrinker");
  ZooInstance z = euclidean(n);
  z.name = "gaussian:" + std::to_string(n);
  ScalarExpr f = ScalarExpr::number(0.5, n) * sq_sum(n, 0, n - 1);
  z.gqe = GQEData{f, ScalarExpr::number(0.0, n), ScalarExpr::number(1.0, n)};
  z.flags = {true, true, true, true, "gradient-soliton(shrinking)"};
  return z;
}

ZooInstance remark_counterexample(int k, int n) {
  if (n < 4 || k < 2 || k > n - 2)
    throw std::invalid_argument(
        "remark_counterexample: needs n >= 4 and 2 <= k <= n-2");
  const double r = std::sqrt(double(n - k - 1));
  ZooInstance z = product_flat_sphere(k, n, r);
  std::ostringstream name;
  name << "remark:" << k << "," << n;
  z.name = name.str();
  ScalarExpr f = ScalarExpr::number(0.5, n) * sq_sum(n, 0, k - 1);
  z.gqe = GQEData{f, ScalarExpr::number(0.0, n), ScalarExpr::number(1.0, n)};
  z.flags = {false, false, true, false, "gradient-soliton(shrinking)"};
  z.note = "sphere radius sqrt(n-k-1) = " + std::to_string(r) +
           ": the unique scale making R^k x S^(n-k) a shrinking soliton with "
           "(mu, lambda) = (0, 1)";
  return z;
}

ZooInstance warped(int n, const ScalarExpr& psi, FiberKind fiber) {
  require_dim(n, 3, "warped");
  if (psi.dim() != n)
    throw std::invalid_argument("warped: psi must live on the same chart");
  for (int i = 1; i < n; ++i)
    if (!psi.derivative(i).is_number(0.0))
      throw std::invalid_argument(
          "warped: psi must depend on x1 only (found x" + std::to_string(i + 1) +
          ")");
  const int m = n - 1;
  double rho = 0.0;  // Einstein constant of the unit fiber chart
  switch (fiber) {
    case FiberKind::Sphere: rho = double(m - 1); break;
    case FiberKind::Flat: rho = 0.0; break;
    case FiberKind::Hyperbolic: rho = double(-(m - 1)); break;
  }

  ScalarExpr one = ScalarExpr::number(1.0, n);
  ScalarExpr s2f = sq_sum(n, 1, n - 1);
  ScalarExpr gfac = one;
  if (fiber == FiberKind::Sphere)
    gfac = ScalarExpr::number(4.0, n) / ScalarExpr::pow(one + s2f, 2.0);
  else if (fiber == FiberKind::Hyperbolic)
    gfac = ScalarExpr::number(4.0, n) / ScalarExpr::pow(one - s2f, 2.0);

  ScalarExpr warp = exp(psi) * gfac;
  std::vector<ScalarExpr> diag;
  diag.push_back(one);
  for (int i = 1; i < n; ++i) diag.push_back(warp);

  ZooInstance z;
  z.name = std::string("warped-") +
           (fiber == FiberKind::Sphere
                ? "sphere"
                : fiber == FiberKind::Flat ? "flat" : "hyperbolic") +
           ":" + std::to_string(n);
  z.metric = MetricField::diagonal(n, std::move(diag));

  std::vector<std::pair<double, double>> box(std::size_t(n), {-0.7, 0.7});
  box[0] = {-0.8, 0.8};
  ScalarExpr x1 = ScalarExpr::var(0, n);
  ScalarExpr dom = (x1 + 0.9) * (0.9 - x1);
  if (fiber == FiberKind::Hyperbolic) {
    for (int i = 1; i < n; ++i) box[std::size_t(i)] = {-0.4, 0.4};
    dom = dom * (one - s2f);
  }
  z.metric.set_domain(dom);
  z.metric.set_box(std::move(box));

  // solve the structural equation along the warp for the canonical radial
  // potential f = x1^2/2 + 2 x1 (f' = x1 + 2, nonzero on the chart):
  //   lambda = rho e^{-psi} - psi''/2 - m psi'^2/4 + psi' f'/2
  //   mu     = (-m (psi''/2 + psi'^2/4) + f'' - lambda) / f'^2
  ScalarExpr f = x1 * x1 / 2.0 + 2.0 * x1;
  ScalarExpr fp = x1 + 2.0;
  ScalarExpr p1 = psi.derivative(0);
  ScalarExpr p2 = p1.derivative(0);
  ScalarExpr lambda = ScalarExpr::number(rho, n) * exp(-psi) - p2 / 2.0 -
                      (double(m) / 4.0) * p1 * p1 + p1 * fp / 2.0;
  ScalarExpr mu =
      ((-double(m)) * (p2 / 2.0 + p1 * p1 / 4.0) + one - lambda) / (fp * fp);
  z.gqe = GQEData{f, mu, lambda};
  z.flags = {false, true, true, true, ""};
  z.adapted_chart = true;
  return z;
}

ZooInstance warped_sphere_gqe() {
  const int n = 4;
  ZooInstance z = warped(n, ScalarExpr::var(0, n), FiberKind::Sphere);
  z.name = "warped-sphere:4";
  // stay clear of x1 = 0 where mu + 1/(n-2) crosses zero and the two Ricci
  // eigenvalues of the conformal metric collide
  ScalarExpr x1 = ScalarExpr::var(0, n);
  z.metric.set_domain((x1 - 0.1) * (1.0 - x1));
  auto box = z.metric.box();
  box[0] = {0.1, 1.0};
  z.metric.set_box(box);
  z.flags.gqe_class = "generic";
  z.note = "warped GQE instance: psi = x1, unit S^3 fiber, f = x1^2/2 + 2 x1";
  return z;
}

ZooInstance warped_flat_gqe() {
  const int n = 5;
  ScalarExpr x1 = ScalarExpr::var(0, n);
  ZooInstance z = warped(n, x1 * x1, FiberKind::Flat);
  z.name = "warped-flat:5";
  z.flags.gqe_class = "generic";
  z.note = "warped GQE instance: psi = x1^2, flat fiber, f = x1^2/2 + 2 x1";
  return z;
}

ZooInstance round_sphere_almost_soliton(int n) {
  require_dim(n, 3, "round_sphere_almost_soliton");
  ZooInstance z = sphere(n, 1.0);
  z.name = "almost-soliton:" + std::to_string(n);
  ScalarExpr one = ScalarExpr::number(1.0, n);
  ScalarExpr s2 = sq_sum(n, 0, n - 1);
  // restriction of the ambient height function: hess f = -f g on the unit
  // sphere, so Ric + hess f = ((n-1) - f) g
  ScalarExpr f = (one - s2) / (one + s2);
  ScalarExpr lambda = ScalarExpr::number(double(n - 1), n) - f;
  z.gqe = GQEData{f, ScalarExpr::number(0.0, n), lambda};
  z.flags = {true, true, true, true, "almost-soliton"};
  return z;
}

namespace {

std::vector<double> parse_args(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

int int_arg(const std::vector<double>& a, std::size_t i) {
  return int(a.at(i));
}

}  // namespace

ZooInstance instance_by_key(const std::string& key) {
  std::size_t colon = key.find(':');
  std::string name = key.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) args = parse_args(key.substr(colon + 1));

  try {
    if (name == "euclidean") return euclidean(int_arg(args, 0));
    if (name == "sphere")
      return sphere(int_arg(args, 0), args.size() > 1 ? args[1] : 1.0);
    if (name == "hyperbolic") return hyperbolic(int_arg(args, 0));
    if (name == "product")
      return product_flat_sphere(int_arg(args, 0), int_arg(args, 1),
                                 args.size() > 2 ? args[2] : 1.0);
    if (name == "gaussian") return gaussian_shrinker(int_arg(args, 0));
    if (name == "remark")
      return remark_counterexample(int_arg(args, 0), int_arg(args, 1));
    if (name == "warped-sphere") return warped_sphere_gqe();
    if (name == "warped-flat") return warped_flat_gqe();
    if (name == "almost-soliton")
      return round_sphere_almost_soliton(int_arg(args, 0));
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("instance key '" + key +
                                "' is missing arguments");
  }
  throw std::invalid_argument("unknown instance key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> instance_catalog() {
  return {
      {"euclidean:<n>", "flat R^n"},
      {"sphere:<n>[,r]", "round sphere of radius r, stereographic chart"},
      {"hyperbolic:<n>", "hyperbolic space, Poincare ball chart"},
      {"product:<k>,<n>[,r]", "R^k x S^(n-k)(r) product chart"},
      {"gaussian:<n>", "Gaussian shrinking soliton on flat R^n"},
      {"remark:<k>,<n>",
       "R^k x S^(n-k)(sqrt(n-k-1)) shrinking soliton: harmonic Weyl, "
       "nonvanishing radial Weyl"},
      {"warped-sphere:4", "warped GQE instance with unit S^3 fiber"},
      {"warped-flat:5", "warped GQE instance with flat fiber"},
      {"almost-soliton:<n>",
       "unit sphere with a first-harmonic potential (nonconstant lambda)"},
  };
}

}  // namespace jetgeom
