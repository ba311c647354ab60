#ifndef JETGEOM_ZOO_HPP
#define JETGEOM_ZOO_HPP

#include "jetgeom/gqe.hpp"
#include "jetgeom/metric.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jetgeom {

enum class FiberKind { Sphere, Flat, Hyperbolic };

/// Expected properties of a canonical instance; every flag set here is
/// verified by the test suite, never assumed.
struct ZooFlags {
  std::optional<bool> einstein;
  std::optional<bool> conformally_flat;
  std::optional<bool> harmonic_weyl;     // vanishing Cotton tensor
  std::optional<bool> radial_weyl_zero;  // W(grad f, ., ., .) = 0
  std::string gqe_class;                 // expected classify() tag
};

struct ZooInstance {
  std::string name;
  MetricField metric;
  std::optional<GQEData> gqe;
  ZooFlags flags;
  bool adapted_chart = false;  // g_{1i} = 0 at the expression level
  std::string note;            // normalization choices, echoed in reports
};

ZooInstance euclidean(int n);
/// Round sphere of radius r in its stereographic chart 4r^2/(1+|x|^2)^2 * id.
ZooInstance sphere(int n, double r = 1.0);
/// Poincare ball chart 4/(1-|x|^2)^2 * id, curvature -1.
ZooInstance hyperbolic(int n);
/// R^k x S^{n-k}(r) as a block-diagonal chart; 2 <= k <= n-2.
ZooInstance product_flat_sphere(int k, int n, double r);
/// Flat metric with f = |x|^2/2: the Gaussian shrinking soliton.
ZooInstance gaussian_shrinker(int n);
/// The product soliton R^k x S^{n-k}(sqrt(n-k-1)) with f = |x_flat|^2/2:
/// harmonic Weyl tensor but nonvanishing radial Weyl curvature.
ZooInstance remark_counterexample(int k, int n);
/// g = dx1^2 + e^{psi(x1)} G with an Einstein fiber chart G. Attaches the
/// generalized quasi-Einstein data obtained by solving the structural
/// equation along the warp with the canonical potential f = x1^2/2 + 2 x1.
ZooInstance warped(int n, const ScalarExpr& psi, FiberKind fiber);
/// Canonical warped instances used by the acceptance suite.
ZooInstance warped_sphere_gqe();  // n = 4, psi = x1, unit S^3 fiber
ZooInstance warped_flat_gqe();    // n = 5, psi = x1^2, flat fiber
/// Unit sphere with a first spherical harmonic as potential: mu = 0 and a
/// genuinely nonconstant lambda = (n-1) - f.
ZooInstance round_sphere_almost_soliton(int n);

/// Key grammar: name[:arg1[,arg2[,...]]], e.g. "sphere:4,1", "remark:2,4".
ZooInstance instance_by_key(const std::string& key);
std::vector<std::pair<std::string, std::string>> instance_catalog();

}  // namespace jetgeom

#endif  // JETGEOM_ZOO_HPP
