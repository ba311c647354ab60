#ifndef JETGEOM_SPLITTING_HPP
#define JETGEOM_SPLITTING_HPP

#include "jetgeom/conformal.hpp"
#include "jetgeom/gqe.hpp"
#include "jetgeom/metric.hpp"

#include <optional>
#include <vector>

namespace jetgeom {

/// Eigenstructure of the Ricci tensor of g~ = e^{-2f/(n-2)}g relative to g~.
struct EigenSplit {
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::pair<double, int>> clusters;   // (mean value, multiplicity)
  /// |cos| of the angle between grad f and the multiplicity-1 eigenvector;
  /// absent at critical points of f or when no multiplicity-1 cluster exists.
  std::optional<double> radial_alignment;
};

EigenSplit ricci_eigenstructure(const MetricField& m, const ScalarExpr& f,
                                std::span<const double> p,
                                double gap_tol = 1e-6);

/// nabla_c S_ab - nabla_b S_ac at p, slots (a,b,c). Vanishing makes the
/// Schouten tensor a Codazzi tensor; always equals C_abc/(n-2).
TensorValue codazzi_residual(const MetricField& m, std::span<const double> p);

/// A chart in which the first coordinate line is orthogonal to the leaves
/// {x1 = const}: every entry g_{1i}, i >= 2, is the literal zero expression.
struct AdaptedChartMetric {
  MetricField metric;
  explicit AdaptedChartMetric(MetricField m);
  int dim() const { return metric.dim(); }
};

struct SecondFundamentalForm {
  TensorValue h;  // h_ij = -Gamma^1_ij g_11 on leaf slots (i,j >= 1); row/col 0 zero
  double mean_curvature = 0.0;        // H = g^{ij} h_ij over the leaf block
  double umbilicity_residual = 0.0;   // max |h_ij - (H/(n-1)) g_ij|
};

SecondFundamentalForm second_fundamental_form(const AdaptedChartMetric& a,
                                              std::span<const double> p);

/// Codazzi-Mainardi defect for leaf directions i, j, k (chart slots >= 1):
/// (nabla^leaf_i h)(j,k) - (nabla^leaf_j h)(i,k) - <Rm(e_i,e_j)e_k, e_1>,
/// the leaf connection being the Levi-Civita connection of the induced
/// metric on the leaf through p.
double codazzi_mainardi_residual(const AdaptedChartMetric& a,
                                 std::span<const double> p, int i, int j, int k);

/// Worst Codazzi-Mainardi defect over all leaf index triples at p.
double codazzi_mainardi_max(const AdaptedChartMetric& a,
                            std::span<const double> p);

struct LeafDiagnostics {
  double max_leaf_dH = 0.0;        // max |d_j H| over leaf directions
  double h_sigma_residual = 0.0;   // |H/(n-1) - d_1 sigma2 / (sigma1 - sigma2)|
  double max_leaf_dg11 = 0.0;      // geodesic-line check: max |d_j g_11|
  int conclusive_points = 0;
  int inconclusive_points = 0;     // Schouten eigenvalue collision at the point
  double min_sigma_gap = 0.0;
};

/// Leaf-geometry diagnostics over a sample set. Points where the two
/// Schouten eigenvalues collide (relative gap below gap_tol) are excluded
/// and counted as inconclusive. The mean-curvature formula is tested in its
/// umbilicity-factor form H/(n-1) = d_1 sigma2 / (sigma1 - sigma2).
LeafDiagnostics leaf_mean_curvature_diagnostics(
    const AdaptedChartMetric& a,
    std::span<const std::vector<double>> samples, double gap_tol = 1e-6);

struct WarpGrid {
  std::vector<double> x1;                        // at least 2 values; x1[0] is the base leaf
  std::vector<std::vector<double>> leaf_points;  // (n-1)-dim leaf coordinates
};

struct WarpSplit {
  std::vector<double> x1;
  std::vector<double> phi;  // d_1 g_ij / g_ij at each grid value
  std::vector<double> psi;  // integral of phi, psi(x1[0]) = 0
  MetricField fiber;        // G_ij on the base leaf as an (n-1)-dim field
  double ratio_spread = 0.0;
  double reconstruction_residual = 0.0;  // scale-aware vs e^psi G
};

struct NotWarpedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Extract the warp structure g_ij = e^{psi(x1)} G_ij numerically on a grid.
/// phi is the entrywise ratio d_1 g_ij / g_ij (its spread over entries and
/// leaf points must stay below 1e-6, otherwise the input is not a warped
/// product and NotWarpedError is thrown); psi integrates phi by a composite
/// trapezoid rule refined between grid nodes.
WarpSplit warp_split(const AdaptedChartMetric& a, const WarpGrid& grid);

struct FiberEinsteinReport {
  bool trivially_satisfied = false;  // 1-dimensional fiber
  double einstein_constant = 0.0;    // mean of tr Ric_G / (n-1)
  double constant_spread = 0.0;
  double max_traceless = 0.0;        // max |Ric_G - (tr/(n-1)) G|
  /// constant-sectional-curvature defect, evaluated for 3-dimensional fibers
  std::optional<double> sectional_residual;
};

FiberEinsteinReport fiber_einstein_check(
    const MetricField& fiber, std::span<const std::vector<double>> leaf_points);

}  // namespace jetgeom

#endif  // JETGEOM_SPLITTING_HPP
