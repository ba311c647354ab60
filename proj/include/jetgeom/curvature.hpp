#ifndef JETGEOM_CURVATURE_HPP
#define JETGEOM_CURVATURE_HPP

#include "jetgeom/metric.hpp"

namespace jetgeom {

/// Every curvature object of a metric at one point, under the convention
/// fixed by the coordinate formula
///   R^d_abc = d_b Gamma^d_ac - d_a Gamma^d_bc
///             + Gamma^e_ac Gamma^d_be - Gamma^e_bc Gamma^d_ae,
/// which makes Riem(v,w,v,w) > 0 on the round sphere. Coordinate (partial)
/// derivatives carry the derivative index in slot 0 and are plumbing for the
/// covariant objects; the covariant derivatives are genuine tensors.
struct CurvaturePack {
  int n = 0;
  MetricJet jet;

  TensorValue gamma;     // Gamma^c_ab, slots (c,a,b)
  TensorValue dgamma;    // d_d Gamma^c_ab, slots (d,c,a,b)
  TensorValue d2gamma;   // d_e d_d Gamma^c_ab
  TensorValue riemann;   // R_abcd, fully covariant
  TensorValue driemann;  // d_e R_abcd
  TensorValue ricci;     // R_ab
  TensorValue dricci;    // d_c R_ab
  double scalar = 0.0;
  std::vector<double> dscalar;  // d_a R
  TensorValue cov_ricci;        // nabla_c R_ab, slots (c,a,b)

  // n >= 3 only
  TensorValue weyl;          // W_abcd
  TensorValue schouten;      // S_ab = (R_ab - R g_ab / (2(n-1))) / (n-2)
  TensorValue dschouten;     // d_c S_ab
  TensorValue cov_schouten;  // nabla_c S_ab, slots (c,a,b)
  TensorValue cotton;        // C_abc, antisymmetric in (b,c)

  // n >= 4 only
  TensorValue dweyl;     // d_e W_abcd
  TensorValue div_weyl;  // nabla^d W_abcd, slots (a,b,c)

  MetricAtPoint metric() const { return jet.at_point(); }
};

CurvaturePack curvature_pack(const MetricJet& j);

TensorValue christoffel(const MetricJet& j);
TensorValue riemann(const MetricJet& j);
const TensorValue& ricci(const CurvaturePack& pk);
double scalar_curvature(const CurvaturePack& pk);
const TensorValue& weyl(const CurvaturePack& pk);    // throws for n < 3
TensorValue cotton(const MetricJet& j);              // throws for n < 3
TensorValue div_weyl(const MetricJet& j);            // throws for n < 4

/// Covariant Hessian nabla^2 f_ab = d_a d_b f - Gamma^c_ab d_c f.
TensorValue hessian(const ScalarJet& f, const CurvaturePack& pk);
/// grad f with the index raised, (1,0) tensor.
TensorValue gradient_raised(const ScalarJet& f, const CurvaturePack& pk);
TensorValue gradient_covector(const ScalarJet& f, int n);
double laplacian(const ScalarJet& f, const CurvaturePack& pk);
double grad_norm_sq(const ScalarJet& f, const CurvaturePack& pk);

/// nabla_c nabla_b nabla_a f, slots (c,b,a): the covariant derivative of the
/// Hessian. Symmetric in (b,a); the (c,b) antisymmetrization is curvature.
TensorValue third_cov_derivative(const ScalarJet& f, const CurvaturePack& pk);

/// Covariant derivative of an arbitrary tensor field at a point. `dt` holds
/// the coordinate derivatives of the components with the derivative index in
/// slot 0; one Christoffel correction is applied per slot of t.
TensorValue cov_derivative(const TensorValue& t, const TensorValue& dt,
                           const CurvaturePack& pk);

// Identity diagnostics: worst absolute defect of each structural identity at
// the pack's point. Callers gate them scale-aware against the magnitude of
// the operands.

/// Pair/block antisymmetries, pair exchange, first Bianchi.
double riemann_symmetry_residual(const CurvaturePack& pk);
/// Every metric trace of the Weyl tensor (n >= 3).
double weyl_trace_residual(const CurvaturePack& pk);
/// Cotton antisymmetry in the last two slots and both nontrivial traces.
double cotton_structure_residual(const CurvaturePack& pk);
/// nabla^d W_abcd + (n-3)/(n-2) C_cba (n >= 4); the index order is the one
/// the contracted second Bianchi identity produces.
double div_weyl_identity_residual(const CurvaturePack& pk);
/// nabla^b R_ab - (1/2) d_a R.
double contracted_bianchi_residual(const CurvaturePack& pk);
/// C_abc - (n-2)(nabla_c S_ab - nabla_b S_ac).
double cotton_schouten_residual(const CurvaturePack& pk);
/// d(g g^-1) = 0 through third order.
double metric_inverse_derivative_residual(const MetricJet& J);

}  // namespace jetgeom

#endif  // JETGEOM_CURVATURE_HPP
