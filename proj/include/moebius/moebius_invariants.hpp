#pragma once

#include <vector>

#include "moebius/euclidean.hpp"
#include "moebius/lorentz.hpp"

namespace moebius {

// Conformal invariants of an umbilic-free immersion into the unit sphere,
// still jet-valued so they can be differentiated covariantly. Frame indices
// refer to the conformally rescaled orthonormal frame E_k = e_k / rho.
struct MoebiusField {
  EuclideanField eu;
  ScalarJet rho;      // conformal factor, sqrt(m/(m-1) (|h|^2 - m|H|^2))
  ScalarJet log_rho;
  JetMatrix gM;       // rho^2 gE
  JetTensor3 gammaM;  // Christoffel symbols of gM
  JetMatrix frameM;   // (k,a): E_k = frameM_ka d_a, lower triangular
  JetMatrix A;        // symmetric trace-adjusted second-order invariant
  std::vector<JetMatrix> B;  // trace-free conformal shape operators
  JetMatrix C;        // (alpha,i): conformal form coupling A and B
};

// Everything the verification battery consumes at one sample point.
struct MoebiusAnalysis {
  ChartPoint point;
  int m = 0, p = 0;
  double rho = 0.0;
  Matrix gM;               // coordinate values of the conformal metric
  Matrix A;                // frame values
  std::vector<Matrix> B;   // frame values per normal direction
  Matrix C;                // p x m
  Tensor3 A_cov;           // (i,j,k) -> A_ij;k
  std::vector<Tensor3> B_cov;
  Tensor3 C_cov;           // (alpha,i,j) -> C^alpha_i;j
  Tensor4 riemann;         // frame components, (i,j,k,l) lowered
  Matrix ricci;            // frame components
  double scalar = 0.0;
  double kappa = 0.0;      // normalized scalar curvature scalar / (m (m-1))
  Tensor4 normal_curv;     // (alpha,beta,i,j)

  std::vector<double> Y;   // light-cone lift rho (1, x) at the point
  std::vector<std::vector<double>> dY;
  std::vector<double> lapY;  // Laplace-Beltrami of the lift
  std::vector<double> N;     // dual lift

  double cone_resid = 0.0;        // <Y,Y> as a jet
  double lap_y_y_resid = 0.0;     // <lapY, Y> + m
  double lap_y_dy_resid = 0.0;    // max_a <lapY, d_a Y>
  double lap_y_norm_resid = 0.0;  // <lapY, lapY> - (1 + m^2 kappa)
  double lift_nn_resid = 0.0;     // <N,N>
  double lift_yn_resid = 0.0;     // <Y,N> - 1

  std::vector<double> eig;  // eigenvalues of A, ascending
  double trA = 0.0;
  std::vector<double> trB;
  double B_norm_sq = 0.0;
  double C_frob = 0.0;
  double gradA_frob = 0.0;
  double gradA_max = 0.0;
};

// Throws UmbilicError when |h|^2 - m|H|^2 falls below umb_eps at the point,
// ConfigError for m < 2 or a chart that is not sphere-valued.
MoebiusField compute_moebius_field(const EuclideanField& eu, double umb_eps = 1e-10);

MoebiusAnalysis analyze_field(const MoebiusField& f);

MoebiusAnalysis analyze_point(const ImmersionSpec& spec, const ChartPoint& u,
                              int order = 5, double umb_eps = 1e-10);

inline double parallel_residual(const MoebiusAnalysis& a) { return a.gradA_max; }

// Conjugates the immersion by a Lorentz transform of the ambient light cone:
// (1, x) is mapped through T and scaled back to the unit sphere. The result
// is a new chart over the same domain.
ImmersionSpec apply_lorentz(const LorentzTransform& T, const ImmersionSpec& spec);

}  // namespace moebius
