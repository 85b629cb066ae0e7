#pragma once

#include <vector>

#include "moebius/families.hpp"
#include "moebius/linalg.hpp"

namespace moebius {

// Metric data of an immersed chart at one point, everything carried as jets
// so that downstream quantities can still be differentiated. Frame indices
// i,j run over the orthonormal tangent frame, coordinate indices a,b over
// chart variables, and alpha/beta over the unit normal frame of the
// submanifold inside its model space (the position direction of a curved
// model is not a normal).
struct EuclideanField {
  ImmersionSpec spec;
  ChartPoint base;
  int m = 0;      // intrinsic dimension
  int n_amb = 0;  // ambient coordinate count
  int p = 0;      // codimension inside the model space
  Signature sig = Signature::Euclidean;
  std::shared_ptr<const MultiIndexTable> tab;

  JetVec x;                         // chart components
  std::vector<JetVec> dx;           // coordinate tangents d_a x
  JetMatrix gE;                     // induced metric g_ab
  JetMatrix gE_inv;
  JetTensor3 gammaE;                // (c,a,b) -> Gamma^c_ab of gE
  std::vector<JetVec> tangent;      // orthonormal tangent frame e_i
  JetMatrix frame_coeff;            // lower-triangular c with e_i = c_ia d_a x
  std::vector<JetVec> normal;       // unit normal frame e_alpha
  std::vector<JetMatrix> h_coord;   // h^alpha_ab = <x_,ab, e_alpha>
  std::vector<JetMatrix> h_frame;   // h^alpha_ij in the tangent frame
  JetVec meanH;                     // H^alpha = tr(h^alpha_ij) / m
  JetTensor3 omegaN;                // (alpha,beta,a) -> <d_a e_alpha, e_beta>
};

EuclideanField compute_euclidean_field(const ImmersionSpec& spec, const ChartPoint& u,
                                       int order);

// Point values extracted from the jets above.
struct EuclideanData {
  int m = 0, p = 0;
  Matrix gE;
  std::vector<Matrix> h;  // frame components
  std::vector<double> H;
  double h_norm_sq = 0.0;
  double H_norm_sq = 0.0;
};

EuclideanData euclidean_at(const EuclideanField& f);

// Sectional curvature of the model space: 1/r^2, -1/r^2, or 0.
double model_curvature(const ImmersionSpec& spec);

// Generic Riemannian machinery over a jet-valued metric.
JetMatrix metric_inverse_jets(const JetMatrix& g);
JetTensor3 christoffel_jets(const JetMatrix& g);  // (c,a,b) -> Gamma^c_ab

// Coordinate curvature values of a jet metric at its base point. The lowered
// tensor follows T(i,j,k,l) = g(R(d_i,d_j) d_k, d_l) with
// R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y], so a space of
// constant curvature K gives T(i,j,k,l) = K (g_jk g_il - g_ik g_jl).
struct CurvatureData {
  Tensor3 christoffel;
  Tensor4 riemann;
  Matrix ricci;
  double scalar = 0.0;
};

CurvatureData induced_curvature(const JetMatrix& g);

// Max residual of the coordinate Gauss equation of the immersion against the
// model curvature and second fundamental form. Pure cross-check.
double model_gauss_residual(const EuclideanField& f);

// Conformal coordinate maps between the three model spaces.
// sigma: R^k -> S^k, u |-> ((1-|u|^2) / (1+|u|^2), 2u / (1+|u|^2)).
// tau:   H^k -> S^k, y |-> (1/y0, y'/y0) for <y,y> = -1, y0 > 0.
std::vector<double> sigma_map(const std::vector<double>& u);
JetVec sigma_map(const JetVec& u);
std::vector<double> tau_map(const std::vector<double>& y);
JetVec tau_map(const JetVec& y);

}  // namespace moebius
