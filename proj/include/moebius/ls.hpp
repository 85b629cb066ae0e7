#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "moebius/families.hpp"
#include "moebius/rational.hpp"

namespace moebius {

// Parameter data of the three-block product construction: block dimensions,
// codimensions, squared radii, scalar-curvature weights, the derived
// eigenvalue triple and the derived distinguished shape coefficients.
struct LSParams {
  std::array<int, 3> m{1, 1, 1};
  std::array<int, 3> p{0, 0, 0};
  std::array<double, 3> r_sq{2.0, 1.0, 1.0};
  std::array<double, 3> mu{0.0, 0.0, 0.0};
  std::array<double, 3> lambda{0.0, 0.0, 0.0};
  std::array<double, 3> b0{0.0, 0.0, 0.0};
  std::string convention = "b0-first-nonzero-positive";

  int total_m() const { return m[0] + m[1] + m[2]; }
  int total_p() const { return p[0] + p[1] + p[2] + 1; }
};

// JSON round trip with exactly the fields m, p, r_sq, mu, lambda, b0,
// convention. Unknown keys are rejected by name.
std::string params_to_json(const LSParams& params);
LSParams params_from_json(const std::string& text);

// Radius constraint shared by everything below: r1^2 = r2^2 + r3^2.
void require_radius_relation(const std::array<double, 3>& r_sq);

// Eigenvalue triple from the 3x3 linear system
//   (m+m_1) l_1 + m_2 l_2 + m_3 l_3 = -m_1/r_1^2
//   m_1 l_1 + (m+m_2) l_2 + m_3 l_3 =  m_2/r_2^2
//   m_1 l_1 + m_2 l_2 + (m+m_3) l_3 =  m_3/r_3^2
// whose determinant 2m^3 never vanishes.
std::array<double, 3> solve_lambda(const std::array<int, 3>& m,
                                   const std::array<double, 3>& r_sq);
std::array<Rational, 3> solve_lambda_exact(const std::array<int, 3>& m,
                                           const std::array<Rational, 3>& r_sq);

// Distinguished shape coefficients: squares from the eigenvalues, signs fixed
// by the m-weighted zero sum and the pair products b0_a b0_b = -(l_a + l_b),
// overall sign fixed so the first nonzero entry is positive. The exact form
// returns b0_a = t_a sqrt(D) over a common radicand.
std::array<double, 3> solve_b0(const std::array<int, 3>& m,
                               const std::array<double, 3>& lambda);

struct B0Exact {
  std::array<Rational, 3> t;
  Rational D;
  std::array<Rational, 3> sq;  // t_a^2 D
  std::array<double, 3> value() const;
};
B0Exact solve_b0_exact(const std::array<int, 3>& m,
                       const std::array<Rational, 3>& lambda);

// Residuals of the twelve parameter identities: the m-weighted zero sum plus
// the displayed chain running from the per-slot curvature relations through
// the weighted-trace identities to the radius-weighted sums. Keys follow the
// report schema (eq_3_2_sum, eq_3_5_1 .. eq_3_12_2).
struct Lemma31Report {
  std::vector<std::string> names;
  std::map<std::string, double> residual;
  bool exact = false;
  std::map<std::string, bool> exact_zero;  // populated on the exact path
  std::array<double, 3> lambda{};
  std::array<double, 3> b0{};
};

Lemma31Report lemma31_check(const std::array<int, 3>& m,
                            const std::array<double, 3>& r_sq);
Lemma31Report lemma31_check_exact(const std::array<int, 3>& m,
                                  const std::array<Rational, 3>& r_sq);

// Weight triple from the actual block scalar curvatures. Division by the
// shared bracket Q = sum m_a b0_a^2 - (m-1)/m; degenerate Q, a weight sum
// away from one, or a weight outside [0,1] raise the dedicated errors.
std::array<double, 3> derive_mu(const LSParams& params,
                                const std::array<double, 3>& block_scalars);

// Scalar curvature each block must have for the given weights.
std::array<double, 3> required_block_scalars(const LSParams& params);

// Minimal building blocks with constant scalar curvature in closed form.
enum class BlockKind { GeodesicHyperbolic, GeodesicSphere, CliffordTorus };

std::string block_kind_name(BlockKind k);
BlockKind block_kind_from_name(const std::string& name);

struct BlockSpec {
  BlockKind kind = BlockKind::GeodesicSphere;
  int slot = 1;       // 1 is the hyperbolic factor, 2 and 3 the spherical ones
  double radius = 1.0;
  int m_a = 1;
  int p_a = 0;
  int k = 1;  // split of the product-torus block

  double scalar_curvature() const;
};

void validate_block(const BlockSpec& b);

// The block as a standalone immersion into its model space.
ImmersionSpec block_chart(const BlockSpec& b);

std::array<BlockSpec, 3> make_blocks(const std::array<int, 3>& m,
                                     const std::array<int, 3>& p,
                                     const std::array<BlockKind, 3>& kinds,
                                     const std::array<double, 3>& r_sq,
                                     int clifford_k = 1);

// Full parameter validation: radius relation, weight normalization, the
// linear system, and the shape-coefficient relations.
void validate_params(const LSParams& params);

// The assembled product immersion into the unit sphere, with the light-cone
// lift kept around for cross-checks.
struct LSImmersion {
  ImmersionSpec spec;
  LSParams params;
  std::array<BlockSpec, 3> blocks;
  std::function<JetVec(const JetVec&)> lift;  // (y0, y1, y2, y3) jets
  double y0_value(const ChartPoint& u) const;
};

LSImmersion assemble_ls(const std::array<BlockSpec, 3>& blocks, const LSParams& params);

// What the construction promises for the assembled immersion.
struct PredictedInvariants {
  std::array<double, 3> eigenvalues;
  std::array<int, 3> multiplicities;
  double trA = 0.0;
  std::array<double, 3> b0;
  double weighted_b0_sq = 0.0;  // sum m_a b0_a^2
  bool distinct = false;        // m_3 r_2^2 != m_2 r_3^2
};

PredictedInvariants predicted_invariants(const LSParams& params);

// Root-finds radii at which the catalog blocks carry exactly the scalar
// curvature the weight system needs. r2^2 stays pinned, r3^2 sweeps the
// range, r1^2 follows from the radius relation.
struct ScanOptions {
  double r2_sq = 2.0;
  double lo = 0.2;
  double hi = 40.0;
  int steps = 200;
  bool distinct_only = true;
  int clifford_k = 1;
};

std::vector<LSParams> feasibility_scan(const std::array<int, 3>& m,
                                       const std::array<int, 3>& p,
                                       const std::array<BlockKind, 3>& kinds,
                                       const ScanOptions& opt);

}  // namespace moebius
