#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "moebius/ls.hpp"
#include "moebius/moebius_invariants.hpp"

namespace moebius {

// Worst residual of one identity across a sample set.
struct ResidualStat {
  double max = 0.0;
  long count = 0;
  ChartPoint worst_point;
};

struct VerifyOptions {
  int jet_order = 5;
  double cluster_tol = 1e-6;   // relative gap that separates eigenvalue clusters
  double parallel_tol = 1e-6;  // threshold behind the parallel verdict
  std::map<std::string, double> tolerance_override;
  int threads = 1;
};

// Identity names mapped to residual statistics, boolean verdicts, and the
// formula each name stands for. Serialization is byte-stable for fixed
// inputs regardless of thread count.
struct VerificationReport {
  std::map<std::string, std::string> config;
  std::map<std::string, ResidualStat> residuals;
  std::map<std::string, bool> verdicts;
  std::map<std::string, std::string> anchors;
  bool pass = false;

  std::string to_json() const;
};

// Pointwise identities tying the conformal invariants to the curvature of
// the rescaled metric, sampled over the chart domain.
VerificationReport verify_structure(const ImmersionSpec& spec, int samples,
                                    double tol, uint64_t seed,
                                    const VerifyOptions& opts = {});

// The assembled product immersion against its predicted invariants.
VerificationReport verify_ls(const std::array<BlockSpec, 3>& blocks,
                             const LSParams& params, int samples, double tol,
                             uint64_t seed, const VerifyOptions& opts = {});

// Same battery with the parameter side solved from the radii and the weights
// derived from the block curvatures. Weight-system failures land in the
// report as a failing blocks_compatible verdict instead of an exception.
VerificationReport verify_ls_auto(const std::array<BlockSpec, 3>& blocks,
                                  const std::array<int, 3>& m,
                                  const std::array<int, 3>& p,
                                  const std::array<double, 3>& r_sq, int samples,
                                  double tol, uint64_t seed,
                                  const VerifyOptions& opts = {});

// Invariance of the reported quantities under random orthochronous
// transformations of the ambient light cone.
VerificationReport moebius_invariance_test(const ImmersionSpec& spec, int transforms,
                                           int samples, double tol, uint64_t seed,
                                           const VerifyOptions& opts = {});

// One row of the per-sample invariant table.
struct InvariantRow {
  int sample = 0;
  ChartPoint u;
  double rho = 0.0;
  std::vector<double> eig;  // ascending
  double tr_B = 0.0;
  double norm_B = 0.0;
  double gauss = 0.0;       // worst Gauss-identity residual at the point
  double ricci_2_17 = 0.0;  // traced Ricci identity residual
  double C_norm = 0.0;
  double gradA_norm = 0.0;

  static std::vector<std::string> columns(int m);
};

std::vector<InvariantRow> invariant_rows(const ImmersionSpec& spec, int samples,
                                         uint64_t seed, const VerifyOptions& opts = {});
std::string invariants_csv(const std::vector<InvariantRow>& rows, int m);
std::string invariants_json(const std::vector<InvariantRow>& rows, int m);

}  // namespace moebius
