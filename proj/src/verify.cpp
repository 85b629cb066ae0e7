#include "moebius/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "moebius/errors.hpp"
#include "moebius/rng.hpp"

namespace moebius {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_triple(const std::array<double, 3>& v) {
  return fmt(v[0]) + "," + fmt(v[1]) + "," + fmt(v[2]);
}

std::string fmt_triple(const std::array<int, 3>& v) {
  return std::to_string(v[0]) + "," + std::to_string(v[1]) + "," +
         std::to_string(v[2]);
}

// Deterministic indexed parallel loop: results are written by index, so the
// reduction order never depends on the thread count.
void run_indexed(int threads, int n, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  int workers = std::min(threads, n);
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        while (true) {
          int i = next.fetch_add(1);
          if (i >= n) break;
          fn(i);
        }
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

void apply_overrides(std::map<std::string, double>& tols,
                     const std::map<std::string, double>& overrides) {
  for (const auto& [name, v] : overrides) {
    auto it = tols.find(name);
    if (it == tols.end())
      throw ConfigError("tolerance override for unknown identity \"" + name + "\"");
    it->second = v;
  }
}

void update_stat(std::map<std::string, ResidualStat>& stats, const std::string& name,
                 double value, const ChartPoint& point) {
  auto& st = stats[name];
  st.count += 1;
  if (st.count == 1 || value > st.max) {
    st.max = value;
    st.worst_point = point;
  }
}

void finalize(VerificationReport& rep, const std::map<std::string, double>& tols) {
  rep.pass = true;
  for (const auto& [name, st] : rep.residuals) {
    bool ok = st.max <= tols.at(name);
    rep.verdicts[name] = ok;
    rep.pass = rep.pass && ok;
  }
}

// Residuals of the pointwise identity battery at one sample.
std::map<std::string, double> structure_residuals(const MoebiusAnalysis& an) {
  int m = an.m;
  int p = an.p;
  std::map<std::string, double> r;
  r["cone_Y"] = an.cone_resid;
  r["lap_Y_Y"] = an.lap_y_y_resid;
  r["lap_Y_dY"] = an.lap_y_dy_resid;
  r["lap_Y_norm"] = an.lap_y_norm_resid;
  r["lift_NN"] = an.lift_nn_resid;
  r["lift_YN"] = an.lift_yn_resid;

  r["tr_A"] = std::fabs(an.trA - (1.0 + m * m * an.kappa) / (2.0 * m));
  double trb = 0.0;
  for (double v : an.trB) trb = std::max(trb, std::fabs(v));
  r["tr_B"] = trb;
  r["norm_B"] = std::fabs(an.B_norm_sq - static_cast<double>(m - 1) / m);

  double gauss = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double rhs = 0.0;
          for (int a = 0; a < p; ++a)
            rhs += an.B[a](i, l) * an.B[a](j, k) - an.B[a](i, k) * an.B[a](j, l);
          rhs += (i == l ? an.A(j, k) : 0.0) - (i == k ? an.A(j, l) : 0.0) +
                 (j == k ? an.A(i, l) : 0.0) - (j == l ? an.A(i, k) : 0.0);
          gauss = std::max(gauss, std::fabs(an.riemann(i, j, k, l) - rhs));
        }
  r["gauss"] = gauss;

  double nc = 0.0;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double rhs = 0.0;
          for (int k = 0; k < m; ++k)
            rhs += an.B[a](j, k) * an.B[b](i, k) - an.B[a](i, k) * an.B[b](j, k);
          nc = std::max(nc, std::fabs(an.normal_curv(a, b, i, j) - rhs));
        }
  r["normal_curv"] = nc;

  double ra = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double rhs = 0.0;
        for (int a = 0; a < p; ++a)
          rhs += an.B[a](i, k) * an.C(a, j) - an.B[a](i, j) * an.C(a, k);
        ra = std::max(ra, std::fabs(an.A_cov(i, j, k) - an.A_cov(i, k, j) - rhs));
      }
  r["ricci_A"] = ra;

  double rb = 0.0;
  for (int a = 0; a < p; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          double rhs = (i == j ? an.C(a, k) : 0.0) - (i == k ? an.C(a, j) : 0.0);
          rb = std::max(rb, std::fabs(an.B_cov[a](i, j, k) - an.B_cov[a](i, k, j) - rhs));
        }
  r["ricci_B"] = rb;

  double rc = 0.0;
  for (int a = 0; a < p; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double rhs = 0.0;
        for (int k = 0; k < m; ++k)
          rhs += an.B[a](i, k) * an.A(k, j) - an.B[a](k, j) * an.A(k, i);
        rc = std::max(rc, std::fabs(an.C_cov(a, i, j) - an.C_cov(a, j, i) - rhs));
      }
  r["ricci_C"] = rc;

  double tr = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double rhs = (i == j ? an.trA : 0.0) + (m - 2) * an.A(i, j);
      for (int a = 0; a < p; ++a)
        for (int k = 0; k < m; ++k) rhs -= an.B[a](i, k) * an.B[a](k, j);
      tr = std::max(tr, std::fabs(an.ricci(i, j) - rhs));
    }
  r["traced_ricci"] = tr;

  double cd = 0.0;
  for (int a = 0; a < p; ++a)
    for (int i = 0; i < m; ++i) {
      double div = 0.0;
      for (int j = 0; j < m; ++j) div += an.B_cov[a](i, j, j);
      cd = std::max(cd, std::fabs((m - 1) * an.C(a, i) + div));
    }
  r["c_div_B"] = cd;
  return r;
}

std::map<std::string, std::string> structure_anchors() {
  return {
      {"cone_Y", "<Y,Y> = 0"},
      {"lap_Y_Y", "<Lap Y, Y> = -m"},
      {"lap_Y_dY", "<Lap Y, dY> = 0"},
      {"lap_Y_norm", "<Lap Y, Lap Y> = 1 + m^2 kappa"},
      {"lift_NN", "<N,N> = 0"},
      {"lift_YN", "<Y,N> = 1"},
      {"tr_A", "tr A = (1 + m^2 kappa) / (2m)"},
      {"tr_B", "tr B^a = 0"},
      {"norm_B", "|B|^2 = (m-1)/m"},
      {"gauss",
       "R_ijkl = sum_a (B^a_il B^a_jk - B^a_ik B^a_jl) + A_il d_jk - A_ik d_jl "
       "+ A_jk d_il - A_jl d_ik"},
      {"normal_curv", "Rn_abij = sum_k (B^a_jk B^b_ik - B^a_ik B^b_jk)"},
      {"ricci_A", "A_ij;k - A_ik;j = sum_a (B^a_ik C^a_j - B^a_ij C^a_k)"},
      {"ricci_B", "B^a_ij;k - B^a_ik;j = d_ij C^a_k - d_ik C^a_j"},
      {"ricci_C", "C^a_i;j - C^a_j;i = sum_k (B^a_ik A_kj - B^a_kj A_ki)"},
      {"traced_ricci",
       "R_ij = -sum_{a,k} B^a_ik B^a_kj + (tr A) d_ij + (m-2) A_ij"},
      {"c_div_B", "(m-1) C^a_i = -sum_j B^a_ij;j"},
  };
}

std::map<std::string, double> structure_tolerances(double tol) {
  std::map<std::string, double> t;
  for (const auto& kv : structure_anchors()) t[kv.first] = tol;
  for (const char* name :
       {"cone_Y", "lap_Y_Y", "lap_Y_dY", "lift_NN", "lift_YN", "norm_B"})
    t[name] = std::min(tol, 1e-8);
  t["tr_B"] = std::min(tol, 1e-10);
  return t;
}

std::map<std::string, std::string> ls_anchors() {
  return {
      {"rho_y0", "rho = y0"},
      {"eig_match", "A = diag(l_1 I_m1, l_2 I_m2, l_3 I_m3)"},
      {"eig_count", "distinct eigenvalue count matches m_3 r_2^2 vs m_2 r_3^2"},
      {"gradA", "A_ij;k = 0"},
      {"C_norm", "C = 0"},
      {"mixed_B", "B^a_ij = 0 for i, j in different blocks"},
      {"eq_4_3",
       "sum_a B^a_{i_a j_a} B^a_{i_b j_b} = -(l_a + l_b) d_{i_a j_a} d_{i_b j_b}"},
      {"b0_pattern", "B^0_{ij} = b0_a d_ij on block a along the distinguished normal"},
      {"blocks_compatible", "block scalar curvatures solve the weight system"},
  };
}

std::map<std::string, double> ls_tolerances(double tol) {
  std::map<std::string, double> t;
  for (const auto& kv : ls_anchors()) t[kv.first] = tol;
  t["mixed_B"] = std::min(tol, 1e-8);
  t["blocks_compatible"] = std::min(tol, 1e-8);
  return t;
}

void ls_config_echo(VerificationReport& rep, const std::array<BlockSpec, 3>& blocks,
                    const LSParams& params) {
  rep.config["mode"] = "ls";
  rep.config["m"] = fmt_triple(params.m);
  rep.config["p"] = fmt_triple(params.p);
  rep.config["r_sq"] = fmt_triple(params.r_sq);
  rep.config["mu"] = fmt_triple(params.mu);
  rep.config["lambda"] = fmt_triple(params.lambda);
  rep.config["b0"] = fmt_triple(params.b0);
  rep.config["blocks"] = block_kind_name(blocks[0].kind) + "," +
                         block_kind_name(blocks[1].kind) + "," +
                         block_kind_name(blocks[2].kind);
  std::string zero_slots;
  for (int a = 0; a < 3; ++a)
    if (params.mu[a] <= 1e-10)
      zero_slots += (zero_slots.empty() ? "" : ",") + std::to_string(a + 1);
  if (!zero_slots.empty()) rep.config["mu_zero_slots"] = zero_slots;
}

double block_compat_residual(const std::array<BlockSpec, 3>& blocks,
                             const LSParams& params) {
  auto want = required_block_scalars(params);
  double compat = 0.0;
  for (int a = 0; a < 3; ++a)
    compat = std::max(compat, std::fabs(blocks[a].scalar_curvature() - want[a]) /
                                  (1.0 + std::fabs(want[a])));
  return compat;
}

VerificationReport ls_weight_failure(const std::array<BlockSpec, 3>& blocks,
                                     const LSParams& params, int samples, double tol,
                                     uint64_t seed, const VerifyOptions& opts,
                                     const std::string& what, bool indeterminate) {
  VerificationReport rep;
  rep.anchors = ls_anchors();
  auto tols = ls_tolerances(tol);
  apply_overrides(tols, opts.tolerance_override);
  ls_config_echo(rep, blocks, params);
  rep.config["samples"] = std::to_string(samples);
  rep.config["tol"] = fmt(tol);
  rep.config["seed"] = std::to_string(seed);
  rep.config["jet_order"] = std::to_string(opts.jet_order);
  rep.config["block_error"] = what;
  double resid = indeterminate
                     ? std::numeric_limits<double>::infinity()
                     : std::max(block_compat_residual(blocks, params),
                                tols.at("blocks_compatible") * 2.0);
  update_stat(rep.residuals, "blocks_compatible", resid, {});
  finalize(rep, tols);
  return rep;
}

std::map<std::string, std::string> invariance_anchors() {
  return {
      {"eig_invariance", "spec(A) is preserved by orthochronous cone transforms"},
      {"normB_invariance", "|B|^2 is preserved by orthochronous cone transforms"},
      {"distinct_count", "the distinct eigenvalue count is preserved"},
      {"parallel_verdict", "the parallel verdict max |A_ij;k| <= tol is preserved"},
  };
}

// Gauge-invariant check of the distinguished normal direction: its direction
// is recovered from the diagonal of B on a geodesic block, then every block
// diagonal must project onto it with the predicted coefficient and off-diagonal
// entries must not touch it.
double b0_pattern_residual(const MoebiusAnalysis& an, const LSParams& params,
                           const std::array<BlockSpec, 3>& blocks,
                           const std::array<int, 3>& start) {
  int m = an.m;
  int p = an.p;
  auto col = [&](int i, int j) {
    std::vector<double> v(p);
    for (int a = 0; a < p; ++a) v[a] = an.B[a](i, j);
    return v;
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  double scale = 0.0;
  for (double v : params.b0) scale = std::max(scale, std::fabs(v));
  int rs = -1;
  double best = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (blocks[a].kind == BlockKind::CliffordTorus) continue;
    if (std::fabs(params.b0[a]) > best) {
      best = std::fabs(params.b0[a]);
      rs = a;
    }
  }
  if (rs < 0 || best <= 1e-10 * (1.0 + scale)) {
    // every geodesic slot is shape-flat; only the magnitudes are testable
    double worst = 0.0;
    for (int a = 0; a < 3; ++a) {
      if (blocks[a].kind == BlockKind::CliffordTorus) continue;
      for (int i = start[a]; i < start[a] + params.m[a]; ++i)
        worst = std::max(worst, std::fabs(norm(col(i, i)) - std::fabs(params.b0[a])));
    }
    return worst;
  }

  int iref = start[rs];
  auto vref = col(iref, iref);
  double d = norm(vref);
  double worst = std::fabs(d - std::fabs(params.b0[rs]));
  if (d <= 1e-14) return std::max(worst, std::fabs(params.b0[rs]));

  std::vector<double> e(p);
  double sgn = params.b0[rs] >= 0.0 ? 1.0 : -1.0;
  for (int a = 0; a < p; ++a) e[a] = sgn * vref[a] / d;

  for (int a = 0; a < 3; ++a) {
    for (int i = start[a]; i < start[a] + params.m[a]; ++i) {
      auto v = col(i, i);
      double proj = 0.0;
      for (int q = 0; q < p; ++q) proj += v[q] * e[q];
      worst = std::max(worst, std::fabs(proj - params.b0[a]));
      if (blocks[a].kind != BlockKind::CliffordTorus)
        for (int q = 0; q < p; ++q)
          worst = std::max(worst, std::fabs(v[q] - params.b0[a] * e[q]));
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      auto v = col(i, j);
      double proj = 0.0;
      for (int q = 0; q < p; ++q) proj += v[q] * e[q];
      // off-diagonal entries inside one clifford block carry its own normal
      // component, but never the distinguished one
      worst = std::max(worst, std::fabs(proj));
    }
  return worst;
}

}  // namespace

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  nlohmann::json rj = nlohmann::json::object();
  for (const auto& [name, st] : residuals)
    rj[name] = {{"max", st.max}, {"count", st.count}, {"worst_point", st.worst_point}};
  j["residuals"] = rj;
  j["verdicts"] = verdicts;
  j["anchors"] = anchors;
  j["pass"] = pass;
  return j.dump(2);
}

VerificationReport verify_structure(const ImmersionSpec& spec, int samples, double tol,
                                    uint64_t seed, const VerifyOptions& opts) {
  if (samples < 1) throw ConfigError("sample count must be positive");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");

  std::vector<ChartPoint> pts(samples);
  for (int s = 0; s < samples; ++s) pts[s] = domain_sample(spec, s, seed);
  std::vector<std::map<std::string, double>> per(samples);
  run_indexed(opts.threads, samples,
              [&](int s) { per[s] = structure_residuals(analyze_point(spec, pts[s], opts.jet_order)); });

  VerificationReport rep;
  rep.anchors = structure_anchors();
  auto tols = structure_tolerances(tol);
  apply_overrides(tols, opts.tolerance_override);
  for (int s = 0; s < samples; ++s)
    for (const auto& [name, v] : per[s]) update_stat(rep.residuals, name, v, pts[s]);
  finalize(rep, tols);

  rep.config["mode"] = "structure";
  rep.config["family"] = spec.family;
  rep.config["samples"] = std::to_string(samples);
  rep.config["tol"] = fmt(tol);
  rep.config["seed"] = std::to_string(seed);
  rep.config["jet_order"] = std::to_string(opts.jet_order);
  return rep;
}

VerificationReport verify_ls(const std::array<BlockSpec, 3>& blocks,
                             const LSParams& params, int samples, double tol,
                             uint64_t seed, const VerifyOptions& opts) {
  if (samples < 1) throw ConfigError("sample count must be positive");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");

  VerificationReport rep;
  rep.anchors = ls_anchors();
  auto tols = ls_tolerances(tol);
  apply_overrides(tols, opts.tolerance_override);
  ls_config_echo(rep, blocks, params);
  rep.config["samples"] = std::to_string(samples);
  rep.config["tol"] = fmt(tol);
  rep.config["seed"] = std::to_string(seed);
  rep.config["jet_order"] = std::to_string(opts.jet_order);

  LSImmersion ls;
  try {
    ls = assemble_ls(blocks, params);
  } catch (const IndeterminateMuError& e) {
    return ls_weight_failure(blocks, params, samples, tol, seed, opts, e.what(), true);
  } catch (const IncompatibleBlocksError& e) {
    return ls_weight_failure(blocks, params, samples, tol, seed, opts, e.what(), false);
  } catch (const InfeasibleBlocksError& e) {
    return ls_weight_failure(blocks, params, samples, tol, seed, opts, e.what(), false);
  }
  update_stat(rep.residuals, "blocks_compatible", block_compat_residual(blocks, params),
              {});

  auto pred = predicted_invariants(params);
  std::vector<double> expect;
  for (int a = 0; a < 3; ++a)
    expect.insert(expect.end(), params.m[a], params.lambda[a]);
  std::sort(expect.begin(), expect.end());
  int clusters_pred =
      static_cast<int>(cluster_eigenvalues(expect, opts.cluster_tol).size());
  rep.config["predicted_distinct"] = std::to_string(clusters_pred);
  rep.config["degenerate_pair"] = pred.distinct ? "no" : "yes";

  std::array<int, 3> start = {0, params.m[0], params.m[0] + params.m[1]};
  int mt = params.total_m();

  std::vector<ChartPoint> pts(samples);
  for (int s = 0; s < samples; ++s) pts[s] = domain_sample(ls.spec, s, seed);
  std::vector<std::map<std::string, double>> per(samples);
  run_indexed(opts.threads, samples, [&](int s) {
    MoebiusAnalysis an = analyze_point(ls.spec, pts[s], opts.jet_order);
    double y0 = ls.y0_value(pts[s]);
    std::map<std::string, double> r;
    r["rho_y0"] = std::fabs(an.rho - y0) / (1.0 + std::fabs(y0));
    r["gradA"] = an.gradA_max;
    r["C_norm"] = an.C_frob;
    double em = 0.0;
    for (int i = 0; i < mt; ++i) em = std::max(em, std::fabs(an.eig[i] - expect[i]));
    r["eig_match"] = em;
    int clusters =
        static_cast<int>(cluster_eigenvalues(an.eig, opts.cluster_tol).size());
    r["eig_count"] = std::fabs(clusters - clusters_pred);

    auto block_of = [&](int i) { return i < start[1] ? 0 : (i < start[2] ? 1 : 2); };
    double mixed = 0.0;
    for (int a = 0; a < an.p; ++a)
      for (int i = 0; i < mt; ++i)
        for (int j = 0; j < mt; ++j)
          if (block_of(i) != block_of(j))
            mixed = std::max(mixed, std::fabs(an.B[a](i, j)));
    r["mixed_B"] = mixed;

    double cross = 0.0;
    for (int ba = 0; ba < 3; ++ba)
      for (int bb = ba + 1; bb < 3; ++bb)
        for (int i = start[ba]; i < start[ba] + params.m[ba]; ++i)
          for (int j = start[ba]; j < start[ba] + params.m[ba]; ++j)
            for (int k = start[bb]; k < start[bb] + params.m[bb]; ++k)
              for (int l = start[bb]; l < start[bb] + params.m[bb]; ++l) {
                double lhs = 0.0;
                for (int q = 0; q < an.p; ++q) lhs += an.B[q](i, j) * an.B[q](k, l);
                double rhs = (i == j && k == l)
                                 ? -(params.lambda[ba] + params.lambda[bb])
                                 : 0.0;
                cross = std::max(cross, std::fabs(lhs - rhs));
              }
    r["eq_4_3"] = cross;
    r["b0_pattern"] = b0_pattern_residual(an, params, blocks, start);
    per[s] = r;
  });

  for (int s = 0; s < samples; ++s)
    for (const auto& [name, v] : per[s]) update_stat(rep.residuals, name, v, pts[s]);
  finalize(rep, tols);
  return rep;
}

VerificationReport verify_ls_auto(const std::array<BlockSpec, 3>& blocks,
                                  const std::array<int, 3>& m,
                                  const std::array<int, 3>& p,
                                  const std::array<double, 3>& r_sq, int samples,
                                  double tol, uint64_t seed,
                                  const VerifyOptions& opts) {
  LSParams params;
  params.m = m;
  params.p = p;
  params.r_sq = r_sq;
  params.lambda = solve_lambda(m, r_sq);
  params.b0 = solve_b0(m, params.lambda);
  std::array<double, 3> scal = {blocks[0].scalar_curvature(),
                                blocks[1].scalar_curvature(),
                                blocks[2].scalar_curvature()};
  try {
    params.mu = derive_mu(params, scal);
  } catch (const IndeterminateMuError& e) {
    return ls_weight_failure(blocks, params, samples, tol, seed, opts, e.what(), true);
  } catch (const IncompatibleBlocksError& e) {
    return ls_weight_failure(blocks, params, samples, tol, seed, opts, e.what(), false);
  } catch (const InfeasibleBlocksError& e) {
    return ls_weight_failure(blocks, params, samples, tol, seed, opts, e.what(), false);
  }
  return verify_ls(blocks, params, samples, tol, seed, opts);
}

VerificationReport moebius_invariance_test(const ImmersionSpec& spec, int transforms,
                                           int samples, double tol, uint64_t seed,
                                           const VerifyOptions& opts) {
  if (transforms < 1) throw ConfigError("transform count must be positive");
  if (samples < 1) throw ConfigError("sample count must be positive");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");

  std::vector<ChartPoint> pts(samples);
  for (int s = 0; s < samples; ++s) pts[s] = domain_sample(spec, s, seed);
  std::vector<MoebiusAnalysis> base(samples);
  run_indexed(opts.threads, samples,
              [&](int s) { base[s] = analyze_point(spec, pts[s], opts.jet_order); });

  Rng rng(seed ^ 0x5ca1ab1eu);
  std::vector<LorentzTransform> ts;
  ts.reserve(transforms);
  for (int t = 0; t < transforms; ++t)
    ts.push_back(random_orthochronous(rng, spec.dim_ambient + 1));

  struct Cmp {
    double eig = 0.0, normb = 0.0, count = 0.0, verdict = 0.0;
  };
  std::vector<Cmp> per(transforms * samples);
  run_indexed(opts.threads, transforms * samples, [&](int idx) {
    int t = idx / samples;
    int s = idx % samples;
    ImmersionSpec moved = apply_lorentz(ts[t], spec);
    MoebiusAnalysis an = analyze_point(moved, pts[s], opts.jet_order);
    Cmp c;
    for (size_t i = 0; i < an.eig.size(); ++i)
      c.eig = std::max(c.eig, std::fabs(an.eig[i] - base[s].eig[i]));
    c.normb = std::fabs(an.B_norm_sq - base[s].B_norm_sq);
    int n0 = static_cast<int>(cluster_eigenvalues(base[s].eig, opts.cluster_tol).size());
    int n1 = static_cast<int>(cluster_eigenvalues(an.eig, opts.cluster_tol).size());
    c.count = std::fabs(n1 - n0);
    bool v0 = base[s].gradA_max <= opts.parallel_tol;
    bool v1 = an.gradA_max <= opts.parallel_tol;
    c.verdict = v0 == v1 ? 0.0 : 1.0;
    per[idx] = c;
  });

  VerificationReport rep;
  rep.anchors = invariance_anchors();
  std::map<std::string, double> tols = {{"eig_invariance", tol},
                                        {"normB_invariance", tol},
                                        {"distinct_count", 0.5},
                                        {"parallel_verdict", 0.5}};
  apply_overrides(tols, opts.tolerance_override);
  for (int idx = 0; idx < transforms * samples; ++idx) {
    const ChartPoint& u = pts[idx % samples];
    update_stat(rep.residuals, "eig_invariance", per[idx].eig, u);
    update_stat(rep.residuals, "normB_invariance", per[idx].normb, u);
    update_stat(rep.residuals, "distinct_count", per[idx].count, u);
    update_stat(rep.residuals, "parallel_verdict", per[idx].verdict, u);
  }
  finalize(rep, tols);

  rep.config["mode"] = "invariance";
  rep.config["family"] = spec.family;
  rep.config["transforms"] = std::to_string(transforms);
  rep.config["samples"] = std::to_string(samples);
  rep.config["tol"] = fmt(tol);
  rep.config["seed"] = std::to_string(seed);
  rep.config["jet_order"] = std::to_string(opts.jet_order);
  return rep;
}

std::vector<std::string> InvariantRow::columns(int m) {
  std::vector<std::string> cols;
  cols.push_back("sample");
  for (int i = 1; i <= m; ++i) cols.push_back("u" + std::to_string(i));
  cols.push_back("rho");
  for (int i = 1; i <= m; ++i) cols.push_back("eig" + std::to_string(i));
  cols.push_back("tr_B");
  cols.push_back("norm_B");
  cols.push_back("gauss");
  cols.push_back("ricci_2_17");
  cols.push_back("C_norm");
  cols.push_back("gradA_norm");
  return cols;
}

std::vector<InvariantRow> invariant_rows(const ImmersionSpec& spec, int samples,
                                         uint64_t seed, const VerifyOptions& opts) {
  if (samples < 1) throw ConfigError("sample count must be positive");
  std::vector<InvariantRow> rows(samples);
  run_indexed(opts.threads, samples, [&](int s) {
    ChartPoint u = domain_sample(spec, s, seed);
    MoebiusAnalysis an = analyze_point(spec, u, opts.jet_order);
    auto res = structure_residuals(an);
    InvariantRow& r = rows[s];
    r.sample = s;
    r.u = u;
    r.rho = an.rho;
    r.eig = an.eig;
    r.tr_B = res.at("tr_B");
    r.norm_B = an.B_norm_sq;
    r.gauss = res.at("gauss");
    r.ricci_2_17 = res.at("traced_ricci");
    r.C_norm = an.C_frob;
    r.gradA_norm = an.gradA_frob;
  });
  return rows;
}

std::string invariants_csv(const std::vector<InvariantRow>& rows, int m) {
  std::ostringstream os;
  os.precision(17);
  auto cols = InvariantRow::columns(m);
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    os << r.sample;
    for (double v : r.u) os << "," << v;
    os << "," << r.rho;
    for (double v : r.eig) os << "," << v;
    os << "," << r.tr_B << "," << r.norm_B << "," << r.gauss << "," << r.ricci_2_17
       << "," << r.C_norm << "," << r.gradA_norm;
    os << "\n";
  }
  return os.str();
}

std::string invariants_json(const std::vector<InvariantRow>& rows, int m) {
  nlohmann::json j;
  j["columns"] = InvariantRow::columns(m);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = nlohmann::json::array();
    row.push_back(r.sample);
    for (double v : r.u) row.push_back(v);
    row.push_back(r.rho);
    for (double v : r.eig) row.push_back(v);
    row.push_back(r.tr_B);
    row.push_back(r.norm_B);
    row.push_back(r.gauss);
    row.push_back(r.ricci_2_17);
    row.push_back(r.C_norm);
    row.push_back(r.gradA_norm);
    out.push_back(row);
  }
  j["rows"] = out;
  return j.dump(2);
}

}  // namespace moebius
