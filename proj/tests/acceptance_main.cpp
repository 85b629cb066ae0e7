// Release gate: eight self-contained checks, one verdict line each. A check
// that trips keeps the run going so every criterion reports, and the process
// exits nonzero if any line failed.

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/linalg.hpp"
#include "moebius/ls.hpp"
#include "moebius/moebius_invariants.hpp"
#include "moebius/rational.hpp"
#include "moebius/verify.hpp"

using namespace moebius;

namespace {

int g_failed_checks = 0;

// Always-on requirement: never compiled out in Release, never aborts the
// remaining criteria.
#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            ++g_failed_checks;                                                  \
        }                                                                       \
    } while (0)

const std::array<int, 3> kOnes = {1, 1, 1};
const std::array<BlockKind, 3> kScanKinds = {BlockKind::GeodesicHyperbolic,
                                             BlockKind::GeodesicSphere,
                                             BlockKind::CliffordTorus};

// The one feasible parameter set of the (1,1,3) scan, shared by the
// end-to-end and determinism criteria.
std::vector<LSParams> scan_roots() {
  return feasibility_scan({1, 1, 3}, {0, 0, 1}, kScanKinds, ScanOptions{});
}

int distinct_count(const std::array<double, 3>& lambda,
                   const std::array<int, 3>& m) {
  std::vector<double> all;
  for (int a = 0; a < 3; ++a) all.insert(all.end(), m[a], lambda[a]);
  std::sort(all.begin(), all.end());
  return static_cast<int>(cluster_eigenvalues(all, 1e-9).size());
}

void criterion_exact_algebra() {
  auto rep = lemma31_check_exact(kOnes, {Rational(3), Rational(1), Rational(2)});
  REQUIRE(rep.exact, "rational path lost exactness");
  REQUIRE(rep.names.size() == 12, "identity list is not twelve entries");
  for (const auto& name : rep.names)
    REQUIRE(rep.residual.at(name) == 0.0,
            "rational residual nonzero for " << name);

  const double s54 = std::sqrt(54.0);
  REQUIRE(std::abs(rep.lambda[0] - (-19.0 / 108.0)) < 1e-15, "lambda_1 off");
  REQUIRE(std::abs(rep.lambda[1] - (29.0 / 108.0)) < 1e-15, "lambda_2 off");
  REQUIRE(std::abs(rep.lambda[2] - (11.0 / 108.0)) < 1e-15, "lambda_3 off");
  REQUIRE(std::abs(rep.b0[0] - 1.0 / s54) < 1e-15, "b0_1 off");
  REQUIRE(std::abs(rep.b0[1] + 5.0 / s54) < 1e-15, "b0_2 off");
  REQUIRE(std::abs(rep.b0[2] - 4.0 / s54) < 1e-15, "b0_3 off");

  auto fl = lemma31_check(kOnes, {3.0, 1.0, 2.0});
  for (const auto& name : fl.names)
    REQUIRE(fl.residual.at(name) <= 1e-12,
            "floating residual " << name << " = " << fl.residual.at(name));
}

void criterion_degenerate_detection() {
  auto lam = solve_lambda(kOnes, {2.0, 1.0, 1.0});
  REQUIRE(std::abs(lam[1] - lam[2]) < 1e-15, "equal radii should tie the pair");
  auto b0 = solve_b0(kOnes, lam);
  auto pred = predicted_invariants(
      LSParams{kOnes, {0, 0, 0}, {2.0, 1.0, 1.0}, {0, 0, 0}, lam, b0});
  REQUIRE(!pred.distinct, "degenerate radii flagged as distinct");
  REQUIRE(distinct_count(lam, kOnes) == 2, "tied spectrum should have 2 values");

  auto lam2 = solve_lambda(kOnes, {3.0, 1.0, 2.0});
  auto b02 = solve_b0(kOnes, lam2);
  auto pred2 = predicted_invariants(
      LSParams{kOnes, {0, 0, 0}, {3.0, 1.0, 2.0}, {0, 0, 0}, lam2, b02});
  REQUIRE(pred2.distinct, "perturbed radii should separate the pair");
  REQUIRE(distinct_count(lam2, kOnes) == 3, "perturbed spectrum should have 3 values");
}

void criterion_isotropic_torus() {
  auto spec = make_family("clifford");
  for (int s = 0; s < 50; ++s) {
    ChartPoint u = domain_sample(spec, s, 41);
    auto an = analyze_point(spec, u, 5);
    REQUIRE(std::abs(an.rho - 2.0) <= 1e-8, "rho at sample " << s);
    REQUIRE(std::abs(an.B_norm_sq - 0.5) <= 1e-8, "|B|^2 at sample " << s);
    for (int al = 0; al < an.p; ++al)
      REQUIRE(std::abs(an.trB[al]) <= 1e-10, "tr B at sample " << s);
    REQUIRE(an.C_frob <= 1e-8, "|C| at sample " << s);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        REQUIRE(std::abs(an.A(i, j) - (i == j ? 0.125 : 0.0)) <= 1e-8,
                "A entry " << i << j << " at sample " << s);
    REQUIRE(an.gradA_max <= 1e-8, "grad A at sample " << s);
    auto cl = cluster_eigenvalues(an.eig, 1e-6);
    REQUIRE(cl.size() == 1 && cl[0].multiplicity == 2,
            "spectrum should be one double eigenvalue at sample " << s);
  }
}

void criterion_structure_battery() {
  struct Probe {
    const char* name;
    std::vector<double> params;
  };
  for (const auto& pr : std::initializer_list<Probe>{
           {"clifford", {}}, {"veronese", {}}, {"ellipse-torus", {1.3, 0.8}}}) {
    auto rep = verify_structure(make_family(pr.name, pr.params), 10, 1e-6, 3);
    REQUIRE(rep.pass, "structure battery failed on " << pr.name);
    REQUIRE(rep.residuals.size() == 16,
            "unexpected identity count on " << pr.name);
  }
}

void criterion_assembled_product() {
  auto found = scan_roots();
  REQUIRE(!found.empty(), "feasibility scan found no root in its range");
  if (found.empty()) return;
  const LSParams& params = found[0];
  auto blocks = make_blocks(params.m, params.p, kScanKinds, params.r_sq);

  auto rep = verify_ls_auto(blocks, params.m, params.p, params.r_sq, 6, 1e-6, 7);
  REQUIRE(rep.pass, "assembled battery failed");
  REQUIRE(rep.residuals.at("eig_match").max <= 1e-6, "eigenvalue match");
  REQUIRE(rep.residuals.at("gradA").max <= 1e-6, "grad A residual");
  REQUIRE(rep.residuals.at("C_norm").max <= 1e-6, "|C| residual");
  REQUIRE(rep.residuals.at("rho_y0").max <= 1e-6, "rho vs y0 residual");
  REQUIRE(rep.residuals.at("eq_4_3").max <= 1e-6, "cross-block product residual");
  REQUIRE(rep.residuals.at("mixed_B").max <= 1e-8, "mixed-block B residual");

  // Multiplicities straight from one analyzed sample: each block eigenvalue
  // captures exactly its block dimension.
  auto ls = assemble_ls(blocks, params);
  ChartPoint u = domain_sample(ls.spec, 0, 7);
  auto an = analyze_point(ls.spec, u, 5);
  for (int a = 0; a < 3; ++a) {
    int hits = 0;
    for (double e : an.eig)
      if (std::abs(e - params.lambda[a]) <= 1e-6 * (1.0 + std::abs(params.lambda[a])))
        ++hits;
    REQUIRE(hits == params.m[a], "multiplicity of block " << a + 1);
  }
  REQUIRE(std::abs(an.rho - ls.y0_value(u)) <= 1e-6, "rho != y0 at a sample");
}

void criterion_transform_invariance() {
  auto torus = moebius_invariance_test(make_family("clifford"), 10, 3, 1e-6, 17);
  REQUIRE(torus.pass, "invariance battery failed on the square torus");
  REQUIRE(torus.verdicts.at("eig_invariance"), "eigenvalues moved (torus)");
  REQUIRE(torus.verdicts.at("normB_invariance"), "|B|^2 moved (torus)");
  REQUIRE(torus.verdicts.at("distinct_count"), "cluster count moved (torus)");

  auto found = scan_roots();
  REQUIRE(!found.empty(), "no parameters to assemble for the invariance run");
  if (found.empty()) return;
  auto blocks = make_blocks(found[0].m, found[0].p, kScanKinds, found[0].r_sq);
  auto ls = assemble_ls(blocks, found[0]);
  auto rep = moebius_invariance_test(ls.spec, 10, 2, 1e-6, 17);
  REQUIRE(rep.pass, "invariance battery failed on the assembled product");
  REQUIRE(rep.verdicts.at("eig_invariance"), "eigenvalues moved (product)");
  REQUIRE(rep.verdicts.at("normB_invariance"), "|B|^2 moved (product)");
  REQUIRE(rep.verdicts.at("distinct_count"), "cluster count moved (product)");
}

void criterion_negative_control() {
  auto spec = make_family("ellipse-torus", {1.3, 0.8});
  double worst = 0.0;
  for (int s = 0; s < 10; ++s)
    worst = std::max(worst,
                     analyze_point(spec, domain_sample(spec, s, 23), 5).gradA_max);
  REQUIRE(worst > 1e-3,
          "parallelism check looks vacuous: worst grad A = " << worst);
}

void criterion_determinism() {
  auto structure = [] {
    return verify_structure(make_family("clifford"), 10, 1e-6, 3).to_json();
  };
  REQUIRE(structure() == structure(), "structure report bytes drifted");

  auto assembled = [](int threads) {
    auto found = scan_roots();
    if (found.empty()) return std::string();
    auto blocks = make_blocks(found[0].m, found[0].p, kScanKinds, found[0].r_sq);
    VerifyOptions opts;
    opts.threads = threads;
    return verify_ls_auto(blocks, found[0].m, found[0].p, found[0].r_sq, 6, 1e-6, 7,
                          opts)
        .to_json();
  };
  std::string one = assembled(1);
  REQUIRE(!one.empty(), "assembled report unavailable for the byte check");
  REQUIRE(one == assembled(1), "assembled report bytes drifted");
  REQUIRE(one == assembled(3), "assembled report depends on the thread count");

  auto invariance = [] {
    return moebius_invariance_test(make_family("clifford"), 10, 3, 1e-6, 17)
        .to_json();
  };
  REQUIRE(invariance() == invariance(), "invariance report bytes drifted");

  auto table = [] {
    auto spec = make_family("clifford");
    auto rows = invariant_rows(spec, 5, 21);
    return invariants_json(rows, 2) + "\n---\n" + invariants_csv(rows, 2);
  };
  REQUIRE(table() == table(), "invariant table bytes drifted");

  auto root_json = [] {
    auto found = scan_roots();
    return found.empty() ? std::string() : params_to_json(found[0]);
  };
  REQUIRE(root_json() == root_json(), "scan parameter bytes drifted");
}

bool run(int id, const char* name, const std::function<void()>& body) {
  int before = g_failed_checks;
  try {
    body();
  } catch (const std::exception& e) {
    std::cerr << "[FAIL] criterion " << id << " threw: " << e.what() << "\n";
    ++g_failed_checks;
  }
  bool ok = g_failed_checks == before;
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << name << std::endl;
  return ok;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run(1, "parameter algebra, exact and floating", criterion_exact_algebra);
  ok &= run(2, "degenerate eigenvalue detection", criterion_degenerate_detection);
  ok &= run(3, "isotropic torus pointwise invariants", criterion_isotropic_torus);
  ok &= run(4, "structure battery on three families", criterion_structure_battery);
  ok &= run(5, "feasibility scan and assembled product", criterion_assembled_product);
  ok &= run(6, "transform invariance", criterion_transform_invariance);
  ok &= run(7, "negative control stays non-parallel", criterion_negative_control);
  ok &= run(8, "byte-identical reports", criterion_determinism);
  return ok ? 0 : 1;
}
