#include <set>

#include "doctest.h"
#include "json.hpp"

#include "moebius/errors.hpp"
#include "moebius/verify.hpp"

using namespace moebius;

namespace {

const std::array<BlockKind, 3> kScanKinds = {BlockKind::GeodesicHyperbolic,
                                             BlockKind::GeodesicSphere,
                                             BlockKind::CliffordTorus};

VerificationReport scan_case_report(int samples, double tol,
                                    const VerifyOptions& opts = {}) {
  ScanOptions so;
  auto found = feasibility_scan({1, 1, 3}, {0, 0, 1}, kScanKinds, so);
  REQUIRE(found.size() == 1);
  auto blocks = make_blocks(found[0].m, found[0].p, kScanKinds, found[0].r_sq);
  return verify_ls_auto(blocks, found[0].m, found[0].p, found[0].r_sq, samples, tol,
                        7, opts);
}

}  // namespace

TEST_CASE("structure battery passes on umbilic-free charts") {
  struct Probe {
    const char* name;
    std::vector<double> params;
  };
  for (const auto& pr : std::initializer_list<Probe>{
           {"clifford", {}}, {"veronese", {}}, {"torus", {0.6, 0.8}},
           {"ellipse-torus", {1.3, 0.8}}}) {
    auto spec = make_family(pr.name, pr.params);
    auto rep = verify_structure(spec, 10, 1e-6, 3);
    INFO("family ", pr.name);
    CHECK(rep.pass);
    CHECK(rep.residuals.size() == 16);
    for (const auto& [name, ok] : rep.verdicts) {
      INFO("verdict ", name);
      CHECK(ok);
    }
  }
}

TEST_CASE("residual statistics carry their provenance") {
  auto spec = make_family("veronese");
  auto rep = verify_structure(spec, 8, 1e-6, 11);
  for (const auto& [name, stat] : rep.residuals) {
    INFO("identity ", name);
    CHECK(stat.count == 8);
    CHECK(stat.worst_point.size() == 2);
    CHECK(stat.max >= 0.0);
  }
  // every residual has a matching verdict and a formula anchor
  for (const auto& [name, stat] : rep.residuals) {
    CHECK(rep.verdicts.count(name) == 1);
    CHECK(rep.anchors.count(name) == 1);
    CHECK_FALSE(rep.anchors.at(name).empty());
  }
}

TEST_CASE("reports serialize to the fixed schema") {
  auto spec = make_family("clifford");
  auto rep = verify_structure(spec, 4, 1e-6, 1);
  auto j = nlohmann::json::parse(rep.to_json());
  std::set<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
  CHECK(keys == std::set<std::string>{"config", "residuals", "verdicts", "anchors",
                                      "pass"});
  CHECK(j["pass"].is_boolean());
  for (const auto& [name, stat] : j["residuals"].items()) {
    CHECK(stat.contains("max"));
    CHECK(stat.contains("count"));
    CHECK(stat.contains("worst_point"));
  }
}

TEST_CASE("serialization is byte-stable across repeats and thread counts") {
  auto spec = make_family("veronese");
  auto a = verify_structure(spec, 6, 1e-6, 5).to_json();
  auto b = verify_structure(spec, 6, 1e-6, 5).to_json();
  CHECK(a == b);

  VerifyOptions threaded;
  threaded.threads = 4;
  auto c = verify_structure(spec, 6, 1e-6, 5, threaded).to_json();
  CHECK(a == c);

  VerifyOptions opts;
  auto d = scan_case_report(4, 1e-6).to_json();
  opts.threads = 3;
  auto e = scan_case_report(4, 1e-6, opts).to_json();
  CHECK(d == e);
}

TEST_CASE("unknown tolerance overrides are rejected by name") {
  auto spec = make_family("clifford");
  VerifyOptions opts;
  opts.tolerance_override["no_such_identity"] = 1e-3;
  CHECK_THROWS_WITH_AS(verify_structure(spec, 2, 1e-6, 1, opts),
                       doctest::Contains("no_such_identity"), ConfigError);
}

TEST_CASE("tolerance overrides tighten until failure") {
  auto spec = make_family("ellipse-torus", {1.3, 0.8});
  VerifyOptions opts;
  opts.tolerance_override["gauss"] = 1e-18;  // below reachable precision
  auto rep = verify_structure(spec, 4, 1e-6, 2, opts);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.verdicts.at("gauss"));
  // other identities keep their verdicts
  CHECK(rep.verdicts.at("tr_B"));
}

TEST_CASE("assembled product immersion verifies against its predictions") {
  auto rep = scan_case_report(4, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.verdicts.at("eig_match"));
  CHECK(rep.verdicts.at("eig_count"));
  CHECK(rep.verdicts.at("rho_y0"));
  CHECK(rep.verdicts.at("gradA"));
  CHECK(rep.verdicts.at("C_norm"));
  CHECK(rep.verdicts.at("eq_4_3"));
  CHECK(rep.verdicts.at("mixed_B"));
  CHECK(rep.verdicts.at("b0_pattern"));
  CHECK(rep.verdicts.at("blocks_compatible"));
  CHECK(rep.config.at("mode") == "ls");
  CHECK(rep.config.at("mu_zero_slots") == "1,2");
}

TEST_CASE("weight-system failures land in the report, not in an exception") {
  // radii that break the weight normalization for these block kinds
  std::array<int, 3> m = {1, 1, 3};
  std::array<int, 3> p = {0, 0, 1};
  std::array<double, 3> r_sq = {10.0, 2.0, 8.0};
  auto blocks = make_blocks(m, p, kScanKinds, r_sq);
  VerificationReport rep;
  CHECK_NOTHROW(rep = verify_ls_auto(blocks, m, p, r_sq, 3, 1e-6, 1));
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.verdicts.at("blocks_compatible"));
  CHECK(rep.config.count("block_error") == 1);
}

TEST_CASE("invariance battery accepts conformally equivalent charts") {
  auto spec = make_family("clifford");
  auto rep = moebius_invariance_test(spec, 4, 3, 1e-6, 9);
  CHECK(rep.pass);
  CHECK(rep.verdicts.at("eig_invariance"));
  CHECK(rep.verdicts.at("normB_invariance"));
  CHECK(rep.verdicts.at("parallel_verdict"));
  CHECK(rep.config.at("mode") == "invariance");
}

TEST_CASE("invariant tables agree between their two formats") {
  auto spec = make_family("clifford");
  auto rows = invariant_rows(spec, 5, 21);
  REQUIRE(rows.size() == 5);

  auto cols = InvariantRow::columns(2);
  REQUIRE(cols.size() == 12);
  CHECK(cols[0] == "sample");
  CHECK(cols[3] == "rho");
  CHECK(cols.back() == "gradA_norm");

  std::string csv = invariants_csv(rows, 2);
  auto header_end = csv.find('\n');
  std::string header = csv.substr(0, header_end);
  std::string want;
  for (size_t i = 0; i < cols.size(); ++i) want += (i ? "," : "") + cols[i];
  CHECK(header == want);

  auto lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 6);  // header + five samples

  // The JSON form carries the header once and the samples as flat rows in
  // column order, so slot 3 is rho for a surface.
  auto j = nlohmann::json::parse(invariants_json(rows, 2));
  REQUIRE(j.is_object());
  REQUIRE(j["columns"].get<std::vector<std::string>>() == cols);
  REQUIRE(j["rows"].size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    const auto& row = j["rows"][i];
    REQUIRE(row.is_array());
    REQUIRE(row.size() == cols.size());
    CHECK(row[0] == static_cast<int>(i));
    CHECK(std::abs(row[3].get<double>() - rows[i].rho) == 0.0);
    CHECK(std::abs(row[3].get<double>() - 2.0) < 1e-10);
  }
}

TEST_CASE("per-sample rows surface the umbilic failure point") {
  auto spec = make_family("small-sphere", {2, 0.6});
  CHECK_THROWS_AS(invariant_rows(spec, 3, 1), UmbilicError);
}
