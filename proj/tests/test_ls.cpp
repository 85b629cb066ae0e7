#include <cmath>

#include "doctest.h"

#include "moebius/errors.hpp"
#include "moebius/euclidean.hpp"
#include "moebius/ls.hpp"
#include "moebius/rng.hpp"

using namespace moebius;

namespace {

const std::array<int, 3> kOnes = {1, 1, 1};

std::array<Rational, 3> rat(long long a, long long b, long long c) {
  return {Rational(a), Rational(b), Rational(c)};
}

}  // namespace

TEST_CASE("eigenvalue triple for the rational pilot case") {
  auto lam = solve_lambda_exact(kOnes, rat(3, 1, 2));
  CHECK(lam[0] == Rational(-19, 108));
  CHECK(lam[1] == Rational(29, 108));
  CHECK(lam[2] == Rational(11, 108));

  auto lamf = solve_lambda(kOnes, {3.0, 1.0, 2.0});
  for (int a = 0; a < 3; ++a)
    CHECK(lamf[a] == doctest::Approx(lam[a].to_double()).epsilon(1e-15));
}

TEST_CASE("shape coefficients for the rational pilot case") {
  auto lam = solve_lambda_exact(kOnes, rat(3, 1, 2));
  auto b0 = solve_b0_exact(kOnes, lam);
  // (1, -5, 4) / sqrt(54)
  CHECK(b0.D == Rational(1, 54));
  CHECK(b0.t[0] == Rational(1));
  CHECK(b0.t[1] == Rational(-5));
  CHECK(b0.t[2] == Rational(4));
  CHECK(b0.sq[0] == Rational(1, 54));
  CHECK(b0.sq[1] == Rational(25, 54));
  CHECK(b0.sq[2] == Rational(16, 54));

  auto v = b0.value();
  double s54 = std::sqrt(54.0);
  CHECK(v[0] == doctest::Approx(1.0 / s54).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(-5.0 / s54).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(4.0 / s54).epsilon(1e-14));
}

TEST_CASE("pilot case closes every identity exactly") {
  auto rep = lemma31_check_exact(kOnes, rat(3, 1, 2));
  CHECK(rep.exact);
  CHECK(rep.names.size() == 12);
  for (const auto& name : rep.names) {
    INFO("identity ", name);
    REQUIRE(rep.exact_zero.count(name) == 1);
    CHECK(rep.exact_zero.at(name));
    CHECK(rep.residual.at(name) == 0.0);
  }
}

TEST_CASE("repeated-eigenvalue case keeps the sign convention") {
  auto lam = solve_lambda_exact(kOnes, rat(2, 1, 1));
  CHECK(lam[0] == Rational(-1, 4));
  CHECK(lam[1] == Rational(1, 4));
  CHECK(lam[2] == Rational(1, 4));

  auto b0 = solve_b0(kOnes, {-0.25, 0.25, 0.25});
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(b0[0]) < 1e-15);
  CHECK(b0[1] == doctest::Approx(inv_sqrt2).epsilon(1e-14));  // first nonzero positive
  CHECK(b0[2] == doctest::Approx(-inv_sqrt2).epsilon(1e-14));

  auto pred = predicted_invariants(LSParams{
      kOnes, {0, 0, 0}, {2.0, 1.0, 1.0}, {0, 0, 0}, {-0.25, 0.25, 0.25}, b0});
  CHECK_FALSE(pred.distinct);
}

TEST_CASE("identity residuals stay near machine precision across random draws") {
  Rng rng(424242);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<int, 3> m = {1 + int(rng.next() % 4), 1 + int(rng.next() % 4),
                            1 + int(rng.next() % 4)};
    double r2 = rng.uniform(0.3, 5.0), r3 = rng.uniform(0.3, 5.0);
    auto rep = lemma31_check(m, {r2 + r3, r2, r3});
    for (const auto& [name, resid] : rep.residual) worst = std::max(worst, resid);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("shape coefficients obey their defining relations") {
  Rng rng(9001);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<int, 3> m = {1 + int(rng.next() % 3), 1 + int(rng.next() % 3),
                            1 + int(rng.next() % 3)};
    double r2 = rng.uniform(0.5, 4.0), r3 = rng.uniform(0.5, 4.0);
    auto lam = solve_lambda(m, {r2 + r3, r2, r3});
    auto b0 = solve_b0(m, lam);

    double wsum = 0.0;
    for (int a = 0; a < 3; ++a) wsum += m[a] * b0[a];
    CHECK(std::abs(wsum) < 1e-12);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        CHECK(std::abs(b0[a] * b0[b] + lam[a] + lam[b]) < 1e-12);
    for (int a = 0; a < 3; ++a) {
      if (std::abs(b0[a]) > 1e-12) {
        CHECK(b0[a] > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("swapping the spherical slots swaps the outputs") {
  auto rep = lemma31_check(kOnes, {3.0, 1.0, 2.0});
  auto swp = lemma31_check(kOnes, {3.0, 2.0, 1.0});
  CHECK(swp.lambda[0] == doctest::Approx(rep.lambda[0]).epsilon(1e-14));
  CHECK(swp.lambda[1] == doctest::Approx(rep.lambda[2]).epsilon(1e-14));
  CHECK(swp.lambda[2] == doctest::Approx(rep.lambda[1]).epsilon(1e-14));
  // slot-1 coefficient stays positive here, so no global sign flip
  CHECK(swp.b0[0] == doctest::Approx(rep.b0[0]).epsilon(1e-13));
  CHECK(swp.b0[1] == doctest::Approx(rep.b0[2]).epsilon(1e-13));
  CHECK(swp.b0[2] == doctest::Approx(rep.b0[1]).epsilon(1e-13));
}

TEST_CASE("weights round-trip through the block curvatures") {
  auto rep = lemma31_check({2, 1, 3}, {3.5, 1.5, 2.0});
  LSParams params{{2, 1, 3}, {0, 0, 1}, {3.5, 1.5, 2.0},
                  {0.2, 0.3, 0.5},      rep.lambda,      rep.b0};
  auto scalars = required_block_scalars(params);
  auto mu = derive_mu(params, scalars);
  CHECK(mu[0] == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(mu[1] == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(mu[2] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("weight derivation failure modes") {
  auto rep = lemma31_check({2, 1, 3}, {3.5, 1.5, 2.0});
  LSParams params{{2, 1, 3}, {0, 0, 1}, {3.5, 1.5, 2.0},
                  {0.0, 0.0, 1.0},      rep.lambda,      rep.b0};
  auto good = required_block_scalars(params);

  auto off_total = good;
  off_total[0] += 0.5;
  CHECK_THROWS_AS(derive_mu(params, off_total), IncompatibleBlocksError);

  LSParams wild = params;
  wild.mu = {1.5, -0.5, 0.0};
  auto outside = required_block_scalars(wild);
  CHECK_THROWS_AS(derive_mu(params, outside), InfeasibleBlocksError);

  // rescale b0 so the curvature bracket sum m_a b0_a^2 - (m-1)/m vanishes
  LSParams degen = params;
  double q = 0.0;
  for (int a = 0; a < 3; ++a) q += degen.m[a] * degen.b0[a] * degen.b0[a];
  double target = (params.total_m() - 1.0) / params.total_m();
  double scale = std::sqrt(target / q);
  for (auto& v : degen.b0) v *= scale;
  CHECK_THROWS_AS(derive_mu(degen, good), IndeterminateMuError);
}

TEST_CASE("catalog blocks carry their advertised scalar curvature") {
  struct Probe {
    BlockSpec spec;
    ChartPoint u;
  };
  BlockSpec hyp{BlockKind::GeodesicHyperbolic, 1, 0.9, 2, 0, 1};
  BlockSpec sph{BlockKind::GeodesicSphere, 2, 1.3, 2, 0, 1};
  BlockSpec cli{BlockKind::CliffordTorus, 3, 1.7, 3, 1, 1};

  CHECK(hyp.scalar_curvature() == doctest::Approx(-2.0 / 0.81).epsilon(1e-14));
  CHECK(sph.scalar_curvature() == doctest::Approx(2.0 / 1.69).epsilon(1e-14));
  CHECK(cli.scalar_curvature() == doctest::Approx(3.0 / 2.89).epsilon(1e-14));

  for (const auto& pr : {Probe{hyp, {0.5, 0.5}}, Probe{sph, {0.4, 1.0}},
                         Probe{cli, {0.8, 0.7, 1.2}}}) {
    auto chart = block_chart(pr.spec);
    auto f = compute_euclidean_field(chart, pr.u, 4);
    auto c = induced_curvature(f.gE);
    CHECK(c.scalar ==
          doctest::Approx(pr.spec.scalar_curvature()).epsilon(1e-8));
  }

  // dimension-1 geodesic blocks are flat
  BlockSpec line{BlockKind::GeodesicSphere, 2, 2.0, 1, 0, 1};
  CHECK(line.scalar_curvature() == 0.0);
}

TEST_CASE("bad block requests are rejected") {
  CHECK_THROWS_AS(validate_block({BlockKind::CliffordTorus, 3, 1.0, 1, 1, 1}),
                  ConfigError);  // dimension too small
  CHECK_THROWS_AS(validate_block({BlockKind::CliffordTorus, 3, 1.0, 3, 0, 1}),
                  ConfigError);  // wrong codimension
  CHECK_THROWS_AS(validate_block({BlockKind::CliffordTorus, 3, 1.0, 3, 1, 3}),
                  ConfigError);  // split out of range
  CHECK_THROWS_AS(validate_block({BlockKind::GeodesicHyperbolic, 2, 1.0, 2, 0, 1}),
                  ConfigError);  // hyperbolic block outside slot 1
  CHECK_THROWS_AS(validate_block({BlockKind::GeodesicSphere, 1, 1.0, 2, 0, 1}),
                  ConfigError);  // slot 1 is hyperbolic
  CHECK_THROWS_AS(block_kind_from_name("moebius-strip"), ConfigError);
  CHECK(block_kind_from_name(block_kind_name(BlockKind::CliffordTorus)) ==
        BlockKind::CliffordTorus);
}

TEST_CASE("parameter validation catches tampering") {
  auto rep = lemma31_check(kOnes, {3.0, 1.0, 2.0});
  LSParams good{kOnes, {0, 0, 0}, {3.0, 1.0, 2.0}, {0, 0.5, 0.5}, rep.lambda, rep.b0};
  CHECK_NOTHROW(validate_params(good));

  LSParams bad_radius = good;
  bad_radius.r_sq = {3.5, 1.0, 2.0};
  CHECK_THROWS_AS(validate_params(bad_radius), ParameterError);

  LSParams bad_lambda = good;
  bad_lambda.lambda[1] += 1e-6;
  CHECK_THROWS_AS(validate_params(bad_lambda), ParameterError);

  LSParams bad_b0 = good;
  bad_b0.b0[0] = -bad_b0.b0[0];
  CHECK_THROWS_AS(validate_params(bad_b0), ParameterError);

  LSParams bad_mu = good;
  bad_mu.mu = {0.4, 0.4, 0.4};
  CHECK_THROWS_AS(validate_params(bad_mu), ParameterError);
}

TEST_CASE("parameters survive a JSON round trip") {
  auto rep = lemma31_check({1, 1, 3}, {10.0, 2.0, 8.0});
  LSParams p{{1, 1, 3}, {0, 0, 1}, {10.0, 2.0, 8.0}, {0, 0, 1}, rep.lambda, rep.b0};
  auto q = params_from_json(params_to_json(p));
  CHECK(q.m == p.m);
  CHECK(q.p == p.p);
  CHECK(q.convention == p.convention);
  for (int a = 0; a < 3; ++a) {
    CHECK(q.r_sq[a] == p.r_sq[a]);
    CHECK(q.mu[a] == p.mu[a]);
    CHECK(q.lambda[a] == p.lambda[a]);
    CHECK(q.b0[a] == p.b0[a]);
  }
}

TEST_CASE("parameter JSON rejects unknown and malformed keys") {
  CHECK_THROWS_WITH_AS(params_from_json(R"({"m":[1,1,1],"p":[0,0,0],)"
                                        R"("r_sq":[2,1,1],"bogus":1})"),
                       doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_AS(params_from_json(R"({"m":[1,1,1],"p":[0,0,0]})"), ConfigError);
  CHECK_THROWS_AS(params_from_json(R"({"m":[1,1],"p":[0,0,0],"r_sq":[2,1,1]})"),
                  ConfigError);
  CHECK_THROWS_AS(params_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(params_from_json("[1,2,3]"), ConfigError);
}

TEST_CASE("assembled product immersion lands on the unit sphere") {
  ScanOptions so;
  auto found = feasibility_scan({1, 1, 3}, {0, 0, 1},
                                {BlockKind::GeodesicHyperbolic,
                                 BlockKind::GeodesicSphere, BlockKind::CliffordTorus},
                                so);
  REQUIRE(found.size() == 1);
  const auto& params = found[0];
  auto blocks = make_blocks(params.m, params.p,
                            {BlockKind::GeodesicHyperbolic, BlockKind::GeodesicSphere,
                             BlockKind::CliffordTorus},
                            params.r_sq);
  auto ls = assemble_ls(blocks, params);

  CHECK(ls.spec.dim_intrinsic == 5);
  CHECK(ls.spec.dim_ambient == 8);  // S^{m+p} with m = 5, p = 2

  for (int s = 0; s < 20; ++s) {
    auto u = domain_sample(ls.spec, s, 31);
    auto x = chart_values(ls.spec, u);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    CHECK(std::abs(nrm - 1.0) < 1e-12);
    CHECK(ls.y0_value(u) > 0.0);
  }

  // the lift sits on the light cone and projects back to the chart
  auto u = domain_sample(ls.spec, 3, 31);
  auto tab = MultiIndexTable::get(ls.spec.dim_intrinsic, 2);
  JetVec vars;
  for (int i = 0; i < ls.spec.dim_intrinsic; ++i)
    vars.push_back(ScalarJet::variable(tab, i, u[i]));
  auto lift = ls.lift(vars);
  ScalarJet cone = inner(Signature::Lorentzian, lift, lift);
  CHECK(max_coeff_diff(cone, ScalarJet::constant(tab, 0.0)) < 1e-12);
  auto x = chart_values(ls.spec, u);
  for (size_t c = 0; c < x.size(); ++c)
    CHECK(std::abs(lift[c + 1].value() / lift[0].value() - x[c]) < 1e-12);
}

TEST_CASE("assembly rejects mismatched inputs") {
  auto rep = lemma31_check(kOnes, {3.0, 1.0, 2.0});
  LSParams params{kOnes, {0, 0, 0}, {3.0, 1.0, 2.0}, {0, 0.5, 0.5}, rep.lambda, rep.b0};
  auto blocks = make_blocks(kOnes, {0, 0, 0},
                            {BlockKind::GeodesicHyperbolic, BlockKind::GeodesicSphere,
                             BlockKind::GeodesicSphere},
                            {3.0, 1.0, 2.0});

  auto shuffled = blocks;
  std::swap(shuffled[1], shuffled[2]);
  CHECK_THROWS_AS(assemble_ls(shuffled, params), ConfigError);

  auto wrong_r = blocks;
  wrong_r[1].radius *= 2.0;
  CHECK_THROWS_AS(assemble_ls(wrong_r, params), ConfigError);

  // geodesic blocks force mu = 0 everywhere, clashing with the stored weights
  CHECK_THROWS_AS(assemble_ls(blocks, params), IncompatibleBlocksError);
}

TEST_CASE("feasibility scan finds the known torus-block root") {
  ScanOptions so;
  auto found = feasibility_scan({1, 1, 3}, {0, 0, 1},
                                {BlockKind::GeodesicHyperbolic,
                                 BlockKind::GeodesicSphere, BlockKind::CliffordTorus},
                                so);
  REQUIRE(found.size() == 1);
  const auto& p = found[0];
  CHECK(p.r_sq[1] == 2.0);
  CHECK(p.r_sq[2] == doctest::Approx(8.868051263561057).epsilon(1e-6));
  CHECK(p.r_sq[0] == doctest::Approx(p.r_sq[1] + p.r_sq[2]).epsilon(1e-12));
  CHECK(p.mu[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p.mu[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p.mu[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("feasibility scan reports an empty result honestly") {
  // all-geodesic blocks never satisfy the weight normalization
  ScanOptions so;
  auto found = feasibility_scan(kOnes, {0, 0, 0},
                                {BlockKind::GeodesicHyperbolic,
                                 BlockKind::GeodesicSphere, BlockKind::GeodesicSphere},
                                so);
  CHECK(found.empty());
}

TEST_CASE("scan options are validated") {
  auto kinds = std::array<BlockKind, 3>{BlockKind::GeodesicHyperbolic,
                                        BlockKind::GeodesicSphere,
                                        BlockKind::CliffordTorus};
  ScanOptions bad;
  bad.steps = 1;
  CHECK_THROWS_AS(feasibility_scan({1, 1, 3}, {0, 0, 1}, kinds, bad), ConfigError);
  ScanOptions inverted;
  inverted.lo = 5.0;
  inverted.hi = 1.0;
  CHECK_THROWS_AS(feasibility_scan({1, 1, 3}, {0, 0, 1}, kinds, inverted), ConfigError);
  ScanOptions negative;
  negative.r2_sq = -1.0;
  CHECK_THROWS_AS(feasibility_scan({1, 1, 3}, {0, 0, 1}, kinds, negative), ConfigError);
}
