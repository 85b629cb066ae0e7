#include "moebius/ls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"

#include "moebius/errors.hpp"
#include "moebius/linalg.hpp"
#include "moebius/multiindex.hpp"

namespace moebius {

namespace {

void check_dims(const std::array<int, 3>& m) {
  for (int v : m)
    if (v < 1) throw ParameterError("block dimensions must be at least 1");
}

void check_codims(const std::array<int, 3>& p) {
  for (int v : p)
    if (v < 0) throw ParameterError("block codimensions must be non-negative");
}

template <std::size_t N>
std::array<double, N> read_double_triple(const nlohmann::json& j, const std::string& key,
                                         bool required, std::array<double, N> fallback) {
  if (!j.contains(key)) {
    if (required) throw ConfigError("parameter JSON: missing key \"" + key + "\"");
    return fallback;
  }
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != N)
    throw ConfigError("parameter JSON: key \"" + key + "\" must be an array of " +
                      std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number())
      throw ConfigError("parameter JSON: key \"" + key + "\" must contain numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

std::array<int, 3> read_int_triple(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("parameter JSON: missing key \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3)
    throw ConfigError("parameter JSON: key \"" + key + "\" must be an array of 3 integers");
  std::array<int, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer())
      throw ConfigError("parameter JSON: key \"" + key + "\" must contain integers");
    out[i] = v[i].get<int>();
  }
  return out;
}

// Squares of the shape coefficients from the eigenvalue triple, cyclic in
// the slots.
template <class T>
std::array<T, 3> b0_squares(const std::array<int, 3>& m, const std::array<T, 3>& lam) {
  std::array<T, 3> sq;
  for (int a = 0; a < 3; ++a) {
    int b = (a + 1) % 3;
    int c = (a + 2) % 3;
    sq[a] = (T(m[b] + m[c]) * lam[a] + T(m[b]) * lam[b] + T(m[c]) * lam[c]) / T(m[a]);
  }
  return sq;
}

template <class T>
std::array<T, 3> lambda_rhs(const std::array<int, 3>& m, const std::array<T, 3>& r_sq) {
  return {-T(m[0]) / r_sq[0], T(m[1]) / r_sq[1], T(m[2]) / r_sq[2]};
}

template <class T>
std::array<T, 3> solve_lambda_core(const std::array<int, 3>& m,
                                   const std::array<T, 3>& r_sq) {
  int mt = m[0] + m[1] + m[2];
  std::vector<std::vector<T>> a(3, std::vector<T>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = T(m[j] + (i == j ? mt : 0));
  auto rhs = lambda_rhs(m, r_sq);
  std::vector<T> b = {rhs[0], rhs[1], rhs[2]};
  auto x = solve_linear(a, b);
  return {x[0], x[1], x[2]};
}

double baseline_scalar(int slot, int m_a, double r_sq) {
  double v = static_cast<double>(m_a) * (m_a - 1) / r_sq;
  return slot == 0 ? -v : v;
}

double catalog_scalar(BlockKind kind, int m_a, double r_sq) {
  switch (kind) {
    case BlockKind::GeodesicHyperbolic:
      return -static_cast<double>(m_a) * (m_a - 1) / r_sq;
    case BlockKind::GeodesicSphere:
      return static_cast<double>(m_a) * (m_a - 1) / r_sq;
    case BlockKind::CliffordTorus:
      return static_cast<double>(m_a) * (m_a - 2) / r_sq;
  }
  throw ConfigError("unknown block kind");
}

// Shared bracket in the weight system.
double mu_bracket(const std::array<int, 3>& m, const std::array<double, 3>& b0) {
  int mt = m[0] + m[1] + m[2];
  double q = -static_cast<double>(mt - 1) / mt;
  for (int a = 0; a < 3; ++a) q += m[a] * b0[a] * b0[a];
  return q;
}

const std::vector<std::string>& lemma31_names() {
  static const std::vector<std::string> names = {
      "eq_3_2_sum", "eq_3_5_1", "eq_3_5_2", "eq_3_5_3", "eq_3_6",    "eq_3_7",
      "eq_3_8",     "eq_3_9",   "eq_3_10",  "eq_3_11",  "eq_3_12_1", "eq_3_12_2"};
  return names;
}

}  // namespace

std::string params_to_json(const LSParams& params) {
  nlohmann::json j;
  j["m"] = params.m;
  j["p"] = params.p;
  j["r_sq"] = params.r_sq;
  j["mu"] = params.mu;
  j["lambda"] = params.lambda;
  j["b0"] = params.b0;
  j["convention"] = params.convention;
  return j.dump(2);
}

LSParams params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("parameter JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("parameter JSON: expected an object");
  static const std::set<std::string> known = {"m",      "p",  "r_sq",      "mu",
                                              "lambda", "b0", "convention"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("parameter JSON: unknown key \"" + it.key() + "\"");

  LSParams out;
  out.m = read_int_triple(j, "m");
  out.p = read_int_triple(j, "p");
  out.r_sq = read_double_triple<3>(j, "r_sq", true, {});
  out.mu = read_double_triple<3>(j, "mu", false, out.mu);
  out.lambda = read_double_triple<3>(j, "lambda", false, out.lambda);
  out.b0 = read_double_triple<3>(j, "b0", false, out.b0);
  if (j.contains("convention")) {
    if (!j.at("convention").is_string())
      throw ConfigError("parameter JSON: key \"convention\" must be a string");
    out.convention = j.at("convention").get<std::string>();
  }
  check_dims(out.m);
  check_codims(out.p);
  return out;
}

void require_radius_relation(const std::array<double, 3>& r_sq) {
  for (double v : r_sq)
    if (!(v > 0.0)) throw ParameterError("squared radii must be positive");
  double resid = std::fabs(r_sq[0] - r_sq[1] - r_sq[2]);
  if (resid > 1e-12 * (1.0 + std::fabs(r_sq[0])))
    throw ParameterError("radius constraint r1^2 = r2^2 + r3^2 violated");
}

std::array<double, 3> solve_lambda(const std::array<int, 3>& m,
                                   const std::array<double, 3>& r_sq) {
  check_dims(m);
  require_radius_relation(r_sq);
  return solve_lambda_core(m, r_sq);
}

std::array<Rational, 3> solve_lambda_exact(const std::array<int, 3>& m,
                                           const std::array<Rational, 3>& r_sq) {
  check_dims(m);
  std::array<double, 3> rd = {r_sq[0].to_double(), r_sq[1].to_double(),
                              r_sq[2].to_double()};
  require_radius_relation(rd);
  if (r_sq[0] != r_sq[1] + r_sq[2])
    throw NumericError("exact path needs the radius constraint to hold exactly");
  return solve_lambda_core(m, r_sq);
}

std::array<double, 3> solve_b0(const std::array<int, 3>& m,
                               const std::array<double, 3>& lambda) {
  check_dims(m);
  auto sq = b0_squares(m, lambda);
  double scale = 0.0;
  for (int a = 0; a < 3; ++a) scale = std::max(scale, std::fabs(sq[a]));
  double band = 1e-12 * (1.0 + scale);
  for (int a = 0; a < 3; ++a)
    if (sq[a] < -band)
      throw InfeasibleError("negative square for a shape coefficient");

  // Pivot on the largest square: a near-cancelled square would poison the
  // other slots through the division below. The sign convention (first
  // nonzero entry positive) is restored afterwards by a global flip.
  int f = -1;
  for (int a = 0; a < 3; ++a)
    if (sq[a] > band && (f < 0 || sq[a] > sq[f])) f = a;

  std::array<double, 3> b0{0.0, 0.0, 0.0};
  if (f >= 0) {
    b0[f] = std::sqrt(sq[f]);
    for (int a = 0; a < 3; ++a)
      if (a != f) b0[a] = -(lambda[f] + lambda[a]) / b0[f];
    for (int a = 0; a < 3; ++a) {
      if (sq[a] <= band) continue;
      if (b0[a] < 0.0)
        for (auto& v : b0) v = -v;
      break;
    }
  }

  double lam_scale = 0.0;
  for (int a = 0; a < 3; ++a) lam_scale = std::max(lam_scale, std::fabs(lambda[a]));
  double tol = 1e-10 * (1.0 + scale + lam_scale);
  double worst = 0.0;
  double msum = 0.0;
  for (int a = 0; a < 3; ++a) {
    msum += m[a] * b0[a];
    worst = std::max(worst, std::fabs(b0[a] * b0[a] - sq[a]));
  }
  worst = std::max(worst, std::fabs(msum));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      worst = std::max(worst, std::fabs(b0[a] * b0[b] + lambda[a] + lambda[b]));
  if (worst > tol)
    throw ConsistencyError("shape coefficient signs inconsistent with the pair products");
  return b0;
}

std::array<double, 3> B0Exact::value() const {
  double rd = std::sqrt(D.to_double());
  return {t[0].to_double() * rd, t[1].to_double() * rd, t[2].to_double() * rd};
}

B0Exact solve_b0_exact(const std::array<int, 3>& m,
                       const std::array<Rational, 3>& lambda) {
  check_dims(m);
  B0Exact out;
  out.sq = b0_squares(m, lambda);
  for (int a = 0; a < 3; ++a)
    if (out.sq[a].is_negative())
      throw InfeasibleError("negative square for a shape coefficient");

  int f = -1;
  for (int a = 0; a < 3 && f < 0; ++a)
    if (!out.sq[a].is_zero()) f = a;

  if (f < 0) {
    out.D = Rational(0);
    out.t = {Rational(0), Rational(0), Rational(0)};
    return out;
  }
  out.D = out.sq[f];
  out.t[f] = Rational(1);
  for (int a = 0; a < 3; ++a)
    if (a != f) out.t[a] = -(lambda[f] + lambda[a]) / out.D;

  for (int a = 0; a < 3; ++a)
    if (out.t[a] * out.t[a] * out.D != out.sq[a])
      throw ConsistencyError("shape coefficient squares inconsistent");
  Rational msum = Rational(m[0]) * out.t[0] + Rational(m[1]) * out.t[1] +
                  Rational(m[2]) * out.t[2];
  if (!msum.is_zero())
    throw ConsistencyError("weighted shape coefficient sum must vanish");
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (out.t[a] * out.t[b] * out.D != -(lambda[a] + lambda[b]))
        throw ConsistencyError("shape coefficient signs inconsistent with the pair products");
  return out;
}

Lemma31Report lemma31_check(const std::array<int, 3>& m,
                            const std::array<double, 3>& r_sq) {
  check_dims(m);
  require_radius_relation(r_sq);
  Lemma31Report rep;
  rep.names = lemma31_names();
  rep.lambda = solve_lambda(m, r_sq);
  rep.b0 = solve_b0(m, rep.lambda);

  const auto& lam = rep.lambda;
  const auto& b0 = rep.b0;
  int mt = m[0] + m[1] + m[2];
  std::array<double, 3> sq = {b0[0] * b0[0], b0[1] * b0[1], b0[2] * b0[2]};
  std::array<double, 3> inv = {1.0 / r_sq[0], 1.0 / r_sq[1], 1.0 / r_sq[2]};
  double sum_mlam = m[0] * lam[0] + m[1] * lam[1] + m[2] * lam[2];

  rep.residual["eq_3_2_sum"] = std::fabs(m[0] * b0[0] + m[1] * b0[1] + m[2] * b0[2]);
  rep.residual["eq_3_5_1"] = std::fabs(2.0 * lam[0] + sq[0] + inv[0]);
  rep.residual["eq_3_5_2"] = std::fabs(2.0 * lam[1] + sq[1] - inv[1]);
  rep.residual["eq_3_5_3"] = std::fabs(2.0 * lam[2] + sq[2] - inv[2]);
  rep.residual["eq_3_6"] =
      std::fabs(-(m[0] - 1) * inv[0] + sq[0] - ((mt - 2) * lam[0] + sum_mlam));
  rep.residual["eq_3_7"] =
      std::fabs((m[1] - 1) * inv[1] + sq[1] - ((mt - 2) * lam[1] + sum_mlam));
  rep.residual["eq_3_8"] =
      std::fabs((m[2] - 1) * inv[2] + sq[2] - ((mt - 2) * lam[2] + sum_mlam));
  double lhs9 = -m[0] * (m[0] - 1) * inv[0] + m[1] * (m[1] - 1) * inv[1] +
                m[2] * (m[2] - 1) * inv[2];
  double rhs9 = 0.0;
  for (int a = 0; a < 3; ++a) rhs9 += (2.0 * m[a] * (mt - 1) - (mt + m[a])) * lam[a];
  rep.residual["eq_3_9"] = std::fabs(lhs9 - rhs9);
  double lhs10 = m[0] * sq[0] + m[1] * sq[1] + m[2] * sq[2];
  double rhs10 = 0.0;
  for (int a = 0; a < 3; ++a) rhs10 += (mt + m[a]) * lam[a];
  rep.residual["eq_3_10"] = std::fabs(lhs10 - rhs10);
  rep.residual["eq_3_11"] =
      std::fabs(-r_sq[0] * b0[0] + r_sq[1] * b0[1] + r_sq[2] * b0[2]);
  double mid12 = -lam[0] * r_sq[0] + lam[1] * r_sq[1] + lam[2] * r_sq[2];
  rep.residual["eq_3_12_1"] =
      std::fabs(-r_sq[0] * sq[0] + r_sq[1] * sq[1] + r_sq[2] * sq[2] - mid12);
  rep.residual["eq_3_12_2"] = std::fabs(mid12 - 1.0);
  return rep;
}

Lemma31Report lemma31_check_exact(const std::array<int, 3>& m,
                                  const std::array<Rational, 3>& r_sq) {
  check_dims(m);
  try {
    auto lam = solve_lambda_exact(m, r_sq);
    B0Exact b0e = solve_b0_exact(m, lam);

    Lemma31Report rep;
    rep.names = lemma31_names();
    rep.exact = true;
    for (int a = 0; a < 3; ++a) rep.lambda[a] = lam[a].to_double();
    rep.b0 = b0e.value();

    int mt = m[0] + m[1] + m[2];
    std::array<Rational, 3> inv = {Rational(1) / r_sq[0], Rational(1) / r_sq[1],
                                   Rational(1) / r_sq[2]};
    const auto& sq = b0e.sq;
    Rational sum_mlam =
        Rational(m[0]) * lam[0] + Rational(m[1]) * lam[1] + Rational(m[2]) * lam[2];

    // Radical-free residuals as exact fractions; the two radical ones keep
    // only the coefficient of sqrt(D).
    double rad = std::sqrt(b0e.D.to_double());
    auto put_rat = [&rep](const std::string& name, const Rational& v) {
      rep.exact_zero[name] = v.is_zero();
      rep.residual[name] = std::fabs(v.to_double());
    };
    auto put_radical = [&rep, rad](const std::string& name, const Rational& coef) {
      rep.exact_zero[name] = coef.is_zero();
      rep.residual[name] = std::fabs(coef.to_double()) * rad;
    };

    put_radical("eq_3_2_sum", Rational(m[0]) * b0e.t[0] + Rational(m[1]) * b0e.t[1] +
                                  Rational(m[2]) * b0e.t[2]);
    put_rat("eq_3_5_1", Rational(2) * lam[0] + sq[0] + inv[0]);
    put_rat("eq_3_5_2", Rational(2) * lam[1] + sq[1] - inv[1]);
    put_rat("eq_3_5_3", Rational(2) * lam[2] + sq[2] - inv[2]);
    put_rat("eq_3_6", -Rational(m[0] - 1) * inv[0] + sq[0] -
                          (Rational(mt - 2) * lam[0] + sum_mlam));
    put_rat("eq_3_7", Rational(m[1] - 1) * inv[1] + sq[1] -
                          (Rational(mt - 2) * lam[1] + sum_mlam));
    put_rat("eq_3_8", Rational(m[2] - 1) * inv[2] + sq[2] -
                          (Rational(mt - 2) * lam[2] + sum_mlam));
    Rational lhs9 = -Rational(m[0] * (m[0] - 1)) * inv[0] +
                    Rational(m[1] * (m[1] - 1)) * inv[1] +
                    Rational(m[2] * (m[2] - 1)) * inv[2];
    Rational rhs9(0);
    for (int a = 0; a < 3; ++a)
      rhs9 += Rational(2 * m[a] * (mt - 1) - (mt + m[a])) * lam[a];
    put_rat("eq_3_9", lhs9 - rhs9);
    Rational lhs10 =
        Rational(m[0]) * sq[0] + Rational(m[1]) * sq[1] + Rational(m[2]) * sq[2];
    Rational rhs10(0);
    for (int a = 0; a < 3; ++a) rhs10 += Rational(mt + m[a]) * lam[a];
    put_rat("eq_3_10", lhs10 - rhs10);
    put_radical("eq_3_11",
                -r_sq[0] * b0e.t[0] + r_sq[1] * b0e.t[1] + r_sq[2] * b0e.t[2]);
    Rational mid12 = -lam[0] * r_sq[0] + lam[1] * r_sq[1] + lam[2] * r_sq[2];
    put_rat("eq_3_12_1",
            -r_sq[0] * sq[0] + r_sq[1] * sq[1] + r_sq[2] * sq[2] - mid12);
    put_rat("eq_3_12_2", mid12 - Rational(1));
    return rep;
  } catch (const NumericError&) {
    // overflow or an inexact radius relation: floating-point fallback
    std::array<double, 3> rd = {r_sq[0].to_double(), r_sq[1].to_double(),
                                r_sq[2].to_double()};
    return lemma31_check(m, rd);
  }
}

std::array<double, 3> derive_mu(const LSParams& params,
                                const std::array<double, 3>& block_scalars) {
  check_dims(params.m);
  require_radius_relation(params.r_sq);
  int mt = params.total_m();
  double q = mu_bracket(params.m, params.b0);
  double scale = static_cast<double>(mt - 1) / mt;
  for (int a = 0; a < 3; ++a)
    scale += params.m[a] * params.b0[a] * params.b0[a];
  if (std::fabs(q) <= 1e-12 * scale)
    throw IndeterminateMuError("curvature bracket vanishes; weights are undetermined");

  std::array<double, 3> mu;
  for (int a = 0; a < 3; ++a)
    mu[a] = (block_scalars[a] - baseline_scalar(a, params.m[a], params.r_sq[a])) / q;
  double sum = mu[0] + mu[1] + mu[2];
  if (std::fabs(sum - 1.0) > 1e-8)
    throw IncompatibleBlocksError(
        "block scalar curvatures are incompatible: weight total " +
        std::to_string(sum) + " instead of 1");
  for (int a = 0; a < 3; ++a)
    if (mu[a] < -1e-10 || mu[a] > 1.0 + 1e-10)
      throw InfeasibleBlocksError("weight " + std::to_string(mu[a]) +
                                  " for slot " + std::to_string(a + 1) +
                                  " outside [0, 1]");
  // + 0.0 turns a clamped -0.0 into +0.0 so serialized weights never
  // carry a negative sign
  for (int a = 0; a < 3; ++a) mu[a] = std::clamp(mu[a], 0.0, 1.0) + 0.0;
  return mu;
}

std::array<double, 3> required_block_scalars(const LSParams& params) {
  check_dims(params.m);
  double q = mu_bracket(params.m, params.b0);
  std::array<double, 3> out;
  for (int a = 0; a < 3; ++a)
    out[a] = baseline_scalar(a, params.m[a], params.r_sq[a]) + params.mu[a] * q;
  return out;
}

std::string block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::GeodesicHyperbolic:
      return "geodesic-hyperbolic";
    case BlockKind::GeodesicSphere:
      return "geodesic-sphere";
    case BlockKind::CliffordTorus:
      return "clifford";
  }
  throw ConfigError("unknown block kind");
}

BlockKind block_kind_from_name(const std::string& name) {
  if (name == "geodesic-hyperbolic") return BlockKind::GeodesicHyperbolic;
  if (name == "geodesic-sphere") return BlockKind::GeodesicSphere;
  if (name == "clifford") return BlockKind::CliffordTorus;
  throw ConfigError("unknown block kind \"" + name +
                    "\" (expected geodesic-hyperbolic, geodesic-sphere, or clifford)");
}

double BlockSpec::scalar_curvature() const {
  return catalog_scalar(kind, m_a, radius * radius);
}

void validate_block(const BlockSpec& b) {
  if (b.m_a < 1) throw ConfigError("block dimension must be at least 1");
  if (b.p_a < 0) throw ConfigError("block codimension must be non-negative");
  if (!(b.radius > 0.0)) throw ConfigError("block radius must be positive");
  if (b.slot < 1 || b.slot > 3) throw ConfigError("block slot must be 1, 2, or 3");
  if (b.slot == 1) {
    if (b.kind != BlockKind::GeodesicHyperbolic)
      throw ConfigError("slot 1 takes the hyperbolic block");
  } else if (b.kind == BlockKind::GeodesicHyperbolic) {
    throw ConfigError("the hyperbolic block only fits slot 1");
  }
  if (b.kind == BlockKind::CliffordTorus) {
    if (b.p_a != 1) throw ConfigError("the product-torus block has codimension 1");
    if (b.m_a < 2) throw ConfigError("the product-torus block needs dimension >= 2");
    if (b.k < 1 || b.k > b.m_a - 1)
      throw ConfigError("product-torus split must lie strictly between 0 and the dimension");
  }
}

ImmersionSpec block_chart(const BlockSpec& b) {
  validate_block(b);
  if (b.kind == BlockKind::CliffordTorus)
    return make_family("clifford-general",
                       {static_cast<double>(b.k), static_cast<double>(b.m_a), b.radius});

  ImmersionSpec spec;
  spec.dim_intrinsic = b.m_a;
  spec.dim_ambient = b.m_a + b.p_a + 1;
  double r = b.radius;
  int pads = b.p_a;
  if (b.kind == BlockKind::GeodesicHyperbolic) {
    spec.family = "ls-block-hyperbolic";
    spec.ambient = Ambient::Hyperbolic;
    spec.ambient_radius = r;
    spec.domain = hyperboloid_chart_domain(b.m_a);
    spec.chart = [r, pads](const JetVec& v) {
      JetVec core = unit_hyperboloid_chart(v);
      JetVec out;
      out.reserve(core.size() + pads);
      for (const auto& c : core) out.push_back(c * r);
      for (int i = 0; i < pads; ++i)
        out.push_back(ScalarJet::constant(v[0].table(), 0.0));
      return out;
    };
  } else {
    spec.family = "ls-block-sphere";
    spec.ambient = Ambient::Sphere;
    spec.ambient_radius = r;
    spec.domain = sphere_chart_domain(b.m_a);
    spec.chart = [r, pads](const JetVec& v) {
      JetVec core = unit_sphere_chart(v);
      JetVec out;
      out.reserve(core.size() + pads);
      for (const auto& c : core) out.push_back(c * r);
      for (int i = 0; i < pads; ++i)
        out.push_back(ScalarJet::constant(v[0].table(), 0.0));
      return out;
    };
  }
  return spec;
}

std::array<BlockSpec, 3> make_blocks(const std::array<int, 3>& m,
                                     const std::array<int, 3>& p,
                                     const std::array<BlockKind, 3>& kinds,
                                     const std::array<double, 3>& r_sq,
                                     int clifford_k) {
  check_dims(m);
  check_codims(p);
  std::array<BlockSpec, 3> out;
  for (int a = 0; a < 3; ++a) {
    if (!(r_sq[a] > 0.0)) throw ConfigError("squared radii must be positive");
    out[a].kind = kinds[a];
    out[a].slot = a + 1;
    out[a].radius = std::sqrt(r_sq[a]);
    out[a].m_a = m[a];
    out[a].p_a = p[a];
    out[a].k = kinds[a] == BlockKind::CliffordTorus ? clifford_k : 1;
    validate_block(out[a]);
  }
  return out;
}

void validate_params(const LSParams& params) {
  check_dims(params.m);
  check_codims(params.p);
  require_radius_relation(params.r_sq);

  double musum = params.mu[0] + params.mu[1] + params.mu[2];
  if (std::fabs(musum - 1.0) > 1e-8)
    throw ParameterError("weights must sum to one");
  for (double v : params.mu)
    if (v < -1e-10 || v > 1.0 + 1e-10)
      throw ParameterError("weights must lie in [0, 1]");

  auto rhs = lambda_rhs(params.m, params.r_sq);
  int mt = params.total_m();
  double rhs_scale = 0.0;
  for (int i = 0; i < 3; ++i) rhs_scale = std::max(rhs_scale, std::fabs(rhs[i]));
  for (int i = 0; i < 3; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < 3; ++j)
      lhs += (params.m[j] + (i == j ? mt : 0)) * params.lambda[j];
    if (std::fabs(lhs - rhs[i]) > 1e-12 * (1.0 + rhs_scale))
      throw ParameterError("eigenvalues do not satisfy the defining linear system");
  }

  auto sq = b0_squares(params.m, params.lambda);
  double scale = 0.0;
  for (int a = 0; a < 3; ++a) scale = std::max(scale, std::fabs(sq[a]));
  double tol = 1e-10 * (1.0 + scale);
  double worst = std::fabs(params.m[0] * params.b0[0] + params.m[1] * params.b0[1] +
                           params.m[2] * params.b0[2]);
  for (int a = 0; a < 3; ++a)
    worst = std::max(worst, std::fabs(params.b0[a] * params.b0[a] - sq[a]));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      worst = std::max(worst, std::fabs(params.b0[a] * params.b0[b] +
                                        params.lambda[a] + params.lambda[b]));
  if (worst > tol)
    throw ParameterError("shape coefficients do not match the eigenvalue triple");
}

double LSImmersion::y0_value(const ChartPoint& u) const {
  if (static_cast<int>(u.size()) != spec.dim_intrinsic)
    throw ConfigError("point dimension mismatch");
  auto tab = MultiIndexTable::get(spec.dim_intrinsic, 1);
  JetVec vars;
  vars.reserve(u.size());
  for (size_t i = 0; i < u.size(); ++i)
    vars.push_back(ScalarJet::variable(tab, static_cast<int>(i), u[i]));
  return lift(vars)[0].value();
}

LSImmersion assemble_ls(const std::array<BlockSpec, 3>& blocks, const LSParams& params) {
  validate_params(params);
  for (int a = 0; a < 3; ++a) {
    validate_block(blocks[a]);
    if (blocks[a].slot != a + 1)
      throw ConfigError("blocks must be listed in slot order");
    if (blocks[a].m_a != params.m[a] || blocks[a].p_a != params.p[a])
      throw ConfigError("block dimensions disagree with the parameter triple");
    double rsq = blocks[a].radius * blocks[a].radius;
    if (std::fabs(rsq - params.r_sq[a]) > 1e-12 * (1.0 + params.r_sq[a]))
      throw ConfigError("block radius disagrees with the parameter triple");
  }

  std::array<double, 3> scal = {blocks[0].scalar_curvature(),
                                blocks[1].scalar_curvature(),
                                blocks[2].scalar_curvature()};
  auto mu = derive_mu(params, scal);
  for (int a = 0; a < 3; ++a)
    if (std::fabs(mu[a] - params.mu[a]) > 1e-6)
      throw IncompatibleBlocksError("stored weights disagree with the block curvatures");

  std::array<ImmersionSpec, 3> bc = {block_chart(blocks[0]), block_chart(blocks[1]),
                                     block_chart(blocks[2])};
  for (int a = 0; a < 3; ++a) {
    ChartPoint mid(bc[a].domain.size());
    for (size_t i = 0; i < mid.size(); ++i)
      mid[i] = 0.5 * (bc[a].domain[i].first + bc[a].domain[i].second);
    auto vals = chart_values(bc[a], mid);
    double q = inner(bc[a].signature(), vals, vals);
    double want = (a == 0 ? -1.0 : 1.0) * blocks[a].radius * blocks[a].radius;
    if (std::fabs(q - want) > 1e-8 * (1.0 + std::fabs(want)))
      throw DomainError("block chart leaves its model space");
  }

  LSImmersion out;
  out.params = params;
  out.blocks = blocks;

  int m1 = params.m[0], m2 = params.m[1], m3 = params.m[2];
  auto c1 = bc[0].chart;
  auto c2 = bc[1].chart;
  auto c3 = bc[2].chart;
  out.lift = [c1, c2, c3, m1, m2, m3](const JetVec& v) {
    if (static_cast<int>(v.size()) != m1 + m2 + m3)
      throw ConfigError("variable count mismatch in the product chart");
    JetVec v1(v.begin(), v.begin() + m1);
    JetVec v2(v.begin() + m1, v.begin() + m1 + m2);
    JetVec v3(v.begin() + m1 + m2, v.end());
    JetVec y1 = c1(v1);
    JetVec y2 = c2(v2);
    JetVec y3 = c3(v3);
    JetVec y;
    y.reserve(y1.size() + y2.size() + y3.size());
    for (auto& c : y1) y.push_back(std::move(c));
    for (auto& c : y2) y.push_back(std::move(c));
    for (auto& c : y3) y.push_back(std::move(c));
    return y;
  };

  ImmersionSpec spec;
  spec.family = "ls-product";
  spec.ambient = Ambient::Sphere;
  spec.ambient_radius = 1.0;
  spec.dim_intrinsic = params.total_m();
  spec.dim_ambient = bc[0].dim_ambient + bc[1].dim_ambient + bc[2].dim_ambient - 1;
  if (spec.dim_ambient != params.total_m() + params.total_p() + 1)
    throw ConfigError("assembled ambient dimension mismatch");
  spec.domain = bc[0].domain;
  spec.domain.insert(spec.domain.end(), bc[1].domain.begin(), bc[1].domain.end());
  spec.domain.insert(spec.domain.end(), bc[2].domain.begin(), bc[2].domain.end());
  auto lift = out.lift;
  spec.chart = [lift](const JetVec& v) {
    JetVec y = lift(v);
    ScalarJet inv = 1.0 / y[0];
    JetVec x;
    x.reserve(y.size() - 1);
    for (size_t i = 1; i < y.size(); ++i) x.push_back(y[i] * inv);
    return x;
  };
  out.spec = spec;
  return out;
}

PredictedInvariants predicted_invariants(const LSParams& params) {
  check_dims(params.m);
  PredictedInvariants out;
  out.eigenvalues = params.lambda;
  out.multiplicities = params.m;
  out.trA = params.m[0] * params.lambda[0] + params.m[1] * params.lambda[1] +
            params.m[2] * params.lambda[2];
  out.b0 = params.b0;
  out.weighted_b0_sq = 0.0;
  for (int a = 0; a < 3; ++a)
    out.weighted_b0_sq += params.m[a] * params.b0[a] * params.b0[a];
  double l = params.m[2] * params.r_sq[1];
  double r = params.m[1] * params.r_sq[2];
  out.distinct = std::fabs(l - r) > 1e-9 * (1.0 + std::fabs(l) + std::fabs(r));
  return out;
}

std::vector<LSParams> feasibility_scan(const std::array<int, 3>& m,
                                       const std::array<int, 3>& p,
                                       const std::array<BlockKind, 3>& kinds,
                                       const ScanOptions& opt) {
  check_dims(m);
  check_codims(p);
  if (opt.steps < 2) throw ConfigError("scan needs at least 2 steps");
  if (!(opt.lo > 0.0) || !(opt.hi > opt.lo))
    throw ConfigError("scan range must satisfy 0 < lo < hi");
  if (!(opt.r2_sq > 0.0)) throw ConfigError("pinned slot-2 radius must be positive");
  // radius-independent block validation up front, so bad kind/slot combos
  // fail loudly instead of yielding an empty scan
  make_blocks(m, p, kinds, {opt.r2_sq + opt.lo, opt.r2_sq, opt.lo}, opt.clifford_k);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  int mt = m[0] + m[1] + m[2];

  auto defect = [&](double r3sq) -> double {
    double r1sq = opt.r2_sq + r3sq;
    std::array<double, 3> rsq = {r1sq, opt.r2_sq, r3sq};
    std::array<double, 3> lam, b0;
    try {
      lam = solve_lambda(m, rsq);
      b0 = solve_b0(m, lam);
    } catch (const Error&) {
      return nan;
    }
    double q = mu_bracket(m, b0);
    double scale = static_cast<double>(mt - 1) / mt;
    for (int a = 0; a < 3; ++a) scale += m[a] * b0[a] * b0[a];
    if (std::fabs(q) <= 1e-12 * scale) return nan;
    double sum = 0.0;
    for (int a = 0; a < 3; ++a)
      sum += (catalog_scalar(kinds[a], m[a], rsq[a]) -
              baseline_scalar(a, m[a], rsq[a])) /
             q;
    return sum - 1.0;
  };

  std::vector<LSParams> found;
  double last_root = nan;
  auto accept = [&](double r3sq) {
    if (!std::isnan(last_root) &&
        std::fabs(r3sq - last_root) <= 1e-8 * (1.0 + r3sq))
      return;
    double r1sq = opt.r2_sq + r3sq;
    std::array<double, 3> rsq = {r1sq, opt.r2_sq, r3sq};
    LSParams cand;
    cand.m = m;
    cand.p = p;
    cand.r_sq = rsq;
    try {
      cand.lambda = solve_lambda(m, rsq);
      cand.b0 = solve_b0(m, cand.lambda);
      auto blocks = make_blocks(m, p, kinds, rsq, opt.clifford_k);
      std::array<double, 3> scal = {blocks[0].scalar_curvature(),
                                    blocks[1].scalar_curvature(),
                                    blocks[2].scalar_curvature()};
      cand.mu = derive_mu(cand, scal);
    } catch (const Error&) {
      return;  // a bisection artifact (pole or infeasible edge), not a root
    }
    if (opt.distinct_only && !predicted_invariants(cand).distinct) return;
    found.push_back(cand);
    last_root = r3sq;
  };

  double step = (opt.hi - opt.lo) / opt.steps;
  double x0 = opt.lo;
  double f0 = defect(x0);
  for (int i = 1; i <= opt.steps; ++i) {
    double x1 = opt.lo + i * step;
    double f1 = defect(x1);
    if (!std::isnan(f0)) {
      if (f0 == 0.0) {
        accept(x0);
      } else if (!std::isnan(f1) && f0 * f1 < 0.0) {
        double a = x0, b = x1, fa = f0;
        bool ok = true;
        while (b - a > 1e-10) {
          double mid = 0.5 * (a + b);
          double fm = defect(mid);
          if (std::isnan(fm)) {
            ok = false;
            break;
          }
          if (fa * fm <= 0.0) {
            b = mid;
          } else {
            a = mid;
            fa = fm;
          }
        }
        if (ok) accept(0.5 * (a + b));
      }
    }
    x0 = x1;
    f0 = f1;
  }
  return found;
}

}  // namespace moebius
