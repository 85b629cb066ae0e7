#include "moebius/cli_app.hpp"

#include <array>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "moebius/errors.hpp"
#include "moebius/euclidean.hpp"
#include "moebius/families.hpp"
#include "moebius/ls.hpp"
#include "moebius/rational.hpp"
#include "moebius/verify.hpp"

namespace moebius {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(what + ": bad number \"" + s + "\"");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(what + ": bad integer \"" + s + "\"");
  }
}

std::array<int, 3> parse_int_triple(const std::string& s, const std::string& what) {
  auto parts = split(s, ',');
  if (parts.size() != 3)
    throw ConfigError(what + ": expected three comma-separated integers");
  return {parse_int(parts[0], what), parse_int(parts[1], what),
          parse_int(parts[2], what)};
}

std::array<double, 3> parse_double_triple(const std::string& s, const std::string& what) {
  auto parts = split(s, ',');
  if (parts.size() != 3)
    throw ConfigError(what + ": expected three comma-separated numbers");
  return {parse_double(parts[0], what), parse_double(parts[1], what),
          parse_double(parts[2], what)};
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  if (s.empty()) return {};
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part, what));
  return out;
}

std::array<BlockKind, 3> parse_kinds(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 3)
    throw ConfigError("--blocks: expected three comma-separated block kinds");
  return {block_kind_from_name(parts[0]), block_kind_from_name(parts[1]),
          block_kind_from_name(parts[2])};
}

std::map<std::string, double> parse_tol_overrides(const std::string& s) {
  std::map<std::string, double> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--tol-override: expected name=value, got \"" + part + "\"");
    out[part.substr(0, eq)] = parse_double(part.substr(eq + 1), "--tol-override");
  }
  return out;
}

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  return j;
}

void from_cfg(const nlohmann::json& v, const std::string& key, std::string& out) {
  if (!v.is_string())
    throw ConfigError("config: key \"" + key + "\" must be a string");
  out = v.get<std::string>();
}

void from_cfg(const nlohmann::json& v, const std::string& key, int& out) {
  if (!v.is_number_integer())
    throw ConfigError("config: key \"" + key + "\" must be an integer");
  out = v.get<int>();
}

void from_cfg(const nlohmann::json& v, const std::string& key, uint64_t& out) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
    throw ConfigError("config: key \"" + key + "\" must be a non-negative integer");
  out = v.get<uint64_t>();
}

void from_cfg(const nlohmann::json& v, const std::string& key, double& out) {
  if (!v.is_number())
    throw ConfigError("config: key \"" + key + "\" must be a number");
  out = v.get<double>();
}

void from_cfg(const nlohmann::json& v, const std::string& key, bool& out) {
  if (!v.is_boolean())
    throw ConfigError("config: key \"" + key + "\" must be a boolean");
  out = v.get<bool>();
}

// Flags win over the config file; config entries fill whatever was not given
// on the command line. finish() rejects config keys no option claimed.
struct Resolver {
  const nlohmann::json& cfg;
  std::set<std::string> used;

  template <class T>
  void apply(const CLI::Option* opt, const std::string& key, T& var) {
    used.insert(key);
    if (opt->count() > 0) return;
    if (!cfg.contains(key)) return;
    from_cfg(cfg.at(key), key, var);
  }

  void require(const CLI::Option* opt, const std::string& flag,
               const std::string& value) const {
    if (opt->count() == 0 && value.empty())
      throw ConfigError("missing " + flag + " (no flag and no config entry)");
  }

  void finish(const std::string& cmd) const {
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
      if (!used.count(it.key()))
        throw ConfigError("config: unknown key \"" + it.key() + "\" for " + cmd);
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write \"" + path + "\"");
  f << text;
}

VerifyOptions build_options(int order, int threads, const std::string& overrides) {
  if (order < 1 || order > 12)
    throw ConfigError("--order must lie between 1 and 12");
  if (threads < 1) throw ConfigError("--threads must be positive");
  VerifyOptions o;
  o.jet_order = order;
  o.threads = threads;
  o.tolerance_override = parse_tol_overrides(overrides);
  return o;
}

void emit_report(const VerificationReport& rep, const std::string& output,
                 std::ostream& out) {
  std::string text = rep.to_json();
  if (!output.empty()) write_file(output, text);
  out << text << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conformal invariants of immersed submanifolds of the unit sphere"};
  app.name("moebius");
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON config file; keys are long option names with '-' "
                    "replaced by '_', flags override it");
  };

  // params: the three-block parameter algebra
  auto* cmd_params = app.add_subcommand("params", "parameter triples of the product construction");
  cmd_params->require_subcommand(1);

  std::string ps_m, ps_rsq, ps_p = "0,0,0", ps_mu;
  auto* cmd_solve = cmd_params->add_subcommand("solve", "eigenvalues and shape coefficients from the radii");
  auto* ps_m_opt = cmd_solve->add_option("--m", ps_m, "block dimensions m1,m2,m3");
  auto* ps_rsq_opt = cmd_solve->add_option("--r-sq", ps_rsq, "squared radii r1^2,r2^2,r3^2");
  auto* ps_p_opt = cmd_solve->add_option("--p", ps_p, "block codimensions p1,p2,p3");
  auto* ps_mu_opt = cmd_solve->add_option("--mu", ps_mu, "weights mu1,mu2,mu3");
  add_config(cmd_solve);

  std::string pb_m, pb_lambda;
  auto* cmd_b0 = cmd_params->add_subcommand("b0", "shape coefficients from an eigenvalue triple");
  auto* pb_m_opt = cmd_b0->add_option("--m", pb_m, "block dimensions m1,m2,m3");
  auto* pb_lam_opt = cmd_b0->add_option("--lambda", pb_lambda, "eigenvalues l1,l2,l3");
  add_config(cmd_b0);

  std::string pl_m, pl_rsq;
  auto* cmd_lemma = cmd_params->add_subcommand("lemma31", "parameter identity residuals");
  auto* pl_m_opt = cmd_lemma->add_option("--m", pl_m, "block dimensions m1,m2,m3");
  auto* pl_rsq_opt = cmd_lemma->add_option("--r-sq", pl_rsq, "squared radii r1^2,r2^2,r3^2");
  add_config(cmd_lemma);

  // scan: feasible radii for a block-kind combination
  auto* cmd_scan = app.add_subcommand("scan", "search for feasible radii");
  cmd_scan->require_subcommand(1);
  std::string sc_m, sc_p, sc_blocks, sc_range = "0.2:40";
  double sc_r2 = 2.0;
  int sc_steps = 200, sc_k = 1;
  bool sc_all = false;
  auto* cmd_feas = cmd_scan->add_subcommand("feasibility", "roots of the weight-system defect over r3^2");
  auto* sc_m_opt = cmd_feas->add_option("--m", sc_m, "block dimensions m1,m2,m3");
  auto* sc_p_opt = cmd_feas->add_option("--p", sc_p, "block codimensions p1,p2,p3");
  auto* sc_blocks_opt = cmd_feas->add_option("--blocks", sc_blocks, "block kinds, slot order");
  auto* sc_r2_opt = cmd_feas->add_option("--r2-sq", sc_r2, "pinned slot-2 squared radius");
  auto* sc_range_opt = cmd_feas->add_option("--range", sc_range, "r3^2 range lo:hi");
  auto* sc_steps_opt = cmd_feas->add_option("--steps", sc_steps, "grid steps over the range");
  auto* sc_k_opt = cmd_feas->add_option("--clifford-k", sc_k, "split of the product-torus block");
  auto* sc_all_opt = cmd_feas->add_flag("--include-degenerate", sc_all,
                                        "keep radii with a repeated eigenvalue");
  add_config(cmd_feas);

  // invariants: per-sample table
  std::string iv_family, iv_fparams, iv_format = "csv", iv_output;
  int iv_samples = 20, iv_order = 5, iv_threads = 1;
  uint64_t iv_seed = 1;
  auto* cmd_inv = app.add_subcommand("invariants", "per-sample invariant table for a chart family");
  auto* iv_family_opt = cmd_inv->add_option("--family", iv_family, "chart family name");
  auto* iv_fparams_opt = cmd_inv->add_option("--family-params", iv_fparams, "family parameters a,b,...");
  auto* iv_samples_opt = cmd_inv->add_option("--samples", iv_samples, "sample count");
  auto* iv_seed_opt = cmd_inv->add_option("--seed", iv_seed, "sampling seed");
  auto* iv_order_opt = cmd_inv->add_option("--order", iv_order, "jet order");
  auto* iv_threads_opt = cmd_inv->add_option("--threads", iv_threads, "worker threads");
  auto* iv_format_opt = cmd_inv->add_option("--format", iv_format, "csv or json");
  auto* iv_output_opt = cmd_inv->add_option("--output", iv_output, "also write the table to this file");
  add_config(cmd_inv);

  // verify: identity batteries
  auto* cmd_verify = app.add_subcommand("verify", "identity batteries with residual reports");
  cmd_verify->require_subcommand(1);

  std::string vs_family, vs_fparams, vs_over, vs_output;
  int vs_samples = 50, vs_order = 5, vs_threads = 1;
  double vs_tol = 1e-6;
  uint64_t vs_seed = 1;
  auto* cmd_vs = cmd_verify->add_subcommand("structure", "pointwise identities of the conformal invariants");
  auto* vs_family_opt = cmd_vs->add_option("--family", vs_family, "chart family name");
  auto* vs_fparams_opt = cmd_vs->add_option("--family-params", vs_fparams, "family parameters a,b,...");
  auto* vs_samples_opt = cmd_vs->add_option("--samples", vs_samples, "sample count");
  auto* vs_tol_opt = cmd_vs->add_option("--tol", vs_tol, "base tolerance");
  auto* vs_seed_opt = cmd_vs->add_option("--seed", vs_seed, "sampling seed");
  auto* vs_order_opt = cmd_vs->add_option("--order", vs_order, "jet order");
  auto* vs_threads_opt = cmd_vs->add_option("--threads", vs_threads, "worker threads");
  auto* vs_over_opt = cmd_vs->add_option("--tol-override", vs_over, "per-identity tolerances name=value,...");
  auto* vs_output_opt = cmd_vs->add_option("--output", vs_output, "also write the report to this file");
  add_config(cmd_vs);

  std::string vl_m, vl_p, vl_rsq, vl_blocks, vl_over, vl_output;
  int vl_k = 1, vl_samples = 20, vl_order = 5, vl_threads = 1;
  double vl_tol = 1e-6;
  uint64_t vl_seed = 1;
  auto* cmd_vl = cmd_verify->add_subcommand("ls", "assembled product immersion against its predictions");
  auto* vl_m_opt = cmd_vl->add_option("--m", vl_m, "block dimensions m1,m2,m3");
  auto* vl_p_opt = cmd_vl->add_option("--p", vl_p, "block codimensions p1,p2,p3");
  auto* vl_rsq_opt = cmd_vl->add_option("--r-sq", vl_rsq, "squared radii r1^2,r2^2,r3^2");
  auto* vl_blocks_opt = cmd_vl->add_option("--blocks", vl_blocks, "block kinds, slot order");
  auto* vl_k_opt = cmd_vl->add_option("--clifford-k", vl_k, "split of the product-torus block");
  auto* vl_samples_opt = cmd_vl->add_option("--samples", vl_samples, "sample count");
  auto* vl_tol_opt = cmd_vl->add_option("--tol", vl_tol, "base tolerance");
  auto* vl_seed_opt = cmd_vl->add_option("--seed", vl_seed, "sampling seed");
  auto* vl_order_opt = cmd_vl->add_option("--order", vl_order, "jet order");
  auto* vl_threads_opt = cmd_vl->add_option("--threads", vl_threads, "worker threads");
  auto* vl_over_opt = cmd_vl->add_option("--tol-override", vl_over, "per-identity tolerances name=value,...");
  auto* vl_output_opt = cmd_vl->add_option("--output", vl_output, "also write the report to this file");
  add_config(cmd_vl);

  std::string vi_family, vi_fparams, vi_output;
  int vi_transforms = 10, vi_samples = 5, vi_order = 5, vi_threads = 1;
  double vi_tol = 1e-6;
  uint64_t vi_seed = 1;
  auto* cmd_vi = cmd_verify->add_subcommand("invariance", "stability under random cone transformations");
  auto* vi_family_opt = cmd_vi->add_option("--family", vi_family, "chart family name");
  auto* vi_fparams_opt = cmd_vi->add_option("--family-params", vi_fparams, "family parameters a,b,...");
  auto* vi_transforms_opt = cmd_vi->add_option("--transforms", vi_transforms, "random transform count");
  auto* vi_samples_opt = cmd_vi->add_option("--samples", vi_samples, "sample count");
  auto* vi_tol_opt = cmd_vi->add_option("--tol", vi_tol, "base tolerance");
  auto* vi_seed_opt = cmd_vi->add_option("--seed", vi_seed, "sampling seed");
  auto* vi_order_opt = cmd_vi->add_option("--order", vi_order, "jet order");
  auto* vi_threads_opt = cmd_vi->add_option("--threads", vi_threads, "worker threads");
  auto* vi_output_opt = cmd_vi->add_option("--output", vi_output, "also write the report to this file");
  add_config(cmd_vi);

  // map: conformal coordinate maps between the model spaces
  auto* cmd_map = app.add_subcommand("map", "conformal coordinate maps between model spaces");
  cmd_map->require_subcommand(1);
  std::string ms_point;
  auto* cmd_ms = cmd_map->add_subcommand("sigma", "flat chart to the round sphere");
  auto* ms_point_opt = cmd_ms->add_option("--point", ms_point, "point u1,u2,...");
  add_config(cmd_ms);
  std::string mt_point;
  auto* cmd_mt = cmd_map->add_subcommand("tau", "hyperboloid to the round sphere");
  auto* mt_point_opt = cmd_mt->add_option("--point", mt_point, "point y0,y1,...");
  add_config(cmd_mt);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("moebius");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(storage.size());
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    nlohmann::json cfg = load_config(config_path);
    Resolver rz{cfg, {}};

    if (cmd_solve->parsed()) {
      rz.apply(ps_m_opt, "m", ps_m);
      rz.apply(ps_rsq_opt, "r_sq", ps_rsq);
      rz.apply(ps_p_opt, "p", ps_p);
      rz.apply(ps_mu_opt, "mu", ps_mu);
      rz.finish("params solve");
      rz.require(ps_m_opt, "--m", ps_m);
      rz.require(ps_rsq_opt, "--r-sq", ps_rsq);

      auto m = parse_int_triple(ps_m, "--m");
      auto p = parse_int_triple(ps_p, "--p");
      auto rsq_parts = split(ps_rsq, ',');
      if (rsq_parts.size() != 3)
        throw ConfigError("--r-sq: expected three comma-separated numbers");
      std::array<Rational, 3> rq;
      bool exact_in = true;
      for (int i = 0; i < 3; ++i) exact_in = exact_in && Rational::parse(rsq_parts[i], &rq[i]);

      Lemma31Report rep = exact_in
                              ? lemma31_check_exact(m, rq)
                              : lemma31_check(m, parse_double_triple(ps_rsq, "--r-sq"));
      LSParams params;
      params.m = m;
      params.p = p;
      params.r_sq = exact_in
                        ? std::array<double, 3>{rq[0].to_double(), rq[1].to_double(),
                                                rq[2].to_double()}
                        : parse_double_triple(ps_rsq, "--r-sq");
      params.lambda = rep.lambda;
      params.b0 = rep.b0;
      if (!ps_mu.empty()) params.mu = parse_double_triple(ps_mu, "--mu");

      nlohmann::json j;
      j["params"] = nlohmann::json::parse(params_to_json(params));
      j["exact"] = rep.exact;
      j["residuals"] = rep.residual;
      if (rep.exact) j["exact_zero"] = rep.exact_zero;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_b0->parsed()) {
      rz.apply(pb_m_opt, "m", pb_m);
      rz.apply(pb_lam_opt, "lambda", pb_lambda);
      rz.finish("params b0");
      rz.require(pb_m_opt, "--m", pb_m);
      rz.require(pb_lam_opt, "--lambda", pb_lambda);

      auto m = parse_int_triple(pb_m, "--m");
      auto lam = parse_double_triple(pb_lambda, "--lambda");
      auto b0 = solve_b0(m, lam);
      nlohmann::json j;
      j["m"] = m;
      j["lambda"] = lam;
      j["b0"] = b0;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_lemma->parsed()) {
      rz.apply(pl_m_opt, "m", pl_m);
      rz.apply(pl_rsq_opt, "r_sq", pl_rsq);
      rz.finish("params lemma31");
      rz.require(pl_m_opt, "--m", pl_m);
      rz.require(pl_rsq_opt, "--r-sq", pl_rsq);

      auto m = parse_int_triple(pl_m, "--m");
      auto rsq_parts = split(pl_rsq, ',');
      if (rsq_parts.size() != 3)
        throw ConfigError("--r-sq: expected three comma-separated numbers");
      std::array<Rational, 3> rq;
      bool exact_in = true;
      for (int i = 0; i < 3; ++i) exact_in = exact_in && Rational::parse(rsq_parts[i], &rq[i]);
      Lemma31Report rep = exact_in
                              ? lemma31_check_exact(m, rq)
                              : lemma31_check(m, parse_double_triple(pl_rsq, "--r-sq"));
      nlohmann::json j;
      j["exact"] = rep.exact;
      j["lambda"] = rep.lambda;
      j["b0"] = rep.b0;
      j["residuals"] = rep.residual;
      if (rep.exact) j["exact_zero"] = rep.exact_zero;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_feas->parsed()) {
      rz.apply(sc_m_opt, "m", sc_m);
      rz.apply(sc_p_opt, "p", sc_p);
      rz.apply(sc_blocks_opt, "blocks", sc_blocks);
      rz.apply(sc_r2_opt, "r2_sq", sc_r2);
      rz.apply(sc_range_opt, "range", sc_range);
      rz.apply(sc_steps_opt, "steps", sc_steps);
      rz.apply(sc_k_opt, "clifford_k", sc_k);
      rz.apply(sc_all_opt, "include_degenerate", sc_all);
      rz.finish("scan feasibility");
      rz.require(sc_m_opt, "--m", sc_m);
      rz.require(sc_p_opt, "--p", sc_p);
      rz.require(sc_blocks_opt, "--blocks", sc_blocks);

      auto m = parse_int_triple(sc_m, "--m");
      auto p = parse_int_triple(sc_p, "--p");
      auto kinds = parse_kinds(sc_blocks);
      auto range_parts = split(sc_range, ':');
      if (range_parts.size() != 2)
        throw ConfigError("--range: expected lo:hi");
      ScanOptions so;
      so.r2_sq = sc_r2;
      so.lo = parse_double(range_parts[0], "--range");
      so.hi = parse_double(range_parts[1], "--range");
      so.steps = sc_steps;
      so.distinct_only = !sc_all;
      so.clifford_k = sc_k;
      auto results = feasibility_scan(m, p, kinds, so);
      nlohmann::json j;
      j["count"] = results.size();
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : results) arr.push_back(nlohmann::json::parse(params_to_json(r)));
      j["results"] = arr;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_inv->parsed()) {
      rz.apply(iv_family_opt, "family", iv_family);
      rz.apply(iv_fparams_opt, "family_params", iv_fparams);
      rz.apply(iv_samples_opt, "samples", iv_samples);
      rz.apply(iv_seed_opt, "seed", iv_seed);
      rz.apply(iv_order_opt, "order", iv_order);
      rz.apply(iv_threads_opt, "threads", iv_threads);
      rz.apply(iv_format_opt, "format", iv_format);
      rz.apply(iv_output_opt, "output", iv_output);
      rz.finish("invariants");
      rz.require(iv_family_opt, "--family", iv_family);
      if (iv_format != "csv" && iv_format != "json")
        throw ConfigError("--format must be csv or json");

      auto spec = make_family(iv_family, parse_double_list(iv_fparams, "--family-params"));
      auto opts = build_options(iv_order, iv_threads, "");
      auto rows = invariant_rows(spec, iv_samples, iv_seed, opts);
      std::string text = iv_format == "csv"
                             ? invariants_csv(rows, spec.dim_intrinsic)
                             : invariants_json(rows, spec.dim_intrinsic) + "\n";
      if (!iv_output.empty()) write_file(iv_output, text);
      out << text;
      return 0;
    }

    if (cmd_vs->parsed()) {
      rz.apply(vs_family_opt, "family", vs_family);
      rz.apply(vs_fparams_opt, "family_params", vs_fparams);
      rz.apply(vs_samples_opt, "samples", vs_samples);
      rz.apply(vs_tol_opt, "tol", vs_tol);
      rz.apply(vs_seed_opt, "seed", vs_seed);
      rz.apply(vs_order_opt, "order", vs_order);
      rz.apply(vs_threads_opt, "threads", vs_threads);
      rz.apply(vs_over_opt, "tol_override", vs_over);
      rz.apply(vs_output_opt, "output", vs_output);
      rz.finish("verify structure");
      rz.require(vs_family_opt, "--family", vs_family);

      auto spec = make_family(vs_family, parse_double_list(vs_fparams, "--family-params"));
      auto opts = build_options(vs_order, vs_threads, vs_over);
      auto rep = verify_structure(spec, vs_samples, vs_tol, vs_seed, opts);
      emit_report(rep, vs_output, out);
      return rep.pass ? 0 : 1;
    }

    if (cmd_vl->parsed()) {
      rz.apply(vl_m_opt, "m", vl_m);
      rz.apply(vl_p_opt, "p", vl_p);
      rz.apply(vl_rsq_opt, "r_sq", vl_rsq);
      rz.apply(vl_blocks_opt, "blocks", vl_blocks);
      rz.apply(vl_k_opt, "clifford_k", vl_k);
      rz.apply(vl_samples_opt, "samples", vl_samples);
      rz.apply(vl_tol_opt, "tol", vl_tol);
      rz.apply(vl_seed_opt, "seed", vl_seed);
      rz.apply(vl_order_opt, "order", vl_order);
      rz.apply(vl_threads_opt, "threads", vl_threads);
      rz.apply(vl_over_opt, "tol_override", vl_over);
      rz.apply(vl_output_opt, "output", vl_output);
      rz.finish("verify ls");
      rz.require(vl_m_opt, "--m", vl_m);
      rz.require(vl_p_opt, "--p", vl_p);
      rz.require(vl_rsq_opt, "--r-sq", vl_rsq);
      rz.require(vl_blocks_opt, "--blocks", vl_blocks);

      auto m = parse_int_triple(vl_m, "--m");
      auto p = parse_int_triple(vl_p, "--p");
      auto rsq = parse_double_triple(vl_rsq, "--r-sq");
      auto kinds = parse_kinds(vl_blocks);
      auto blocks = make_blocks(m, p, kinds, rsq, vl_k);
      auto opts = build_options(vl_order, vl_threads, vl_over);
      auto rep = verify_ls_auto(blocks, m, p, rsq, vl_samples, vl_tol, vl_seed, opts);
      emit_report(rep, vl_output, out);
      return rep.pass ? 0 : 1;
    }

    if (cmd_vi->parsed()) {
      rz.apply(vi_family_opt, "family", vi_family);
      rz.apply(vi_fparams_opt, "family_params", vi_fparams);
      rz.apply(vi_transforms_opt, "transforms", vi_transforms);
      rz.apply(vi_samples_opt, "samples", vi_samples);
      rz.apply(vi_tol_opt, "tol", vi_tol);
      rz.apply(vi_seed_opt, "seed", vi_seed);
      rz.apply(vi_order_opt, "order", vi_order);
      rz.apply(vi_threads_opt, "threads", vi_threads);
      rz.apply(vi_output_opt, "output", vi_output);
      rz.finish("verify invariance");
      rz.require(vi_family_opt, "--family", vi_family);

      auto spec = make_family(vi_family, parse_double_list(vi_fparams, "--family-params"));
      auto opts = build_options(vi_order, vi_threads, "");
      auto rep = moebius_invariance_test(spec, vi_transforms, vi_samples, vi_tol,
                                         vi_seed, opts);
      emit_report(rep, vi_output, out);
      return rep.pass ? 0 : 1;
    }

    if (cmd_ms->parsed() || cmd_mt->parsed()) {
      bool is_sigma = cmd_ms->parsed();
      auto* opt = is_sigma ? ms_point_opt : mt_point_opt;
      std::string& val = is_sigma ? ms_point : mt_point;
      rz.apply(opt, "point", val);
      rz.finish(is_sigma ? "map sigma" : "map tau");
      rz.require(opt, "--point", val);

      auto pt = parse_double_list(val, "--point");
      if (pt.empty()) throw ConfigError("--point: expected at least one coordinate");
      std::vector<double> image = is_sigma ? sigma_map(pt) : tau_map(pt);
      double nrm = 0.0;
      for (double v : image) nrm += v * v;
      nlohmann::json j;
      j["input"] = pt;
      j["output"] = image;
      j["norm_check"] = nrm - 1.0;
      out << j.dump(2) << "\n";
      return 0;
    }

    throw ConfigError("no command selected");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace moebius
