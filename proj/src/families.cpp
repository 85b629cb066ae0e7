#include "moebius/families.hpp"

#include <cmath>

#include "moebius/errors.hpp"
#include "moebius/rng.hpp"

namespace moebius {

namespace {

void require_params(const std::string& name, const std::vector<double>& params,
                    size_t count) {
  if (params.size() != count)
    throw ConfigError("family '" + name + "' expects " + std::to_string(count) +
                      " parameter(s), got " + std::to_string(params.size()));
}

JetVec eval_chart_raw(const ImmersionSpec& spec, const ChartPoint& u, int order) {
  auto tab = MultiIndexTable::get(spec.dim_intrinsic, order);
  JetVec vars;
  vars.reserve(u.size());
  for (int i = 0; i < spec.dim_intrinsic; ++i)
    vars.push_back(ScalarJet::variable(tab, i, u[i]));
  JetVec out = spec.chart(vars);
  if (static_cast<int>(out.size()) != spec.dim_ambient)
    throw ConsistencyError("chart produced wrong component count");
  return out;
}

}  // namespace

JetVec unit_sphere_chart(const JetVec& vars) {
  int k = static_cast<int>(vars.size());
  if (k == 1) return {cos(vars[0]), sin(vars[0])};
  JetVec rest(vars.begin() + 1, vars.end());
  JetVec tail = unit_sphere_chart(rest);
  JetVec out;
  out.reserve(k + 1);
  out.push_back(cos(vars[0]));
  ScalarJet s = sin(vars[0]);
  for (const auto& c : tail) out.push_back(s * c);
  return out;
}

JetVec unit_hyperboloid_chart(const JetVec& vars) {
  int k = static_cast<int>(vars.size());
  if (k == 1) return {cosh(vars[0]), sinh(vars[0])};
  JetVec rest(vars.begin() + 1, vars.end());
  JetVec sphere = unit_sphere_chart(rest);
  JetVec out;
  out.reserve(k + 1);
  out.push_back(cosh(vars[0]));
  ScalarJet s = sinh(vars[0]);
  for (const auto& c : sphere) out.push_back(s * c);
  return out;
}

std::vector<std::pair<double, double>> sphere_chart_domain(int k) {
  std::vector<std::pair<double, double>> dom;
  for (int i = 0; i < k - 1; ++i) dom.push_back({0.35, 2.79});  // polar angles
  dom.push_back({-3.1, 3.1});                                   // azimuth
  return dom;
}

std::vector<std::pair<double, double>> hyperboloid_chart_domain(int k) {
  if (k == 1) return {{-1.4, 1.4}};
  std::vector<std::pair<double, double>> dom;
  dom.push_back({0.25, 1.3});  // radial parameter, kept off the axis
  auto sph = sphere_chart_domain(k - 1);
  dom.insert(dom.end(), sph.begin(), sph.end());
  return dom;
}

ImmersionSpec make_family(const std::string& name, const std::vector<double>& params) {
  ImmersionSpec spec;
  spec.family = name;
  spec.params = params;

  if (name == "identity") {
    require_params(name, params, 1);
    int m = static_cast<int>(params[0]);
    if (m < 1 || m > 8) throw ConfigError("identity family: dimension out of range");
    spec.ambient = Ambient::Euclidean;
    spec.dim_intrinsic = m;
    spec.dim_ambient = m;
    spec.domain.assign(m, {-2.0, 2.0});
    spec.chart = [](const JetVec& v) { return v; };
    return spec;
  }

  if (name == "circle") {
    require_params(name, params, 0);
    spec.dim_intrinsic = 1;
    spec.dim_ambient = 2;
    spec.domain = {{-3.1, 3.1}};
    spec.chart = [](const JetVec& v) { return unit_sphere_chart(v); };
    return spec;
  }

  if (name == "great-circle") {
    require_params(name, params, 0);
    spec.dim_intrinsic = 1;
    spec.dim_ambient = 3;
    spec.domain = {{-3.1, 3.1}};
    spec.chart = [](const JetVec& v) {
      JetVec c = unit_sphere_chart(v);
      c.push_back(ScalarJet::constant(v[0].table(), 0.0));
      return c;
    };
    return spec;
  }

  if (name == "clifford" || name == "torus") {
    double a = 1.0 / std::sqrt(2.0), b = a;
    if (name == "torus") {
      require_params(name, params, 2);
      a = params[0];
      b = params[1];
      if (a <= 0 || b <= 0 || std::abs(a * a + b * b - 1.0) > 1e-12)
        throw ParameterError("torus family: need a, b > 0 with a^2 + b^2 = 1");
    } else {
      require_params(name, params, 0);
    }
    spec.dim_intrinsic = 2;
    spec.dim_ambient = 4;
    spec.domain = {{-3.1, 3.1}, {-3.1, 3.1}};
    spec.chart = [a, b](const JetVec& v) {
      return JetVec{a * cos(v[0]), a * sin(v[0]), b * cos(v[1]), b * sin(v[1])};
    };
    return spec;
  }

  if (name == "ellipse-torus") {
    double a = 1.3, b = 0.8;
    if (!params.empty()) {
      require_params(name, params, 2);
      a = params[0];
      b = params[1];
      if (a <= 0 || b <= 0)
        throw ParameterError("ellipse-torus family: need a, b > 0");
    }
    spec.params = {a, b};
    spec.dim_intrinsic = 2;
    spec.dim_ambient = 4;
    spec.domain = {{-3.1, 3.1}, {-3.1, 3.1}};
    spec.chart = [a, b](const JetVec& v) {
      ScalarJet cu = cos(v[0]), su = sin(v[0]);
      JetVec raw{a * cu, b * su, cos(v[1]), sin(v[1])};
      ScalarJet inv_norm =
          1.0 / sqrt(a * a * cu * cu + b * b * su * su + 1.0);
      return inv_norm * raw;
    };
    return spec;
  }

  if (name == "veronese") {
    require_params(name, params, 0);
    spec.dim_intrinsic = 2;
    spec.dim_ambient = 5;
    spec.domain = {{0.35, 2.79}, {-3.1, 3.1}};
    spec.chart = [](const JetVec& v) {
      double s3 = std::sqrt(3.0);
      ScalarJet st = sin(v[0]), ct = cos(v[0]);
      ScalarJet cp = cos(v[1]), sp = sin(v[1]);
      ScalarJet x = s3 * st * cp, y = s3 * st * sp, z = s3 * ct;
      return JetVec{(x * y) / s3, (x * z) / s3, (y * z) / s3,
                    (x * x - y * y) / (2.0 * s3),
                    (x * x + y * y - 2.0 * z * z) / 6.0};
    };
    return spec;
  }

  if (name == "small-sphere") {
    require_params(name, params, 2);
    int m = static_cast<int>(params[0]);
    double r = params[1];
    if (m < 1 || m > 6) throw ConfigError("small-sphere family: dimension out of range");
    if (!(r > 0.0 && r < 1.0))
      throw ParameterError("small-sphere family: need 0 < r < 1");
    spec.dim_intrinsic = m;
    spec.dim_ambient = m + 2;
    spec.domain = sphere_chart_domain(m);
    double h = std::sqrt(1.0 - r * r);
    spec.chart = [r, h](const JetVec& v) {
      JetVec c = r * unit_sphere_chart(v);
      c.push_back(ScalarJet::constant(v[0].table(), h));
      return c;
    };
    return spec;
  }

  if (name == "sphere-chart") {
    require_params(name, params, 1);
    double r = params[0];
    if (r <= 0) throw ParameterError("sphere-chart family: need r > 0");
    spec.ambient = Ambient::Euclidean;
    spec.dim_intrinsic = 2;
    spec.dim_ambient = 3;
    spec.domain = sphere_chart_domain(2);
    spec.chart = [r](const JetVec& v) { return r * unit_sphere_chart(v); };
    return spec;
  }

  if (name == "hyperbolic-plane") {
    require_params(name, params, 0);
    spec.ambient = Ambient::Hyperbolic;
    spec.dim_intrinsic = 2;
    spec.dim_ambient = 3;
    spec.domain = hyperboloid_chart_domain(2);
    spec.chart = [](const JetVec& v) { return unit_hyperboloid_chart(v); };
    return spec;
  }

  if (name == "clifford-general") {
    require_params(name, params, 3);
    int k = static_cast<int>(params[0]);
    int m = static_cast<int>(params[1]);
    double r = params[2];
    if (m < 2 || m > 6 || k < 1 || k > m - 1)
      throw ConfigError("clifford-general family: need 2 <= m <= 6, 1 <= k <= m-1");
    if (r <= 0) throw ParameterError("clifford-general family: need r > 0");
    spec.ambient_radius = r;
    spec.dim_intrinsic = m;
    spec.dim_ambient = m + 2;
    auto d1 = sphere_chart_domain(k), d2 = sphere_chart_domain(m - k);
    spec.domain = d1;
    spec.domain.insert(spec.domain.end(), d2.begin(), d2.end());
    double a = r * std::sqrt(static_cast<double>(k) / m);
    double b = r * std::sqrt(static_cast<double>(m - k) / m);
    spec.chart = [a, b, k](const JetVec& v) {
      JetVec first(v.begin(), v.begin() + k);
      JetVec second(v.begin() + k, v.end());
      JetVec out = a * unit_sphere_chart(first);
      JetVec tail = b * unit_sphere_chart(second);
      out.insert(out.end(), tail.begin(), tail.end());
      return out;
    };
    return spec;
  }

  throw ConfigError("unknown family '" + name + "'");
}

std::vector<std::string> family_names() {
  return {"identity",     "circle",       "great-circle", "clifford",
          "torus",        "ellipse-torus", "veronese",     "small-sphere",
          "sphere-chart", "hyperbolic-plane", "clifford-general"};
}

void check_point(const ImmersionSpec& spec, const ChartPoint& u) {
  if (static_cast<int>(u.size()) != spec.dim_intrinsic)
    throw DomainError("chart point has wrong dimension");
  for (int i = 0; i < spec.dim_intrinsic; ++i) {
    if (!std::isfinite(u[i])) throw DomainError("chart point has non-finite entry");
    if (!(u[i] > spec.domain[i].first && u[i] < spec.domain[i].second))
      throw DomainError("chart point outside the open domain box");
  }
}

Jet jet_eval(const ImmersionSpec& spec, const ChartPoint& u, int order) {
  if (order < 0 || order > 12) throw ConfigError("jet order out of range");
  check_point(spec, u);
  Jet jet;
  jet.dim_in = spec.dim_intrinsic;
  jet.dim_out = spec.dim_ambient;
  jet.order = order;
  jet.base_point = u;
  jet.comps = eval_chart_raw(spec, u, order);
  return jet;
}

std::vector<double> chart_values(const ImmersionSpec& spec, const ChartPoint& u) {
  JetVec comps = eval_chart_raw(spec, u, 0);
  std::vector<double> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(c.value());
  return out;
}

Jet fd_crosscheck(const ImmersionSpec& spec, const ChartPoint& u, int order,
                  double step) {
  if (order < 0 || order > 2)
    throw ConfigError("fd_crosscheck supports orders 0, 1, 2");
  check_point(spec, u);
  if (!(step > 0.0)) throw NumericError("fd_crosscheck: step must be positive");
  for (double c : u)
    if (c + step == c || c - step == c)
      throw NumericError("fd_crosscheck: step underflows at this point");

  int m = spec.dim_intrinsic, N = spec.dim_ambient;
  auto tab = MultiIndexTable::get(m, order);
  auto at = [&](const ChartPoint& q) {
    JetVec comps = eval_chart_raw(spec, q, 0);
    std::vector<double> vals(N);
    for (int c = 0; c < N; ++c) vals[c] = comps[c].value();
    return vals;
  };

  std::vector<std::vector<double>> coeffs(tab->size(), std::vector<double>(N, 0.0));
  coeffs[0] = at(u);
  if (order >= 1) {
    for (int i = 0; i < m; ++i) {
      ChartPoint up = u, dn = u;
      up[i] += step;
      dn[i] -= step;
      auto fp = at(up), fm = at(dn);
      std::vector<int> alpha(m, 0);
      alpha[i] = 1;
      int slot = tab->find(alpha);
      for (int c = 0; c < N; ++c) coeffs[slot][c] = (fp[c] - fm[c]) / (2.0 * step);
      if (order >= 2) {
        alpha[i] = 2;
        slot = tab->find(alpha);
        if (slot >= 0) {
          for (int c = 0; c < N; ++c)
            coeffs[slot][c] =
                (fp[c] - 2.0 * coeffs[0][c] + fm[c]) / (2.0 * step * step);
        }
      }
    }
  }
  if (order >= 2) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        ChartPoint pp = u, pm = u, mp = u, mm = u;
        pp[i] += step;
        pp[j] += step;
        pm[i] += step;
        pm[j] -= step;
        mp[i] -= step;
        mp[j] += step;
        mm[i] -= step;
        mm[j] -= step;
        auto fpp = at(pp), fpm = at(pm), fmp = at(mp), fmm = at(mm);
        std::vector<int> alpha(m, 0);
        alpha[i] = alpha[j] = 1;
        int slot = tab->find(alpha);
        for (int c = 0; c < N; ++c)
          coeffs[slot][c] =
              (fpp[c] - fpm[c] - fmp[c] + fmm[c]) / (4.0 * step * step);
      }
    }
  }

  Jet jet;
  jet.dim_in = m;
  jet.dim_out = N;
  jet.order = order;
  jet.base_point = u;
  for (int c = 0; c < N; ++c) {
    // rebuild each component from its coefficient column
    ScalarJet sc = ScalarJet::constant(tab, 0.0);
    for (int slot = 0; slot < tab->size(); ++slot) {
      std::vector<int> alpha = tab->index(slot);
      ScalarJet term = ScalarJet::constant(tab, coeffs[slot][c]);
      for (int v = 0; v < m; ++v)
        for (int rep = 0; rep < alpha[v]; ++rep)
          term = term * (ScalarJet::variable(tab, v, 0.0));
      sc += term;
    }
    jet.comps.push_back(sc);
  }
  return jet;
}

ChartPoint domain_sample(const ImmersionSpec& spec, uint64_t index, uint64_t seed) {
  auto t = halton_point(index, spec.dim_intrinsic, seed);
  ChartPoint u(spec.dim_intrinsic);
  for (int i = 0; i < spec.dim_intrinsic; ++i) {
    auto [lo, hi] = spec.domain[i];
    u[i] = lo + (hi - lo) * t[i];
  }
  return u;
}

}  // namespace moebius
