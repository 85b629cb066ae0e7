#include "moebius/euclidean.hpp"

#include <cmath>

#include "moebius/errors.hpp"

namespace moebius {

namespace {

ScalarJet inner_jets(Signature sig, const JetVec& a, const JetVec& b) {
  return inner(sig, a, b);
}

std::vector<std::vector<ScalarJet>> to_rows(const JetMatrix& g) {
  int n = g.rows();
  std::vector<std::vector<ScalarJet>> rows(n, std::vector<ScalarJet>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = g(i, j);
  return rows;
}

Matrix values_of(const JetMatrix& g) {
  Matrix v(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) v(i, j) = g(i, j).value();
  return v;
}

JetVec component_derivative(const JetVec& v, int var) {
  JetVec out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.derivative(var));
  return out;
}

}  // namespace

JetMatrix metric_inverse_jets(const JetMatrix& g) {
  auto tab = g(0, 0).table();
  ScalarJet zero = ScalarJet::constant(tab, 0.0);
  ScalarJet one = ScalarJet::constant(tab, 1.0);
  auto inv = invert_matrix(to_rows(g), zero, one);
  int n = g.rows();
  JetMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = inv[i][j];
  return out;
}

JetTensor3 christoffel_jets(const JetMatrix& g) {
  int m = g.rows();
  JetMatrix ginv = metric_inverse_jets(g);
  std::vector<std::vector<JetVec>> dg(m, std::vector<JetVec>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      dg[a][b].reserve(m);
      for (int c = 0; c < m; ++c) dg[a][b].push_back(g(a, b).derivative(c));
    }
  JetTensor3 gam(m, m, m);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        ScalarJet acc = ScalarJet::constant(g(0, 0).table(), 0.0);
        for (int d = 0; d < m; ++d)
          acc += ginv(c, d) * (dg[b][d][a] + dg[a][d][b] - dg[a][b][d]);
        acc *= 0.5;
        gam(c, a, b) = acc;
        gam(c, b, a) = acc;
      }
  return gam;
}

CurvatureData induced_curvature(const JetMatrix& g) {
  int m = g.rows();
  JetTensor3 gam = christoffel_jets(g);

  CurvatureData out;
  out.christoffel = Tensor3(m, m, m);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) out.christoffel(c, a, b) = gam(c, a, b).value();

  // dG[i](l,j,k) = d_i Gamma^l_jk at the base point
  std::vector<Tensor3> dG(m, Tensor3(m, m, m));
  std::vector<int> alpha(g(0, 0).table()->dim(), 0);
  for (int i = 0; i < m; ++i) {
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[i] = 1;
    for (int l = 0; l < m; ++l)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) dG[i](l, j, k) = gam(l, j, k).partial(alpha);
  }

  Matrix gv = values_of(g);
  Tensor4 up(m, m, m, m);  // up(l,k,i,j) = R^l_kij
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double r = dG[i](l, j, k) - dG[j](l, i, k);
          for (int s = 0; s < m; ++s)
            r += out.christoffel(l, i, s) * out.christoffel(s, j, k) -
                 out.christoffel(l, j, s) * out.christoffel(s, i, k);
          up(l, k, i, j) = r;
        }

  out.riemann = Tensor4(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double t = 0.0;
          for (int s = 0; s < m; ++s) t += gv(l, s) * up(s, k, i, j);
          out.riemann(i, j, k, l) = t;
        }

  out.ricci = Matrix(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double r = 0.0;
      for (int i = 0; i < m; ++i) r += up(i, k, i, j);
      out.ricci(j, k) = r;
    }

  std::vector<std::vector<double>> gvr(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gvr[i][j] = gv(i, j);
  auto ginv = invert_matrix(gvr, 0.0, 1.0);
  out.scalar = 0.0;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) out.scalar += ginv[j][k] * out.ricci(j, k);
  return out;
}

double model_curvature(const ImmersionSpec& spec) {
  double r2 = spec.ambient_radius * spec.ambient_radius;
  switch (spec.ambient) {
    case Ambient::Sphere:
      return 1.0 / r2;
    case Ambient::Hyperbolic:
      return -1.0 / r2;
    case Ambient::Euclidean:
      return 0.0;
  }
  return 0.0;
}

EuclideanField compute_euclidean_field(const ImmersionSpec& spec, const ChartPoint& u,
                                       int order) {
  EuclideanField f;
  f.spec = spec;
  f.base = u;
  f.m = spec.dim_intrinsic;
  f.n_amb = spec.dim_ambient;
  f.p = spec.codim();
  f.sig = spec.signature();

  Jet jet = jet_eval(spec, u, order);
  f.x = jet.comps;
  f.tab = f.x[0].table();
  int m = f.m, N = f.n_amb;

  double quadric = 0.0;
  if (spec.ambient != Ambient::Euclidean) {
    double r2 = spec.ambient_radius * spec.ambient_radius;
    quadric = spec.ambient == Ambient::Sphere ? r2 : -r2;
    double got = inner_jets(f.sig, f.x, f.x).value();
    if (std::abs(got - quadric) > 1e-8 * (1.0 + r2))
      throw ConsistencyError("chart values leave the model quadric");
  }

  f.dx.resize(m);
  for (int a = 0; a < m; ++a) f.dx[a] = component_derivative(f.x, a);

  f.gE = JetMatrix(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      ScalarJet v = inner_jets(f.sig, f.dx[a], f.dx[b]);
      f.gE(a, b) = v;
      f.gE(b, a) = v;
    }
  f.gE_inv = metric_inverse_jets(f.gE);
  f.gammaE = christoffel_jets(f.gE);

  ScalarJet zero = ScalarJet::constant(f.tab, 0.0);

  // Orthonormal tangent frame by Gram-Schmidt over the coordinate tangents,
  // with the expansion coefficients carried along.
  f.tangent.resize(m);
  f.frame_coeff = JetMatrix(m, m);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < m; ++a) f.frame_coeff(i, a) = zero;
  for (int i = 0; i < m; ++i) {
    JetVec v = f.dx[i];
    std::vector<ScalarJet> row(m, zero);
    row[i] = ScalarJet::constant(f.tab, 1.0);
    for (int j = 0; j < i; ++j) {
      ScalarJet s = inner_jets(f.sig, v, f.tangent[j]);
      v = jet_axpy(-s, f.tangent[j], v);
      for (int a = 0; a <= j; ++a) row[a] -= s * f.frame_coeff(j, a);
    }
    ScalarJet n2 = inner_jets(f.sig, v, v);
    if (!(n2.value() > 1e-16 * std::max(1.0, std::abs(f.gE(i, i).value()))))
      throw DegeneracyError("chart fails to immerse at this point");
    ScalarJet inv_norm = 1.0 / sqrt(n2);
    f.tangent[i] = inv_norm * v;
    for (int a = 0; a <= i; ++a) f.frame_coeff(i, a) = inv_norm * row[a];
  }

  // Normal frame: orthonormalize the ambient basis against the position
  // direction (curved models), the tangent frame, and normals found so far.
  // Each slot takes the candidate with the largest residual. A marginal seed
  // would pass through 1/sqrt(n2) with a tiny value and O(1) coefficients,
  // and that division grows roundoff geometrically with the jet order.
  f.normal.reserve(f.p);
  std::vector<char> used(N, 0);
  while (static_cast<int>(f.normal.size()) < f.p) {
    int best = -1;
    JetVec bestv;
    ScalarJet bestn2 = zero;
    for (int cand = 0; cand < N; ++cand) {
      if (used[cand]) continue;
      JetVec v(N, zero);
      v[cand] = ScalarJet::constant(f.tab, 1.0);
      if (spec.ambient != Ambient::Euclidean) {
        ScalarJet s = inner_jets(f.sig, v, f.x) / quadric;
        v = jet_axpy(-s, f.x, v);
      }
      for (const auto& t : f.tangent) {
        ScalarJet s = inner_jets(f.sig, v, t);
        v = jet_axpy(-s, t, v);
      }
      for (const auto& n : f.normal) {
        ScalarJet s = inner_jets(f.sig, v, n);
        v = jet_axpy(-s, n, v);
      }
      ScalarJet n2 = inner_jets(f.sig, v, v);
      if (best < 0 || n2.value() > bestn2.value()) {
        best = cand;
        bestv = std::move(v);
        bestn2 = n2;
      }
    }
    if (best < 0 || !(bestn2.value() > 1e-16))
      throw ConfigError("could not complete a normal frame for this chart");
    used[best] = 1;
    f.normal.push_back((1.0 / sqrt(bestn2)) * bestv);
  }

  // Second fundamental form in coordinates and in the frame.
  std::vector<std::vector<JetVec>> ddx(m, std::vector<JetVec>(m));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      ddx[a][b] = component_derivative(f.dx[a], b);
      if (b != a) ddx[b][a] = ddx[a][b];
    }
  f.h_coord.assign(f.p, JetMatrix(m, m));
  f.h_frame.assign(f.p, JetMatrix(m, m));
  for (int al = 0; al < f.p; ++al) {
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        ScalarJet v = inner_jets(f.sig, ddx[a][b], f.normal[al]);
        f.h_coord[al](a, b) = v;
        f.h_coord[al](b, a) = v;
      }
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        ScalarJet acc = zero;
        for (int a = 0; a <= i; ++a)
          for (int b = 0; b <= j; ++b)
            acc += f.frame_coeff(i, a) * f.frame_coeff(j, b) * f.h_coord[al](a, b);
        f.h_frame[al](i, j) = acc;
        f.h_frame[al](j, i) = acc;
      }
  }

  f.meanH.assign(f.p, zero);
  for (int al = 0; al < f.p; ++al) {
    ScalarJet acc = zero;
    for (int i = 0; i < m; ++i) acc += f.h_frame[al](i, i);
    f.meanH[al] = acc / static_cast<double>(m);
  }

  f.omegaN = JetTensor3(f.p, f.p, m);
  for (int al = 0; al < f.p; ++al)
    for (int a = 0; a < m; ++a) {
      JetVec dn = component_derivative(f.normal[al], a);
      for (int be = 0; be < f.p; ++be)
        f.omegaN(al, be, a) = inner_jets(f.sig, dn, f.normal[be]);
    }

  return f;
}

EuclideanData euclidean_at(const EuclideanField& f) {
  EuclideanData d;
  d.m = f.m;
  d.p = f.p;
  d.gE = values_of(f.gE);
  d.h.reserve(f.p);
  for (const auto& hm : f.h_frame) d.h.push_back(values_of(hm));
  d.H.reserve(f.p);
  for (const auto& h : f.meanH) d.H.push_back(h.value());
  for (int al = 0; al < f.p; ++al) {
    d.H_norm_sq += d.H[al] * d.H[al];
    for (int i = 0; i < f.m; ++i)
      for (int j = 0; j < f.m; ++j) d.h_norm_sq += d.h[al](i, j) * d.h[al](i, j);
  }
  return d;
}

double model_gauss_residual(const EuclideanField& f) {
  CurvatureData cd = induced_curvature(f.gE);
  Matrix gv = values_of(f.gE);
  double c = model_curvature(f.spec);
  int m = f.m;
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double pred = c * (gv(j, k) * gv(i, l) - gv(i, k) * gv(j, l));
          for (int al = 0; al < f.p; ++al)
            pred += f.h_coord[al](i, l).value() * f.h_coord[al](j, k).value() -
                    f.h_coord[al](i, k).value() * f.h_coord[al](j, l).value();
          worst = std::max(worst, std::abs(cd.riemann(i, j, k, l) - pred));
        }
  return worst;
}

std::vector<double> sigma_map(const std::vector<double>& u) {
  if (u.empty()) throw DomainError("sigma: empty input");
  double s = 0.0;
  for (double c : u) s += c * c;
  double denom = 1.0 + s;
  std::vector<double> out;
  out.reserve(u.size() + 1);
  out.push_back((1.0 - s) / denom);
  for (double c : u) out.push_back(2.0 * c / denom);
  return out;
}

JetVec sigma_map(const JetVec& u) {
  if (u.empty()) throw DomainError("sigma: empty input");
  ScalarJet s = u[0] * u[0];
  for (size_t i = 1; i < u.size(); ++i) s += u[i] * u[i];
  ScalarJet inv_denom = 1.0 / (1.0 + s);
  JetVec out;
  out.reserve(u.size() + 1);
  out.push_back((1.0 - s) * inv_denom);
  for (const auto& c : u) out.push_back(2.0 * c * inv_denom);
  return out;
}

std::vector<double> tau_map(const std::vector<double>& y) {
  if (y.size() < 2) throw DomainError("tau: need at least two components");
  if (!(y[0] > 0.0)) throw DomainError("tau: first component must be positive");
  if (std::abs(lorentz_inner(y, y) + 1.0) > 1e-10)
    throw DomainError("tau: point is not on the unit hyperboloid");
  std::vector<double> out;
  out.reserve(y.size());
  out.push_back(1.0 / y[0]);
  for (size_t i = 1; i < y.size(); ++i) out.push_back(y[i] / y[0]);
  return out;
}

JetVec tau_map(const JetVec& y) {
  if (y.size() < 2) throw DomainError("tau: need at least two components");
  std::vector<double> vals;
  vals.reserve(y.size());
  for (const auto& c : y) vals.push_back(c.value());
  if (!(vals[0] > 0.0)) throw DomainError("tau: first component must be positive");
  if (std::abs(lorentz_inner(vals, vals) + 1.0) > 1e-10)
    throw DomainError("tau: point is not on the unit hyperboloid");
  ScalarJet inv0 = 1.0 / y[0];
  JetVec out;
  out.reserve(y.size());
  out.push_back(inv0);
  for (size_t i = 1; i < y.size(); ++i) out.push_back(y[i] * inv0);
  return out;
}

}  // namespace moebius
