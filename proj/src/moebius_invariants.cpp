#include "moebius/moebius_invariants.hpp"

#include <cmath>

#include "moebius/errors.hpp"

namespace moebius {

namespace {

Matrix values_of(const JetMatrix& g) {
  Matrix v(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) v(i, j) = g(i, j).value();
  return v;
}

double partial1(const ScalarJet& f, int var) {
  std::vector<int> a(f.table()->dim(), 0);
  a[var] = 1;
  return f.partial(a);
}

double partial2(const ScalarJet& f, int v1, int v2) {
  std::vector<int> a(f.table()->dim(), 0);
  a[v1] += 1;
  a[v2] += 1;
  return f.partial(a);
}

// Induced metric at u from a first-order jet pass, cheap enough to run
// before every full analysis.
Matrix metric_value(const ImmersionSpec& spec, const ChartPoint& u) {
  int m = spec.dim_intrinsic;
  auto tab = MultiIndexTable::get(m, 1);
  JetVec vars(m);
  for (int a = 0; a < m; ++a) vars[a] = ScalarJet::variable(tab, a, u[a]);
  JetVec x = spec.chart(vars);
  int n = static_cast<int>(x.size());
  Signature sig = spec.signature();
  MatrixT<double> dx(m, n);
  std::vector<int> alpha(m, 0);
  for (int a = 0; a < m; ++a) {
    alpha[a] = 1;
    for (int c = 0; c < n; ++c) dx(a, c) = x[c].partial(alpha);
    alpha[a] = 0;
  }
  Matrix g(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double s = dx(a, 0) * dx(b, 0);
      if (sig == Signature::Lorentzian) s = -s;
      for (int c = 1; c < n; ++c) s += dx(a, c) * dx(b, c);
      g(a, b) = s;
    }
  return g;
}

// g = L L^T for a small SPD matrix; false when a pivot is not safely
// positive.
bool cholesky(const Matrix& g, Matrix& L) {
  int m = g.rows();
  L = Matrix(m, m);
  double scale = 0.0;
  for (int a = 0; a < m; ++a) scale = std::max(scale, std::fabs(g(a, a)));
  if (scale <= 0.0) return false;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      double s = g(a, b);
      for (int k = 0; k < b; ++k) s -= L(a, k) * L(b, k);
      if (a == b) {
        if (s <= 1e-14 * scale) return false;
        L(a, a) = std::sqrt(s);
      } else {
        L(a, b) = s / L(b, b);
      }
    }
  return true;
}

// Solves L^T S = I for upper triangular S, so S^T g S = I.
Matrix inverse_transpose_lower(const Matrix& L) {
  int m = L.rows();
  Matrix S(m, m);
  for (int j = 0; j < m; ++j) {
    S(j, j) = 1.0 / L(j, j);
    for (int i = j - 1; i >= 0; --i) {
      double s = 0.0;
      for (int k = i + 1; k <= j; ++k) s += L(k, i) * S(k, j);
      S(i, j) = -s / L(i, i);
    }
  }
  return S;
}

// Same immersion in the affine chart variables u0 + S v, evaluated near
// v = 0. The caller has already validated u0 against the original domain.
ImmersionSpec recentered(const ImmersionSpec& spec, const ChartPoint& u0,
                         const Matrix& S) {
  ImmersionSpec out = spec;
  auto base = spec.chart;
  int m = spec.dim_intrinsic;
  out.domain.assign(m, {-1.0, 1.0});
  std::vector<double> c = u0;
  out.chart = [base, c, S, m](const JetVec& vars) {
    auto tab = vars[0].table();
    JetVec w;
    w.reserve(m);
    for (int a = 0; a < m; ++a) {
      ScalarJet acc = ScalarJet::constant(tab, c[a]);
      for (int b = 0; b < m; ++b) acc += S(a, b) * vars[b];
      w.push_back(acc);
    }
    return base(w);
  };
  return out;
}

}  // namespace

MoebiusField compute_moebius_field(const EuclideanField& eu, double umb_eps) {
  if (eu.spec.ambient != Ambient::Sphere ||
      std::abs(eu.spec.ambient_radius - 1.0) > 1e-12)
    throw ConfigError("conformal invariants need a unit-sphere chart");
  if (eu.m < 2) throw ConfigError("conformal invariants need dimension >= 2");

  MoebiusField f;
  f.eu = eu;
  int m = eu.m, p = eu.p;
  ScalarJet zero = ScalarJet::constant(eu.tab, 0.0);

  ScalarJet h2 = zero, H2 = zero;
  for (int al = 0; al < p; ++al) {
    H2 += eu.meanH[al] * eu.meanH[al];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) h2 += eu.h_frame[al](i, j) * eu.h_frame[al](i, j);
  }
  ScalarJet w = h2 - static_cast<double>(m) * H2;
  if (w.value() <= umb_eps)
    throw UmbilicError("umbilic point: the trace-free second fundamental form vanishes",
                       eu.base);
  ScalarJet rho2 = (m / (m - 1.0)) * w;
  f.rho = sqrt(rho2);
  f.log_rho = 0.5 * log(rho2);

  f.gM = JetMatrix(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) f.gM(a, b) = rho2 * eu.gE(a, b);
  f.gammaM = christoffel_jets(f.gM);

  ScalarJet inv_rho = 1.0 / f.rho;
  ScalarJet inv_rho2 = 1.0 / rho2;
  f.frameM = JetMatrix(m, m);
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a) f.frameM(k, a) = inv_rho * eu.frame_coeff(k, a);

  // Gradient and metric Hessian of log rho, in coordinates then in the frame.
  JetVec dlr;
  dlr.reserve(m);
  for (int a = 0; a < m; ++a) dlr.push_back(f.log_rho.derivative(a));
  JetMatrix hess(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      ScalarJet v = dlr[a].derivative(b);
      for (int c = 0; c < m; ++c) v -= eu.gammaE(c, a, b) * dlr[c];
      hess(a, b) = v;
      hess(b, a) = v;
    }
  ScalarJet grad2 = zero;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) grad2 += eu.gE_inv(a, b) * dlr[a] * dlr[b];

  JetVec elr(m, zero);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a <= i; ++a) elr[i] += eu.frame_coeff(i, a) * dlr[a];
  JetMatrix hessF(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      ScalarJet acc = zero;
      for (int a = 0; a <= i; ++a)
        for (int b = 0; b <= j; ++b)
          acc += eu.frame_coeff(i, a) * eu.frame_coeff(j, b) * hess(a, b);
      hessF(i, j) = acc;
      hessF(j, i) = acc;
    }

  f.A = JetMatrix(m, m);
  ScalarJet common = 0.5 * (inv_rho2 * (grad2 - 1.0 + H2));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      ScalarJet v = hessF(i, j) - elr[i] * elr[j];
      for (int al = 0; al < p; ++al) v -= eu.meanH[al] * eu.h_frame[al](i, j);
      v = -(inv_rho2 * v);
      if (i == j) v -= common;
      f.A(i, j) = v;
      f.A(j, i) = v;
    }

  f.B.assign(p, JetMatrix(m, m));
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        ScalarJet v = eu.h_frame[al](i, j);
        if (i == j) v -= eu.meanH[al];
        v = inv_rho * v;
        f.B[al](i, j) = v;
        f.B[al](j, i) = v;
      }

  f.C = JetMatrix(p, m);
  for (int al = 0; al < p; ++al) {
    JetVec dH;
    dH.reserve(m);
    for (int a = 0; a < m; ++a) dH.push_back(eu.meanH[al].derivative(a));
    for (int i = 0; i < m; ++i) {
      // derivative of H^alpha along e_i in the normal connection
      ScalarJet v = zero;
      for (int a = 0; a <= i; ++a) v += eu.frame_coeff(i, a) * dH[a];
      for (int be = 0; be < p; ++be) {
        ScalarJet conn = zero;
        for (int a = 0; a <= i; ++a)
          conn += eu.frame_coeff(i, a) * eu.omegaN(be, al, a);
        v += eu.meanH[be] * conn;
      }
      for (int j = 0; j < m; ++j) {
        ScalarJet t = eu.h_frame[al](i, j);
        if (i == j) t -= eu.meanH[al];
        v += t * elr[j];
      }
      f.C(al, i) = -(inv_rho2 * v);
    }
  }

  return f;
}

MoebiusAnalysis analyze_field(const MoebiusField& f) {
  const EuclideanField& eu = f.eu;
  int m = eu.m, p = eu.p;
  MoebiusAnalysis a;
  a.point = eu.base;
  a.m = m;
  a.p = p;
  a.rho = f.rho.value();
  a.gM = values_of(f.gM);
  a.A = values_of(f.A);
  a.B.reserve(p);
  for (const auto& b : f.B) a.B.push_back(values_of(b));
  a.C = values_of(f.C);

  a.eig = jacobi_eigenvalues(a.A);
  for (int i = 0; i < m; ++i) a.trA += a.A(i, i);
  a.trB.assign(p, 0.0);
  for (int al = 0; al < p; ++al) {
    for (int i = 0; i < m; ++i) a.trB[al] += a.B[al](i, i);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a.B_norm_sq += a.B[al](i, j) * a.B[al](i, j);
  }
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < m; ++i) a.C_frob += a.C(al, i) * a.C(al, i);
  a.C_frob = std::sqrt(a.C_frob);

  // Frame coefficient values and their coordinate derivatives.
  Matrix Fm = values_of(f.frameM);
  std::vector<Matrix> dFm(m, Matrix(m, m));
  for (int b = 0; b < m; ++b)
    for (int k = 0; k < m; ++k)
      for (int aa = 0; aa < m; ++aa) dFm[b](k, aa) = partial1(f.frameM(k, aa), b);
  Tensor3 GM(m, m, m);
  for (int c = 0; c < m; ++c)
    for (int aa = 0; aa < m; ++aa)
      for (int b = 0; b < m; ++b) GM(c, aa, b) = f.gammaM(c, aa, b).value();

  // Levi-Civita connection coefficients in the frame, gamma(l,i,k) being the
  // E_l component of the derivative of E_i along E_k. Metric compatibility
  // makes them antisymmetric in (l,i); enforced after a sanity check.
  Tensor3 gam(m, m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      std::vector<double> v(m, 0.0);
      for (int aa = 0; aa < m; ++aa) {
        double t = 0.0;
        for (int b = 0; b < m; ++b) t += Fm(k, b) * dFm[b](i, aa);
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c) t += Fm(k, b) * Fm(i, c) * GM(aa, b, c);
        v[aa] = t;
      }
      for (int l = 0; l < m; ++l) {
        double t = 0.0;
        for (int aa = 0; aa < m; ++aa)
          for (int b = 0; b < m; ++b) t += v[aa] * a.gM(aa, b) * Fm(l, b);
        gam(l, i, k) = t;
      }
    }
  double gscale = 0.0;
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) gscale = std::max(gscale, std::abs(gam(l, i, k)));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (int i = 0; i <= l; ++i) {
        double s = gam(l, i, k) + gam(i, l, k);
        if (std::abs(s) > 1e-6 * (1.0 + gscale))
          throw ConsistencyError("frame connection lost antisymmetry");
        double val = 0.5 * (gam(l, i, k) - gam(i, l, k));
        gam(l, i, k) = val;
        gam(i, l, k) = -val;
      }

  // Normal connection evaluated on the frame.
  Tensor3 wn(p, p, m);  // (alpha,beta,k)
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be)
      for (int k = 0; k < m; ++k) {
        double t = 0.0;
        for (int aa = 0; aa < m; ++aa)
          t += Fm(k, aa) * eu.omegaN(be, al, aa).value();
        wn(al, be, k) = t;
      }

  auto Ek = [&](const ScalarJet& fn, int k) {
    double t = 0.0;
    for (int aa = 0; aa < m; ++aa) t += Fm(k, aa) * partial1(fn, aa);
    return t;
  };

  a.A_cov = Tensor3(m, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double t = Ek(f.A(i, j), k);
        for (int l = 0; l < m; ++l)
          t -= a.A(l, j) * gam(l, i, k) + a.A(i, l) * gam(l, j, k);
        a.A_cov(i, j, k) = t;
        a.gradA_max = std::max(a.gradA_max, std::abs(t));
        a.gradA_frob += t * t;
      }
  a.gradA_frob = std::sqrt(a.gradA_frob);

  a.B_cov.assign(p, Tensor3(m, m, m));
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          double t = Ek(f.B[al](i, j), k);
          for (int l = 0; l < m; ++l)
            t -= a.B[al](l, j) * gam(l, i, k) + a.B[al](i, l) * gam(l, j, k);
          for (int be = 0; be < p; ++be) t += a.B[be](i, j) * wn(al, be, k);
          a.B_cov[al](i, j, k) = t;
        }

  a.C_cov = Tensor3(p, m, m);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double t = Ek(f.C(al, i), j);
        for (int l = 0; l < m; ++l) t -= a.C(al, l) * gam(l, i, j);
        for (int be = 0; be < p; ++be) t += a.C(be, i) * wn(al, be, j);
        a.C_cov(al, i, j) = t;
      }

  // Curvature of the conformal metric, pushed into the frame one index at a
  // time.
  CurvatureData cd = induced_curvature(f.gM);
  Tensor4 t1(m, m, m, m), t2(m, m, m, m), t3(m, m, m, m);
  a.riemann = Tensor4(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          double t = 0.0;
          for (int aa = 0; aa < m; ++aa) t += Fm(i, aa) * cd.riemann(aa, b, c, d);
          t1(i, b, c, d) = t;
        }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          double t = 0.0;
          for (int b = 0; b < m; ++b) t += Fm(j, b) * t1(i, b, c, d);
          t2(i, j, c, d) = t;
        }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int d = 0; d < m; ++d) {
          double t = 0.0;
          for (int c = 0; c < m; ++c) t += Fm(k, c) * t2(i, j, c, d);
          t3(i, j, k, d) = t;
        }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double t = 0.0;
          for (int d = 0; d < m; ++d) t += Fm(l, d) * t3(i, j, k, d);
          a.riemann(i, j, k, l) = t;
        }

  a.ricci = Matrix(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double t = 0.0;
      for (int i = 0; i < m; ++i) t += a.riemann(i, j, k, i);
      a.ricci(j, k) = t;
    }
  a.scalar = 0.0;
  for (int j = 0; j < m; ++j) a.scalar += a.ricci(j, j);
  a.kappa = a.scalar / (m * (m - 1.0));

  // Curvature of the normal connection, first in coordinates then framed.
  a.normal_curv = Tensor4(p, p, m, m);
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be) {
      Matrix Fc(m, m);
      for (int aa = 0; aa < m; ++aa)
        for (int b = 0; b < m; ++b) {
          double t = partial1(eu.omegaN(al, be, b), aa) -
                     partial1(eu.omegaN(al, be, aa), b);
          for (int ga = 0; ga < p; ++ga)
            t += eu.omegaN(ga, be, aa).value() * eu.omegaN(al, ga, b).value() -
                 eu.omegaN(ga, be, b).value() * eu.omegaN(al, ga, aa).value();
          Fc(aa, b) = t;
        }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double t = 0.0;
          for (int aa = 0; aa < m; ++aa)
            for (int b = 0; b < m; ++b) t += Fm(i, aa) * Fm(j, b) * Fc(aa, b);
          a.normal_curv(al, be, i, j) = t;
        }
    }

  // Light-cone lift, its Laplacian under the conformal metric, and the dual
  // lift, with the residuals of the defining relations.
  int NA = eu.n_amb;
  JetVec Yj;
  Yj.reserve(NA + 1);
  Yj.push_back(f.rho);
  for (int c = 0; c < NA; ++c) Yj.push_back(f.rho * eu.x[c]);

  a.Y.resize(NA + 1);
  for (int c = 0; c <= NA; ++c) a.Y[c] = Yj[c].value();
  a.dY.assign(m, std::vector<double>(NA + 1));
  for (int aa = 0; aa < m; ++aa)
    for (int c = 0; c <= NA; ++c) a.dY[aa][c] = partial1(Yj[c], aa);

  ScalarJet cone = inner(Signature::Lorentzian, Yj, Yj);
  a.cone_resid = max_coeff_diff(cone, ScalarJet::constant(eu.tab, 0.0));

  std::vector<std::vector<double>> gmv(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gmv[i][j] = a.gM(i, j);
  auto gMinv = invert_matrix(gmv, 0.0, 1.0);

  a.lapY.assign(NA + 1, 0.0);
  for (int c = 0; c <= NA; ++c) {
    double acc = 0.0;
    for (int aa = 0; aa < m; ++aa)
      for (int b = 0; b < m; ++b) {
        double second = partial2(Yj[c], aa, b);
        for (int d = 0; d < m; ++d) second -= GM(d, aa, b) * partial1(Yj[c], d);
        acc += gMinv[aa][b] * second;
      }
    a.lapY[c] = acc;
  }

  double lap_norm = lorentz_inner(a.lapY, a.lapY);
  a.N.resize(NA + 1);
  for (int c = 0; c <= NA; ++c)
    a.N[c] = -a.lapY[c] / m - lap_norm / (2.0 * m * m) * a.Y[c];

  a.lap_y_y_resid = std::abs(lorentz_inner(a.lapY, a.Y) + m);
  for (int aa = 0; aa < m; ++aa)
    a.lap_y_dy_resid =
        std::max(a.lap_y_dy_resid, std::abs(lorentz_inner(a.lapY, a.dY[aa])));
  a.lap_y_norm_resid = std::abs(lap_norm - (1.0 + m * m * a.kappa));
  a.lift_nn_resid = std::abs(lorentz_inner(a.N, a.N));
  a.lift_yn_resid = std::abs(lorentz_inner(a.Y, a.N) - 1.0);

  return a;
}

MoebiusAnalysis analyze_point(const ImmersionSpec& spec, const ChartPoint& u,
                              int order, double umb_eps) {
  // Analyze in chart variables rescaled so the induced metric starts at the
  // identity. A strong Moebius motion can compress the original variables by
  // an order of magnitude, and the frame recursions then divide by the small
  // metric once per derivative order, growing roundoff in the top jet
  // coefficients geometrically. The rescaling removes that amplification and
  // leaves every frame-valued output unchanged.
  check_point(spec, u);
  ImmersionSpec local = spec;
  ChartPoint at = u;
  Matrix L;
  if (cholesky(metric_value(spec, u), L)) {
    local = recentered(spec, u, inverse_transpose_lower(L));
    at = ChartPoint(spec.dim_intrinsic, 0.0);
  }
  EuclideanField eu = compute_euclidean_field(local, at, order);
  try {
    MoebiusAnalysis a = analyze_field(compute_moebius_field(eu, umb_eps));
    a.point = u;
    return a;
  } catch (const UmbilicError& e) {
    throw UmbilicError(e.what(), u);
  }
}

ImmersionSpec apply_lorentz(const LorentzTransform& T, const ImmersionSpec& spec) {
  if (spec.ambient != Ambient::Sphere ||
      std::abs(spec.ambient_radius - 1.0) > 1e-12)
    throw ConfigError("lorentz conjugation needs a unit-sphere chart");
  if (T.dim() != spec.dim_ambient + 1)
    throw ConfigError("lorentz transform dimension does not match the chart");
  T.validate();

  ImmersionSpec out = spec;
  out.family = spec.family + "+lorentz";
  Matrix M = T.mat;
  auto base = spec.chart;
  int N = spec.dim_ambient;
  out.chart = [M, base, N](const JetVec& vars) {
    JetVec x = base(vars);
    auto tab = x[0].table();
    ScalarJet zero = ScalarJet::constant(tab, 0.0);
    JetVec w;
    w.reserve(N + 1);
    w.push_back(ScalarJet::constant(tab, 1.0));
    for (int c = 0; c < N; ++c) w.push_back(x[c]);
    JetVec wp(N + 1, zero);
    for (int r = 0; r <= N; ++r) {
      ScalarJet acc = zero;
      for (int c = 0; c <= N; ++c) acc += M(r, c) * w[c];
      wp[r] = acc;
    }
    if (wp[0].value() <= 1e-10)
      throw ConeViolationError("transformed lift left the forward light cone");
    ScalarJet inv0 = 1.0 / wp[0];
    JetVec out_x;
    out_x.reserve(N);
    for (int r = 1; r <= N; ++r) out_x.push_back(wp[r] * inv0);
    return out_x;
  };
  return out;
}

}  // namespace moebius
