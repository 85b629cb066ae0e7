#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "moebius/jet.hpp"
#include "moebius/linalg.hpp"

namespace moebius {

using ChartPoint = std::vector<double>;

// Which model space the chart maps into. Sphere and Hyperbolic charts land on
// the radius-r quadric inside their coordinate space; Euclidean charts use the
// coordinates as-is.
enum class Ambient { Sphere, Euclidean, Hyperbolic };

// An analytic chart of an immersed submanifold, evaluated in jet arithmetic.
// The chart function maps m coordinate jets to dim_ambient component jets.
struct ImmersionSpec {
  std::string family;
  std::vector<double> params;
  Ambient ambient = Ambient::Sphere;
  double ambient_radius = 1.0;
  int dim_intrinsic = 0;  // m
  int dim_ambient = 0;    // number of ambient coordinates
  std::vector<std::pair<double, double>> domain;  // open box, one interval per variable
  std::function<JetVec(const JetVec&)> chart;

  Signature signature() const {
    return ambient == Ambient::Hyperbolic ? Signature::Lorentzian
                                          : Signature::Euclidean;
  }
  // dimension of the model space the submanifold lives in
  int model_dim() const {
    return ambient == Ambient::Euclidean ? dim_ambient : dim_ambient - 1;
  }
  int codim() const { return model_dim() - dim_intrinsic; }
};

// Built-in catalog. Families and their parameters:
//   identity         {m}        chart u -> u into R^m
//   circle           {}         unit circle in R^2
//   great-circle     {}         equator of S^2
//   clifford         {}         square torus in S^3, both circle radii 1/sqrt(2)
//   torus            {a, b}     product torus in S^3, a^2 + b^2 = 1
//   ellipse-torus    {a, b}     torus with first circle stretched to an
//                               ellipse, projected radially back to S^3
//   veronese         {}         Veronese surface in S^4
//   small-sphere     {m, r}     round m-sphere of radius r < 1 in S^{m+1}
//   sphere-chart     {r}        round 2-sphere of radius r in Euclidean R^3
//   hyperbolic-plane {}         hyperbolic plane in Lorentzian R^3
//   clifford-general {k, m, r}  minimal S^k x S^{m-k} torus in S^{m+1}(r)
ImmersionSpec make_family(const std::string& name,
                          const std::vector<double>& params = {});
std::vector<std::string> family_names();

void check_point(const ImmersionSpec& spec, const ChartPoint& u);

// Truncated Taylor expansion of the chart map at an interior point.
Jet jet_eval(const ImmersionSpec& spec, const ChartPoint& u, int order);

// Same quantity from central finite differences of chart values, orders 0-2
// only. Test oracle for jet_eval.
Jet fd_crosscheck(const ImmersionSpec& spec, const ChartPoint& u, int order,
                  double step);

// Chart values at a point (degree-0 evaluation).
std::vector<double> chart_values(const ImmersionSpec& spec, const ChartPoint& u);

// Deterministic low-discrepancy sample inside the domain box.
ChartPoint domain_sample(const ImmersionSpec& spec, uint64_t index, uint64_t seed);

// Shared chart builders, also used by the product construction:
// unit k-sphere from k angles (last angle is the azimuth) and unit
// hyperboloid from k parameters (first parameter is radial when k > 1).
JetVec unit_sphere_chart(const JetVec& vars);
JetVec unit_hyperboloid_chart(const JetVec& vars);
std::vector<std::pair<double, double>> sphere_chart_domain(int k);
std::vector<std::pair<double, double>> hyperboloid_chart_domain(int k);

}  // namespace moebius
