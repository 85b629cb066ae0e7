#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace moebius {

// Deterministic random source. The engine sequence is fixed by the C++
// standard and the real-valued mappings are hand-rolled here, so streams are
// reproducible across standard libraries, which byte-identical reports need.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  double uniform() {  // in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Halton low-discrepancy sequence, one prime base per dimension, with a
// seed-dependent index offset. Component values lie strictly inside (0, 1).
double halton(uint64_t index, int base);
std::vector<double> halton_point(uint64_t index, int dim, uint64_t seed);

}  // namespace moebius
