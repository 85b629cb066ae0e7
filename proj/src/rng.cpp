#include "moebius/rng.hpp"

#include "moebius/errors.hpp"

namespace moebius {

namespace {
constexpr int kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
}

double halton(uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::vector<double> halton_point(uint64_t index, int dim, uint64_t seed) {
  if (dim < 1 || dim > 16) throw ConfigError("halton: unsupported dimension");
  std::vector<double> out(dim);
  uint64_t offset = (seed * 2654435761u) % 8192;
  for (int d = 0; d < dim; ++d) out[d] = halton(index + offset + 1, kBases[d]);
  return out;
}

}  // namespace moebius
