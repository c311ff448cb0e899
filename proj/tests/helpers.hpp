#pragma once

#include <random>
#include <vector>

#include "qdmaps/qdmaps.hpp"

namespace testutil {

using qdmaps::Complex;
using qdmaps::ComplexMatrix;

inline ComplexMatrix random_matrix(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex(dist(rng), dist(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937& rng, std::size_t n) {
  const ComplexMatrix m = random_matrix(rng, n);
  return 0.5 * (m + m.dagger());
}

inline ComplexMatrix random_state(std::mt19937& rng) {
  const ComplexMatrix m = random_matrix(rng, 2);
  ComplexMatrix rho = m * m.dagger();
  return (1.0 / rho.trace().real()) * rho;
}

/// Generic parameter sets for all seven families.  Map-level operations are
/// regular on [0, 3] for all of these; only the RTN generator has a pole in
/// that window (near t = 1.57), which rate-level tests steer around.
inline std::vector<qdmaps::ChannelFamily> family_matrix() {
  return {qdmaps::Oun(0.6, 2.0),        qdmaps::Pln(0.6, 1.0),
          qdmaps::ModOun(1.0, 0.3, 1.5), qdmaps::Rtn(0.6, 0.3),
          qdmaps::Ad(1.0),              qdmaps::Nmad(0.3, 1.0),
          qdmaps::Enm{}};
}

inline std::vector<qdmaps::ChannelFamily> dephasing_matrix() {
  return {qdmaps::Oun(0.6, 2.0), qdmaps::Pln(0.6, 1.0), qdmaps::ModOun(1.0, 0.3, 1.5),
          qdmaps::Rtn(0.6, 0.3)};
}

}  // namespace testutil
