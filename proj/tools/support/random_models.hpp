#pragma once

#include <random>

#include "nhkubo/linalg.hpp"

namespace nhkubo::tools {

inline ComplexMatrix random_complex(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix a = random_complex(rng, n);
  return 0.5 * (a + a.adjoint());
}

// h0 + i Gamma with Gamma <= 0: admissible for Standard at any gamma >= 0.
inline ComplexMatrix random_dissipative(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix b = random_complex(rng, n, 0.4);
  return random_hermitian(rng, n) - kI * (b * b.adjoint());
}

// S D S^{-1} with real, well separated D: pseudo-Hermitian with a real spectrum.
inline ComplexMatrix random_pseudo_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = -1.5 + 1.5 * static_cast<double>(i) + u(rng);
  ComplexMatrix s = ComplexMatrix::Identity(n, n) + random_complex(rng, n, 0.3);
  return s * d.asDiagonal() * s.inverse();
}

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace nhkubo::tools
