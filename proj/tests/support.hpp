#pragma once

#include <random>

#include "cqstat/operators.hpp"

namespace cqstat::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Matrix random_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(uniform(-1, 1), uniform(-1, 1));
  return m;
}

// Positive, unit-trace.
inline Matrix random_density(Index d) {
  const Matrix a = random_matrix(d, d);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline bool near(const Matrix& a, const Matrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs(Matrix(a - b)) <= tol;
}

}  // namespace cqstat::test
