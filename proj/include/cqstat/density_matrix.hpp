#pragma once

#include "cqstat/operators.hpp"

namespace cqstat {

/// State on the (atoms) (x) cavity space. n_atoms = 0 denotes a cavity-only
/// state. The layout is carried along so partial traces need no extra
/// arguments.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument if the matrix shape does not match the
  /// layout.
  DensityMatrix(Matrix m, int n_atoms, int n_max);

  static DensityMatrix from_pure(const Vector& psi, int n_atoms, int n_max);
  /// |g..g, 0><g..g, 0|
  static DensityMatrix ground(int n_atoms, int n_max);

  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] int n_atoms() const { return n_atoms_; }
  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] Index dim() const { return m_.rows(); }
  [[nodiscard]] Index cavity_dim() const { return n_max_ + 1; }
  [[nodiscard]] Index atom_dim() const { return Index{1} << n_atoms_; }
  [[nodiscard]] Complex trace() const { return m_.trace(); }

  /// Tr(rho op)
  [[nodiscard]] Complex expectation(const Matrix& op) const;

 private:
  Matrix m_;
  int n_atoms_;
  int n_max_;
};

/// (1/2) sum |eigenvalues(a - b)|
double trace_distance(const Matrix& a, const Matrix& b);

double min_eigenvalue(const Matrix& hermitian);

}  // namespace cqstat
