#include "cqstat/density_matrix.hpp"

#include <stdexcept>

namespace cqstat {

DensityMatrix::DensityMatrix(Matrix m, int n_atoms, int n_max)
    : m_(std::move(m)), n_atoms_(n_atoms), n_max_(n_max) {
  if (n_atoms_ < 0 || n_atoms_ > 2 || n_max_ < 1) {
    throw std::invalid_argument("DensityMatrix: invalid layout");
  }
  const Index expected = atom_dim() * cavity_dim();
  if (m_.rows() != expected || m_.cols() != expected) {
    throw std::invalid_argument("DensityMatrix: shape does not match layout");
  }
}

DensityMatrix DensityMatrix::from_pure(const Vector& psi, int n_atoms, int n_max) {
  return DensityMatrix(psi * psi.adjoint(), n_atoms, n_max);
}

DensityMatrix DensityMatrix::ground(int n_atoms, int n_max) {
  const Index d = (Index{1} << n_atoms) * (n_max + 1);
  Matrix m = Matrix::Zero(d, d);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), n_atoms, n_max);
}

Complex DensityMatrix::expectation(const Matrix& op) const {
  // Tr(rho op) = sum_ij rho_ij op_ji
  return (m_.transpose().cwiseProduct(op)).sum();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix diff = a - b;
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const Matrix& hermitian) {
  const Matrix herm = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace cqstat
