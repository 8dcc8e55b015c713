#include "cqstat/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace cqstat {

namespace {

SparseMatrix to_sparse(const Matrix& m) {
  SparseMatrix s = m.sparseView();
  s.makeCompressed();
  return s;
}

SparseMatrix sparse_identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

}  // namespace

Index SuperOperator::dim() const {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
  return d;
}

Matrix SuperOperator::apply(const Matrix& rho) const {
  return unvectorize(matrix * vectorize(rho));
}

SuperOperator& SuperOperator::operator+=(const SuperOperator& other) {
  if (matrix.size() == 0) {
    matrix = other.matrix;
  } else {
    matrix += other.matrix;
  }
  return *this;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

Matrix dagger(const Matrix& a) { return a.adjoint(); }

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix destroy(int n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("destroy: n_max must be >= 1");
  }
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Matrix spin_lowering() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Matrix embed(const Matrix& op, std::size_t slot, std::span<const Index> dims) {
  if (slot >= dims.size()) {
    throw std::invalid_argument("embed: slot out of range");
  }
  if (op.rows() != dims[slot] || op.cols() != dims[slot]) {
    throw std::invalid_argument("embed: operator shape does not match dims[slot]");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    out = kron(out, k == slot ? op : identity(dims[k]));
  }
  return out;
}

Vector vectorize(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("vectorize: matrix must be square");
  }
  // Eigen storage is column-major, so the raw buffer is already vec(rho).
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size() || d == 0) {
    throw std::invalid_argument("unvectorize: length is not a perfect square");
  }
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

SuperOperator left_multiply(const Matrix& a) {
  require_square(a, "left_multiply");
  return {kron(sparse_identity(a.rows()), to_sparse(a))};
}

SuperOperator right_multiply(const Matrix& b) {
  require_square(b, "right_multiply");
  return {kron(to_sparse(b.transpose()), sparse_identity(b.rows()))};
}

SuperOperator hamiltonian_superoperator(const Matrix& h) {
  const Complex minus_i(0.0, -1.0);
  SparseMatrix m = left_multiply(h).matrix - right_multiply(h).matrix;
  m *= minus_i;
  m.prune(Complex(0.0));
  return {m};
}

SuperOperator lindblad_dissipator(const Matrix& c, double rate) {
  require_square(c, "lindblad_dissipator");
  if (!(rate >= 0.0)) {
    throw std::invalid_argument("lindblad_dissipator: rate must be non-negative");
  }
  const Index d = c.rows();
  SparseMatrix out(d * d, d * d);
  if (rate == 0.0) {
    return {out};
  }
  const Matrix cdc = c.adjoint() * c;
  // vec(c rho c^dagger) = (conj(c) kron c) vec(rho)
  out = 2.0 * kron(to_sparse(c.conjugate()), to_sparse(c));
  out -= left_multiply(cdc).matrix;
  out -= right_multiply(cdc).matrix;
  out *= 0.5 * rate;
  out.prune(Complex(0.0));
  return {out};
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) {
    return false;
  }
  return max_abs(a - a.adjoint()) <= tol * max_abs(a);
}

}  // namespace cqstat
