#pragma once

// Dense and sparse complex linear algebra used to assemble operators and
// Liouvillian superoperators.
//
// Conventions shared by every routine in the library:
//  * density matrices are vectorized by column stacking,
//    vec(rho)[i + D*j] = rho(i, j), so that vec(A rho B) = (B^T kron A) vec(rho);
//  * tensor products are ordered atom 1 (x) atom 2 (x) cavity;
//  * two-level states are indexed |g> = 0, |e> = 1.

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cqstat {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

/// Linear map on vectorized D x D matrices, stored as a sparse D^2 x D^2
/// matrix under the column-stacking convention.
struct SuperOperator {
  SparseMatrix matrix;

  /// Dimension D of the underlying Hilbert space.
  [[nodiscard]] Index dim() const;
  [[nodiscard]] Vector apply(const Vector& vec_rho) const { return matrix * vec_rho; }
  [[nodiscard]] Matrix apply(const Matrix& rho) const;

  SuperOperator& operator+=(const SuperOperator& other);
};

Matrix kron(const Matrix& a, const Matrix& b);
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

Matrix dagger(const Matrix& a);
Matrix identity(Index n);

/// Truncated bosonic annihilation operator on the Fock states |0>..|n_max>.
/// Throws std::invalid_argument for n_max < 1.
Matrix destroy(int n_max);

/// |g><e| for a single two-level system.
Matrix spin_lowering();

/// kron(I, ..., op, ..., I) with `op` placed at `slot` of the tensor layout
/// `dims`. Throws std::invalid_argument on shape mismatch.
Matrix embed(const Matrix& op, std::size_t slot, std::span<const Index> dims);

/// Column-stacking vectorization.
Vector vectorize(const Matrix& rho);
/// Inverse of vectorize(); the length must be a perfect square.
Matrix unvectorize(const Vector& v);

Matrix commutator(const Matrix& a, const Matrix& b);

/// Superoperator of rho -> A rho.
SuperOperator left_multiply(const Matrix& a);
/// Superoperator of rho -> rho B.
SuperOperator right_multiply(const Matrix& b);

/// rho -> -i [H, rho].
SuperOperator hamiltonian_superoperator(const Matrix& h);

/// rho -> (rate/2) (2 c rho c^dagger - c^dagger c rho - rho c^dagger c).
/// Throws std::invalid_argument for a negative rate or non-square c.
SuperOperator lindblad_dissipator(const Matrix& c, double rate);

/// max |A - A^dagger| <= tol * max(max|A|, 1).
bool is_hermitian(const Matrix& a, double tol = 1e-12);

double max_abs(const Matrix& a);

}  // namespace cqstat
