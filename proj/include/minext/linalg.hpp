#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "minext/errors.hpp"

namespace minext {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};
inline constexpr const char* kLibraryVersion = "0.1.0";

/// Column-major flattening of a matrix.
inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

/// Columns are the flattened elements of `basis`.
CMatrix basis_matrix(const std::vector<CMatrix>& basis);

/// Orthonormal basis of the column span (rank-revealing).
CMatrix orthonormal_columns(const CMatrix& m, double rank_tol = 1e-12);

/// Largest residual of the columns of `vectors` after least-squares
/// projection onto the column span of `span`, relative to max(1, column norm).
/// An empty span means the residual is the column norm itself.
double projection_residual(const CMatrix& vectors, const CMatrix& span);

/// Largest principal angle between two subspaces of equal dimension.
double subspace_angle(const CMatrix& a, const CMatrix& b);

/// Smallest eigenvalue of a Hermitian matrix (closed form up to 2x2).
double lambda_min_hermitian(const CMatrix& m);

/// True if m is symmetric (m == m^T) within `tol` entrywise.
bool is_symmetric(const CMatrix& m, double tol = 1e-12);

bool all_finite(const CMatrix& m);

/// Smallest k >= 1 with ||X^k||_F < tol * ||X||_F^k, or 0 if none exists
/// within dim steps. k = 1 means X itself is (numerically) zero.
int nilpotency_order(const CMatrix& x, double tol = 1e-12);

/// Exact polynomial exponential I + X + ... + X^{k-1}/(k-1)! of a nilpotent
/// matrix. Throws NotNilpotentError if no power of X vanishes.
CMatrix nilpotent_exp(const CMatrix& x);

/// Exact polynomial logarithm of I + N with N nilpotent.
CMatrix nilpotent_log(const CMatrix& g);

}  // namespace minext
