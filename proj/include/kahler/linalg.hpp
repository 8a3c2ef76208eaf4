#pragma once

#include <vector>

#include "kahler/exterior_algebra.hpp"

namespace kahler::linalg {

/// Eigenvalue gap below which Hermitian eigenvalues are treated as one cluster.
inline constexpr double kClusterGap = 1e-6;
/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankCutoff = 1e-8;

// The rank routines below treat singular values <= cutoff * max(largest, floor) as zero.
// A floor of the operator's natural scale keeps a product that is zero up to round-off from
// being promoted to full rank by a purely relative test.

struct Eigenspace {
  double value = 0.0;  // mean of the clustered eigenvalues
  Matrix basis;        // orthonormal columns
};

/// Eigenspaces of a Hermitian matrix, ascending, clustered with `gap`.
std::vector<Eigenspace> hermitian_eigenspaces(const Matrix& a, double gap = kClusterGap);

/// Orthonormal basis of ker(a); a matrix with zero rows has the full space as kernel.
Matrix null_space(const Matrix& a, double cutoff = kRankCutoff, double floor = 0.0);
/// Orthonormal basis of the column space of a.
Matrix range_basis(const Matrix& a, double cutoff = kRankCutoff, double floor = 0.0);
Eigen::Index numerical_rank(const Matrix& a, double cutoff = kRankCutoff, double floor = 0.0);

/// Orthogonal projector B B^* onto the span of orthonormal columns B (n x n; zero if B is empty).
Matrix projector(const Matrix& basis, Eigen::Index n);

/// B^* A B for orthonormal B.
Matrix compress(const Matrix& a, const Matrix& basis);

double max_abs(const Matrix& a);

/// Hermitian spectral calculus: sum over eigenspaces of sgn(lambda) P_lambda.
Matrix hermitian_sign(const Matrix& a);

}  // namespace kahler::linalg
