#include "kahler/linalg.hpp"

#include <algorithm>

#include "kahler/error.hpp"

namespace kahler::linalg {

std::vector<Eigenspace> hermitian_eigenspaces(const Matrix& a, double gap) {
  if (a.rows() != a.cols()) throw DomainError("eigenspaces need a square matrix");
  std::vector<Eigenspace> out;
  if (a.rows() == 0) return out;
  // Symmetrize so round-off in a nominally Hermitian product does not leak into the solver.
  const Matrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  if (solver.info() != Eigen::Success) throw InconsistencyError("Hermitian eigensolver failed");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) > gap) {
      Eigenspace space;
      space.value = values.segment(start, i - start).mean();
      space.basis = vectors.middleCols(start, i - start);
      out.push_back(std::move(space));
      start = i;
    }
  }
  return out;
}

namespace {

Eigen::Index rank_from(const Eigen::VectorXd& sv, double cutoff, double floor) {
  if (sv.size() == 0) return 0;
  const double top = std::max(sv(0), floor);
  if (top == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff * top) ++r;
  return r;
}

}  // namespace

Matrix null_space(const Matrix& a, double cutoff, double floor) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Eigen::Index r = rank_from(svd.singularValues(), cutoff, floor);
  return svd.matrixV().rightCols(n - r);
}

Matrix range_basis(const Matrix& a, double cutoff, double floor) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const Eigen::Index r = rank_from(svd.singularValues(), cutoff, floor);
  return svd.matrixU().leftCols(r);
}

Eigen::Index numerical_rank(const Matrix& a, double cutoff, double floor) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  return rank_from(svd.singularValues(), cutoff, floor);
}

Matrix projector(const Matrix& basis, Eigen::Index n) {
  if (basis.cols() == 0) return Matrix::Zero(n, n);
  if (basis.rows() != n) throw DomainError("basis has the wrong ambient dimension");
  return basis * basis.adjoint();
}

Matrix compress(const Matrix& a, const Matrix& basis) { return basis.adjoint() * a * basis; }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix hermitian_sign(const Matrix& a) {
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (const auto& space : hermitian_eigenspaces(a)) {
    if (std::abs(space.value) <= kClusterGap) continue;
    const double s = space.value > 0 ? 1.0 : -1.0;
    out += s * space.basis * space.basis.adjoint();
  }
  return out;
}

}  // namespace kahler::linalg
