#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kahler {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest m for which 4^m x 4^m dense operators are materialized (1024 x 1024).
inline constexpr int kMaxDenseM = 5;
/// Largest m whose basis dimension 4^m is representable without overflow.
inline constexpr int kMaxBasisM = 31;

/// Dimension 4^m of the full exterior algebra over C^{2m}.
std::size_t basis_dim(int m);

/// Basis monomial u_S ^ ubar_T of the exterior algebra.
///
/// Factors are ordered u_1 < ubar_1 < u_2 < ubar_2 < ...; the linear index
/// interleaves the two masks, so bit 2j is u_{j+1} and bit 2j+1 is ubar_{j+1}.
struct FormIndex {
  std::uint32_t holo = 0;
  std::uint32_t anti = 0;

  static FormIndex from_linear(int m, std::size_t index);
  std::size_t linear() const;
  int p() const;
  int q() const;

  friend bool operator==(const FormIndex&, const FormIndex&) = default;
};

/// Coefficient vector over the monomial basis of the exterior algebra over C^{2m}.
class GradedVector {
 public:
  GradedVector(int m, Vector coeffs);

  static GradedVector zero(int m);
  static GradedVector monomial(int m, FormIndex index, Complex coeff = 1.0);

  int m() const { return m_; }
  const Vector& coeffs() const { return coeffs_; }
  Complex operator[](FormIndex index) const { return coeffs_(static_cast<Eigen::Index>(index.linear())); }

  double norm2() const { return coeffs_.squaredNorm(); }
  Complex inner(const GradedVector& other) const;
  /// Component in bidegree (p, q); zero elsewhere.
  GradedVector component(int p, int q) const;

 private:
  int m_;
  Vector coeffs_;
};

/// Dense complex operator on the exterior algebra over C^{2m}.
class LinearOp {
 public:
  LinearOp(int m, Matrix matrix);

  static LinearOp identity(int m);
  static LinearOp zero(int m);

  int m() const { return m_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  LinearOp adjoint() const;
  GradedVector apply(const GradedVector& v) const;
  double max_abs_diff(const LinearOp& other) const;

  friend LinearOp operator*(const LinearOp& a, const LinearOp& b);
  friend LinearOp operator+(const LinearOp& a, const LinearOp& b);
  friend LinearOp operator-(const LinearOp& a, const LinearOp& b);
  friend LinearOp operator-(const LinearOp& a);
  friend LinearOp operator*(Complex c, const LinearOp& a);
  friend LinearOp operator*(const LinearOp& a, Complex c) { return c * a; }

 private:
  int m_;
  Matrix matrix_;
};

LinearOp commutator(const LinearOp& a, const LinearOp& b);
LinearOp anticommutator(const LinearOp& a, const LinearOp& b);

/// Exterior multiplication by u_i = w_i / sqrt(2), 1 <= i <= m.
LinearOp wedge_u(int m, int i);
/// Exterior multiplication by ubar_i = wbar_i / sqrt(2), 1 <= i <= m.
LinearOp wedge_ubar(int m, int i);
/// Exterior multiplication by the 1-form sum_j holo[j] u_j + anti[j] ubar_j.
LinearOp wedge_covector(int m, std::span<const Complex> holo, std::span<const Complex> anti);
/// Metric adjoint; the monomial basis is orthonormal so this is the conjugate transpose.
LinearOp interior(const LinearOp& a);

/// Diagonal 0/1 projector onto the span of monomials of bidegree (p, q).
LinearOp bidegree_projector(int m, int p, int q);
/// Projector onto total degree r, the sum of bidegree projectors with p + q = r.
LinearOp degree_projector(int m, int r);

/// Unitary induced on the exterior algebra by U in U(m): u_j transforms by U, ubar_j by conj(U).
LinearOp induced_fiber_unitary(const Matrix& u);

/// Ordered subset of monomials spanning a coordinate subspace (for example all (0,q)-forms).
struct BasisBlock {
  int m = 0;
  std::vector<std::size_t> monomials;

  static BasisBlock full(int m);
  static BasisBlock bidegree(int m, int p, int q);
  /// The antiholomorphic forms, the fiber of the spinor bundle of the Dolbeault Dirac operator.
  static BasisBlock antiholomorphic(int m);

  Eigen::Index size() const { return static_cast<Eigen::Index>(monomials.size()); }
  /// Isometric embedding of the block into the full exterior algebra (4^m x size).
  Matrix embedding() const;
  /// Compression P A P^* of a full-space operator to the block.
  Matrix compress(const Matrix& full) const;
  /// Extends a block operator by zero to the full exterior algebra.
  Matrix extend(const Matrix& block) const;
};

}  // namespace kahler
