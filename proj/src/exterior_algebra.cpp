#include "kahler/exterior_algebra.hpp"

#include <bit>
#include <string>

#include "kahler/error.hpp"

namespace kahler {

namespace {

void require_dense(int m) {
  if (m < 1) throw DomainError("m must be >= 1, got " + std::to_string(m));
  if (m > kMaxDenseM)
    throw ResourceError("dense operators limited to m <= " + std::to_string(kMaxDenseM) + ", got " +
                        std::to_string(m));
}

void require_index(int m, int i) {
  if (i < 1 || i > m) throw DomainError("covector index " + std::to_string(i) + " outside 1.." + std::to_string(m));
}

Eigen::Index dense_dim(int m) { return static_cast<Eigen::Index>(basis_dim(m)); }

// Sign of moving a new factor at slot `slot` to its place behind all lower occupied slots.
double insertion_sign(std::size_t state, int slot) {
  const std::size_t below = state & ((std::size_t{1} << slot) - 1);
  return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

// out += (sum_slot coeff[slot] e_slot) ^ in, with slots in interleaved order.
void accumulate_wedge(const std::vector<Complex>& slot_coeffs, const Vector& in, Vector& out) {
  const int slots = static_cast<int>(slot_coeffs.size());
  for (Eigen::Index s = 0; s < in.size(); ++s) {
    const Complex c = in(s);
    if (c == Complex{}) continue;
    const auto state = static_cast<std::size_t>(s);
    for (int slot = 0; slot < slots; ++slot) {
      if (slot_coeffs[slot] == Complex{}) continue;
      const std::size_t bit = std::size_t{1} << slot;
      if (state & bit) continue;
      out(static_cast<Eigen::Index>(state | bit)) += insertion_sign(state, slot) * slot_coeffs[slot] * c;
    }
  }
}

std::vector<Complex> interleave(int m, std::span<const Complex> holo, std::span<const Complex> anti) {
  if (static_cast<int>(holo.size()) != m || static_cast<int>(anti.size()) != m)
    throw DomainError("covector coefficient arrays must have length m");
  std::vector<Complex> slots(2 * static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    slots[2 * j] = holo[j];
    slots[2 * j + 1] = anti[j];
  }
  return slots;
}

LinearOp wedge_slots(int m, const std::vector<Complex>& slots) {
  require_dense(m);
  const Eigen::Index n = dense_dim(m);
  Matrix mat = Matrix::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Vector in = Vector::Zero(n);
    in(col) = 1.0;
    Vector out = Vector::Zero(n);
    accumulate_wedge(slots, in, out);
    mat.col(col) = out;
  }
  return {m, std::move(mat)};
}

}  // namespace

std::size_t basis_dim(int m) {
  if (m < 1) throw DomainError("m must be >= 1, got " + std::to_string(m));
  if (m > kMaxBasisM) throw DomainError("m = " + std::to_string(m) + " overflows the basis dimension");
  return std::size_t{1} << (2 * m);
}

FormIndex FormIndex::from_linear(int m, std::size_t index) {
  if (index >= basis_dim(m)) throw DomainError("monomial index out of range");
  FormIndex f;
  for (int j = 0; j < m; ++j) {
    if (index & (std::size_t{1} << (2 * j))) f.holo |= 1u << j;
    if (index & (std::size_t{1} << (2 * j + 1))) f.anti |= 1u << j;
  }
  return f;
}

std::size_t FormIndex::linear() const {
  std::size_t index = 0;
  for (int j = 0; j < 32; ++j) {
    if (holo & (1u << j)) index |= std::size_t{1} << (2 * j);
    if (anti & (1u << j)) index |= std::size_t{1} << (2 * j + 1);
  }
  return index;
}

int FormIndex::p() const { return std::popcount(holo); }
int FormIndex::q() const { return std::popcount(anti); }

GradedVector::GradedVector(int m, Vector coeffs) : m_(m), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != basis_dim(m))
    throw DomainError("coefficient vector length must be 4^m");
}

GradedVector GradedVector::zero(int m) { return {m, Vector::Zero(dense_dim(m))}; }

GradedVector GradedVector::monomial(int m, FormIndex index, Complex coeff) {
  GradedVector v = zero(m);
  if (index.holo >> m || index.anti >> m) throw DomainError("monomial uses a covector index above m");
  v.coeffs_(static_cast<Eigen::Index>(index.linear())) = coeff;
  return v;
}

Complex GradedVector::inner(const GradedVector& other) const {
  if (other.m_ != m_) throw DomainError("inner product of vectors with different m");
  return coeffs_.dot(other.coeffs_);
}

GradedVector GradedVector::component(int p, int q) const {
  GradedVector out = zero(m_);
  for (Eigen::Index s = 0; s < coeffs_.size(); ++s) {
    const auto f = FormIndex::from_linear(m_, static_cast<std::size_t>(s));
    if (f.p() == p && f.q() == q) out.coeffs_(s) = coeffs_(s);
  }
  return out;
}

LinearOp::LinearOp(int m, Matrix matrix) : m_(m), matrix_(std::move(matrix)) {
  const auto n = dense_dim(m);
  if (matrix_.rows() != n || matrix_.cols() != n) throw DomainError("operator matrix must be 4^m x 4^m");
}

LinearOp LinearOp::identity(int m) {
  require_dense(m);
  return {m, Matrix::Identity(dense_dim(m), dense_dim(m))};
}

LinearOp LinearOp::zero(int m) {
  require_dense(m);
  return {m, Matrix::Zero(dense_dim(m), dense_dim(m))};
}

LinearOp LinearOp::adjoint() const { return {m_, matrix_.adjoint()}; }

GradedVector LinearOp::apply(const GradedVector& v) const {
  if (v.m() != m_) throw DomainError("operator and vector have different m");
  return {m_, matrix_ * v.coeffs()};
}

double LinearOp::max_abs_diff(const LinearOp& other) const {
  if (other.m_ != m_) throw DomainError("comparing operators with different m");
  return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
}

namespace {
void require_same(const LinearOp& a, const LinearOp& b) {
  if (a.m() != b.m()) throw DomainError("operators act on exterior algebras of different m");
}
}  // namespace

LinearOp operator*(const LinearOp& a, const LinearOp& b) {
  require_same(a, b);
  return {a.m_, a.matrix_ * b.matrix_};
}

LinearOp operator+(const LinearOp& a, const LinearOp& b) {
  require_same(a, b);
  return {a.m_, a.matrix_ + b.matrix_};
}

LinearOp operator-(const LinearOp& a, const LinearOp& b) {
  require_same(a, b);
  return {a.m_, a.matrix_ - b.matrix_};
}

LinearOp operator-(const LinearOp& a) { return {a.m_, -a.matrix_}; }

LinearOp operator*(Complex c, const LinearOp& a) { return {a.m_, c * a.matrix_}; }

LinearOp commutator(const LinearOp& a, const LinearOp& b) { return a * b - b * a; }

LinearOp anticommutator(const LinearOp& a, const LinearOp& b) { return a * b + b * a; }

LinearOp wedge_u(int m, int i) {
  require_index(m, i);
  std::vector<Complex> slots(2 * static_cast<std::size_t>(m));
  slots[2 * (i - 1)] = 1.0;
  return wedge_slots(m, slots);
}

LinearOp wedge_ubar(int m, int i) {
  require_index(m, i);
  std::vector<Complex> slots(2 * static_cast<std::size_t>(m));
  slots[2 * (i - 1) + 1] = 1.0;
  return wedge_slots(m, slots);
}

LinearOp wedge_covector(int m, std::span<const Complex> holo, std::span<const Complex> anti) {
  return wedge_slots(m, interleave(m, holo, anti));
}

LinearOp interior(const LinearOp& a) { return a.adjoint(); }

LinearOp bidegree_projector(int m, int p, int q) {
  require_dense(m);
  if (p < 0 || p > m || q < 0 || q > m) throw DomainError("bidegree outside 0..m");
  const Eigen::Index n = dense_dim(m);
  Matrix mat = Matrix::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto f = FormIndex::from_linear(m, static_cast<std::size_t>(s));
    if (f.p() == p && f.q() == q) mat(s, s) = 1.0;
  }
  return {m, std::move(mat)};
}

LinearOp degree_projector(int m, int r) {
  if (r < 0 || r > 2 * m) throw DomainError("total degree outside 0..2m");
  LinearOp out = LinearOp::zero(m);
  for (int p = 0; p <= m; ++p) {
    const int q = r - p;
    if (q >= 0 && q <= m) out = out + bidegree_projector(m, p, q);
  }
  return out;
}

LinearOp induced_fiber_unitary(const Matrix& u) {
  const int m = static_cast<int>(u.rows());
  require_dense(m);
  if (u.cols() != m) throw DomainError("unitary must be square");
  // Image of each slot's 1-form, in interleaved slot coordinates.
  std::vector<std::vector<Complex>> images(2 * static_cast<std::size_t>(m),
                                           std::vector<Complex>(2 * static_cast<std::size_t>(m)));
  for (int j = 0; j < m; ++j) {
    for (int a = 0; a < m; ++a) {
      images[2 * j][2 * a] = u(a, j);
      images[2 * j + 1][2 * a + 1] = std::conj(u(a, j));
    }
  }
  const Eigen::Index n = dense_dim(m);
  Matrix mat(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Vector v = Vector::Zero(n);
    v(0) = 1.0;
    // e_S = f_{s1} ^ (f_{s2} ^ ( ... ^ 1)), applied from the highest slot down.
    for (int slot = 2 * m - 1; slot >= 0; --slot) {
      if (!(static_cast<std::size_t>(col) & (std::size_t{1} << slot))) continue;
      Vector next = Vector::Zero(n);
      accumulate_wedge(images[slot], v, next);
      v = std::move(next);
    }
    mat.col(col) = v;
  }
  return {m, std::move(mat)};
}

BasisBlock BasisBlock::full(int m) {
  BasisBlock b{m, {}};
  const auto n = basis_dim(m);
  b.monomials.reserve(n);
  for (std::size_t s = 0; s < n; ++s) b.monomials.push_back(s);
  return b;
}

BasisBlock BasisBlock::bidegree(int m, int p, int q) {
  if (p < 0 || p > m || q < 0 || q > m) throw DomainError("bidegree outside 0..m");
  BasisBlock b{m, {}};
  for (std::size_t s = 0; s < basis_dim(m); ++s) {
    const auto f = FormIndex::from_linear(m, s);
    if (f.p() == p && f.q() == q) b.monomials.push_back(s);
  }
  return b;
}

BasisBlock BasisBlock::antiholomorphic(int m) {
  BasisBlock b{m, {}};
  for (std::size_t s = 0; s < basis_dim(m); ++s)
    if (FormIndex::from_linear(m, s).holo == 0) b.monomials.push_back(s);
  return b;
}

Matrix BasisBlock::embedding() const {
  Matrix e = Matrix::Zero(dense_dim(m), size());
  for (Eigen::Index c = 0; c < size(); ++c) e(static_cast<Eigen::Index>(monomials[c]), c) = 1.0;
  return e;
}

Matrix BasisBlock::compress(const Matrix& full) const {
  Matrix out(size(), size());
  for (Eigen::Index r = 0; r < size(); ++r)
    for (Eigen::Index c = 0; c < size(); ++c)
      out(r, c) = full(static_cast<Eigen::Index>(monomials[r]), static_cast<Eigen::Index>(monomials[c]));
  return out;
}

Matrix BasisBlock::extend(const Matrix& block) const {
  if (block.rows() != size() || block.cols() != size()) throw DomainError("block operator has wrong size");
  const Eigen::Index n = dense_dim(m);
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < size(); ++r)
    for (Eigen::Index c = 0; c < size(); ++c)
      out(static_cast<Eigen::Index>(monomials[r]), static_cast<Eigen::Index>(monomials[c])) = block(r, c);
  return out;
}

}  // namespace kahler
