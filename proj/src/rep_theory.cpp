#include "kahler/rep_theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kahler/error.hpp"
#include "kahler/linalg.hpp"

namespace kahler {

namespace {

constexpr double kIntegerTol = 1e-6;
// Generators of the model and fiber representations have entries of order one.
constexpr double kOperatorScale = 1.0;

int nearest_integer(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > kIntegerTol)
    throw DomainError(std::string(what) + " has a non-integer eigenvalue " + std::to_string(x));
  return static_cast<int>(r);
}

int casimir_type(double c) {
  if (c < -kIntegerTol) throw InconsistencyError("negative Casimir eigenvalue " + std::to_string(c));
  // c = k^2/2 + k  <=>  k = sqrt(1 + 2c) - 1
  const double k = std::sqrt(1.0 + 2.0 * std::max(c, 0.0)) - 1.0;
  const int kr = static_cast<int>(std::round(k));
  if (std::abs(casimir_value(kr) - c) > kIntegerTol)
    throw InconsistencyError("Casimir eigenvalue " + std::to_string(c) + " is not of the form k^2/2 + k");
  return kr;
}

}  // namespace

long MultiplicityTable::operator[](int k) const {
  const auto it = entries.find(k);
  return it == entries.end() ? 0 : it->second;
}

void MultiplicityTable::add(int k, long count) {
  if (count == 0) return;
  entries[k] += count;
}

long MultiplicityTable::ug_dimension() const {
  long d = 0;
  for (const auto& [k, mk] : entries) d += mk * ug_type_dim(k);
  return d;
}

long MultiplicityTable::sl2_dimension() const {
  long d = 0;
  for (const auto& [n, mult] : entries) d += mult * (n + 1);
  return d;
}

UgDecomposition decompose_ug(const AlgebraRep& rep) {
  UgDecomposition out;
  const long dim = rep.casimir.dim();
  out.table.total_dim = dim;
  out.highest_weight_table.total_dim = dim;

  for (auto& space : linalg::hermitian_eigenspaces(rep.casimir.matrix())) {
    const int k = casimir_type(space.value);
    const long d = space.basis.cols();
    if (d % ug_type_dim(k) != 0)
      throw InconsistencyError("Casimir eigenspace of type H_" + std::to_string(k) + " has dimension " +
                               std::to_string(d) + ", not a multiple of " + std::to_string(ug_type_dim(k)));
    out.table.add(k, d / ug_type_dim(k));
    out.blocks.push_back({k, std::move(space.basis)});
  }

  // Highest-weight route: one vector h_k (x) 1 per copy of H_k.
  const Eigen::Index n = rep.Lt.dim();
  Matrix lowering(3 * n, n);
  lowering << rep.Ltstar.matrix(), rep.astar.matrix(), rep.abarstar.matrix();
  for (const auto& space : linalg::hermitian_eigenspaces(rep.Ht.matrix())) {
    const int weight = nearest_integer(space.value, "H_t");
    const long count = linalg::null_space(lowering * space.basis, linalg::kRankCutoff, kOperatorScale).cols();
    out.highest_weight_table.add(weight, count);
  }

  out.method_agreement = out.table == out.highest_weight_table;
  if (!out.method_agreement)
    throw InconsistencyError("Casimir and highest-weight decompositions disagree");
  if (out.table.ug_dimension() != dim)
    throw InconsistencyError("multiplicities do not account for the full dimension");
  return out;
}

MultiplicityTable decompose_sl2(const Matrix& E, const Matrix& F, const Matrix& Hop, double tol) {
  const Eigen::Index d = Hop.rows();
  if (E.rows() != d || E.cols() != d || F.rows() != d || F.cols() != d || Hop.cols() != d)
    throw DomainError("sl2 triple must consist of square matrices of equal size");
  MultiplicityTable out;
  out.total_dim = d;
  if (d == 0) return out;

  const double scale = std::max({1.0, linalg::max_abs(E), linalg::max_abs(F), linalg::max_abs(Hop)});
  if (linalg::max_abs(F * E - E * F - Hop) > tol * scale * scale)
    throw DomainError("[F, E] != H: not an sl2 triple");
  if (linalg::max_abs(Hop * E - E * Hop + 2.0 * E) > tol * scale * scale)
    throw DomainError("[H, E] != -2E: not an sl2 triple");

  for (const auto& space : linalg::hermitian_eigenspaces(Hop)) {
    const int weight = nearest_integer(space.value, "sl2 weight operator");
    const long count = linalg::null_space(F * space.basis, linalg::kRankCutoff, scale).cols();
    if (count == 0) continue;
    if (weight < 0) throw InconsistencyError("highest-weight vector of negative weight");
    out.add(weight, count);
  }
  if (out.sl2_dimension() != d)
    throw InconsistencyError("sl2 multiplicities cover " + std::to_string(out.sl2_dimension()) + " of " +
                             std::to_string(d) + " dimensions");
  return out;
}

MultiplicityTable decompose_sl2(const LinearOp& E, const LinearOp& F, const LinearOp& Hop, double tol) {
  return decompose_sl2(E.matrix(), F.matrix(), Hop.matrix(), tol);
}

MultiplicityTable expected_branching(int k, long m_k) {
  MultiplicityTable t;
  t.add(k + 1, m_k);
  t.add(k, 2 * m_k);
  if (k >= 1) t.add(k - 1, m_k);
  t.total_dim = m_k * ug_type_dim(k);
  return t;
}

bool BranchingReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

BranchingReport verify_branching(const AlgebraRep& rep, const UgDecomposition& decomposition) {
  BranchingReport report;
  for (const auto& block : decomposition.blocks) {
    BranchingEntry entry;
    entry.k = block.k;
    entry.m_k = decomposition.table[block.k];
    entry.observed = decompose_sl2(linalg::compress(rep.L.matrix(), block.basis),
                                   linalg::compress(rep.Lstar.matrix(), block.basis),
                                   linalg::compress(rep.H.matrix(), block.basis));
    entry.expected = expected_branching(block.k, entry.m_k);
    entry.pass = entry.observed == entry.expected;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

KernelWeights highest_weight_vectors_kernel_Lstar(const AlgebraRep& rep, const UgDecomposition& decomposition,
                                                  int k) {
  const auto it = std::find_if(decomposition.blocks.begin(), decomposition.blocks.end(),
                               [k](const auto& b) { return b.k == k; });
  if (it == decomposition.blocks.end()) throw DomainError("type H_" + std::to_string(k) + " does not occur");
  const Matrix& block = it->basis;
  const Matrix lstar = linalg::compress(rep.Lstar.matrix(), block);
  const Matrix h = linalg::compress(rep.H.matrix(), block);

  KernelWeights out;
  std::vector<Matrix> pieces;
  for (const auto& space : linalg::hermitian_eigenspaces(h)) {
    const int weight = nearest_integer(space.value, "H");
    const Matrix kernel = linalg::null_space(lstar * space.basis, linalg::kRankCutoff, kOperatorScale);
    if (kernel.cols() == 0) continue;
    pieces.push_back(block * space.basis * kernel);
    out.weights.insert(out.weights.end(), kernel.cols(), weight);
  }
  Eigen::Index cols = 0;
  for (const auto& p : pieces) cols += p.cols();
  out.basis.resize(block.rows(), cols);
  Eigen::Index at = 0;
  for (const auto& p : pieces) {
    out.basis.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  std::sort(out.weights.begin(), out.weights.end());

  const long copies = decomposition.table[k];
  std::vector<int> expected;
  for (long c = 0; c < copies; ++c) {
    expected.insert(expected.end(), {k + 1, k, k});
    if (k >= 1) expected.push_back(k - 1);
  }
  std::sort(expected.begin(), expected.end());
  if (expected != out.weights)
    throw InconsistencyError("ker L* weights in the H_" + std::to_string(k) + " block disagree with the branching");
  return out;
}

long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long model_multiplicity_closed_form(int m, int k) {
  if (m < 1 || k < 0) return 0;
  return binomial(2 * m - 2, m - 1 - k) - binomial(2 * m - 2, m - 3 - k);
}

Matrix casimir_polynomial_projector(const AlgebraRep& rep, int k) {
  const Matrix& c = rep.casimir.matrix();
  const Eigen::Index n = c.rows();
  Matrix out = Matrix::Identity(n, n);
  const Matrix id = Matrix::Identity(n, n);
  for (int l = 0; l <= rep.m; ++l) {
    if (l == k) continue;
    out = out * (c - casimir_value(l) * id) / (casimir_value(k) - casimir_value(l));
  }
  return out;
}

}  // namespace kahler
