#pragma once

#include <map>
#include <vector>

#include "kahler/superalgebra.hpp"

namespace kahler {

/// Multiplicities of irreducible types: k -> m_k for superalgebra types H_k,
/// or n -> mult(V_n) for sl2 types.
struct MultiplicityTable {
  std::map<int, long> entries;  // only nonzero multiplicities are stored
  long total_dim = 0;

  long operator[](int k) const;
  void add(int k, long count);
  /// sum_k m_k * 4(k+1), the dimension covered when the entries count H_k types.
  long ug_dimension() const;
  /// sum_n mult_n * (n+1), the dimension covered when the entries count V_n types.
  long sl2_dimension() const;

  friend bool operator==(const MultiplicityTable&, const MultiplicityTable&) = default;
};

/// dim H_k = 4(k+1).
inline long ug_type_dim(int k) { return 4L * (k + 1); }

/// Isotypic block of type H_k: orthonormal basis of the Casimir eigenspace at k^2/2 + k.
struct IsotypicBlock {
  int k = 0;
  Matrix basis;
};

struct UgDecomposition {
  MultiplicityTable table;                  // from Casimir eigenspace dimensions
  MultiplicityTable highest_weight_table;   // from ker Lt* ∩ ker a* ∩ ker abar* ∩ {Ht = k}
  std::vector<IsotypicBlock> blocks;        // ascending k
  bool method_agreement = false;
};

/// Decomposes a unitary representation into the types H_k.
/// Throws InconsistencyError if the Casimir spectrum leaves {k^2/2 + k} or the two methods disagree.
UgDecomposition decompose_ug(const AlgebraRep& rep);

/// sl2 decomposition for a triple with [F, E] = Hop and [Hop, E] = -2E (E lowers the Hop-weight):
/// mult(V_n) = dim(ker F ∩ {Hop = n}).
MultiplicityTable decompose_sl2(const Matrix& E, const Matrix& F, const Matrix& Hop, double tol = 1e-9);
MultiplicityTable decompose_sl2(const LinearOp& E, const LinearOp& F, const LinearOp& Hop, double tol = 1e-9);

/// Predicted sl2 content of an H_k block under (L, L*, H): V_{k+1} + 2 V_k + V_{k-1}, times m_k.
MultiplicityTable expected_branching(int k, long m_k);

struct BranchingEntry {
  int k = 0;
  long m_k = 0;
  MultiplicityTable observed;
  MultiplicityTable expected;
  bool pass = false;
};

struct BranchingReport {
  std::vector<BranchingEntry> entries;
  bool all_pass() const;
};

/// Restricts (L, L*, H) to every isotypic block and compares with expected_branching.
BranchingReport verify_branching(const AlgebraRep& rep, const UgDecomposition& decomposition);

struct KernelWeights {
  Matrix basis;              // orthonormal basis of ker L* inside the block
  std::vector<int> weights;  // H-weights of the basis vectors, ascending
};

/// ker L* inside the H_k-isotypic block with its H-weight decomposition.
/// Throws InconsistencyError if the weights differ from {k+1, k, k, k-1} per copy.
KernelWeights highest_weight_vectors_kernel_Lstar(const AlgebraRep& rep, const UgDecomposition& decomposition,
                                                  int k);

/// Closed-form multiplicity of H_k in the model representation:
/// C(2m-2, m-1-k) - C(2m-2, m-3-k).
long model_multiplicity_closed_form(int m, int k);
long binomial(int n, int k);

/// Lagrange polynomial in the Casimir equal to 1 at k^2/2 + k and 0 at the other l <= m.
Matrix casimir_polynomial_projector(const AlgebraRep& rep, int k);

/// Casimir eigenvalue k^2/2 + k of type H_k.
inline double casimir_value(int k) { return 0.5 * k * k + k; }

}  // namespace kahler
