#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kahler/lattice.hpp"
#include "kahler/rep_theory.hpp"

namespace kahler {

/// Eigenvalue lambda of the form Laplacian on the flat torus C^m / (2 pi Z)^{2m}.
/// The eigenspace is the sum over |xi|^2 = lambda of e^{i<xi,x>} (x) (exterior algebra).
struct EigenvalueRecord {
  long lambda = 0;
  std::vector<LatticePoint> points;
  std::vector<MultiplicityTable> fiber_tables;  // one per point once attached

  long r() const { return static_cast<long>(points.size()); }
};

/// Nonzero eigenvalues up to lambda_max, ascending, with lattice points in lexicographic order.
std::vector<EigenvalueRecord> enumerate_eigenvalues(int m, long lambda_max, Execution exec = Execution::parallel);

/// Holomorphic coefficients of xi^{1,0} in the orthonormal basis: (x_j - i y_j) / sqrt(2).
std::vector<Complex> holomorphic_part(std::span<const double> xi);

/// The superalgebra acting on the Fourier mode of a real covector xi != 0:
/// a = (i sqrt2 / |xi|) xi^{1,0} ^, abar = (i sqrt2 / |xi|) xi^{0,1} ^, with the model L.
AlgebraRep build_fiber_action(std::span<const double> xi);
AlgebraRep build_fiber_action(const LatticePoint& xi);

/// Decomposes every fiber of every record (parallel over all points).
void attach_fiber_tables(std::vector<EigenvalueRecord>& records, Execution exec = Execution::parallel);

/// m_k(lambda) summed over the lattice points of the record; attaches fiber tables if missing.
/// Throws InconsistencyError if two fibers of the record decompose differently.
MultiplicityTable multiplicity_profile(const EigenvalueRecord& record);

struct CesaroRow {
  long lambda = 0;
  long n_cumulative = 0;      // N(lambda) = 4^m * sum of r over eigenvalues <= lambda
  std::vector<double> ratio;  // ratio[k] = sum m_k(lambda_j) / N(lambda), k = 0..m
};

/// Cumulative multiplicity ratios after each eigenvalue.
std::vector<CesaroRow> cesaro_series(int m, const std::vector<EigenvalueRecord>& records,
                                     const std::vector<MultiplicityTable>& profiles);

/// (1 / N(lambda_max)) sum_{lambda_j <= lambda_max} m_k(lambda_j).
double cesaro_ratio(int m, long lambda_max, int k, Execution exec = Execution::parallel);

struct WeylResult {
  double measured = 0.0;   // N(lambda_max) = 4^m #{xi != 0 : |xi|^2 <= lambda_max}
  double predicted = 0.0;  // 4^m pi^m lambda_max^m / m!
  double rel_error = 0.0;
};

WeylResult weyl_check(int m, long lambda_max, Execution exec = Execution::parallel);

/// Everything one torus run reports.
struct TorusRun {
  int m = 0;
  long lambda_max = 0;
  MultiplicityTable model_table;
  std::vector<EigenvalueRecord> records;
  std::vector<MultiplicityTable> profiles;
  std::vector<CesaroRow> series;
  std::vector<double> cesaro;     // final ratio per k
  std::vector<double> predicted;  // m_k(model) / 4^m per k
  std::optional<WeylResult> weyl;  // only when lambda_max >= 25
};

TorusRun run_torus(int m, long lambda_max, Execution exec = Execution::parallel);

}  // namespace kahler
