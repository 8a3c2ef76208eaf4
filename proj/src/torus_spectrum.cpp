#include "kahler/torus_spectrum.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "kahler/error.hpp"

namespace kahler {

std::vector<EigenvalueRecord> enumerate_eigenvalues(int m, long lambda_max, Execution exec) {
  if (lambda_max < 1) throw DomainError("lambda_max must be >= 1");
  auto shells = enumerate_shells(m, lambda_max, exec);
  std::vector<EigenvalueRecord> records;
  for (long l = 1; l <= lambda_max; ++l) {
    auto& shell = shells[static_cast<std::size_t>(l)];
    if (shell.empty()) continue;
    records.push_back({l, std::move(shell), {}});
  }
  return records;
}

std::vector<Complex> holomorphic_part(std::span<const double> xi) {
  if (xi.size() % 2 != 0 || xi.empty()) throw DomainError("covector must have even length 2m");
  const std::size_t m = xi.size() / 2;
  std::vector<Complex> alpha(m);
  for (std::size_t j = 0; j < m; ++j) alpha[j] = Complex{xi[2 * j], -xi[2 * j + 1]} / std::numbers::sqrt2;
  return alpha;
}

AlgebraRep build_fiber_action(std::span<const double> xi) {
  const int m = static_cast<int>(xi.size() / 2);
  double norm2 = 0.0;
  for (double x : xi) norm2 += x * x;
  if (norm2 == 0.0) throw DomainError("xi = 0 labels the harmonic fiber");
  const std::vector<Complex> alpha = holomorphic_part(xi);
  std::vector<Complex> alpha_bar(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) alpha_bar[j] = std::conj(alpha[j]);
  const std::vector<Complex> none(alpha.size());
  const Complex scale = kI * std::numbers::sqrt2 / std::sqrt(norm2);
  return complete_rep(lefschetz(m), scale * wedge_covector(m, alpha, none), scale * wedge_covector(m, none, alpha_bar));
}

AlgebraRep build_fiber_action(const LatticePoint& xi) {
  std::vector<double> real(xi.xi.begin(), xi.xi.end());
  return build_fiber_action(real);
}

void attach_fiber_tables(std::vector<EigenvalueRecord>& records, Execution exec) {
  struct Slot {
    std::size_t record;
    std::size_t point;
  };
  std::vector<Slot> slots;
  for (std::size_t r = 0; r < records.size(); ++r) {
    records[r].fiber_tables.assign(records[r].points.size(), {});
    for (std::size_t p = 0; p < records[r].points.size(); ++p) slots.push_back({r, p});
  }
  const auto n = static_cast<long>(slots.size());
  auto work = [&](long i) {
    const auto [r, p] = slots[static_cast<std::size_t>(i)];
    records[r].fiber_tables[p] = decompose_ug(build_fiber_action(records[r].points[p])).table;
  };
  if (exec == Execution::parallel) {
    // Exceptions must not escape the parallel region; the first one is rethrown afterwards.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      try {
        work(i);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long i = 0; i < n; ++i) work(i);
  }
}

MultiplicityTable multiplicity_profile(const EigenvalueRecord& record) {
  std::vector<MultiplicityTable> computed;
  const std::vector<MultiplicityTable>* tables = &record.fiber_tables;
  if (record.fiber_tables.size() != record.points.size()) {
    for (const auto& p : record.points) computed.push_back(decompose_ug(build_fiber_action(p)).table);
    tables = &computed;
  }
  MultiplicityTable out;
  for (std::size_t p = 0; p < tables->size(); ++p) {
    const auto& t = (*tables)[p];
    if (t != tables->front())
      throw InconsistencyError("fibers of eigenvalue " + std::to_string(record.lambda) +
                               " decompose differently: rotation invariance broken");
    for (const auto& [k, mk] : t.entries) out.add(k, mk);
    out.total_dim += t.total_dim;
  }
  return out;
}

std::vector<CesaroRow> cesaro_series(int m, const std::vector<EigenvalueRecord>& records,
                                     const std::vector<MultiplicityTable>& profiles) {
  if (records.size() != profiles.size()) throw DomainError("one profile per record required");
  const long fiber_dim = static_cast<long>(basis_dim(m));
  std::vector<long> sums(static_cast<std::size_t>(m + 1), 0);
  long n_cumulative = 0;
  std::vector<CesaroRow> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    n_cumulative += fiber_dim * records[i].r();
    for (int k = 0; k <= m; ++k) sums[static_cast<std::size_t>(k)] += profiles[i][k];
    CesaroRow row{records[i].lambda, n_cumulative, {}};
    for (long s : sums) row.ratio.push_back(static_cast<double>(s) / static_cast<double>(n_cumulative));
    out.push_back(std::move(row));
  }
  return out;
}

double cesaro_ratio(int m, long lambda_max, int k, Execution exec) {
  if (k < 0) throw DomainError("type index k must be non-negative");
  if (k > m) return 0.0;
  auto records = enumerate_eigenvalues(m, lambda_max, exec);
  if (records.empty()) throw DomainError("no nonzero eigenvalue below lambda_max");
  attach_fiber_tables(records, exec);
  std::vector<MultiplicityTable> profiles;
  for (const auto& r : records) profiles.push_back(multiplicity_profile(r));
  return cesaro_series(m, records, profiles).back().ratio[static_cast<std::size_t>(k)];
}

WeylResult weyl_check(int m, long lambda_max, Execution exec) {
  if (lambda_max < 25) throw DomainError("Weyl check needs lambda_max >= 25");
  const double fiber_dim = static_cast<double>(basis_dim(m));
  WeylResult w;
  w.measured = fiber_dim * static_cast<double>(count_ball(m, lambda_max, exec));
  w.predicted = fiber_dim * ball_volume(m, static_cast<double>(lambda_max));
  w.rel_error = std::abs(w.measured - w.predicted) / w.predicted;
  return w;
}

TorusRun run_torus(int m, long lambda_max, Execution exec) {
  TorusRun run;
  run.m = m;
  run.lambda_max = lambda_max;
  run.model_table = decompose_ug(build_model_rep(m)).table;
  run.records = enumerate_eigenvalues(m, lambda_max, exec);
  attach_fiber_tables(run.records, exec);
  for (const auto& r : run.records) run.profiles.push_back(multiplicity_profile(r));
  run.series = cesaro_series(m, run.records, run.profiles);
  const double fiber_dim = static_cast<double>(basis_dim(m));
  for (int k = 0; k <= m; ++k) {
    run.cesaro.push_back(run.series.empty() ? 0.0 : run.series.back().ratio[static_cast<std::size_t>(k)]);
    run.predicted.push_back(static_cast<double>(run.model_table[k]) / fiber_dim);
  }
  if (lambda_max >= 25) run.weyl = weyl_check(m, lambda_max, exec);
  return run;
}

}  // namespace kahler
