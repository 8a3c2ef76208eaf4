#include "kahler/lattice.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "kahler/error.hpp"

namespace kahler {

namespace {

long isqrt(long n) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_args(int m, long lambda_max) {
  if (m < 1) throw DomainError("m must be >= 1");
  if (lambda_max < 0) throw DomainError("lambda_max must be non-negative");
}

// Visits every completion of prefix xi[0..pos) with |xi|^2 <= budget, in lexicographic order.
template <typename Visit>
void visit_ball(std::vector<int>& xi, int pos, long used, long budget, Visit& visit) {
  if (pos == static_cast<int>(xi.size())) {
    visit(xi, used);
    return;
  }
  const long r = isqrt(budget - used);
  for (long x = -r; x <= r; ++x) {
    xi[pos] = static_cast<int>(x);
    visit_ball(xi, pos + 1, used + x * x, budget, visit);
  }
}

// Runs the enumeration split on the first coordinate; slice i covers x_1 = i - R.
template <typename Slice, typename MakeSlice>
std::vector<Slice> for_each_slice(int m, long lambda_max, Execution exec, MakeSlice make) {
  const long r = isqrt(lambda_max);
  const long slices = 2 * r + 1;
  std::vector<Slice> out(static_cast<std::size_t>(slices));
  auto run = [&](long i) {
    std::vector<int> xi(2 * static_cast<std::size_t>(m));
    const long x0 = i - r;
    xi[0] = static_cast<int>(x0);
    out[static_cast<std::size_t>(i)] = make(xi, x0 * x0);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < slices; ++i) run(i);
  } else {
    for (long i = 0; i < slices; ++i) run(i);
  }
  return out;
}

}  // namespace

long LatticePoint::norm2() const {
  long s = 0;
  for (int x : xi) s += static_cast<long>(x) * x;
  return s;
}

double ball_volume(int m, double lambda) {
  return std::pow(std::numbers::pi * lambda, m) / std::tgamma(m + 1.0);
}

std::vector<long> shell_counts(int m, long lambda_max, Execution exec) {
  check_args(m, lambda_max);
  if (ball_volume(m, static_cast<double>(lambda_max)) > kMaxCountedPoints)
    throw ResourceError("lattice count exceeds the guard of " + std::to_string(kMaxCountedPoints) + " points");
  using Counts = std::vector<long>;
  auto slices = for_each_slice<Counts>(
      m, lambda_max, exec, [&](std::vector<int>& xi, long used) {
        Counts counts(static_cast<std::size_t>(lambda_max + 1));
        auto visit = [&counts](const std::vector<int>&, long n2) { ++counts[static_cast<std::size_t>(n2)]; };
        visit_ball(xi, 1, used, lambda_max, visit);
        return counts;
      });
  Counts total(static_cast<std::size_t>(lambda_max + 1), 0);
  for (const auto& s : slices)
    for (std::size_t l = 0; l < total.size(); ++l) total[l] += s[l];
  return total;
}

long count_ball(int m, long lambda_max, Execution exec) {
  const auto counts = shell_counts(m, lambda_max, exec);
  return std::accumulate(counts.begin() + 1, counts.end(), 0L);
}

std::vector<std::vector<LatticePoint>> enumerate_shells(int m, long lambda_max, Execution exec) {
  check_args(m, lambda_max);
  if (ball_volume(m, static_cast<double>(lambda_max)) > kMaxEnumeratedPoints)
    throw ResourceError("lattice enumeration exceeds the guard of " + std::to_string(kMaxEnumeratedPoints) +
                        " points");
  using Points = std::vector<LatticePoint>;
  auto slices = for_each_slice<Points>(
      m, lambda_max, exec, [&](std::vector<int>& xi, long used) {
        Points points;
        auto visit = [&points](const std::vector<int>& v, long) { points.push_back({v}); };
        visit_ball(xi, 1, used, lambda_max, visit);
        return points;
      });
  std::vector<Points> shells(static_cast<std::size_t>(lambda_max + 1));
  for (auto& slice : slices)
    for (auto& p : slice) {
      const auto l = static_cast<std::size_t>(p.norm2());
      shells[l].push_back(std::move(p));
    }
  return shells;
}

}  // namespace kahler
