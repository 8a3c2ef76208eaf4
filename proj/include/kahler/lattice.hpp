#pragma once

#include <compare>
#include <vector>

namespace kahler {

enum class Execution { serial, parallel };

/// Fourier mode xi in Z^{2m}, components (x_1, y_1, ..., x_m, y_m).
struct LatticePoint {
  std::vector<int> xi;

  long norm2() const;
  int m() const { return static_cast<int>(xi.size() / 2); }

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Guards: enumeration stores every point, counting only visits them.
inline constexpr double kMaxEnumeratedPoints = 4e6;
inline constexpr double kMaxCountedPoints = 2e8;

/// Volume of the radius-sqrt(lambda) ball in R^{2m}: pi^m lambda^m / m!.
double ball_volume(int m, double lambda);

/// r(lambda) = #{xi in Z^{2m} : |xi|^2 = lambda} for lambda = 0..lambda_max.
std::vector<long> shell_counts(int m, long lambda_max, Execution exec = Execution::parallel);

/// #{xi != 0 : |xi|^2 <= lambda_max}.
long count_ball(int m, long lambda_max, Execution exec = Execution::parallel);

/// Points grouped by shell: result[lambda] lists |xi|^2 = lambda in lexicographic order.
std::vector<std::vector<LatticePoint>> enumerate_shells(int m, long lambda_max,
                                                        Execution exec = Execution::parallel);

}  // namespace kahler
