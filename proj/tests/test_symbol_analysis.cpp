#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "kahler/error.hpp"
#include "kahler/linalg.hpp"
#include "kahler/symbol_analysis.hpp"
#include "oracle.hpp"

using namespace kahler;

namespace {

Matrix to_matrix(const oracle::Dense& d) {
  Matrix out(static_cast<Eigen::Index>(d.n), static_cast<Eigen::Index>(d.cols));
  for (std::size_t r = 0; r < d.n; ++r)
    for (std::size_t c = 0; c < d.cols; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d(r, c);
  return out;
}

Matrix random_unitary(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix z(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) z(i, j) = Complex{g(rng), g(rng)};
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ();
}

double rank_of(const Matrix& projector) { return projector.trace().real(); }

const CommutantEntry& entry(const std::vector<CommutantEntry>& survey, const std::string& name) {
  const auto it = std::find_if(survey.begin(), survey.end(), [&](const auto& e) { return e.subspace == name; });
  REQUIRE_MESSAGE(it != survey.end(), name);
  return *it;
}

bool all_pass(const std::vector<NamedCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

}  // namespace

TEST_CASE("fiber points") {
  CHECK_THROWS_AS(FiberPoint::unit({1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(FiberPoint::unit({1.0}), DomainError);
  const auto e = FiberPoint::e1(2);
  CHECK(e.xi() == std::vector<double>{1, 0, 0, 0});
  CHECK(std::abs(e.holomorphic()[0] - Complex{1.0 / std::numbers::sqrt2}) < 1e-16);
  const auto y = FiberPoint::unit({0.0, 1.0});
  CHECK(std::abs(y.holomorphic()[0] - Complex{0.0, -1.0 / std::numbers::sqrt2}) < 1e-16);
}

TEST_CASE("Dolbeault symbols at e_1 are scaled wedges by u_1 and ubar_1") {
  for (int m = 1; m <= 3; ++m) {
    const auto d = symbol_dolbeault(FiberPoint::e1(m));
    const Complex c{0.0, 1.0 / std::numbers::sqrt2};
    CHECK(linalg::max_abs(d.del.op - c * to_matrix(oracle::wedge_u(m, 1))) <= 1e-15);
    CHECK(linalg::max_abs(d.delbar.op - c * to_matrix(oracle::wedge_ubar(m, 1))) <= 1e-15);
  }
  // xi = dy_1: xi^{1,0} = -i u_1 / sqrt2
  const auto d = symbol_dolbeault(FiberPoint::unit({0.0, 1.0}));
  CHECK(linalg::max_abs(d.del.op - (1.0 / std::numbers::sqrt2) * to_matrix(oracle::wedge_u(1, 1))) <= 1e-15);
  CHECK(linalg::max_abs(d.delbar.op + (1.0 / std::numbers::sqrt2) * to_matrix(oracle::wedge_ubar(1, 1))) <= 1e-15);
}

TEST_CASE("the Lt symbol at e_1 is the model Lt") {
  for (int m = 1; m <= 3; ++m)
    CHECK(linalg::max_abs(symbol_Lt(FiberPoint::e1(m)).op - to_matrix(oracle::model(m).Lt)) <= 1e-14);
}

TEST_CASE("range projections on small examples") {
  const auto e = FiberPoint::e1(1);
  const Matrix p00 = bidegree_projector(1, 0, 0).matrix();
  CHECK(linalg::max_abs(symbol_P(2, e).op - p00) <= 1e-15);
  CHECK(linalg::max_abs(symbol_P(1, e).op - bidegree_projector(1, 1, 1).matrix()) <= 1e-15);
  CHECK(rank_of(symbol_P(3, e).op) == doctest::Approx(1.0));
  CHECK(rank_of(symbol_P(4, e).op) == doctest::Approx(1.0));
  CHECK_THROWS_AS(symbol_P(5, e), DomainError);

  const auto e2 = FiberPoint::e1(2);
  const Matrix b11 = bidegree_projector(2, 1, 1).matrix();
  double sum = 0.0;
  for (int i = 1; i <= 4; ++i) sum += rank_of(b11 * symbol_P(i, e2).op);
  CHECK(sum == doctest::Approx(4.0));
}

TEST_CASE("Lefschetz pieces of the symbol") {
  const auto e = FiberPoint::e1(1);
  CHECK(linalg::max_abs(symbol_P_pqk(0, 0, 0, e).op - bidegree_projector(1, 0, 0).matrix()) <= 1e-14);
  CHECK(linalg::max_abs(symbol_P_pqk(1, 1, 0, e).op - bidegree_projector(1, 1, 1).matrix()) <= 1e-14);
  CHECK(std::abs(rank_of(symbol_P_pqk(1, 1, 1, e).op)) <= 1e-12);
  CHECK_THROWS_AS(symbol_P_pqk(1, 0, 1, e), DomainError);
  CHECK_THROWS_AS(symbol_P_pqk(2, 0, 0, e), DomainError);
  // m = 2, (1,1): Lt 1 = i u_2 ubar_2 spans the k = 1 piece
  const auto e2 = FiberPoint::e1(2);
  CHECK(rank_of(symbol_P_pqk(1, 1, 1, e2).op) == doctest::Approx(1.0));
  CHECK(rank_of(symbol_P_pqk(1, 1, 0, e2).op) == doctest::Approx(3.0));
}

TEST_CASE("projection checks pass at e_1 and at random fibers") {
  std::mt19937_64 rng(5);
  for (int m = 1; m <= 3; ++m) {
    CHECK(all_pass(projection_checks(FiberPoint::e1(m), 1e-10)));
    CHECK(all_pass(projection_checks(FiberPoint::random(m, rng), 1e-10)));
  }
  const auto fibers = certification_fibers(2, 20240611, 3);
  CHECK(fibers.size() == 4);
  const auto serial = certify_checks(fibers, CheckFamily::projections, 1e-10, Execution::serial);
  const auto parallel = certify_checks(fibers, CheckFamily::projections, 1e-10, Execution::parallel);
  CHECK(all_pass(serial));
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t c = 0; c < serial.size(); ++c) CHECK(serial[c].residual == parallel[c].residual);
}

TEST_CASE("symbols are equivariant under U(m)") {
  std::mt19937_64 rng(3);
  for (int m = 1; m <= 3; ++m) {
    const auto xi = FiberPoint::random(m, rng);
    const Matrix u = random_unitary(m, rng);
    const Matrix g = induced_fiber_unitary(u).matrix();
    const auto eta = rotate_fiber(xi, u);
    CHECK(linalg::max_abs(symbol_Lt(eta).op - g * symbol_Lt(xi).op * g.adjoint()) <= 1e-12);
    for (int i = 1; i <= 4; ++i)
      CHECK(linalg::max_abs(symbol_P(i, eta).op - g * symbol_P(i, xi).op * g.adjoint()) <= 1e-12);
    CHECK(linalg::max_abs(symbol_P_pqk(1, 1, 1, eta).op - g * symbol_P_pqk(1, 1, 1, xi).op * g.adjoint()) <= 1e-10);
    const auto block = BasisBlock::antiholomorphic(m);
    const Matrix gb = block.compress(g);
    CHECK(linalg::max_abs(symbol_dirac(eta).op - gb * symbol_dirac(xi).op * gb.adjoint()) <= 1e-12);
  }
}

TEST_CASE("derivation action is the derivative of the induced unitary") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const int m = 3;
  Matrix x(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = Complex{g(rng), g(rng)};
  const Matrix a = x - x.adjoint();
  const Matrix id = Matrix::Identity(m, m);
  const double t = 1e-5;
  // Cayley transform: unitary with derivative A at t = 0.
  auto cayley = [&](double s) -> Matrix { return (id - 0.5 * s * a).inverse() * (id + 0.5 * s * a); };
  const Matrix fd =
      (induced_fiber_unitary(cayley(t)).matrix() - induced_fiber_unitary(cayley(-t)).matrix()) / (2.0 * t);
  CHECK(linalg::max_abs(fd - derivation_action(a)) <= 1e-7);
  CHECK(unitary_stabilizer_generators(1).empty());
  CHECK(unitary_stabilizer_generators(3).size() == 4);
}

TEST_CASE("commutants of the stabilizer action") {
  // m = 2: (1,0) = span{u_1, u_2} carries two distinct U(1) weights.
  const auto s2 = commutant_survey(2);
  const auto& lit = entry(s2, "ker Lt* on (1,0)");
  CHECK(lit.dim == 2);
  CHECK(lit.commutant == 2);
  CHECK_FALSE(lit.expected_irreducible);
  for (const auto& e : s2) {
    INFO(e.subspace);
    if (e.expected_irreducible && e.dim > 0) CHECK(e.commutant == 1);
  }
  CHECK(entry(s2, "ker Lt* on (1,1)").commutant > 1);
  CHECK(entry(s2, "Rg s_delbar on (0,1)").dim == 1);
  CHECK(entry(s2, "Rg s_delbar* on (0,1)").dim == 1);

  const auto s3 = commutant_survey(3);
  CHECK(entry(s3, "ker Lt* on (1,1)").commutant == 4);
  for (const auto& e : s3)
    if (e.expected_irreducible && e.dim > 0) CHECK(e.commutant == 1);

  // the line through u_1 + u_2 is not invariant
  Vector v = Vector::Zero(16);
  v(1) = 1.0;  // u_1
  v(4) = 1.0;  // u_2
  v.normalize();
  CHECK_THROWS_AS(commutant_dim(v * v.adjoint(), 2), InconsistencyError);
  CHECK(commutant_dim(Matrix::Zero(16, 16), 2) == 0);
}

TEST_CASE("Dirac symbol spectrum and the Pi_k") {
  for (int m = 1; m <= 3; ++m) {
    const auto e = FiberPoint::e1(m);
    const auto spaces = linalg::hermitian_eigenspaces(symbol_dirac(e).op);
    REQUIRE(spaces.size() == 2);
    const long half = 1L << (m - 1);
    CHECK(spaces[0].value == doctest::Approx(-1.0));
    CHECK(spaces[1].value == doctest::Approx(1.0));
    CHECK(spaces[0].basis.cols() == half);
    CHECK(spaces[1].basis.cols() == half);
    for (int k = 1; k <= m; ++k)
      CHECK(rank_of(symbol_Pi_k(k, e).op) == doctest::Approx(2.0 * oracle::binom(m - 1, k - 1)));
    CHECK(all_pass(dirac_checks(e, 1e-10)));
  }
  const auto e1 = FiberPoint::e1(1);
  CHECK(linalg::max_abs(symbol_Pi_k(1, e1).op - Matrix::Identity(2, 2)) <= 1e-15);
  CHECK_THROWS_AS(symbol_Pi_k(0, e1), DomainError);
  CHECK(rank_of(dolbeault_summand(e1, 0, true)) == 0.0);
  CHECK(rank_of(dolbeault_summand(e1, 1, false)) == 0.0);
}

TEST_CASE("Dirac states on probes") {
  const auto e = FiberPoint::e1(2);
  const auto pi1 = symbol_Pi_k(1, e);
  const auto rep = evaluate_states(e, pi1);
  CHECK(rep.states_valid);
  REQUIRE(rep.omega_plus_k.size() == 2);
  CHECK(std::abs(rep.omega_plus_k[0] - Complex{1.0}) <= 1e-12);
  CHECK(std::abs(rep.omega_plus_k[1]) <= 1e-12);
  CHECK(std::abs(rep.omega_minus_k[0] - Complex{1.0}) <= 1e-12);
  CHECK(std::abs(*rep.omega_tr - Complex{0.5}) <= 1e-12);
  CHECK(rep.decomposition_residual <= 1e-12);

  const auto sign = evaluate_states(e, symbol_sign_dirac(e));
  CHECK(std::abs(*sign.omega_plus - Complex{1.0}) <= 1e-12);
  CHECK(std::abs(*sign.omega_minus + Complex{1.0}) <= 1e-12);
  CHECK(std::abs(*sign.omega_tr) <= 1e-12);
}

TEST_CASE("projection states on a bidegree") {
  const auto e = FiberPoint::e1(2);
  const auto block = BasisBlock::bidegree(2, 1, 1);
  const SymbolOp id{Matrix::Identity(4, 4), block};
  const auto rep = evaluate_states(e, id);
  CHECK(rep.states_valid);
  CHECK(std::abs(*rep.omega_tr - Complex{1.0}) <= 1e-12);
  double inverse_sum = 0.0;
  for (const auto& p : rep.projection) {
    CHECK(std::abs(p.value - Complex{1.0}) <= 1e-12);
    inverse_sum += 1.0 / p.c_P;
  }
  CHECK(inverse_sum == doctest::Approx(1.0));
  const auto states = projection_states(0, 0, FiberPoint::e1(1));
  REQUIRE(states.size() == 1);
  CHECK(states[0].i == 2);
  CHECK(states[0].c_P == doctest::Approx(1.0));
  CHECK_THROWS_AS(evaluate_states(e, SymbolOp{Matrix::Identity(16, 16), BasisBlock::full(2)}), DomainError);
}

TEST_CASE("normalizations do not depend on the fiber") {
  for (int m = 1; m <= 3; ++m) {
    const auto checks = certify_normalizations(certification_fibers(m, 20240611, 4));
    CHECK_FALSE(checks.empty());
    for (const auto& c : checks) {
      INFO(c.name);
      CHECK(c.pass);
    }
    for (int k = 1; k <= m; ++k) {
      const auto it = std::find_if(checks.begin(), checks.end(),
                                   [&](const auto& c) { return c.name == "c_" + std::to_string(k) + " for omega_+"; });
      REQUIRE(it != checks.end());
      CHECK(it->reference == doctest::Approx(std::pow(2.0, m) / (2.0 * oracle::binom(m - 1, k - 1))));
    }
  }
}
