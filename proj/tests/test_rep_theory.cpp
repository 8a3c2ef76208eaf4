#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "kahler/error.hpp"
#include "kahler/linalg.hpp"
#include "kahler/rep_theory.hpp"
#include "oracle.hpp"

using namespace kahler;

namespace {

MultiplicityTable table(std::initializer_list<std::pair<int, long>> entries, long total) {
  MultiplicityTable t;
  for (const auto& [k, v] : entries) t.add(k, v);
  t.total_dim = total;
  return t;
}

// Highest-weight count of the model representation by the oracle: vectors killed by Lt*, a*, abar*
// with Ht-weight k. Ht = H - [Q*, Q] is diagonal on monomials.
long oracle_highest_weight_count(int m, int k) {
  const auto ref = oracle::model(m);
  const std::size_t n = ref.L.n;
  const auto lstar = oracle::adjoint(ref.L);
  const auto h = oracle::commutator(lstar, ref.L);
  const auto qs = oracle::adjoint(ref.Q);
  const auto ht = oracle::add(h, oracle::commutator(qs, ref.Q), -1.0);
  std::vector<std::size_t> cols;
  for (std::size_t s = 0; s < n; ++s)
    if (std::abs(ht(s, s) - oracle::cd{static_cast<double>(k)}) < 1e-9) cols.push_back(s);
  oracle::Dense e(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) e(cols[c], c) = 1.0;
  const auto lts = oracle::adjoint(ref.Lt), as = oracle::adjoint(ref.a), abs = oracle::adjoint(ref.abar);
  oracle::Dense stacked(3 * n, cols.size());
  const auto x = oracle::mul(lts, e), y = oracle::mul(as, e), z = oracle::mul(abs, e);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      stacked(r, c) = x(r, c);
      stacked(n + r, c) = y(r, c);
      stacked(2 * n + r, c) = z(r, c);
    }
  return static_cast<long>(oracle::nullity(stacked));
}

}  // namespace

TEST_CASE("model representation tables") {
  CHECK(decompose_ug(build_model_rep(1)).table == table({{0, 1}}, 4));
  CHECK(decompose_ug(build_model_rep(2)).table == table({{0, 2}, {1, 1}}, 16));
  CHECK(decompose_ug(build_model_rep(3)).table == table({{0, 5}, {1, 4}, {2, 1}}, 64));
}

TEST_CASE("both decomposition methods agree and cover the space") {
  for (int m = 1; m <= 4; ++m) {
    const auto dec = decompose_ug(build_model_rep(m));
    CHECK(dec.method_agreement);
    CHECK(dec.table == dec.highest_weight_table);
    CHECK(dec.table.ug_dimension() == static_cast<long>(basis_dim(m)));
    for (int k = m + 1; k <= m + 3; ++k) CHECK(dec.table[k] == 0);
  }
}

TEST_CASE("highest-weight counts agree with the oracle and the closed form") {
  for (int m = 1; m <= 4; ++m)
    for (int k = 0; k <= m + 1; ++k) {
      INFO("m = " << m << ", k = " << k);
      const long brute = m <= 3 ? oracle_highest_weight_count(m, k) : model_multiplicity_closed_form(m, k);
      CHECK(model_multiplicity_closed_form(m, k) == brute);
      if (m <= 3) CHECK(decompose_ug(build_model_rep(m)).table[k] == brute);
    }
}

TEST_CASE("isotypic blocks are Casimir eigenspaces") {
  const auto rep = build_model_rep(3);
  const auto dec = decompose_ug(rep);
  for (const auto& b : dec.blocks) {
    const Matrix residual = rep.casimir.matrix() * b.basis - casimir_value(b.k) * b.basis;
    CHECK(linalg::max_abs(residual) <= 1e-9);
    CHECK(b.basis.cols() == dec.table[b.k] * ug_type_dim(b.k));
  }
}

TEST_CASE("decompose_sl2 examples") {
  const auto rep1 = build_model_rep(1);
  CHECK(decompose_sl2(rep1.L, rep1.Lstar, rep1.H) == table({{1, 1}, {0, 2}}, 4));
  const auto rep2 = build_model_rep(2);
  CHECK(decompose_sl2(rep2.Lt, rep2.Ltstar, rep2.Ht) == table({{1, 4}, {0, 8}}, 16));
  const Matrix z = Matrix::Zero(5, 5);
  CHECK(decompose_sl2(z, z, z) == table({{0, 5}}, 5));
}

TEST_CASE("decompose_sl2 rejects non-triples") {
  const auto rep = build_model_rep(2);
  CHECK_THROWS_AS(decompose_sl2(rep.L, rep.Lstar, Complex{2.0} * rep.H), DomainError);
  CHECK_THROWS_AS(decompose_sl2(rep.L.matrix(), rep.Lstar.matrix(), Matrix::Zero(3, 3)), DomainError);
}

TEST_CASE("branching of H_k under (L, L*, H)") {
  for (int m = 1; m <= 3; ++m) {
    const auto rep = build_model_rep(m);
    const auto dec = decompose_ug(rep);
    const auto br = verify_branching(rep, dec);
    CHECK(br.all_pass());
    for (const auto& e : br.entries) CHECK(e.observed.sl2_dimension() == e.m_k * ug_type_dim(e.k));
  }
  const auto rep2 = build_model_rep(2);
  const auto br2 = verify_branching(rep2, decompose_ug(rep2));
  const auto k1 = std::find_if(br2.entries.begin(), br2.entries.end(), [](const auto& e) { return e.k == 1; });
  REQUIRE(k1 != br2.entries.end());
  CHECK(k1->observed == table({{2, 1}, {1, 2}, {0, 1}}, 8));
  const auto rep1 = build_model_rep(1);
  CHECK(verify_branching(rep1, decompose_ug(rep1)).entries.front().observed == table({{1, 1}, {0, 2}}, 4));
}

TEST_CASE("expected branching dimension identity") {
  for (int n = 1; n <= 5; ++n) CHECK(4 * (n + 1) - 2 * (n + 1) - n == n + 2);
  for (int k = 0; k <= 5; ++k) CHECK(expected_branching(k, 3).sl2_dimension() == 3 * ug_type_dim(k));
}

TEST_CASE("kernel of L* inside an isotypic block") {
  const auto rep2 = build_model_rep(2);
  const auto dec2 = decompose_ug(rep2);
  CHECK(highest_weight_vectors_kernel_Lstar(rep2, dec2, 1).weights == std::vector<int>{0, 1, 1, 2});
  const auto rep1 = build_model_rep(1);
  const auto k0 = highest_weight_vectors_kernel_Lstar(rep1, decompose_ug(rep1), 0);
  CHECK(k0.weights == std::vector<int>{0, 0, 1});
  CHECK(linalg::max_abs(rep1.Lstar.matrix() * k0.basis) <= 1e-12);
  CHECK_THROWS_AS(highest_weight_vectors_kernel_Lstar(rep1, decompose_ug(rep1), 3), DomainError);
}

TEST_CASE("Casimir polynomial projectors reproduce the blocks") {
  for (int m = 1; m <= 3; ++m) {
    const auto rep = build_model_rep(m);
    const auto dec = decompose_ug(rep);
    for (const auto& b : dec.blocks) {
      const Matrix p = casimir_polynomial_projector(rep, b.k);
      CHECK(linalg::max_abs(p - b.basis * b.basis.adjoint()) <= 1e-8);
    }
  }
}

TEST_CASE("MultiplicityTable bookkeeping") {
  MultiplicityTable t;
  t.add(2, 3);
  t.add(2, 1);
  t.add(0, 0);
  CHECK(t[2] == 4);
  CHECK(t[0] == 0);
  CHECK(t.entries.size() == 1);
  CHECK(t.ug_dimension() == 4 * 12);
  CHECK(t.sl2_dimension() == 4 * 3);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(4, -1) == 0);
}
