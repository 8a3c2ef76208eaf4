#include "kahler/symbol_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "kahler/error.hpp"
#include "kahler/linalg.hpp"
#include "kahler/superalgebra.hpp"

namespace kahler {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kNormalizationTol = 1e-9;
// Symbols at unit covectors have operator norm of order one.
constexpr double kUnitScale = 1.0;

Eigen::Index full_dim(int m) { return static_cast<Eigen::Index>(basis_dim(m)); }

Matrix kernel_of(const Matrix& a) { return linalg::null_space(a, linalg::kRankCutoff, kUnitScale); }
Matrix span_of(const Matrix& a) { return linalg::range_basis(a, linalg::kRankCutoff, kUnitScale); }

std::string bideg(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

NamedCheck check(std::string name, double residual, double tol) {
  return {std::move(name), residual, residual <= tol};
}

double projection_defect(const Matrix& p) {
  return std::max(linalg::max_abs(p * p - p), linalg::max_abs(p - p.adjoint()));
}

}  // namespace

FiberPoint FiberPoint::unit(std::vector<double> xi) {
  if (xi.empty() || xi.size() % 2 != 0) throw DomainError("covector must have even length 2m");
  double n2 = 0.0;
  for (double x : xi) n2 += x * x;
  if (std::abs(std::sqrt(n2) - 1.0) > kUnitTol) throw DomainError("covector is not a unit vector");
  return FiberPoint(std::move(xi));
}

FiberPoint FiberPoint::e1(int m) {
  if (m < 1) throw DomainError("m must be >= 1");
  std::vector<double> xi(2 * static_cast<std::size_t>(m), 0.0);
  xi[0] = 1.0;
  return FiberPoint(std::move(xi));
}

FiberPoint FiberPoint::random(int m, std::mt19937_64& rng) {
  if (m < 1) throw DomainError("m must be >= 1");
  std::normal_distribution<double> normal;
  std::vector<double> xi(2 * static_cast<std::size_t>(m));
  double n2 = 0.0;
  while (n2 < 1e-6) {
    n2 = 0.0;
    for (double& x : xi) {
      x = normal(rng);
      n2 += x * x;
    }
  }
  const double n = std::sqrt(n2);
  for (double& x : xi) x /= n;
  return FiberPoint(std::move(xi));
}

std::vector<Complex> FiberPoint::holomorphic() const {
  std::vector<Complex> alpha(static_cast<std::size_t>(m()));
  for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = Complex{xi_[2 * j], -xi_[2 * j + 1]} / std::numbers::sqrt2;
  return alpha;
}

FiberPoint rotate_fiber(const FiberPoint& xi, const Matrix& u) {
  const auto alpha = xi.holomorphic();
  const Eigen::Map<const Vector> a(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  const Vector rotated = u * a;
  std::vector<double> out(xi.xi().size());
  for (Eigen::Index j = 0; j < rotated.size(); ++j) {
    out[2 * j] = std::numbers::sqrt2 * rotated(j).real();
    out[2 * j + 1] = -std::numbers::sqrt2 * rotated(j).imag();
  }
  // Renormalize away the rounding of U.
  double n2 = 0.0;
  for (double x : out) n2 += x * x;
  for (double& x : out) x /= std::sqrt(n2);
  return FiberPoint::unit(std::move(out));
}

DolbeaultSymbols symbol_dolbeault(const FiberPoint& xi) {
  const int m = xi.m();
  const auto alpha = xi.holomorphic();
  std::vector<Complex> alpha_bar(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) alpha_bar[j] = std::conj(alpha[j]);
  const std::vector<Complex> none(alpha.size());
  return {{(kI * wedge_covector(m, alpha, none)).matrix(), BasisBlock::full(m)},
          {(kI * wedge_covector(m, none, alpha_bar)).matrix(), BasisBlock::full(m)}};
}

SymbolOp symbol_Lt(const FiberPoint& xi) {
  const auto d = symbol_dolbeault(xi);
  const Matrix q = 2.0 * d.delbar.op * d.del.op;
  return {lefschetz(xi.m()).matrix() - kI * q, BasisBlock::full(xi.m())};
}

SymbolOp symbol_P(int i, const FiberPoint& xi) {
  const auto d = symbol_dolbeault(xi);
  const Matrix& s = d.del.op;
  const Matrix& sb = d.delbar.op;
  const Matrix sa = s.adjoint();
  const Matrix sba = sb.adjoint();
  Matrix p;
  switch (i) {
    case 1: p = 4.0 * s * sb * sba * sa; break;
    case 2: p = 4.0 * sa * sba * sb * s; break;
    case 3: p = 4.0 * s * sba * sb * sa; break;
    case 4: p = 4.0 * sa * sb * sba * s; break;
    default: throw DomainError("projection index must be 1..4");
  }
  return {std::move(p), BasisBlock::full(xi.m())};
}

SymbolOp symbol_P_pqk(int p, int q, int k, const FiberPoint& xi) {
  const int m = xi.m();
  if (p < 0 || p > m || q < 0 || q > m) throw DomainError("bidegree outside 0..m");
  if (k < 0 || k > std::min(p, q)) throw DomainError("k must satisfy 0 <= k <= min(p, q)");
  const Matrix lt = symbol_Lt(xi).op;
  const Matrix source = BasisBlock::bidegree(m, p - k, q - k).embedding();
  Matrix image = source * kernel_of(lt.adjoint() * source);
  for (int j = 0; j < k; ++j) image = lt * image;
  return {linalg::projector(span_of(image), full_dim(m)), BasisBlock::full(m)};
}

Matrix derivation_action(const Matrix& a) {
  const int m = static_cast<int>(a.rows());
  const Eigen::Index n = full_dim(m);
  Matrix out = Matrix::Zero(n, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      if (a(r, c) == Complex{}) continue;
      out += a(r, c) * (wedge_u(m, r + 1) * interior(wedge_u(m, c + 1))).matrix();
      out += std::conj(a(r, c)) * (wedge_ubar(m, r + 1) * interior(wedge_ubar(m, c + 1))).matrix();
    }
  return out;
}

std::vector<Matrix> unitary_stabilizer_generators(int m) {
  std::vector<Matrix> gens;
  for (int r = 1; r < m; ++r)
    for (int c = r; c < m; ++c) {
      if (r == c) {
        Matrix z = Matrix::Zero(m, m);
        z(r, r) = kI;
        gens.push_back(derivation_action(z));
        continue;
      }
      Matrix x = Matrix::Zero(m, m);
      x(r, c) = 1.0;
      x(c, r) = -1.0;
      gens.push_back(derivation_action(x));
      Matrix y = Matrix::Zero(m, m);
      y(r, c) = kI;
      y(c, r) = kI;
      gens.push_back(derivation_action(y));
    }
  return gens;
}

int commutant_dim(const Matrix& subspace_projector, int m, double tol) {
  const Matrix basis = span_of(subspace_projector);
  const Eigen::Index d = basis.cols();
  if (d == 0) return 0;
  const auto gens = unitary_stabilizer_generators(m);
  if (gens.empty()) return static_cast<int>(d * d);

  const Matrix complement = Matrix::Identity(basis.rows(), basis.rows()) - basis * basis.adjoint();
  const Matrix id = Matrix::Identity(d, d);
  Matrix system(static_cast<Eigen::Index>(gens.size()) * d * d, d * d);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const Matrix moved = gens[g] * basis;
    if (linalg::max_abs(complement * moved) > tol)
      throw InconsistencyError("subspace is not invariant under the u(m-1) action");
    const Matrix r = basis.adjoint() * moved;
    // vec(R M - M R) = (I (x) R - R^T (x) I) vec(M), column-major vec.
    Matrix block = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        block.block(i * d, j * d, d, d) += id(i, j) * r;
        block.block(i * d, j * d, d, d) -= r(j, i) * id;
      }
    system.middleRows(static_cast<Eigen::Index>(g) * d * d, d * d) = block;
  }
  return static_cast<int>(kernel_of(system).cols());
}

SymbolOp symbol_dirac(const FiberPoint& xi) {
  const auto d = symbol_dolbeault(xi);
  const Matrix full = std::numbers::sqrt2 * (d.delbar.op + d.delbar.op.adjoint());
  auto block = BasisBlock::antiholomorphic(xi.m());
  return {block.compress(full), std::move(block)};
}

SymbolOp symbol_sign_dirac(const FiberPoint& xi) {
  auto d = symbol_dirac(xi);
  return {linalg::hermitian_sign(d.op), std::move(d.block)};
}

Matrix dolbeault_summand(const FiberPoint& xi, int k, bool range_of_delbar) {
  const int m = xi.m();
  if (k < 0 || k > m) throw DomainError("form degree outside 0..m");
  const Matrix sb = symbol_dolbeault(xi).delbar.op;
  const Eigen::Index n = full_dim(m);
  if (range_of_delbar) {
    if (k == 0) return Matrix::Zero(n, n);
    return linalg::projector(span_of(sb * BasisBlock::bidegree(m, 0, k - 1).embedding()), n);
  }
  if (k == m) return Matrix::Zero(n, n);
  return linalg::projector(span_of(sb.adjoint() * BasisBlock::bidegree(m, 0, k + 1).embedding()), n);
}

SymbolOp symbol_Pi_k(int k, const FiberPoint& xi) {
  const int m = xi.m();
  if (k < 1 || k > m) throw DomainError("Pi_k needs 1 <= k <= m");
  // Rg(s_delbar | (0,k-1)) lies in degree k, Rg(s_delbar* | (0,k)) in degree k-1.
  const Matrix full = dolbeault_summand(xi, k, true) + dolbeault_summand(xi, k - 1, false);
  auto block = BasisBlock::antiholomorphic(m);
  return {block.compress(full), std::move(block)};
}

bool FiberState::is_state(double tol) const {
  if (std::abs(density.trace() - Complex{1.0}) > tol) return false;
  if (linalg::max_abs(density - density.adjoint()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (density + density.adjoint()));
  return solver.eigenvalues().minCoeff() >= -tol;
}

DiracStates dirac_states(const FiberPoint& xi) {
  const int m = xi.m();
  const Matrix sign = symbol_sign_dirac(xi).op;
  const Eigen::Index rk = sign.rows();
  const Matrix id = Matrix::Identity(rk, rk);
  const double inv_rk = 1.0 / static_cast<double>(rk);
  DiracStates s;
  s.tr.density = inv_rk * id;
  s.plus.density = inv_rk * (id + sign);
  s.minus.density = inv_rk * (id - sign);
  for (int k = 1; k <= m; ++k) {
    const Matrix pi = symbol_Pi_k(k, xi).op;
    for (auto [base, out] : {std::pair{&s.plus, &s.plus_k}, std::pair{&s.minus, &s.minus_k}}) {
      const Matrix weighted = base->density * pi;
      const Complex norm = weighted.trace();
      out->push_back({weighted / norm});
    }
  }
  return s;
}

std::vector<ProjectionState> projection_states(int p, int q, const FiberPoint& xi) {
  const int m = xi.m();
  const BasisBlock block = BasisBlock::bidegree(m, p, q);
  std::vector<ProjectionState> out;
  std::vector<Matrix> p_i;
  for (int i = 1; i <= 4; ++i) p_i.push_back(symbol_P(i, xi).op);
  for (int k = 0; k <= std::min(p, q); ++k) {
    const Matrix pqk = symbol_P_pqk(p, q, k, xi).op;
    for (int i = 1; i <= 4; ++i) {
      const Matrix sigma = block.compress(pqk * p_i[static_cast<std::size_t>(i - 1)]);
      const double trace = sigma.trace().real();
      if (trace < 0.5) continue;
      ProjectionState st;
      st.k = k;
      st.i = i;
      st.rank = std::lround(trace);
      st.c_P = static_cast<double>(block.size()) / trace;
      st.state.density = sigma / trace;
      out.push_back(std::move(st));
    }
  }
  return out;
}

StateReport evaluate_states(const FiberPoint& xi, const SymbolOp& probe) {
  constexpr double tol = 1e-10;
  const int m = xi.m();
  StateReport report;
  if (probe.block.monomials == BasisBlock::antiholomorphic(m).monomials) {
    const auto s = dirac_states(xi);
    report.omega_tr = s.tr(probe.op);
    report.omega_plus = s.plus(probe.op);
    report.omega_minus = s.minus(probe.op);
    report.decomposition_residual = std::abs(*report.omega_tr - 0.5 * *report.omega_plus - 0.5 * *report.omega_minus);
    report.states_valid = s.tr.is_state(tol) && s.plus.is_state(tol) && s.minus.is_state(tol);
    for (std::size_t k = 0; k < s.plus_k.size(); ++k) {
      report.omega_plus_k.push_back(s.plus_k[k](probe.op));
      report.omega_minus_k.push_back(s.minus_k[k](probe.op));
      report.states_valid = report.states_valid && s.plus_k[k].is_state(tol) && s.minus_k[k].is_state(tol);
    }
    return report;
  }
  for (int p = 0; p <= m; ++p)
    for (int q = 0; q <= m; ++q) {
      if (probe.block.monomials != BasisBlock::bidegree(m, p, q).monomials) continue;
      const Eigen::Index rk = probe.block.size();
      report.omega_tr = probe.op.trace() / static_cast<double>(rk);
      for (const auto& st : projection_states(p, q, xi)) {
        report.projection.push_back({st.k, st.i, st.c_P, st.state(probe.op)});
        report.states_valid = report.states_valid && st.state.is_state(tol);
      }
      return report;
    }
  throw DomainError("probe must act on the antiholomorphic forms or on one bidegree");
}

std::vector<NamedCheck> projection_checks(const FiberPoint& xi, double tol) {
  const int m = xi.m();
  const Eigen::Index n = full_dim(m);
  const Matrix id = Matrix::Identity(n, n);
  std::vector<NamedCheck> out;
  std::vector<Matrix> p;
  Matrix sum = Matrix::Zero(n, n);
  for (int i = 1; i <= 4; ++i) {
    p.push_back(symbol_P(i, xi).op);
    out.push_back(check("P" + std::to_string(i) + " is an orthogonal projection", projection_defect(p.back()), tol));
    sum += p.back();
  }
  out.push_back(check("P1 + P2 + P3 + P4 = Id", linalg::max_abs(sum - id), tol));
  double cross = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) cross = std::max(cross, linalg::max_abs(p[i] * p[j]));
  out.push_back(check("Pi Pj = 0 for i != j", cross, tol));

  for (int pp = 0; pp <= m; ++pp)
    for (int qq = 0; qq <= m; ++qq) {
      Matrix resolution = Matrix::Zero(n, n);
      double defect = 0.0;
      std::vector<Matrix> pieces;
      for (int k = 0; k <= std::min(pp, qq); ++k) {
        pieces.push_back(symbol_P_pqk(pp, qq, k, xi).op);
        defect = std::max(defect, projection_defect(pieces.back()));
        resolution += pieces.back();
      }
      double commute = 0.0;
      for (const auto& piece : pieces)
        for (const auto& pi : p) commute = std::max(commute, linalg::max_abs(piece * pi - pi * piece));
      const std::string tag = bideg(pp, qq);
      out.push_back(check("P_{p,q,k} are projections on " + tag, defect, tol));
      out.push_back(check("sum_k P_{p,q,k} = Id on " + tag,
                          linalg::max_abs(resolution - bidegree_projector(m, pp, qq).matrix()), tol));
      out.push_back(check("[P_{p,q,k}, P_i] = 0 on " + tag, commute, tol));
    }
  return out;
}

std::vector<NamedCheck> dirac_checks(const FiberPoint& xi, double tol) {
  const int m = xi.m();
  const Matrix d = symbol_dirac(xi).op;
  const Eigen::Index rk = d.rows();
  const Matrix id = Matrix::Identity(rk, rk);
  std::vector<NamedCheck> out;
  out.push_back(check("sigma_D self-adjoint", linalg::max_abs(d - d.adjoint()), tol));
  out.push_back(check("sigma_D^2 = Id", linalg::max_abs(d * d - id), tol));
  out.push_back(check("tr sigma_D = 0", std::abs(d.trace()), tol));
  const Matrix sign = symbol_sign_dirac(xi).op;
  out.push_back(check("sign(sigma_D) = sigma_D", linalg::max_abs(sign - d), tol));

  Matrix parity = Matrix::Zero(rk, rk);
  const auto block = BasisBlock::antiholomorphic(m);
  for (Eigen::Index s = 0; s < rk; ++s)
    parity(s, s) = (FormIndex::from_linear(m, block.monomials[static_cast<std::size_t>(s)]).q() % 2) ? -1.0 : 1.0;
  out.push_back(check("{sigma_D, (-1)^q} = 0", linalg::max_abs(d * parity + parity * d), tol));

  Matrix sum = Matrix::Zero(rk, rk);
  double commute = 0.0, defect = 0.0;
  for (int k = 1; k <= m; ++k) {
    const Matrix pi = symbol_Pi_k(k, xi).op;
    sum += pi;
    commute = std::max(commute, linalg::max_abs(pi * d - d * pi));
    defect = std::max(defect, projection_defect(pi));
  }
  out.push_back(check("Pi_k are projections", defect, tol));
  out.push_back(check("[Pi_k, sigma_D] = 0", commute, tol));
  out.push_back(check("sum_k Pi_k = Id on (0,*)-forms", linalg::max_abs(sum - id), tol));

  // omega_tr = (omega_+ + omega_-)/2 as densities, which covers every probe at once.
  const auto states = dirac_states(xi);
  out.push_back(check("omega_tr = omega_+/2 + omega_-/2",
                      linalg::max_abs(states.tr.density - 0.5 * states.plus.density - 0.5 * states.minus.density),
                      tol));
  bool valid = states.tr.is_state(tol) && states.plus.is_state(tol) && states.minus.is_state(tol);
  for (std::size_t k = 0; k < states.plus_k.size(); ++k)
    valid = valid && states.plus_k[k].is_state(tol) && states.minus_k[k].is_state(tol);
  out.push_back({"states positive and normalized", 0.0, valid});
  return out;
}

std::vector<CommutantEntry> commutant_survey(int m) {
  const auto e1 = FiberPoint::e1(m);
  const Matrix lt = symbol_Lt(e1).op;
  std::vector<Matrix> p_i;
  for (int i = 1; i <= 4; ++i) p_i.push_back(symbol_P(i, e1).op);
  const Eigen::Index n = full_dim(m);
  std::vector<CommutantEntry> out;
  auto add = [&](std::string name, const Matrix& proj, bool expected_irreducible) {
    const long dim = std::lround(proj.trace().real());
    out.push_back({std::move(name), dim, dim == 0 ? 0 : commutant_dim(proj, m), expected_irreducible});
  };
  for (int p = 0; p <= m; ++p)
    for (int q = 0; q <= m; ++q) {
      const Matrix block = BasisBlock::bidegree(m, p, q).embedding();
      const Matrix kernel = linalg::projector(block * kernel_of(lt.adjoint() * block), n);
      add("ker Lt* on " + bideg(p, q), kernel, false);
      for (int i = 1; i <= 4; ++i)
        add("ker Lt* on " + bideg(p, q) + " in Rg P" + std::to_string(i), kernel * p_i[static_cast<std::size_t>(i - 1)], true);
    }
  for (int k = 0; k <= m; ++k) {
    add("Rg s_delbar on " + bideg(0, k), dolbeault_summand(e1, k, true), true);
    add("Rg s_delbar* on " + bideg(0, k), dolbeault_summand(e1, k, false), true);
  }
  return out;
}

std::vector<NamedCheck> certify_checks(const std::vector<FiberPoint>& fibers, CheckFamily family, double tol,
                                       Execution exec) {
  std::vector<std::vector<NamedCheck>> per_fiber(fibers.size());
  auto run = [&](std::size_t f) {
    per_fiber[f] = family == CheckFamily::projections ? projection_checks(fibers[f], tol) : dirac_checks(fibers[f], tol);
  };
  const auto n = static_cast<long>(fibers.size());
  if (exec == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long f = 0; f < n; ++f) {
      try {
        run(static_cast<std::size_t>(f));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long f = 0; f < n; ++f) run(static_cast<std::size_t>(f));
  }
  if (per_fiber.empty()) return {};
  std::vector<NamedCheck> out = per_fiber.front();
  for (std::size_t f = 1; f < per_fiber.size(); ++f)
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c].residual = std::max(out[c].residual, per_fiber[f][c].residual);
      out[c].pass = out[c].pass && per_fiber[f][c].pass;
    }
  return out;
}

std::vector<FiberPoint> certification_fibers(int m, std::uint64_t seed, int samples) {
  std::vector<FiberPoint> out{FiberPoint::e1(m)};
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) out.push_back(FiberPoint::random(m, rng));
  return out;
}

std::vector<NormalizationCheck> certify_normalizations(const std::vector<FiberPoint>& fibers, Execution exec) {
  if (fibers.empty()) return {};
  const int m = fibers.front().m();
  // values[f] lists every normalization constant at fiber f in a fixed order.
  std::vector<std::vector<double>> values(fibers.size());
  std::vector<std::string> names;
  auto collect = [&](const FiberPoint& xi, bool record_names) {
    std::vector<double> v;
    for (int p = 0; p <= m; ++p)
      for (int q = 0; q <= m; ++q)
        for (const auto& st : projection_states(p, q, xi)) {
          v.push_back(st.c_P);
          if (record_names)
            names.push_back("c_P for P_{" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(st.k) +
                            "} P" + std::to_string(st.i));
        }
    const Matrix sign = symbol_sign_dirac(xi).op;
    const double rk = static_cast<double>(sign.rows());
    for (int k = 1; k <= m; ++k) {
      const Matrix pi = symbol_Pi_k(k, xi).op;
      v.push_back(rk / ((Matrix::Identity(sign.rows(), sign.rows()) + sign) * pi).trace().real());
      v.push_back(rk / ((Matrix::Identity(sign.rows(), sign.rows()) - sign) * pi).trace().real());
      if (record_names) {
        names.push_back("c_" + std::to_string(k) + " for omega_+");
        names.push_back("c_" + std::to_string(k) + " for omega_-");
      }
    }
    return v;
  };
  values[0] = collect(fibers[0], true);
  const auto n = static_cast<long>(fibers.size());
  if (exec == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long f = 1; f < n; ++f) {
      try {
        values[static_cast<std::size_t>(f)] = collect(fibers[static_cast<std::size_t>(f)], false);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long f = 1; f < n; ++f) values[static_cast<std::size_t>(f)] = collect(fibers[static_cast<std::size_t>(f)], false);
  }

  std::vector<NormalizationCheck> out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    NormalizationCheck chk{names[c], values[0][c], 0.0, true};
    for (std::size_t f = 1; f < values.size(); ++f) {
      if (values[f].size() != values[0].size()) {
        chk.max_deviation = INFINITY;
        break;
      }
      chk.max_deviation = std::max(chk.max_deviation, std::abs(values[f][c] - values[0][c]));
    }
    chk.pass = chk.max_deviation <= kNormalizationTol;
    out.push_back(std::move(chk));
  }
  return out;
}

}  // namespace kahler
