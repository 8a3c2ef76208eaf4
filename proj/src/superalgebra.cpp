#include "kahler/superalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kahler/error.hpp"

namespace kahler {

LinearOp lefschetz(int m) {
  LinearOp L = LinearOp::zero(m);
  for (int j = 1; j <= m; ++j) L = L + wedge_u(m, j) * wedge_ubar(m, j);
  return kI * L;
}

AlgebraRep complete_rep(LinearOp L, LinearOp a, LinearOp abar) {
  const int m = L.m();
  LinearOp Lstar = L.adjoint();
  LinearOp astar = a.adjoint();
  LinearOp abarstar = abar.adjoint();
  LinearOp Q = abar * a;
  LinearOp Qstar = Q.adjoint();
  LinearOp H = commutator(Lstar, L);
  LinearOp Lt = L - kI * Q;
  LinearOp Ltstar = Lt.adjoint();
  LinearOp Ht = H - commutator(Qstar, Q);
  LinearOp casimir = Ltstar * Lt + Lt * Ltstar + Complex{0.5} * (Ht * Ht);
  return AlgebraRep{m,
                    std::move(L),
                    std::move(Lstar),
                    std::move(H),
                    std::move(a),
                    std::move(abar),
                    std::move(astar),
                    std::move(abarstar),
                    std::move(Q),
                    std::move(Qstar),
                    std::move(Lt),
                    std::move(Ltstar),
                    std::move(Ht),
                    std::move(casimir)};
}

AlgebraRep build_model_rep(int m) {
  return complete_rep(lefschetz(m), kI * wedge_u(m, 1), kI * wedge_ubar(m, 1));
}

const LinearOp& generator(const AlgebraRep& rep, Generator g) {
  switch (g) {
    case Generator::L: return rep.L;
    case Generator::Lstar: return rep.Lstar;
    case Generator::H: return rep.H;
    case Generator::a: return rep.a;
    case Generator::abar: return rep.abar;
    case Generator::astar: return rep.astar;
    case Generator::abarstar: return rep.abarstar;
    case Generator::Q: return rep.Q;
    case Generator::Qstar: return rep.Qstar;
    case Generator::Lt: return rep.Lt;
    case Generator::Ltstar: return rep.Ltstar;
    case Generator::Ht: return rep.Ht;
    case Generator::Casimir: return rep.casimir;
  }
  throw DomainError("unknown generator");
}

std::string generator_name(Generator g) {
  switch (g) {
    case Generator::L: return "L";
    case Generator::Lstar: return "L*";
    case Generator::H: return "H";
    case Generator::a: return "a";
    case Generator::abar: return "abar";
    case Generator::astar: return "a*";
    case Generator::abarstar: return "abar*";
    case Generator::Q: return "Q";
    case Generator::Qstar: return "Q*";
    case Generator::Lt: return "Lt";
    case Generator::Ltstar: return "Lt*";
    case Generator::Ht: return "Ht";
    case Generator::Casimir: return "C";
  }
  return "?";
}

Expr Expr::gen(Generator g) { return {Kind::Gen, g, 1.0, nullptr, nullptr}; }
Expr Expr::identity() { return {Kind::Identity, Generator::L, 1.0, nullptr, nullptr}; }
Expr Expr::zero() { return {Kind::Zero, Generator::L, 0.0, nullptr, nullptr}; }

Expr Expr::binary(Kind kind, const Expr& x, const Expr& y) {
  return {kind, Generator::L, 1.0, std::make_shared<const Expr>(x), std::make_shared<const Expr>(y)};
}

Expr operator+(const Expr& x, const Expr& y) { return Expr::binary(Expr::Kind::Sum, x, y); }
Expr operator-(const Expr& x, const Expr& y) { return Expr::binary(Expr::Kind::Diff, x, y); }
Expr operator*(const Expr& x, const Expr& y) { return Expr::binary(Expr::Kind::Product, x, y); }
Expr bracket(const Expr& x, const Expr& y) { return Expr::binary(Expr::Kind::Commutator, x, y); }
Expr anti_bracket(const Expr& x, const Expr& y) { return Expr::binary(Expr::Kind::Anticommutator, x, y); }

Expr adjoint(const Expr& x) {
  return {Expr::Kind::Adjoint, Generator::L, 1.0, std::make_shared<const Expr>(x), nullptr};
}

Expr operator*(Complex c, const Expr& x) {
  return {Expr::Kind::Scale, Generator::L, c, std::make_shared<const Expr>(x), nullptr};
}

LinearOp Expr::eval(const AlgebraRep& rep) const {
  switch (kind_) {
    case Kind::Gen: return generator(rep, gen_);
    case Kind::Identity: return LinearOp::identity(rep.m);
    case Kind::Zero: return LinearOp::zero(rep.m);
    case Kind::Scale: return scale_ * lhs_->eval(rep);
    case Kind::Sum: return lhs_->eval(rep) + rhs_->eval(rep);
    case Kind::Diff: return lhs_->eval(rep) - rhs_->eval(rep);
    case Kind::Product: return lhs_->eval(rep) * rhs_->eval(rep);
    case Kind::Commutator: return commutator(lhs_->eval(rep), rhs_->eval(rep));
    case Kind::Anticommutator: return anticommutator(lhs_->eval(rep), rhs_->eval(rep));
    case Kind::Adjoint: return lhs_->eval(rep).adjoint();
  }
  throw DomainError("unknown expression node");
}

bool Expr::is_atom() const {
  return kind_ == Kind::Gen || kind_ == Kind::Identity || kind_ == Kind::Zero || kind_ == Kind::Commutator ||
         kind_ == Kind::Anticommutator || kind_ == Kind::Adjoint;
}

namespace {

std::string format_real(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string format_scalar(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    if (c.imag() == -1.0) return "-i";
    return format_real(c.imag()) + "i";
  }
  return "(" + format_real(c.real()) + (c.imag() < 0 ? "-" : "+") + format_real(std::abs(c.imag())) + "i)";
}

}  // namespace

std::string Expr::str() const {
  auto wrap = [](const Expr& e) { return e.is_atom() || e.kind_ == Kind::Product ? e.str() : "(" + e.str() + ")"; };
  switch (kind_) {
    case Kind::Gen: return generator_name(gen_);
    case Kind::Identity: return "1";
    case Kind::Zero: return "0";
    case Kind::Scale: return format_scalar(scale_) + " " + wrap(*lhs_);
    case Kind::Sum: return lhs_->str() + " + " + rhs_->str();
    case Kind::Diff: return lhs_->str() + " - " + wrap(*rhs_);
    case Kind::Product: return wrap(*lhs_) + " " + wrap(*rhs_);
    case Kind::Commutator: return "[" + lhs_->str() + "," + rhs_->str() + "]";
    case Kind::Anticommutator: return "{" + lhs_->str() + "," + rhs_->str() + "}";
    case Kind::Adjoint: return "adj(" + lhs_->str() + ")";
  }
  return "?";
}

namespace {

std::vector<Relation> make_relation_table() {
  using G = Generator;
  const auto L = Expr::gen(G::L), Ls = Expr::gen(G::Lstar), H = Expr::gen(G::H);
  const auto a = Expr::gen(G::a), ab = Expr::gen(G::abar), as = Expr::gen(G::astar), abs = Expr::gen(G::abarstar);
  const auto Q = Expr::gen(G::Q), Qs = Expr::gen(G::Qstar);
  const auto Lt = Expr::gen(G::Lt), Lts = Expr::gen(G::Ltstar), Ht = Expr::gen(G::Ht);
  const auto C = Expr::gen(G::Casimir);
  const auto one = Expr::identity(), zero = Expr::zero();
  const Complex i = kI;

  std::vector<Relation> t;
  auto add = [&t](const char* group, Expr lhs, Expr rhs) { t.push_back({group, std::move(lhs), std::move(rhs)}); };

  const char* super = "superalgebra";
  add(super, bracket(L, abs), -i * a);
  add(super, bracket(Ls, a), i * abs);
  add(super, bracket(Ls, ab), -i * as);
  add(super, bracket(L, as), i * ab);
  add(super, bracket(Ls, L), H);
  add(super, bracket(H, L), Complex{-2.0} * L);
  add(super, bracket(H, Ls), Complex{2.0} * Ls);
  for (const auto& x : {a, ab, as, abs}) add(super, anti_bracket(x, x), zero);
  add(super, bracket(L, ab), zero);
  add(super, bracket(L, a), zero);
  add(super, bracket(Ls, abs), zero);
  add(super, bracket(Ls, as), zero);
  add(super, anti_bracket(ab, a), zero);
  add(super, anti_bracket(ab, as), zero);
  add(super, anti_bracket(a, abs), zero);
  add(super, anti_bracket(a, as), one);
  add(super, anti_bracket(ab, abs), one);

  const char* trans = "transversal";
  add(trans, bracket(L, Q), zero);
  add(trans, bracket(L, Qs), i * (ab * abs - as * a));
  add(trans, bracket(Qs, Q), Complex{-1.0} * (ab * abs - as * a));
  add(trans, bracket(L - i * Q, Qs), zero);
  add(trans, bracket(L - i * Q, Q), zero);
  add(trans, Q * Qs * Q, Q);
  add(trans, bracket(Lts, Lt), Ht);
  add(trans, Ht, H - bracket(Qs, Q));
  add(trans, bracket(Ht, Lt), Complex{-2.0} * Lt);
  add(trans, bracket(Ht, Lts), Complex{2.0} * Lts);
  for (const auto& x : {a, as, ab, abs}) add(trans, bracket(x, Lt), zero);
  for (const auto& x : {a, as, ab, abs}) add(trans, bracket(x, Lts), zero);

  const char* cas = "casimir";
  add(cas, adjoint(C), C);
  for (const auto& x : {L, Ls, H, a, ab, as, abs}) add(cas, bracket(C, x), zero);
  return t;
}

}  // namespace

const std::vector<Relation>& relation_table() {
  static const std::vector<Relation> table = make_relation_table();
  return table;
}

bool RelationReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

double RelationReport::max_residual() const {
  double worst = 0.0;
  for (const auto& r : results) worst = std::max(worst, r.residual);
  return worst;
}

RelationReport check_relations(const AlgebraRep& rep, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  RelationReport report;
  report.m = rep.m;
  report.tol = tol;
  const double eps = std::numeric_limits<double>::epsilon();
  const double dim = static_cast<double>(rep.L.dim());

  struct Evaluated {
    double residual;
    double scale;
  };
  std::vector<Evaluated> evaluated;
  for (const auto& rel : relation_table()) {
    const LinearOp lhs = rel.lhs.eval(rep);
    const LinearOp rhs = rel.rhs.eval(rep);
    const double scale = std::max({1.0, lhs.matrix().cwiseAbs().maxCoeff(), rhs.matrix().cwiseAbs().maxCoeff()});
    evaluated.push_back({lhs.max_abs_diff(rhs), scale});
    report.resolution_floor = std::max(report.resolution_floor, dim * eps * scale);
  }
  const auto& table = relation_table();
  for (std::size_t n = 0; n < table.size(); ++n) {
    const bool certifiable = tol >= report.resolution_floor;
    report.results.push_back(
        {table[n].group, table[n].name(), evaluated[n].residual, certifiable && evaluated[n].residual <= tol});
  }
  return report;
}

namespace {

HtSignResult sign_probe(const LinearOp& lhs, const LinearOp& rhs, double tol, const std::string& what) {
  HtSignResult out;
  out.residual_minus = lhs.max_abs_diff(Complex{-1.0} * rhs);
  out.residual_plus = lhs.max_abs_diff(rhs);
  const bool minus = out.residual_minus <= tol;
  const bool plus = out.residual_plus <= tol;
  if (minus && plus) {
    out.degenerate = true;
    out.sign = 0;
  } else if (minus) {
    out.sign = -1;
  } else if (plus) {
    out.sign = 1;
  } else {
    throw InconsistencyError(what + " holds for neither sign");
  }
  return out;
}

}  // namespace

HtSignResult sign_of_H_t_commutator(const AlgebraRep& rep, double tol) {
  return sign_probe(commutator(rep.Ht, rep.Ltstar), Complex{2.0} * rep.Ltstar, tol, "[H_t, L_t*] = -+2 L_t*");
}

HtSignResult sign_of_H_t_correction(const AlgebraRep& rep, double tol) {
  return sign_probe(commutator(rep.Ltstar, rep.Lt) - rep.H, commutator(rep.Qstar, rep.Q), tol,
                    "[L_t*, L_t] = H -+ [Q*, Q]");
}

}  // namespace kahler
