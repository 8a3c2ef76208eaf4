#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kahler/exterior_algebra.hpp"

namespace kahler {

/// Representation of the Kähler superalgebra on the exterior algebra over C^{2m}:
/// the seven generators plus the derived transversal operators and the Casimir.
struct AlgebraRep {
  int m = 0;
  LinearOp L, Lstar, H;
  LinearOp a, abar, astar, abarstar;
  LinearOp Q, Qstar;
  LinearOp Lt, Ltstar, Ht;
  LinearOp casimir;
};

/// Completes (L, a, abar) to a full representation:
/// Q = abar a, L_t = L - iQ, H = [L*, L], H_t = [L_t*, L_t] = H - [Q*, Q],
/// casimir = L_t* L_t + L_t L_t* + H_t^2 / 2.
AlgebraRep complete_rep(LinearOp L, LinearOp a, LinearOp abar);

/// Lefschetz operator: exterior multiplication by the Kähler form i sum_j u_j ^ ubar_j.
LinearOp lefschetz(int m);

/// The model representation: a = i u_1 ^, abar = i ubar_1 ^.
AlgebraRep build_model_rep(int m);

enum class Generator { L, Lstar, H, a, abar, astar, abarstar, Q, Qstar, Lt, Ltstar, Ht, Casimir };

const LinearOp& generator(const AlgebraRep& rep, Generator g);
std::string generator_name(Generator g);

/// Small expression tree over the generators, used to state relations as data.
class Expr {
 public:
  static Expr gen(Generator g);
  static Expr identity();
  static Expr zero();

  friend Expr operator+(const Expr& x, const Expr& y);
  friend Expr operator-(const Expr& x, const Expr& y);
  friend Expr operator*(const Expr& x, const Expr& y);
  friend Expr operator*(Complex c, const Expr& x);
  friend Expr bracket(const Expr& x, const Expr& y);
  friend Expr anti_bracket(const Expr& x, const Expr& y);
  friend Expr adjoint(const Expr& x);

  LinearOp eval(const AlgebraRep& rep) const;
  std::string str() const;

 private:
  enum class Kind { Gen, Identity, Zero, Scale, Sum, Diff, Product, Commutator, Anticommutator, Adjoint };

  Expr(Kind kind, Generator g, Complex scale, std::shared_ptr<const Expr> lhs, std::shared_ptr<const Expr> rhs)
      : kind_(kind), gen_(g), scale_(scale), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  static Expr binary(Kind kind, const Expr& x, const Expr& y);
  bool is_atom() const;

  Kind kind_;
  Generator gen_;
  Complex scale_;
  std::shared_ptr<const Expr> lhs_, rhs_;
};

struct Relation {
  std::string group;
  Expr lhs;
  Expr rhs;

  std::string name() const { return lhs.str() + " = " + rhs.str(); }
};

/// Every relation checked on a representation: the superalgebra relations, the
/// transversal Lefschetz relations and the Casimir's centrality.
const std::vector<Relation>& relation_table();

struct RelationResult {
  std::string group;
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct RelationReport {
  int m = 0;
  double tol = 0.0;
  /// Rounding floor of the evaluation; tolerances below it cannot certify a relation.
  double resolution_floor = 0.0;
  std::vector<RelationResult> results;

  bool all_pass() const;
  double max_residual() const;
};

/// Evaluates every relation of relation_table(); residual = max entrywise |lhs - rhs|.
/// A relation passes iff residual <= tol and tol is not below the resolution floor.
RelationReport check_relations(const AlgebraRep& rep, double tol);

/// Outcome of testing an identity lhs = s * rhs for both signs s = -1, +1.
struct HtSignResult {
  int sign = 0;  // 0 when rhs vanishes and both signs match
  bool degenerate = false;
  double residual_minus = 0.0;
  double residual_plus = 0.0;
};

/// s with [H_t, L_t*] = 2 s L_t*. Throws InconsistencyError if neither sign holds.
HtSignResult sign_of_H_t_commutator(const AlgebraRep& rep, double tol = 1e-10);

/// s with [L_t*, L_t] = H + s [Q*, Q]. Throws InconsistencyError if neither sign holds.
HtSignResult sign_of_H_t_correction(const AlgebraRep& rep, double tol = 1e-10);

}  // namespace kahler
