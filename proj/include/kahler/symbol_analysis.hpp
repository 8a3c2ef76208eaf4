#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kahler/exterior_algebra.hpp"
#include "kahler/lattice.hpp"

namespace kahler {

/// Unit covector xi in R^{2m} (components x_1, y_1, ..., x_m, y_m).
class FiberPoint {
 public:
  /// Throws DomainError unless | |xi| - 1 | <= 1e-12.
  static FiberPoint unit(std::vector<double> xi);
  static FiberPoint e1(int m);
  /// Gaussian direction, normalized.
  static FiberPoint random(int m, std::mt19937_64& rng);

  int m() const { return static_cast<int>(xi_.size() / 2); }
  const std::vector<double>& xi() const { return xi_; }
  /// Coefficients of xi^{1,0} on u_1..u_m.
  std::vector<Complex> holomorphic() const;

 private:
  explicit FiberPoint(std::vector<double> xi) : xi_(std::move(xi)) {}
  std::vector<double> xi_;
};

/// Unit covector with xi^{1,0} rotated by U in U(m).
FiberPoint rotate_fiber(const FiberPoint& xi, const Matrix& u);

/// Principal symbol at a unit covector; `op` acts on the span of `block`.
struct SymbolOp {
  Matrix op;
  BasisBlock block;
};

struct DolbeaultSymbols {
  SymbolOp del;     // i xi^{1,0} ^
  SymbolOp delbar;  // i xi^{0,1} ^
};

DolbeaultSymbols symbol_dolbeault(const FiberPoint& xi);

/// sigma(L_t) = L - i sigma(Q), sigma(Q) = 2 s_delbar s_del.
SymbolOp symbol_Lt(const FiberPoint& xi);

/// The four range projections: P1 = 4 s s_b s_b* s*, P2 = 4 s* s_b* s_b s, P3 = 4 s s_b* s_b s*,
/// P4 = 4 s* s_b s_b* s (s = s_del, s_b = s_delbar), i in 1..4.
SymbolOp symbol_P(int i, const FiberPoint& xi);

/// Projection onto sigma(L_t)^k (ker sigma(L_t)* ∩ (p-k, q-k)-forms), 0 <= k <= min(p, q).
SymbolOp symbol_P_pqk(int p, int q, int k, const FiberPoint& xi);

/// Derivations of the u(m-1) action rotating u_2..u_m (and ubar_2..ubar_m by the conjugate).
std::vector<Matrix> unitary_stabilizer_generators(int m);

/// Derivation action of A in gl(m) on the exterior algebra (u by A, ubar by conj(A)).
Matrix derivation_action(const Matrix& a);

/// Dimension of the commutant of the u(m-1) action restricted to the range of the projector.
/// Returns 0 for the zero subspace; throws InconsistencyError if the subspace is not invariant.
int commutant_dim(const Matrix& subspace_projector, int m, double tol = 1e-9);

/// sigma(D) = sqrt2 (s_delbar + s_delbar*) on the antiholomorphic forms.
SymbolOp symbol_dirac(const FiberPoint& xi);
/// sign(sigma(D)) by Hermitian spectral calculus.
SymbolOp symbol_sign_dirac(const FiberPoint& xi);
/// Projection onto s_delbar((0,k-1)-forms) + s_delbar*((0,k)-forms), 1 <= k <= m.
SymbolOp symbol_Pi_k(int k, const FiberPoint& xi);

/// Full-space projector onto Rg(s_delbar) ∩ (0,k)-forms or Rg(s_delbar*) ∩ (0,k)-forms.
Matrix dolbeault_summand(const FiberPoint& xi, int k, bool range_of_delbar);

/// Fiberwise state a -> tr(density a).
struct FiberState {
  Matrix density;

  Complex operator()(const Matrix& a) const { return (density * a).trace(); }
  bool is_state(double tol) const;
};

struct DiracStates {
  FiberState tr, plus, minus;
  std::vector<FiberState> plus_k, minus_k;  // index k - 1, k = 1..m; plus_k[k-1] is omega_k
};

DiracStates dirac_states(const FiberPoint& xi);

struct ProjectionState {
  int k = 0;
  int i = 0;
  long rank = 0;
  double c_P = 0.0;  // omega_tr(sigma_P)^{-1}
  FiberState state;
};

/// omega_P for every nonzero P = P_{p,q,k} P_i on the (p,q)-forms (block coordinates).
std::vector<ProjectionState> projection_states(int p, int q, const FiberPoint& xi);

struct StateReport {
  // antiholomorphic probes
  std::optional<Complex> omega_tr, omega_plus, omega_minus;
  std::vector<Complex> omega_plus_k, omega_minus_k;
  double decomposition_residual = 0.0;  // |omega_tr - omega_+/2 - omega_-/2|
  // (p,q) probes
  struct Projection {
    int k, i;
    double c_P;
    Complex value;
  };
  std::vector<Projection> projection;
  bool states_valid = true;  // positivity and normalization of every density
};

/// Evaluates the states matching the probe's block (antiholomorphic or a bidegree block).
StateReport evaluate_states(const FiberPoint& xi, const SymbolOp& probe);

struct NamedCheck {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

/// Projection identities: P_i projections, orthogonality, sum = Id, P_{p,q,k} resolutions.
std::vector<NamedCheck> projection_checks(const FiberPoint& xi, double tol);
/// Dirac identities: sigma_D^2 = Id, tr sigma_D = 0, [Pi_k, sigma_D] = 0, sum Pi_k = Id, state decomposition.
std::vector<NamedCheck> dirac_checks(const FiberPoint& xi, double tol);

enum class CheckFamily { projections, dirac };

/// Runs one check family at every fiber: residuals are maxima over the fibers and a check passes only
/// if it passes at each of them.
std::vector<NamedCheck> certify_checks(const std::vector<FiberPoint>& fibers, CheckFamily family, double tol,
                                       Execution exec = Execution::parallel);

struct CommutantEntry {
  std::string subspace;
  long dim = 0;
  int commutant = 0;
  /// Set for the pieces cut by a single sigma(P_i) and for the Dolbeault summands. The bare kernel
  /// ker sigma(L_t)* ∩ (p,q) is a sum of up to four such pieces and can be reducible.
  bool expected_irreducible = false;
};

/// Commutant dimensions at xi = e_1: ker sigma(L_t)* ∩ (p,q) for all p, q; the same kernel cut by each
/// sigma(P_i); and both (0,k) Dolbeault summands.
std::vector<CommutantEntry> commutant_survey(int m);

/// Fibers used for certification: e_1 followed by `samples` seeded random unit covectors.
std::vector<FiberPoint> certification_fibers(int m, std::uint64_t seed, int samples);

struct NormalizationCheck {
  std::string name;
  double reference = 0.0;   // value at e_1
  double max_deviation = 0.0;
  bool pass = false;
};

/// c_P and c_k normalizations compared across fibers (tolerance 1e-9).
std::vector<NormalizationCheck> certify_normalizations(const std::vector<FiberPoint>& fibers,
                                                       Execution exec = Execution::parallel);

}  // namespace kahler
