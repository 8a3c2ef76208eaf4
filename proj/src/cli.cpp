#include "kahler/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kahler/error.hpp"
#include "kahler/linalg.hpp"
#include "kahler/report.hpp"
#include "kahler/rep_theory.hpp"
#include "kahler/superalgebra.hpp"
#include "kahler/symbol_analysis.hpp"
#include "kahler/torus_spectrum.hpp"

namespace kahler {

namespace {

using report::Json;

constexpr int kMaxCliM = 6;
constexpr double kTorusExactTol = 1e-12;

struct RunConfig {
  std::string command;
  int m = 0;
  long lambda_max = 0;
  std::optional<int> p, q, k;
  double tol = 1e-10;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
  std::string output_path;
  std::string check = "all";
};

struct Outcome {
  std::string body;
  std::vector<std::string> failures;
};

void require(bool ok, const std::string& what, std::vector<std::string>& failures) {
  if (!ok) failures.push_back(what);
}

Outcome cmd_verify_relations(const RunConfig& cfg) {
  const AlgebraRep rep = build_model_rep(cfg.m);
  const RelationReport rel = check_relations(rep, cfg.tol);
  Outcome out;
  Json doc = report::document(cfg.command);
  doc.update(report::to_json(rel));
  doc["sign_ht_lt_star"] = report::to_json(sign_of_H_t_commutator(rep));
  doc["sign_ht_q_correction"] = report::to_json(sign_of_H_t_correction(rep));
  if (cfg.tol < rel.resolution_floor)
    out.failures.push_back("tolerance " + report::format_double(cfg.tol) + " is below the resolution floor " +
                           report::format_double(rel.resolution_floor));
  for (const auto& r : rel.results)
    if (!r.pass && r.residual > cfg.tol) out.failures.push_back(r.name + " (residual " + report::format_double(r.residual) + ")");
  out.body = report::dump(doc);
  return out;
}

Outcome cmd_decompose_model(const RunConfig& cfg) {
  const AlgebraRep rep = build_model_rep(cfg.m);
  const UgDecomposition dec = decompose_ug(rep);
  const BranchingReport branching = verify_branching(rep, dec);
  Outcome out;
  Json doc = report::document(cfg.command);
  doc["m"] = cfg.m;
  doc.update(report::to_json(dec, branching));

  Json closed = Json::object();
  Json weights = Json::object();
  for (int k = 0; k <= cfg.m; ++k) {
    const long predicted = model_multiplicity_closed_form(cfg.m, k);
    if (predicted != 0) closed[std::to_string(k)] = predicted;
    require(predicted == dec.table[k], "closed-form multiplicity of H_" + std::to_string(k), out.failures);
    if (dec.table[k] > 0) weights[std::to_string(k)] = highest_weight_vectors_kernel_Lstar(rep, dec, k).weights;
  }
  doc["closed_form_m_k"] = std::move(closed);
  doc["kernel_Lstar_weights"] = std::move(weights);
  require(dec.table.ug_dimension() == static_cast<long>(basis_dim(cfg.m)), "sum_k m_k 4(k+1) = 4^m", out.failures);
  for (const auto& e : branching.entries)
    require(e.pass, "branching of H_" + std::to_string(e.k) + " under (L, L*, H)", out.failures);
  out.body = report::dump(doc);
  return out;
}

Outcome cmd_torus(const RunConfig& cfg) {
  if (cfg.lambda_max < 1) throw DomainError("--lambda-max must be >= 1");
  const TorusRun run = run_torus(cfg.m, cfg.lambda_max);
  Outcome out;
  for (std::size_t i = 0; i < run.series.size(); ++i)
    for (std::size_t k = 0; k < run.predicted.size(); ++k)
      require(std::abs(run.series[i].ratio[k] - run.predicted[k]) <= kTorusExactTol,
              "ratio_" + std::to_string(k) + " at lambda " + std::to_string(run.series[i].lambda) +
                  " equals m_k(model)/4^m",
              out.failures);
  if (cfg.format == "csv") {
    out.body = report::torus_csv(run);
  } else {
    Json doc = report::document(cfg.command);
    doc.update(report::to_json(run));
    out.body = report::dump(doc);
  }
  return out;
}

void check_bidegree(const RunConfig& cfg) {
  auto in_range = [&](const std::optional<int>& v) { return !v || (*v >= 0 && *v <= cfg.m); };
  if (!in_range(cfg.p) || !in_range(cfg.q)) throw DomainError("--p and --q must lie in 0..m");
  if (cfg.p.has_value() != cfg.q.has_value()) throw DomainError("--p and --q must be given together");
  if (cfg.k && (!cfg.p || *cfg.k < 0 || *cfg.k > std::min(*cfg.p, *cfg.q)))
    throw DomainError("--k needs --p/--q and 0 <= k <= min(p, q)");
}

std::vector<std::pair<int, int>> bidegrees(const RunConfig& cfg) {
  if (cfg.p) return {{*cfg.p, *cfg.q}};
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p <= cfg.m; ++p)
    for (int q = 0; q <= cfg.m; ++q) out.emplace_back(p, q);
  return out;
}

Json gated_checks(const std::vector<NamedCheck>& checks, std::vector<std::string>& failures) {
  for (const auto& c : checks) require(c.pass, c.name, failures);
  return report::to_json(checks);
}

Json state_values(const StateReport& s) {
  Json j;
  if (s.omega_tr) j["omega_tr"] = report::to_json(*s.omega_tr);
  if (s.omega_plus) {
    j["omega_plus"] = report::to_json(*s.omega_plus);
    j["omega_minus"] = report::to_json(*s.omega_minus);
    Json plus = Json::array(), minus = Json::array();
    for (std::size_t k = 0; k < s.omega_plus_k.size(); ++k) {
      plus.push_back(report::to_json(s.omega_plus_k[k]));
      minus.push_back(report::to_json(s.omega_minus_k[k]));
    }
    j["omega_plus_k"] = std::move(plus);
    j["omega_minus_k"] = std::move(minus);
    j["decomposition_residual"] = s.decomposition_residual;
  }
  if (!s.projection.empty()) {
    Json rows = Json::array();
    for (const auto& p : s.projection)
      rows.push_back({{"k", p.k}, {"i", p.i}, {"c_P", p.c_P}, {"value", report::to_json(p.value)}});
    j["omega_P"] = std::move(rows);
  }
  j["states_valid"] = s.states_valid;
  return j;
}

bool near(Complex z, double target, double tol) { return std::abs(z - Complex{target}) <= tol; }

Json symbols_states(const RunConfig& cfg, const FiberPoint& e1, std::vector<std::string>& failures) {
  const int m = cfg.m;
  const double tol = cfg.tol;
  Json probes = Json::array();
  auto record = [&](const std::string& name, const StateReport& s) {
    Json j{{"probe", name}};
    j.update(state_values(s));
    probes.push_back(std::move(j));
    require(s.states_valid, "states positive and normalized (probe " + name + ")", failures);
    if (s.omega_plus)
      require(s.decomposition_residual <= tol, "omega_tr = omega_+/2 + omega_-/2 (probe " + name + ")", failures);
  };

  const BasisBlock anti = BasisBlock::antiholomorphic(m);
  const Eigen::Index rk = static_cast<Eigen::Index>(anti.size());
  const StateReport id = evaluate_states(e1, {Matrix::Identity(rk, rk), anti});
  record("Id on (0,*)", id);
  bool all_one = near(*id.omega_tr, 1, tol) && near(*id.omega_plus, 1, tol) && near(*id.omega_minus, 1, tol);
  for (std::size_t k = 0; k < id.omega_plus_k.size(); ++k)
    all_one = all_one && near(id.omega_plus_k[k], 1, tol) && near(id.omega_minus_k[k], 1, tol);
  require(all_one, "every state is 1 on Id (0,*)", failures);

  const StateReport sign = evaluate_states(e1, symbol_sign_dirac(e1));
  record("sign(sigma_D)", sign);
  require(near(*sign.omega_tr, 0, tol) && near(*sign.omega_plus, 1, tol) && near(*sign.omega_minus, -1, tol),
          "omega_tr, omega_+, omega_- on sign(sigma_D) are 0, 1, -1", failures);

  for (int k = 1; k <= m; ++k) {
    const StateReport pi = evaluate_states(e1, symbol_Pi_k(k, e1));
    record("Pi_" + std::to_string(k), pi);
    for (int l = 1; l <= m; ++l)
      require(near(pi.omega_plus_k[static_cast<std::size_t>(l - 1)], l == k ? 1.0 : 0.0, tol),
              "omega_" + std::to_string(l) + "(Pi_" + std::to_string(k) + ") = " + (l == k ? "1" : "0"), failures);
  }

  for (const auto& [p, q] : bidegrees(cfg)) {
    const BasisBlock block = BasisBlock::bidegree(m, p, q);
    const std::string tag = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    const auto n = static_cast<Eigen::Index>(block.size());
    const StateReport s = evaluate_states(e1, {Matrix::Identity(n, n), block});
    record("Id on " + tag, s);
    bool ones = near(*s.omega_tr, 1, tol);
    for (const auto& st : s.projection) ones = ones && near(st.value, 1, tol);
    require(ones, "every omega_P is 1 on Id " + tag, failures);
    for (int i = 1; i <= 4; ++i) {
      const StateReport pi = evaluate_states(e1, {block.compress(symbol_P(i, e1).op), block});
      record("P" + std::to_string(i) + " on " + tag, pi);
      bool delta = true;
      for (const auto& st : pi.projection) delta = delta && near(st.value, st.i == i ? 1.0 : 0.0, tol);
      require(delta, "omega_P(P" + std::to_string(i) + ") on " + tag + " is 0 or 1 by P_i", failures);
    }
  }
  return probes;
}

Outcome cmd_symbols(const RunConfig& cfg) {
  check_bidegree(cfg);
  const int m = cfg.m;
  const auto fibers = certification_fibers(m, cfg.seed, kCertificationSamples);
  const FiberPoint& e1 = fibers.front();
  auto want = [&](const char* name) { return cfg.check == "all" || cfg.check == name; };

  Outcome out;
  Json doc = report::document(cfg.command);
  doc["m"] = m;
  doc["check"] = cfg.check;
  doc["tol"] = cfg.tol;
  doc["seed"] = cfg.seed;
  doc["random_fibers"] = kCertificationSamples;

  if (want("projections") || want("pqk")) {
    const auto all = certify_checks(fibers, CheckFamily::projections, cfg.tol);
    std::vector<NamedCheck> pi_checks, pqk_checks;
    for (const auto& c : all) (c.name.find("P_{p,q,k}") == std::string::npos ? pi_checks : pqk_checks).push_back(c);
    if (want("projections")) {
      Json ranks = Json::object();
      for (int i = 1; i <= 4; ++i) ranks["P" + std::to_string(i)] = linalg::numerical_rank(symbol_P(i, e1).op, linalg::kRankCutoff, 1.0);
      doc["projections"] = {{"ranks", ranks}, {"checks", gated_checks(pi_checks, out.failures)}};
    }
    if (want("pqk")) {
      if (cfg.p) {
        const std::string tag = "(" + std::to_string(*cfg.p) + "," + std::to_string(*cfg.q) + ")";
        std::erase_if(pqk_checks, [&](const NamedCheck& c) { return !c.name.ends_with(tag); });
      }
      Json ranks = Json::array();
      for (const auto& [p, q] : bidegrees(cfg))
        for (int k = 0; k <= std::min(p, q); ++k) {
          if (cfg.k && k != *cfg.k) continue;
          ranks.push_back({{"p", p}, {"q", q}, {"k", k}, {"rank", linalg::numerical_rank(symbol_P_pqk(p, q, k, e1).op, linalg::kRankCutoff, 1.0)}});
        }
      doc["pqk"] = {{"ranks", ranks}, {"checks", gated_checks(pqk_checks, out.failures)}};
    }
  }

  if (want("commutant")) {
    const auto survey = commutant_survey(m);
    for (const auto& e : survey)
      if (e.expected_irreducible && e.dim > 0)
        require(e.commutant == 1, "u(m-1) acts irreducibly on " + e.subspace, out.failures);
    doc["commutant"] = report::to_json(survey);
  }

  if (want("dirac")) {
    Json spectrum = Json::array();
    const long half = 1L << (m - 1);
    bool balanced = true;
    for (const auto& space : linalg::hermitian_eigenspaces(symbol_dirac(e1).op)) {
      const long mult = static_cast<long>(space.basis.cols());
      spectrum.push_back({{"value", space.value}, {"multiplicity", mult}});
      balanced = balanced && std::abs(std::abs(space.value) - 1.0) <= cfg.tol && mult == half;
    }
    require(balanced && spectrum.size() == 2, "sigma_D spectrum is {+1, -1} with equal multiplicity", out.failures);
    Json ranks = Json::array();
    for (int k = 1; k <= m; ++k) {
      const long rank = linalg::numerical_rank(symbol_Pi_k(k, e1).op, linalg::kRankCutoff, 1.0);
      ranks.push_back({{"k", k}, {"rank", rank}});
      require(rank == 2 * binomial(m - 1, k - 1), "rank Pi_" + std::to_string(k) + " = 2 C(m-1, k-1)", out.failures);
    }
    doc["dirac"] = {{"spectrum", spectrum},
                    {"pi_ranks", ranks},
                    {"checks", gated_checks(certify_checks(fibers, CheckFamily::dirac, cfg.tol), out.failures)}};
  }

  if (want("states")) {
    Json states;
    states["probes"] = symbols_states(cfg, e1, out.failures);
    const auto norms = certify_normalizations(fibers);
    for (const auto& c : norms) require(c.pass, c.name + " is independent of xi", out.failures);
    states["normalizations"] = report::to_json(norms);
    doc["states"] = std::move(states);
  }

  out.body = report::dump(doc);
  return out;
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  int p = 0, q = 0, k = 0;

  CLI::App app{"Kähler superalgebra and transversal Lefschetz toolkit"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "complex dimension (1..6)")->required()->check(CLI::Range(1, kMaxCliM));
    sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", cfg.output_path, "output file (default: stdout, or $KAHLER_OUTPUT)");
  };
  auto* verify = app.add_subcommand("verify-relations", "check every superalgebra relation on the model representation");
  common(verify);
  auto* decompose = app.add_subcommand("decompose-model", "decompose the model representation into its types");
  common(decompose);
  auto* torus = app.add_subcommand("torus", "multiplicity statistics of the flat-torus form Laplacian");
  common(torus);
  torus->add_option("--lambda-max", cfg.lambda_max, "largest eigenvalue included")->required();
  auto* symbols = app.add_subcommand("symbols", "principal-symbol identities, commutants and states");
  common(symbols);
  symbols->add_option("--check", cfg.check, "which family to run")
      ->check(CLI::IsMember({"all", "projections", "pqk", "commutant", "dirac", "states"}));
  auto* p_opt = symbols->add_option("--p", p, "holomorphic degree");
  auto* q_opt = symbols->add_option("--q", q, "antiholomorphic degree");
  auto* k_opt = symbols->add_option("--k", k, "Lefschetz level");
  auto* seed_opt = symbols->add_option("--seed", cfg.seed, "seed of the random fibers (default $KAHLER_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (p_opt->count() > 0) cfg.p = p;
  if (q_opt->count() > 0) cfg.q = q;
  if (k_opt->count() > 0) cfg.k = k;

  try {
    if (cfg.output_path.empty())
      if (auto v = env("KAHLER_OUTPUT")) cfg.output_path = *v;
    if (seed_opt->count() == 0)
      if (auto v = env("KAHLER_SEED")) {
        std::size_t used = 0;
        try {
          cfg.seed = std::stoull(*v, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != v->size()) throw DomainError("KAHLER_SEED must be an unsigned integer");
      }
    if (cfg.format == "csv" && cfg.command != "torus") throw DomainError("csv output is only available for torus");

    Outcome outcome;
    if (cfg.command == "verify-relations")
      outcome = cmd_verify_relations(cfg);
    else if (cfg.command == "decompose-model")
      outcome = cmd_decompose_model(cfg);
    else if (cfg.command == "torus")
      outcome = cmd_torus(cfg);
    else
      outcome = cmd_symbols(cfg);

    if (cfg.output_path.empty()) {
      out << outcome.body;
    } else {
      std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
      if (!file) throw DomainError("cannot open output file " + cfg.output_path);
      file << outcome.body;
    }
    for (const auto& f : outcome.failures) err << "FAILED: " << f << '\n';
    return outcome.failures.empty() ? kExitOk : kExitInvariant;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << '\n';
    return kExitResource;
  } catch (const InconsistencyError& e) {
    err << "FAILED: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace kahler
