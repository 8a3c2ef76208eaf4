#include "kahler/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace kahler::report {

namespace {

Json keyed(const std::map<int, long>& entries) {
  Json j = Json::object();
  for (const auto& [k, v] : entries) j[std::to_string(k)] = v;
  return j;
}

void write(std::ostringstream& os, const Json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      os << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad;
        write(os, j[i], depth + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << close << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        os << pad << Json(key).dump() << ": ";
        write(os, value, depth + 1);
        os << (++i < j.size() ? ",\n" : "\n");
      }
      os << close << '}';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json document(const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

Json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const RelationReport& report) {
  Json j;
  j["m"] = report.m;
  j["tol"] = report.tol;
  j["resolution_floor"] = report.resolution_floor;
  j["all_pass"] = report.all_pass();
  j["max_residual"] = report.max_residual();
  Json rows = Json::array();
  for (const auto& r : report.results)
    rows.push_back({{"group", r.group}, {"name", r.name}, {"residual", r.residual}, {"pass", r.pass}});
  j["relations"] = std::move(rows);
  return j;
}

Json to_json(const HtSignResult& sign) {
  return {{"sign", sign.sign},
          {"degenerate", sign.degenerate},
          {"residual_minus", sign.residual_minus},
          {"residual_plus", sign.residual_plus}};
}

Json to_json(const MultiplicityTable& table) { return {{"m_k", keyed(table.entries)}, {"total_dim", table.total_dim}}; }

Json to_json(const UgDecomposition& decomposition, const BranchingReport& branching) {
  Json j = to_json(decomposition.table);
  j["method_agreement"] = decomposition.method_agreement;
  j["highest_weight_m_k"] = keyed(decomposition.highest_weight_table.entries);
  Json rows = Json::array();
  for (const auto& e : branching.entries)
    rows.push_back({{"k", e.k},
                    {"m_k", e.m_k},
                    {"observed", keyed(e.observed.entries)},
                    {"expected", keyed(e.expected.entries)},
                    {"pass", e.pass}});
  j["branching"] = std::move(rows);
  j["branching_pass"] = branching.all_pass();
  return j;
}

Json to_json(const TorusRun& run) {
  Json j;
  j["m"] = run.m;
  j["lambda_max"] = run.lambda_max;
  j["model"] = to_json(run.model_table);
  j["harmonic_dim"] = static_cast<long>(basis_dim(run.m));
  Json records = Json::array();
  double max_residual = 0.0;
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    const auto& rec = run.records[i];
    records.push_back({{"lambda", rec.lambda},
                       {"r", rec.r()},
                       {"m_k", keyed(run.profiles[i].entries)},
                       {"total_dim", run.profiles[i].total_dim}});
    for (std::size_t k = 0; k < run.predicted.size(); ++k)
      max_residual = std::max(max_residual, std::abs(run.series[i].ratio[k] - run.predicted[k]));
  }
  j["records"] = std::move(records);
  Json ratio = Json::object(), predicted = Json::object();
  for (std::size_t k = 0; k < run.cesaro.size(); ++k) {
    ratio[std::to_string(k)] = run.cesaro[k];
    predicted[std::to_string(k)] = run.predicted[k];
  }
  j["cesaro"] = {{"ratio", ratio},
                 {"predicted", predicted},
                 {"n_cumulative", run.series.empty() ? 0L : run.series.back().n_cumulative},
                 {"max_partial_sum_residual", max_residual}};
  if (run.weyl)
    j["weyl"] = {{"measured", run.weyl->measured}, {"predicted", run.weyl->predicted}, {"rel_error", run.weyl->rel_error}};
  else
    j["weyl"] = nullptr;
  return j;
}

Json to_json(const std::vector<NamedCheck>& checks) {
  Json rows = Json::array();
  for (const auto& c : checks) rows.push_back({{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}});
  return rows;
}

Json to_json(const std::vector<CommutantEntry>& entries) {
  Json rows = Json::array();
  for (const auto& e : entries)
    rows.push_back({{"subspace", e.subspace},
                    {"dim", e.dim},
                    {"commutant_dim", e.commutant},
                    {"expected_irreducible", e.expected_irreducible}});
  return rows;
}

Json to_json(const std::vector<NormalizationCheck>& checks) {
  Json rows = Json::array();
  for (const auto& c : checks)
    rows.push_back(
        {{"name", c.name}, {"reference", c.reference}, {"max_deviation", c.max_deviation}, {"pass", c.pass}});
  return rows;
}

std::string dump(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << '\n';
  return os.str();
}

std::string torus_csv(const TorusRun& run) {
  std::ostringstream os;
  os << "lambda,N_cumulative";
  for (int k = 0; k <= run.m; ++k) os << ",ratio_" << k;
  os << '\n';
  for (const auto& row : run.series) {
    os << row.lambda << ',' << row.n_cumulative;
    for (double r : row.ratio) os << ',' << format_double(r);
    os << '\n';
  }
  return os.str();
}

}  // namespace kahler::report
