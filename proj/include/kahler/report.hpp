#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/rep_theory.hpp"
#include "kahler/superalgebra.hpp"
#include "kahler/symbol_analysis.hpp"
#include "kahler/torus_spectrum.hpp"

namespace kahler::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Header shared by every document: {"schema_version": 1, "command": ...}.
Json document(const std::string& command);

Json to_json(Complex z);
Json to_json(const RelationReport& report);
Json to_json(const HtSignResult& sign);
/// {"m_k": {"0": ..}, "total_dim": N}
Json to_json(const MultiplicityTable& table);
Json to_json(const UgDecomposition& decomposition, const BranchingReport& branching);
Json to_json(const TorusRun& run);
Json to_json(const std::vector<NamedCheck>& checks);
Json to_json(const std::vector<CommutantEntry>& entries);
Json to_json(const std::vector<NormalizationCheck>& checks);

/// Two-space indented JSON with every float written to 17 significant digits; ends with LF.
/// Non-finite floats are written as null.
std::string dump(const Json& j);

/// One row per eigenvalue: lambda,N_cumulative,ratio_0,..,ratio_m (header row, LF endings).
std::string torus_csv(const TorusRun& run);

/// %.17g
std::string format_double(double x);

}  // namespace kahler::report
