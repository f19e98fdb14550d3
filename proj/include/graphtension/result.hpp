#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "graphtension/energy.hpp"

namespace graphtension {

/// Outcome of one detection or evaluation run.
///
/// `score` is set iff a reference was supplied and its energy is nonzero;
/// `score_undefined` marks a supplied reference with zero energy.
struct RunResult {
  double energy = 0.0;
  std::optional<double> reference_energy;
  std::optional<double> score;
  bool score_undefined = false;
  std::optional<double> nmi;
  int n_communities = 0;
  AffinityMatrix w_matrix;
  double runtime_s = 0.0;
  std::uint64_t seed = 0;
  std::string solver;
  nlohmann::json params = nlohmann::json::object();

  bool operator==(const RunResult& o) const;
};

/// Matrix as nested arrays with the string "inf" for +inf entries.
nlohmann::json affinity_to_json(const AffinityMatrix& w);
AffinityMatrix affinity_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunResult& r);
/// Throws InputError on schema violations.
RunResult run_result_from_json(const nlohmann::json& j);

}  // namespace graphtension
