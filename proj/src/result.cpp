#include "graphtension/result.hpp"

#include <cmath>

#include "graphtension/error.hpp"

namespace graphtension {

bool RunResult::operator==(const RunResult& o) const {
  return energy == o.energy && reference_energy == o.reference_energy && score == o.score &&
         score_undefined == o.score_undefined && nmi == o.nmi && n_communities == o.n_communities &&
         w_matrix == o.w_matrix && runtime_s == o.runtime_s && seed == o.seed && solver == o.solver &&
         params == o.params;
}

nlohmann::json affinity_to_json(const AffinityMatrix& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (int a = 0; a < w.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int b = 0; b < w.size(); ++b) {
      if (w(a, b) == kInf) row.push_back("inf");
      else row.push_back(w(a, b));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

AffinityMatrix affinity_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("w_matrix must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto& row = j[a];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw InputError("w_matrix must be square");
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto& v = row[b];
      if (v.is_string() && v.get<std::string>() == "inf") m(a, b) = kInf;
      else if (v.is_number()) m(a, b) = v.get<double>();
      else throw InputError("w_matrix entries must be numbers or \"inf\"");
    }
  }
  return AffinityMatrix(std::move(m));
}

nlohmann::json to_json(const RunResult& r) {
  nlohmann::json j;
  j["energy"] = r.energy;
  if (r.reference_energy) j["reference_energy"] = *r.reference_energy;
  if (r.score) j["score"] = *r.score;
  else if (r.score_undefined) j["score"] = "undefined";
  if (r.nmi) j["nmi"] = *r.nmi;
  j["n_communities"] = r.n_communities;
  j["w_matrix"] = affinity_to_json(r.w_matrix);
  j["runtime_s"] = r.runtime_s;
  j["seed"] = r.seed;
  j["solver"] = r.solver;
  j["params"] = r.params;
  return j;
}

RunResult run_result_from_json(const nlohmann::json& j) {
  try {
    RunResult r;
    r.energy = j.at("energy").get<double>();
    if (j.contains("reference_energy")) r.reference_energy = j["reference_energy"].get<double>();
    if (j.contains("score")) {
      const auto& s = j["score"];
      if (s.is_string()) {
        if (s.get<std::string>() != "undefined") throw InputError("score must be a number or \"undefined\"");
        r.score_undefined = true;
      } else {
        r.score = s.get<double>();
      }
    }
    if (j.contains("nmi")) r.nmi = j["nmi"].get<double>();
    r.n_communities = j.at("n_communities").get<int>();
    r.w_matrix = affinity_from_json(j.at("w_matrix"));
    r.runtime_s = j.at("runtime_s").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.solver = j.at("solver").get<std::string>();
    if (j.contains("params")) r.params = j["params"];
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed result JSON: ") + e.what());
  }
}

}  // namespace graphtension
