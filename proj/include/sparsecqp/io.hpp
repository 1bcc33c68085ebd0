#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "sparsecqp/bench.hpp"
#include "sparsecqp/conditions.hpp"
#include "sparsecqp/feasible.hpp"
#include "sparsecqp/model.hpp"
#include "sparsecqp/solvers.hpp"

namespace sparsecqp::io {

using nlohmann::json;

/// Shared data container. A file may hold an instance, an observation, a
/// polytope, or any combination; fields are
///   n, m, k, alpha, beta, A, xTrue, y, QA, Qy, deltaA, deltaY, seed, C, g, lower, upper.
/// Matrices are written as flat row-major arrays; nested row arrays are also accepted
/// on input. Infinite bounds are written as null.
struct DataDocument {
  std::optional<Instance> instance;
  std::optional<Observation> observation;
  std::optional<Polytope> polytope;
};

json to_json(const DataDocument& doc);
DataDocument document_from_json(const json& j);

/// Matrix stored under `key` (flat row-major with the document's n, m, or nested rows).
Matrix matrix_field(const json& doc, const char* key);

json to_json(const Solution& sol);
json to_json(const ConditionReport& rep);

json to_json(const ExperimentConfig& cfg);
/// Throws FormatError on malformed or unknown entries.
ExperimentConfig experiment_config_from_json(const json& j);

/// Serializes with every floating-point number printed to 17 significant digits.
std::string dump(const json& j, int indent = 2);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sparsecqp::io
