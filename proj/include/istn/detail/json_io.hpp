#pragma once

#include <json.hpp>
#include <string>

#include "istn/instance.hpp"

// JSON (de)serialization shared by the file I/O in `instance` and the
// manifest/result writing in `harness`. ordered_json keeps field order stable
// so identical runs produce byte-identical files.
namespace istn::detail {

using json = nlohmann::ordered_json;

json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const json& j);

json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const json& j);

// Throws std::runtime_error naming `what` and the path/parse position.
json read_json_file(const std::string& path, const char* what);
void write_json_file(const json& j, const std::string& path, const char* what);

// Field access that reports "<what>: missing field '<name>'" on absence.
const json& require_field(const json& j, const char* name, const char* what);

}  // namespace istn::detail
