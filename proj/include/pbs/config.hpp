#pragma once

#include <filesystem>
#include <stdexcept>

#include "pbs/scenario.hpp"

namespace pbs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the JSON scenario file. Unknown keys, duplicate ids, and a missing
// seed are hard errors naming the offending field. The digest of the raw
// config bytes is recorded in the returned config.
ScenarioConfig load_scenario(const std::filesystem::path& file);
ScenarioConfig parse_scenario(const std::string& text);

}  // namespace pbs
