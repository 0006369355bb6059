#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace pbs {

// Exit codes: 0 success, 1 usage, 2 validation failure.
int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 std::ostream& err);
int cmd_analyze(const std::filesystem::path& dataset_dir, const std::string& report,
                const std::filesystem::path& out_dir, std::ostream& err);
int cmd_replay(const std::filesystem::path& dataset_dir, const std::string& block_id,
               std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& dataset_dir, std::ostream& out, std::ostream& err);

}  // namespace pbs
