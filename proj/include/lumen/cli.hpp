#pragma once

#include <filesystem>
#include <ostream>

#include "lumen/config.hpp"

namespace lumen::cli {

// Each command is a pure function of (config, input files): reruns with the
// same inputs produce byte-identical outputs. out_dir overrides the config's
// out_dir when nonempty.
int cmd_train(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_eval(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_power(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_lower(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// Shared helpers, exposed for tests.
std::filesystem::path resolve_out_dir(const RunConfig& cfg, const std::filesystem::path& out_dir);
std::filesystem::path weights_path(const RunConfig& cfg, const std::filesystem::path& out_dir);
Dataset load_split(const RunConfig& cfg, bool train_split);
void write_eval_csv(std::ostream& os, const AccuracyReport& r);

}  // namespace lumen::cli
