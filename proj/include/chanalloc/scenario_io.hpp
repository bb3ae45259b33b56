#pragma once

#include <filesystem>
#include <string>

#include "chanalloc/experiment.hpp"

namespace chanalloc {

/// Reads a ScenarioConfig from JSON text. Keys mirror the struct fields;
/// "utility_scale" also accepts "auto". Unknown keys and type mismatches
/// throw InvalidParameter.
ScenarioConfig config_from_json(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});
std::string config_to_json(const ScenarioConfig& cfg);

void write_network_files(const std::filesystem::path& dir, const Network& net);

/// Per-run directory: trace series, per-user averages, summary and CDFs.
/// Learning schemes also get one weights_u<i>.csv per user.
void write_scheme_files(const std::filesystem::path& dir, const SchemeResult& result);

// summary.csv rows for several results sharing one directory.
void write_summary_csv(const std::filesystem::path& file, std::span<const SchemeResult> results);

void write_run_outputs(const std::filesystem::path& dir, const ScenarioSetup& setup,
                       const SchemeResult& result);

// Top level holds topology, gains and a combined summary (initial row first);
// one subdirectory per scheme.
void write_comparison_outputs(const std::filesystem::path& dir, const Comparison& cmp);

}  // namespace chanalloc
