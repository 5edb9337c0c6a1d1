#pragma once

#include <string>
#include <vector>

#include "floodecon/engine.hpp"

namespace floodecon {

inline constexpr const char* kArtifactVersion = "floodecon 0.1.0";

// Shortest round-trip decimal form of a double (std::to_chars), so equal
// values always print identically and parse back exactly.
std::string format_double(double v);

// Fixed column order; one row per frame. Empty series -> header-only file.
void write_metrics_csv(const std::string& path, const std::vector<MetricsFrame>& series);

extern const char* kMetricsCsvHeader;

// Final-step values plus end-of-run aggregates. Deterministic for a given
// (config, seed): no timestamps in here.
void write_summary_json(const std::string& path, const WorldState& state);

// Run record: config snapshot, seed, wall-clock timestamps, output paths.
// The timestamps make this the one output file that varies between
// otherwise identical runs.
void write_manifest(const std::string& path, const ScenarioConfig& config, const std::string& config_path,
                    const std::vector<std::string>& output_paths, const std::string& started_at,
                    const std::string& finished_at);

std::string timestamp_utc_now();

}  // namespace floodecon
