#pragma once

#include <string>

#include "floodecon/engine.hpp"

namespace floodecon {

// Parses a flat `key = value` scenario file. Lines starting with '#' and
// blank lines are skipped; unknown keys are hard errors so typos don't
// silently fall back to defaults.
ScenarioConfig parse_config(const std::string& path);

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace floodecon
