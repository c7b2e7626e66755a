#pragma once

#include <string>
#include <string_view>

#include "lagflow/flow.hpp"
#include "lagflow/scenario.hpp"

namespace lagflow {

ResampleMode resample_from_string(const std::string &name);

// {"scenario": {...}, "flow": {...}}; unset optionals are null.
std::string config_to_json(const ScenarioSpec &scenario, const FlowConfig &flow);

/// Overlays a config document onto `scenario` and `flow`; absent keys keep
/// their value. A "kind" key first resets the scenario to that kind's
/// defaults, keeping n and N. Throws InvalidSpec on malformed input.
void apply_config_json(std::string_view text, ScenarioSpec &scenario, FlowConfig &flow);

}  // namespace lagflow
