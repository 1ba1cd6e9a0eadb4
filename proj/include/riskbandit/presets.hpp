#pragma once

#include <string>
#include <vector>

#include "riskbandit/config.hpp"

namespace riskbandit {

/// scenario-var-min, scenario-balance, scenario-reward-max, rho-sweep,
/// k-sweep, tau-sweep, transform-demo.
const std::vector<std::string>& preset_names();

/// Desk-scale configuration of a named preset (100 runs). With paper_scale the
/// run count and horizon are raised to the published sizes. Throws ConfigError
/// for an unknown name.
ExperimentConfig preset_config(const std::string& name, bool paper_scale = false);

/// The 15 Gaussian arms shared by the scenario and rho-sweep presets.
std::vector<ArmDistribution> fifteen_arm_setup();

/// The three-arm environment used by the tau-sweep and transform-demo presets.
std::vector<ArmDistribution> three_arm_example();

}  // namespace riskbandit
