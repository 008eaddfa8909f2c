#pragma once

#include <string>

#include "pod/scenario.hpp"

namespace pod::test {

inline std::string scenario_path(const std::string& name) { return std::string(POD_SCENARIO_DIR) + "/" + name; }

/// Ten equal-stake diligent watchtowers at the worked-example parameters.
inline Scenario baseline(std::uint64_t epochs = 20, std::uint64_t seed = 1) {
    Scenario s = load_scenario(scenario_path("baseline.ini"));
    s.epochs = epochs;
    s.seed = seed;
    return s;
}

}  // namespace pod::test
