#pragma once

#include <string>
#include <vector>

#include "rquant/rng.hpp"
#include "rquant/traffic.hpp"

namespace rquant {

/// Synthetic traffic scenes with a built-in complexity gradient:
///   parallel_flows  - three straight lanes of increasing disorder, no
///                     crossings anywhere;
///   single_crossing - three flows meeting at the origin, complexity falls
///                     off radially from the crossing;
///   multi_crossing  - six dense flows through the origin.
enum class Scenario { parallel_flows, single_crossing, multi_crossing };

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

std::vector<TrafficSample> synthetic_scenario(Scenario s, std::size_t count,
                                              Rng& rng);

} // namespace rquant
