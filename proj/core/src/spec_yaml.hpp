#pragma once

#include "presist/graph.hpp"

#include <yaml-cpp/yaml.h>

namespace presist::detail {

GraphSpec spec_from_node(const YAML::Node &node);

} // namespace presist::detail
