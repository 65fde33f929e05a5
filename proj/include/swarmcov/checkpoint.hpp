#pragma once

#include "swarmcov/learner.hpp"

#include <filesystem>
#include <vector>

namespace swarmcov::learner {

// Versioned binary checkpoint: magic, format version, agent count, network
// specs, then every parameter array (nets and optimizer moments) in declared
// order as 64-bit little-endian doubles. Round-trips exactly.
void save_checkpoint(const std::filesystem::path& path, const std::vector<AgentNets>& nets);

std::vector<AgentNets> load_checkpoint(const std::filesystem::path& path);

}  // namespace swarmcov::learner
