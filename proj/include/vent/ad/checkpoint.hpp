#pragma once

#include "vent/ad/optim.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace vent::ad {

// Checkpoint container: 8-byte magic, length-prefixed JSON header (metadata
// plus tensor names/shapes in order), then one float64 block per tensor.
struct LoadedTensor {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::vector<double> values;
};

struct Checkpoint {
    nlohmann::json meta;
    std::vector<LoadedTensor> tensors;

    const LoadedTensor& find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const nlohmann::json& meta,
                     const std::vector<Param>& params);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace vent::ad
