#pragma once

#include <string>
#include <vector>

#include "oilcast/dataset.hpp"
#include "oilcast/models.hpp"

namespace oilcast {

/// Self-describing snapshot of a trained model: spec, scaler, the data
/// wiring needed to reproduce forward passes, and every parameter array.
struct Checkpoint {
    ModelSpec spec;
    ParameterSet params;
    Scaler scaler;
    std::vector<std::string> feature_columns;
    std::string target_column;
    int window = 0;
};

/// Binary layout: magic "OILCKPT1", little-endian u64 manifest length, a
/// JSON manifest (spec, scaler, wiring, array table with byte offsets),
/// then each array's values as little-endian 64-bit floats. The float
/// payload round-trips bit-exactly.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace oilcast
