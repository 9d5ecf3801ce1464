#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oilcast/dataset.hpp"
#include "oilcast/decompose.hpp"
#include "oilcast/ensemble.hpp"
#include "oilcast/training.hpp"

namespace oilcast {

struct SeriesSource {
    std::string name;
    std::string path;
    std::string date_column = "Date";
    std::string value_column = "Close";
};

/// Everything one reproducible experiment needs. Loaded from a JSON file;
/// command-line flags override individual fields.
struct ExperimentConfig {
    SeriesSource target;                  // the price series
    std::vector<SeriesSource> candidates; // candidate exogenous series

    SplitSpec split;
    double selection_threshold = 0.6;
    int window = 5;
    int horizon = 3;

    TrendMode decomposition_mode = TrendMode::Centered;
    int ma_window = 21;

    // Cell type and direction come from the variant name in `train`; the
    // ensemble scenarios are bidirectional GRU networks by construction.
    int hidden_size = 64;
    int head_hidden = 64;

    TrainConfig train;

    double grid_step = 0.05;
    Scenario2Target scenario2_target = Scenario2Target::Price;
    bool parallel_scenarios = false;

    std::string output_dir = "out";
    std::uint64_t seed = 42;
};

ExperimentConfig load_config(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& config);

/// FNV-1a hash (hex) of the canonical config serialization, excluding the
/// output directory: two configs with one digest produce one set of
/// non-timestamp outputs.
std::string config_digest(const ExperimentConfig& config);

} // namespace oilcast
