#pragma once

#include <stdexcept>
#include <string>

namespace oilcast {

// Dimension or layout mismatch between arrays/matrices.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated an operation's stated precondition.
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// Raw input could not be read or parsed (CSV rows, config files).
struct IngestError : std::runtime_error {
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// Dataset preparation failed (interpolation, scaling, windowing).
struct PrepError : std::runtime_error {
    explicit PrepError(const std::string& what) : std::runtime_error(what) {}
};

// An out-of-range or malformed hyperparameter.
struct ParamError : std::runtime_error {
    explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

// Training diverged or could not proceed.
struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& what) : std::runtime_error(what) {}
};

// Benchmark rows are not comparable (different splits or windows).
struct ComparisonError : std::runtime_error {
    explicit ComparisonError(const std::string& what) : std::runtime_error(what) {}
};

// A pipeline stage ran before its prerequisite stage produced artifacts.
struct MissingStageError : std::runtime_error {
    explicit MissingStageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace oilcast
