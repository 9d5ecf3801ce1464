#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "oilcast/array.hpp"
#include "oilcast/tape.hpp"

namespace oilcast {

enum class Cell { Gru, Lstm };

std::string cell_name(Cell cell);
Cell parse_cell(const std::string& name);

/// Architecture of a recurrent encoder with a two-layer dense head that
/// emits all `horizon` steps at once.
struct ModelSpec {
    Cell cell = Cell::Gru;
    bool bidirectional = true;
    int input_features = 1;
    int hidden_size = 64;
    int head_hidden = 64;
    int horizon = 3;
    std::uint64_t seed = 42;

    int representation_size() const {
        return bidirectional ? 2 * hidden_size : hidden_size;
    }
    void validate() const;
};

/// Named, shaped parameter arrays. Input weights W_* are F x H, recurrent
/// weights U_* are H x H, biases are 1 x H rows; head arrays follow the
/// dense-layer shapes. std::map keeps iteration order stable, which the
/// optimizer relies on for reproducibility.
using ParameterSet = std::map<std::string, Array2>;

/// (name, rows, cols) for every array of the model, in initialization order.
std::vector<std::tuple<std::string, int, int>> parameter_shapes(const ModelSpec& spec);

/// Every array uniform in [-1/sqrt(H), +1/sqrt(H)], drawn from one Rng
/// stream seeded with spec.seed, arrays filled in parameter_shapes order.
ParameterSet init_params(const ModelSpec& spec);

using VarMap = std::map<std::string, Var>;

/// Registers every parameter on the tape so one backward pass yields the
/// full gradient map.
VarMap register_params(GradTape& tape, const ParameterSet& params);

/// One GRU step for a batch of row vectors:
///   z = sigmoid(x W_z + h U_z + b_z)
///   r = sigmoid(x W_r + h U_r + b_r)
///   htilde = tanh(x W_h + (r . h) U_h + b_h)
///   h' = (1 - z) . h + z . htilde
/// `prefix` selects the direction's arrays, e.g. "gru.f.".
Var gru_cell(GradTape& tape, Var x, Var h_prev, const VarMap& vars,
             const std::string& prefix);

struct LstmState {
    Var h;
    Var c;
};

/// Standard four-gate LSTM step: c' = f.c + i.g, h' = o.tanh(c').
LstmState lstm_cell(GradTape& tape, Var x, LstmState state, const VarMap& vars,
                    const std::string& prefix);

/// Runs the recurrent encoder over `steps` (one B x F input per timestep).
/// Unidirectional: the final forward hidden state (B x H). Bidirectional:
/// forward state over steps 1..w concatenated with backward state over
/// steps w..1 (B x 2H).
Var encode(GradTape& tape, const std::vector<Var>& steps, const ModelSpec& spec,
           const VarMap& vars);

/// Two dense layers; ReLU on the encoder output and between the layers,
/// linear output so standardized targets can go negative.
Var head(GradTape& tape, Var representation, const VarMap& vars);

Var model_forward(GradTape& tape, const std::vector<Var>& steps,
                  const ModelSpec& spec, const VarMap& vars);

/// Forward pass for one window (w x F), no gradients kept. Returns 1 x horizon.
Array2 predict(const ModelSpec& spec, const ParameterSet& params,
               const Array2& window);

/// Batched forward pass; rows follow the input order. Returns B x horizon.
Array2 predict_batch(const ModelSpec& spec, const ParameterSet& params,
                     const std::vector<const Array2*>& windows);

/// Stacks per-sample windows into per-timestep batch matrices (w of B x F).
std::vector<Array2> stack_steps(const std::vector<const Array2*>& windows);

} // namespace oilcast
