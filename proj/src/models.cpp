#include "oilcast/models.hpp"

#include <cmath>

#include "oilcast/errors.hpp"
#include "oilcast/rng.hpp"

namespace oilcast {

std::string cell_name(Cell cell) { return cell == Cell::Gru ? "gru" : "lstm"; }

Cell parse_cell(const std::string& name) {
    if (name == "gru") return Cell::Gru;
    if (name == "lstm") return Cell::Lstm;
    throw ParamError("unknown cell type '" + name + "' (expected gru or lstm)");
}

void ModelSpec::validate() const {
    if (input_features < 1 || hidden_size < 1 || head_hidden < 1 || horizon < 1)
        throw ParamError("model spec: all sizes must be >= 1");
}

namespace {

const char* const kGruGates[] = {"z", "r", "h"};
const char* const kLstmGates[] = {"i", "f", "g", "o"};

std::vector<std::string> direction_prefixes(const ModelSpec& spec) {
    const std::string base = cell_name(spec.cell) + ".";
    if (spec.bidirectional) return {base + "f.", base + "b."};
    return {base + "f."};
}

} // namespace

std::vector<std::tuple<std::string, int, int>> parameter_shapes(const ModelSpec& spec) {
    spec.validate();
    std::vector<std::tuple<std::string, int, int>> out;
    const int F = spec.input_features;
    const int H = spec.hidden_size;
    for (const auto& prefix : direction_prefixes(spec)) {
        const bool gru = spec.cell == Cell::Gru;
        const std::size_t n_gates = gru ? 3 : 4;
        for (std::size_t g = 0; g < n_gates; ++g) {
            const std::string gate = gru ? kGruGates[g] : kLstmGates[g];
            out.emplace_back(prefix + "W" + gate, F, H);
            out.emplace_back(prefix + "U" + gate, H, H);
            out.emplace_back(prefix + "b" + gate, 1, H);
        }
    }
    const int rep = spec.representation_size();
    out.emplace_back("head.W1", rep, spec.head_hidden);
    out.emplace_back("head.b1", 1, spec.head_hidden);
    out.emplace_back("head.W2", spec.head_hidden, spec.horizon);
    out.emplace_back("head.b2", 1, spec.horizon);
    return out;
}

ParameterSet init_params(const ModelSpec& spec) {
    Rng rng(spec.seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.hidden_size));
    ParameterSet params;
    for (const auto& [name, rows, cols] : parameter_shapes(spec)) {
        Array2 arr(rows, cols);
        for (double& v : arr.data) v = rng.uniform(-bound, bound);
        params.emplace(name, std::move(arr));
    }
    return params;
}

VarMap register_params(GradTape& tape, const ParameterSet& params) {
    VarMap vars;
    for (const auto& [name, value] : params) vars.emplace(name, tape.param(name, value));
    return vars;
}

namespace {

Var lookup(const VarMap& vars, const std::string& name) {
    auto it = vars.find(name);
    if (it == vars.end())
        throw ContractError("model: parameter '" + name + "' is not registered");
    return it->second;
}

// x W + h U + b, the shared gate pre-activation.
Var gate_preact(GradTape& t, Var x, Var h, const VarMap& vars,
                const std::string& prefix, const std::string& gate) {
    Var xs = t.matmul(x, lookup(vars, prefix + "W" + gate));
    Var hs = t.matmul(h, lookup(vars, prefix + "U" + gate));
    return t.add(t.add(xs, hs), lookup(vars, prefix + "b" + gate));
}

} // namespace

Var gru_cell(GradTape& t, Var x, Var h_prev, const VarMap& vars,
             const std::string& prefix) {
    Var z = t.sigmoid(gate_preact(t, x, h_prev, vars, prefix, "z"));
    Var r = t.sigmoid(gate_preact(t, x, h_prev, vars, prefix, "r"));

    Var xs = t.matmul(x, lookup(vars, prefix + "Wh"));
    Var rh = t.mul(r, h_prev);
    Var hs = t.matmul(rh, lookup(vars, prefix + "Uh"));
    Var htilde = t.tanh(t.add(t.add(xs, hs), lookup(vars, prefix + "bh")));

    const int rows = t.value(z).rows;
    const int cols = t.value(z).cols;
    Var ones = t.leaf(Array2::full(rows, cols, 1.0));
    Var keep = t.mul(t.sub(ones, z), h_prev);
    Var update = t.mul(z, htilde);
    return t.add(keep, update);
}

LstmState lstm_cell(GradTape& t, Var x, LstmState state, const VarMap& vars,
                    const std::string& prefix) {
    Var i = t.sigmoid(gate_preact(t, x, state.h, vars, prefix, "i"));
    Var f = t.sigmoid(gate_preact(t, x, state.h, vars, prefix, "f"));
    Var g = t.tanh(gate_preact(t, x, state.h, vars, prefix, "g"));
    Var o = t.sigmoid(gate_preact(t, x, state.h, vars, prefix, "o"));

    Var c_next = t.add(t.mul(f, state.c), t.mul(i, g));
    Var h_next = t.mul(o, t.tanh(c_next));
    return {h_next, c_next};
}

namespace {

Var run_direction(GradTape& t, const std::vector<Var>& steps, bool reversed,
                  const ModelSpec& spec, const VarMap& vars,
                  const std::string& prefix) {
    const int batch = t.value(steps.front()).rows;
    Var h = t.leaf(Array2::zeros(batch, spec.hidden_size));
    if (spec.cell == Cell::Gru) {
        for (std::size_t s = 0; s < steps.size(); ++s) {
            const std::size_t at = reversed ? steps.size() - 1 - s : s;
            h = gru_cell(t, steps[at], h, vars, prefix);
        }
        return h;
    }
    LstmState state{h, t.leaf(Array2::zeros(batch, spec.hidden_size))};
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const std::size_t at = reversed ? steps.size() - 1 - s : s;
        state = lstm_cell(t, steps[at], state, vars, prefix);
    }
    return state.h;
}

} // namespace

Var encode(GradTape& t, const std::vector<Var>& steps, const ModelSpec& spec,
           const VarMap& vars) {
    if (steps.empty()) throw ContractError("encode: window must have >= 1 timestep");
    for (Var s : steps)
        if (t.value(s).cols != spec.input_features)
            throw ShapeError("encode: step has " +
                             std::to_string(t.value(s).cols) + " features, spec says " +
                             std::to_string(spec.input_features));

    const std::string base = cell_name(spec.cell) + ".";
    Var forward = run_direction(t, steps, false, spec, vars, base + "f.");
    if (!spec.bidirectional) return forward;
    Var backward = run_direction(t, steps, true, spec, vars, base + "b.");
    return t.concat_cols(forward, backward);
}

Var head(GradTape& t, Var representation, const VarMap& vars) {
    Var a0 = t.relu(representation);
    Var a1 = t.relu(t.add(t.matmul(a0, lookup(vars, "head.W1")), lookup(vars, "head.b1")));
    return t.add(t.matmul(a1, lookup(vars, "head.W2")), lookup(vars, "head.b2"));
}

Var model_forward(GradTape& t, const std::vector<Var>& steps,
                  const ModelSpec& spec, const VarMap& vars) {
    return head(t, encode(t, steps, spec, vars), vars);
}

std::vector<Array2> stack_steps(const std::vector<const Array2*>& windows) {
    if (windows.empty()) throw ContractError("stack_steps: empty batch");
    const int w = windows.front()->rows;
    const int f = windows.front()->cols;
    std::vector<Array2> steps;
    steps.reserve(static_cast<std::size_t>(w));
    for (int r = 0; r < w; ++r) {
        Array2 step(static_cast<int>(windows.size()), f);
        for (std::size_t b = 0; b < windows.size(); ++b) {
            const Array2& win = *windows[b];
            if (win.rows != w || win.cols != f)
                throw ShapeError("stack_steps: ragged window shapes in batch");
            for (int c = 0; c < f; ++c)
                step.at(static_cast<int>(b), c) = win.at(r, c);
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

Array2 predict_batch(const ModelSpec& spec, const ParameterSet& params,
                     const std::vector<const Array2*>& windows) {
    GradTape tape;
    VarMap vars = register_params(tape, params);
    std::vector<Var> steps;
    for (auto& step : stack_steps(windows)) steps.push_back(tape.leaf(std::move(step)));
    Var out = model_forward(tape, steps, spec, vars);
    return tape.value(out);
}

Array2 predict(const ModelSpec& spec, const ParameterSet& params,
               const Array2& window) {
    return predict_batch(spec, params, {&window});
}

} // namespace oilcast
