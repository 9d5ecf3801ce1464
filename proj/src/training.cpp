#include "oilcast/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "oilcast/csv.hpp"
#include "oilcast/errors.hpp"
#include "oilcast/rng.hpp"

namespace oilcast {

void TrainConfig::validate() const {
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw ParamError("train config: betas must lie in (0, 1)");
    if (!(learning_rate > 0.0)) throw ParamError("train config: learning_rate must be > 0");
    if (batch_size < 1) throw ParamError("train config: batch_size must be >= 1");
    if (max_epochs < 1) throw ParamError("train config: max_epochs must be >= 1");
    if (patience < 0) throw ParamError("train config: patience must be >= 0");
    if (grad_clip < 0.0) throw ParamError("train config: grad_clip must be >= 0");
}

Var mse_loss(GradTape& t, Var pred, Var target) {
    // Copy the element count up front: pushing nodes below may reallocate
    // the tape, invalidating any reference obtained from value().
    const std::size_t elems = t.value(pred).size();
    if (!t.value(pred).same_shape(t.value(target)))
        throw ShapeError("mse_loss: prediction " + t.value(pred).shape_str() +
                         " vs target " + t.value(target).shape_str());
    Var diff = t.sub(pred, target);
    Var sq = t.mul(diff, diff);
    return t.scale(t.sum(sq), 1.0 / static_cast<double>(elems));
}

double mse_value(const Array2& pred, const Array2& target) {
    if (!pred.same_shape(target))
        throw ShapeError("mse_value: prediction " + pred.shape_str() + " vs target " +
                         target.shape_str());
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data[i] - target.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

void adamw_step(ParameterSet& params, const GradMap& grads, AdamWState& state,
                const TrainConfig& config) {
    config.validate();
    for (const auto& [name, g] : grads)
        if (!params.count(name))
            throw ContractError("adamw_step: gradient for unknown parameter '" + name + "'");

    double clip_factor = 1.0;
    if (config.grad_clip > 0.0) {
        double sq = 0.0;
        for (const auto& [name, g] : grads)
            for (double v : g.data) sq += v * v;
        const double norm = std::sqrt(sq);
        if (norm > config.grad_clip) clip_factor = config.grad_clip / norm;
    }

    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));

    for (auto& [name, theta] : params) {
        auto git = grads.find(name);
        if (git == grads.end())
            throw ContractError("adamw_step: no gradient for parameter '" + name + "'");
        const Array2& g = git->second;
        if (!g.same_shape(theta))
            throw ShapeError("adamw_step: gradient shape " + g.shape_str() +
                             " does not match parameter '" + name + "' " +
                             theta.shape_str());
        Array2& m = state.m.try_emplace(name, Array2::zeros(theta.rows, theta.cols))
                        .first->second;
        Array2& v = state.v.try_emplace(name, Array2::zeros(theta.rows, theta.cols))
                        .first->second;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double gi = g.data[i] * clip_factor;
            m.data[i] = config.beta1 * m.data[i] + (1.0 - config.beta1) * gi;
            v.data[i] = config.beta2 * v.data[i] + (1.0 - config.beta2) * gi * gi;
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            theta.data[i] -= config.learning_rate * (mhat / (std::sqrt(vhat) + config.epsilon)) +
                             config.learning_rate * config.weight_decay * theta.data[i];
        }
    }
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

Array2 stack_targets(const std::vector<WindowedSample>& samples) {
    if (samples.empty()) throw ContractError("stack_targets: empty sample list");
    const int h = static_cast<int>(samples.front().targets.size());
    Array2 out(static_cast<int>(samples.size()), h);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (static_cast<int>(samples[i].targets.size()) != h)
            throw ShapeError("stack_targets: ragged horizon lengths");
        for (int c = 0; c < h; ++c)
            out.at(static_cast<int>(i), c) = samples[i].targets[static_cast<std::size_t>(c)];
    }
    return out;
}

Array2 predict_samples(const ModelSpec& spec, const ParameterSet& params,
                       const std::vector<WindowedSample>& samples) {
    if (samples.empty()) throw ContractError("predict_samples: empty sample list");
    Array2 out(static_cast<int>(samples.size()), spec.horizon);
    // Chunked so tapes stay small; row order is unaffected.
    const std::size_t chunk = 256;
    for (std::size_t begin = 0; begin < samples.size(); begin += chunk) {
        const std::size_t end = std::min(samples.size(), begin + chunk);
        std::vector<const Array2*> windows;
        windows.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) windows.push_back(&samples[i].inputs);
        const Array2 pred = predict_batch(spec, params, windows);
        for (std::size_t i = begin; i < end; ++i)
            for (int c = 0; c < spec.horizon; ++c)
                out.at(static_cast<int>(i), c) = pred.at(static_cast<int>(i - begin), c);
    }
    return out;
}

TrainResult train(const ModelSpec& spec,
                  const std::vector<WindowedSample>& train_set,
                  const std::vector<WindowedSample>& valid_set,
                  const TrainConfig& config) {
    config.validate();
    spec.validate();
    if (train_set.empty() || valid_set.empty())
        throw ContractError("train: train and validation sample lists must be non-empty");

    ParameterSet params = init_params(spec);
    AdamWState opt;
    Rng shuffle_rng(derive_seed(config.seed, "shuffle"));

    TrainReport report;
    ParameterSet best_params = params;
    double best_valid = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int bad_epochs = 0;

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const Array2 valid_targets = stack_targets(valid_set);

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        if (config.shuffle) order = shuffled_indices(train_set.size(), shuffle_rng);

        double epoch_sse = 0.0;
        std::size_t epoch_elems = 0;
        const std::size_t batch = static_cast<std::size_t>(config.batch_size);
        int batch_index = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += batch, ++batch_index) {
            const std::size_t end = std::min(order.size(), begin + batch);
            std::vector<const Array2*> windows;
            windows.reserve(end - begin);
            std::vector<const WindowedSample*> members;
            for (std::size_t i = begin; i < end; ++i) {
                members.push_back(&train_set[order[i]]);
                windows.push_back(&train_set[order[i]].inputs);
            }
            Array2 targets(static_cast<int>(members.size()), spec.horizon);
            for (std::size_t i = 0; i < members.size(); ++i)
                for (int c = 0; c < spec.horizon; ++c)
                    targets.at(static_cast<int>(i), c) =
                        members[i]->targets[static_cast<std::size_t>(c)];

            GradTape tape;
            VarMap vars = register_params(tape, params);
            std::vector<Var> steps;
            for (auto& step : stack_steps(windows)) steps.push_back(tape.leaf(std::move(step)));
            Var pred = model_forward(tape, steps, spec, vars);
            Var loss = mse_loss(tape, pred, tape.leaf(targets));
            const double loss_value = tape.scalar(loss);
            if (!std::isfinite(loss_value))
                throw TrainError("training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batch_index));
            epoch_sse += loss_value * static_cast<double>(targets.size());
            epoch_elems += targets.size();

            GradMap grads = tape.backward(loss);
            adamw_step(params, grads, opt, config);
        }
        report.train_mse.push_back(epoch_sse / static_cast<double>(epoch_elems));

        const Array2 valid_pred = predict_samples(spec, params, valid_set);
        const double valid = mse_value(valid_pred, valid_targets);
        if (!std::isfinite(valid))
            throw TrainError("training diverged: non-finite validation loss at epoch " +
                             std::to_string(epoch));
        report.valid_mse.push_back(valid);

        if (valid < best_valid) {
            best_valid = valid;
            best_epoch = epoch;
            best_params = params;
            bad_epochs = 0;
        } else {
            ++bad_epochs;
        }
        if (config.target_valid_mse > 0.0 && best_valid <= config.target_valid_mse) {
            report.stop_reason = "target_reached";
            break;
        }
        if (bad_epochs >= config.patience) {
            report.stop_reason = "early_stop";
            break;
        }
    }
    if (report.stop_reason.empty()) report.stop_reason = "max_epochs";

    report.best_epoch = best_epoch;
    report.best_valid = best_valid;
    return {std::move(best_params), std::move(report)};
}

void write_train_report_csv(const TrainReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write train report: " + path);
    out << "epoch,train_mse,valid_mse\n";
    for (std::size_t i = 0; i < report.train_mse.size(); ++i)
        out << (i + 1) << ',' << csv::format_double(report.train_mse[i]) << ','
            << csv::format_double(report.valid_mse[i]) << '\n';
}

} // namespace oilcast
