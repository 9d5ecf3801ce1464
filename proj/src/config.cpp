#include "oilcast/config.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

using nlohmann::json;

SeriesSource source_from_json(const json& j) {
    SeriesSource s;
    s.name = j.at("name").get<std::string>();
    s.path = j.at("path").get<std::string>();
    s.date_column = j.value("date_column", s.date_column);
    s.value_column = j.value("value_column", s.value_column);
    return s;
}

json source_to_json(const SeriesSource& s) {
    return {{"name", s.name},
            {"path", s.path},
            {"date_column", s.date_column},
            {"value_column", s.value_column}};
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["data"]["target"] = source_to_json(c.target);
    j["data"]["candidates"] = json::array();
    for (const auto& s : c.candidates) j["data"]["candidates"].push_back(source_to_json(s));
    j["split"] = {{"train_end", c.split.train_end.to_string()},
                  {"valid_end", c.split.valid_end.to_string()}};
    j["selection"] = {{"threshold", c.selection_threshold}};
    j["window"] = c.window;
    j["horizon"] = c.horizon;
    j["decomposition"] = {
        {"mode", c.decomposition_mode == TrendMode::Centered ? "centered" : "trailing"},
        {"ma_window", c.ma_window}};
    j["model"] = {{"hidden_size", c.hidden_size}, {"head_hidden", c.head_hidden}};
    j["train"] = {{"batch_size", c.train.batch_size},
                  {"learning_rate", c.train.learning_rate},
                  {"weight_decay", c.train.weight_decay},
                  {"beta1", c.train.beta1},
                  {"beta2", c.train.beta2},
                  {"epsilon", c.train.epsilon},
                  {"max_epochs", c.train.max_epochs},
                  {"patience", c.train.patience},
                  {"shuffle", c.train.shuffle},
                  {"grad_clip", c.train.grad_clip}};
    j["ensemble"] = {{"grid_step", c.grid_step},
                     {"scenario2_target",
                      c.scenario2_target == Scenario2Target::Price ? "price" : "residual"}};
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    const auto& data = j.at("data");
    c.target = source_from_json(data.at("target"));
    if (data.contains("candidates"))
        for (const auto& s : data.at("candidates")) c.candidates.push_back(source_from_json(s));

    const auto& split = j.at("split");
    c.split.train_end = Date::parse(split.at("train_end").get<std::string>());
    c.split.valid_end = Date::parse(split.at("valid_end").get<std::string>());

    if (j.contains("selection"))
        c.selection_threshold = j.at("selection").value("threshold", c.selection_threshold);
    c.window = j.value("window", c.window);
    c.horizon = j.value("horizon", c.horizon);

    if (j.contains("decomposition")) {
        const auto& d = j.at("decomposition");
        const std::string mode = d.value("mode", "centered");
        if (mode == "centered")
            c.decomposition_mode = TrendMode::Centered;
        else if (mode == "trailing")
            c.decomposition_mode = TrendMode::Trailing;
        else
            throw ParamError("config: decomposition.mode must be centered or trailing");
        c.ma_window = d.value("ma_window", c.ma_window);
    }

    if (j.contains("model")) {
        const auto& m = j.at("model");
        c.hidden_size = m.value("hidden_size", c.hidden_size);
        c.head_hidden = m.value("head_hidden", c.head_hidden);
    }

    if (j.contains("train")) {
        const auto& t = j.at("train");
        c.train.batch_size = t.value("batch_size", c.train.batch_size);
        c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
        c.train.weight_decay = t.value("weight_decay", c.train.weight_decay);
        c.train.beta1 = t.value("beta1", c.train.beta1);
        c.train.beta2 = t.value("beta2", c.train.beta2);
        c.train.epsilon = t.value("epsilon", c.train.epsilon);
        c.train.max_epochs = t.value("max_epochs", c.train.max_epochs);
        c.train.patience = t.value("patience", c.train.patience);
        c.train.shuffle = t.value("shuffle", c.train.shuffle);
        c.train.grad_clip = t.value("grad_clip", c.train.grad_clip);
    }

    if (j.contains("ensemble")) {
        const auto& e = j.at("ensemble");
        c.grid_step = e.value("grid_step", c.grid_step);
        const std::string target = e.value("scenario2_target", "price");
        if (target == "price")
            c.scenario2_target = Scenario2Target::Price;
        else if (target == "residual")
            c.scenario2_target = Scenario2Target::Residual;
        else
            throw ParamError("config: ensemble.scenario2_target must be price or residual");
    }

    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = j.value("seed", c.seed);
    return c;
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw IngestError("config file " + path + ": " + e.what());
    }
}

std::string config_to_json_text(const ExperimentConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

std::string config_digest(const ExperimentConfig& config) {
    json j = config_to_json(config);
    j.erase("output_dir");
    const std::string canonical = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : canonical) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(ch));
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace oilcast
