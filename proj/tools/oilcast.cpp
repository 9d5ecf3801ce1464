#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oilcast/config.hpp"
#include "oilcast/errors.hpp"
#include "oilcast/pipeline.hpp"
#include "oilcast/version.hpp"

namespace {

// Exit statuses are a scripting contract:
//   0 success, 1 internal error, 2 input error, 3 missing prerequisite stage.
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitMissingStage = 3;

struct GlobalOptions {
    std::string config_path = "config.json";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

oilcast::ExperimentConfig resolve_config(const GlobalOptions& opts) {
    oilcast::ExperimentConfig config = oilcast::load_config(opts.config_path);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.out_dir) {
        config.output_dir = *opts.out_dir;
    } else if (const char* env = std::getenv("OILCAST_OUT"); env && *env) {
        config.output_dir = env;
    }
    return config;
}

oilcast::EnsembleWeights parse_weights(const std::string& text) {
    oilcast::EnsembleWeights w;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &w.w1, &w.w2, &w.w3) != 3)
        throw oilcast::ParamError("--weights expects three comma-separated numbers, "
                                  "e.g. 0.5,1,0.5");
    return w;
}

void print_files(const oilcast::pipeline::StageResult& result,
                 const std::string& out_dir) {
    for (const auto& file : result.files) std::cout << out_dir << "/" << file << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oilcast: ensemble Bi-GRU forecasting toolkit for daily price series"};
    app.set_version_flag("--version", oilcast::kVersion);
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Experiment config JSON")
        ->capture_default_str();
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the master seed");
    std::string out_value;
    auto* out_opt =
        app.add_option("--out", out_value,
                       "Output directory (falls back to $OILCAST_OUT, then the config)");

    auto* cmd_prepare =
        app.add_subcommand("prepare", "Ingest, join, interpolate, fit the scaler");
    auto* cmd_select =
        app.add_subcommand("select", "Rank candidate features by Spearman correlation");
    auto* cmd_train = app.add_subcommand("train", "Train one model variant");
    std::string model_name;
    cmd_train->add_option("model", model_name, "Variant name, e.g. sent-bi-gru")
        ->required();
    auto* cmd_ensemble =
        app.add_subcommand("ensemble", "Train the three scenarios and fuse forecasts");
    std::string weights_text;
    cmd_ensemble->add_option("--weights", weights_text,
                             "Skip the grid search and fuse with w1,w2,w3");
    bool parallel = false;
    cmd_ensemble->add_flag("--parallel-scenarios", parallel,
                           "Train the three scenarios on separate threads");
    auto* cmd_report =
        app.add_subcommand("report", "Collate evaluated runs into benchmark tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }
    if (seed_opt->count()) opts.seed = seed_value;
    if (out_opt->count()) opts.out_dir = out_value;

    try {
        oilcast::ExperimentConfig config = resolve_config(opts);
        if (*cmd_prepare) {
            print_files(oilcast::pipeline::prepare(config), config.output_dir);
        } else if (*cmd_select) {
            print_files(oilcast::pipeline::select(config), config.output_dir);
        } else if (*cmd_train) {
            print_files(oilcast::pipeline::train_model(config, model_name),
                        config.output_dir);
        } else if (*cmd_ensemble) {
            config.parallel_scenarios = parallel || config.parallel_scenarios;
            oilcast::pipeline::EnsembleOptions options;
            if (!weights_text.empty()) options.weights_override = parse_weights(weights_text);
            print_files(oilcast::pipeline::run_ensemble(config, options),
                        config.output_dir);
        } else if (*cmd_report) {
            print_files(oilcast::pipeline::report(config), config.output_dir);
        }
        return 0;
    } catch (const oilcast::MissingStageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingStage;
    } catch (const oilcast::IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const oilcast::ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const oilcast::PrepError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const oilcast::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
