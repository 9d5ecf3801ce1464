#include "oilcast/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "oilcast/checkpoint.hpp"
#include "oilcast/csv.hpp"
#include "oilcast/decompose.hpp"
#include "oilcast/errors.hpp"
#include "oilcast/evaluation.hpp"
#include "oilcast/rng.hpp"
#include "oilcast/version.hpp"

namespace oilcast::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_iso8601() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void update_manifest(const ExperimentConfig& config, const std::string& stage,
                     const std::vector<std::string>& files) {
    const fs::path path = fs::path(config.output_dir) / "manifest.json";
    json manifest;
    if (fs::exists(path)) {
        try {
            manifest = json::parse(read_text(path));
        } catch (const json::exception&) {
            manifest = json::object();
        }
    }
    manifest["config_digest"] = config_digest(config);
    manifest["version"] = kVersion;
    if (!manifest.contains("created")) manifest["created"] = now_iso8601();
    manifest["updated"] = now_iso8601();
    manifest["stages"][stage] = {{"completed", now_iso8601()}, {"files", files}};
    write_text(path, manifest.dump(2) + "\n");
}

fs::path prepared_csv_path(const ExperimentConfig& c) {
    return fs::path(c.output_dir) / "prepared.csv";
}
fs::path scaler_json_path(const ExperimentConfig& c) {
    return fs::path(c.output_dir) / "scaler.json";
}

void require_prepared(const ExperimentConfig& config) {
    if (!fs::exists(prepared_csv_path(config)) || !fs::exists(scaler_json_path(config)))
        throw MissingStageError("prepared dataset not found in '" + config.output_dir +
                                "'; run `prepare` first");
}

std::string scaler_to_json_text(const Scaler& scaler) {
    json j;
    j["columns"] = json::array();
    for (const auto& name : scaler.names())
        j["columns"].push_back({{"name", name},
                                {"mean", scaler.mean(name)},
                                {"std", scaler.std(name)}});
    return j.dump(2) + "\n";
}

Scaler scaler_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    std::vector<std::string> names;
    std::vector<double> means, stds;
    for (const auto& col : j.at("columns")) {
        names.push_back(col.at("name").get<std::string>());
        means.push_back(col.at("mean").get<double>());
        stds.push_back(col.at("std").get<double>());
    }
    return Scaler(std::move(names), std::move(means), std::move(stds));
}

std::string dataset_to_csv(const AlignedDataset& dataset) {
    std::ostringstream out;
    out << "date";
    for (const auto& col : dataset.columns) out << ',' << col.name;
    out << '\n';
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        out << dataset.dates[i].to_string();
        for (const auto& col : dataset.columns)
            out << ',' << csv::format_double(col.values[i]);
        out << '\n';
    }
    return out.str();
}

AlignedDataset dataset_from_csv_text(const std::string& text,
                                     const std::string& target_name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IngestError("prepared.csv: empty file");
    const auto header = csv::split_line(line);
    if (header.empty() || header[0] != "date")
        throw IngestError("prepared.csv: first column must be 'date'");

    AlignedDataset out;
    for (std::size_t c = 1; c < header.size(); ++c)
        out.columns.push_back({header[c],
                               header[c] == target_name ? ColumnRole::Target
                                                        : ColumnRole::Exogenous,
                               {}});
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = csv::split_line(line);
        if (cells.size() != header.size())
            throw IngestError("prepared.csv row " + std::to_string(row) +
                              ": wrong cell count");
        out.dates.push_back(Date::parse(cells[0]));
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const auto v = csv::parse_cell(cells[c], "prepared.csv row " + std::to_string(row));
            if (!v)
                throw IngestError("prepared.csv row " + std::to_string(row) +
                                  ": missing value in prepared data");
            out.columns[c - 1].values.push_back(*v);
        }
    }
    return out;
}

/// Raw interpolated dataset + scaler as written by `prepare`.
struct PreparedData {
    AlignedDataset raw;
    Scaler scaler;
};

PreparedData load_prepared(const ExperimentConfig& config) {
    require_prepared(config);
    PreparedData out;
    out.raw = dataset_from_csv_text(read_text(prepared_csv_path(config)),
                                    config.target.name);
    out.scaler = scaler_from_json_text(read_text(scaler_json_path(config)));
    return out;
}

/// Scaled dataset with the derived residual column appended.
AlignedDataset build_model_dataset(const ExperimentConfig& config,
                                   const PreparedData& prepared) {
    AlignedDataset scaled = prepared.scaler.transform(prepared.raw);
    const auto& target = scaled.column(config.target.name);
    const Decomposition dec =
        decompose(target.values, config.ma_window, config.decomposition_mode);
    scaled.columns.push_back({"residual", ColumnRole::Derived, dec.residual});
    return scaled;
}

std::size_t anchor_index(const std::vector<Date>& dates, const Date& anchor) {
    const auto it = std::lower_bound(dates.begin(), dates.end(), anchor);
    if (it == dates.end() || !(*it == anchor))
        throw ContractError("anchor date " + anchor.to_string() + " not in dataset");
    return static_cast<std::size_t>(it - dates.begin());
}

json metrics_to_json(const Metrics& m) {
    return {{"mae", m.mae}, {"mse", m.mse}, {"rmse", m.rmse}, {"n", m.n}};
}

/// predictions.csv: one row per (test sample, horizon step), price units.
std::string predictions_csv(const std::vector<Date>& dates,
                            const std::vector<Date>& anchors, const Array2& actual,
                            const Array2& predicted) {
    std::ostringstream out;
    out << "anchor_date,step,date,actual,predicted\n";
    for (int r = 0; r < actual.rows; ++r) {
        const std::size_t at = anchor_index(dates, anchors[static_cast<std::size_t>(r)]);
        for (int h = 0; h < actual.cols; ++h) {
            out << anchors[static_cast<std::size_t>(r)].to_string() << ',' << (h + 1)
                << ',' << dates[at + static_cast<std::size_t>(h) + 1].to_string() << ','
                << csv::format_double(actual.at(r, h)) << ','
                << csv::format_double(predicted.at(r, h)) << '\n';
        }
    }
    return out.str();
}

Array2 inverse_prices(const Scaler& scaler, const std::string& column,
                      const Array2& scaled) {
    const double sd = scaler.std(column);
    const double mean = scaler.mean(column);
    Array2 out(scaled.rows, scaled.cols);
    for (std::size_t i = 0; i < scaled.size(); ++i)
        out.data[i] = scaled.data[i] * sd + mean;
    return out;
}

json split_signature_json(const ExperimentConfig& config, std::size_t test_samples) {
    return {{"train_end", config.split.train_end.to_string()},
            {"valid_end", config.split.valid_end.to_string()},
            {"test_samples", test_samples}};
}

} // namespace

StageResult prepare(const ExperimentConfig& config) {
    const TimeSeries target = ingest_csv(config.target.path, config.target.date_column,
                                         config.target.value_column, config.target.name);
    std::vector<TimeSeries> others;
    for (const auto& src : config.candidates)
        others.push_back(ingest_csv(src.path, src.date_column, src.value_column, src.name));

    const AlignedDataset joined = left_join(target, others);
    const AlignedDataset prepared = interpolate(joined);
    const Scaler scaler = fit_scaler(prepared, config.split);
    const auto idx = split_indices(prepared.dates, config.split);

    // Residual column for the audit decomposition, in scaled space so it
    // shares the scale of the other model inputs.
    const AlignedDataset scaled = scaler.transform(prepared);
    const auto& scaled_target = scaled.column(config.target.name);
    const Decomposition dec =
        decompose(scaled_target.values, config.ma_window, config.decomposition_mode);

    std::ostringstream dc;
    dc << "date,value,trend,residual\n";
    for (std::size_t i = 0; i < scaled.size(); ++i)
        dc << scaled.dates[i].to_string() << ','
           << csv::format_double(scaled_target.values[i]) << ','
           << csv::format_double(dec.trend[i]) << ','
           << csv::format_double(dec.residual[i]) << '\n';

    auto slice_json = [&](std::size_t lo, std::size_t hi) {
        return json{{"from", prepared.dates[lo].to_string()},
                    {"to", prepared.dates[hi - 1].to_string()},
                    {"rows", hi - lo}};
    };
    json summary;
    summary["train"] = slice_json(0, idx.train_end);
    summary["valid"] = slice_json(idx.train_end, idx.valid_end);
    summary["test"] = slice_json(idx.valid_end, idx.total);
    summary["total_rows"] = prepared.size();

    const fs::path out_dir(config.output_dir);
    write_text(out_dir / "prepared.csv", dataset_to_csv(prepared));
    write_text(out_dir / "scaler.json", scaler_to_json_text(scaler));
    write_text(out_dir / "decomposition.csv", dc.str());
    write_text(out_dir / "split_summary.json", summary.dump(2) + "\n");

    StageResult result;
    result.files = {"prepared.csv", "scaler.json", "decomposition.csv",
                    "split_summary.json"};
    update_manifest(config, "prepare", result.files);
    return result;
}

StageResult select(const ExperimentConfig& config) {
    const PreparedData prepared = load_prepared(config);
    const auto correlations =
        feature_correlations(prepared.raw, config.selection_threshold);

    std::ostringstream cc;
    cc << "feature,spearman,selected\n";
    std::vector<std::string> selected;
    for (const auto& fc : correlations) {
        cc << fc.name << ',' << csv::format_double(fc.rho) << ','
           << (fc.selected ? "yes" : "no") << '\n';
        if (fc.selected) selected.push_back(fc.name);
    }
    if (selected.empty())
        std::cerr << "warning: no feature cleared the |spearman| >= "
                  << config.selection_threshold << " threshold\n";

    json sj;
    sj["threshold"] = config.selection_threshold;
    sj["selected"] = selected;

    const fs::path out_dir(config.output_dir);
    write_text(out_dir / "correlations.csv", cc.str());
    write_text(out_dir / "selected_features.json", sj.dump(2) + "\n");

    StageResult result;
    result.files = {"correlations.csv", "selected_features.json"};
    update_manifest(config, "select", result.files);
    return result;
}

ModelVariant parse_model_name(const std::string& name, const ExperimentConfig& config) {
    const std::string usage =
        "expected [sent-|usd-|teni-|all-][bi-](gru|lstm)[-1|-3], e.g. gru, bi-lstm, "
        "sent-bi-gru, teni-gru-1 (use the `ensemble` command for ers-bi-gru)";
    std::string rest;
    for (char ch : name) rest += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (rest == "ers-bi-gru")
        throw ParamError("'" + name + "' is the ensemble model; " + usage);

    ModelVariant variant;
    variant.name = rest;
    variant.features = {config.target.name};

    auto strip_prefix = [&](const std::string& prefix) {
        if (rest.rfind(prefix, 0) == 0) {
            rest = rest.substr(prefix.size());
            return true;
        }
        return false;
    };

    if (strip_prefix("sent-")) variant.features.push_back("sent");
    else if (strip_prefix("usd-")) variant.features.push_back("usdx");
    else if (strip_prefix("teni-")) variant.features.push_back("teni");
    else if (strip_prefix("all-")) {
        variant.features.push_back("sent");
        variant.features.push_back("usdx");
        variant.features.push_back("teni");
    }

    variant.bidirectional = strip_prefix("bi-");

    if (rest.size() >= 2 && rest.compare(rest.size() - 2, 2, "-1") == 0) {
        variant.horizon = 1;
        rest = rest.substr(0, rest.size() - 2);
    } else if (rest.size() >= 2 && rest.compare(rest.size() - 2, 2, "-3") == 0) {
        variant.horizon = 3;
        rest = rest.substr(0, rest.size() - 2);
    }

    if (rest == "gru") variant.cell = Cell::Gru;
    else if (rest == "lstm") variant.cell = Cell::Lstm;
    else throw ParamError("unknown model name '" + name + "'; " + usage);
    return variant;
}

StageResult train_model(const ExperimentConfig& config, const std::string& model_name) {
    const ModelVariant variant = parse_model_name(model_name, config);
    const PreparedData prepared = load_prepared(config);
    const AlignedDataset scaled = build_model_dataset(config, prepared);

    ModelSpec spec;
    spec.cell = variant.cell;
    spec.bidirectional = variant.bidirectional;
    spec.input_features = static_cast<int>(variant.features.size());
    spec.hidden_size = config.hidden_size;
    spec.head_hidden = config.head_hidden;
    spec.horizon = variant.horizon > 0 ? variant.horizon : config.horizon;
    spec.seed = derive_seed(config.seed, ("train:" + variant.name).c_str());

    TrainConfig train_config = config.train;
    train_config.seed = derive_seed(config.seed, ("batches:" + variant.name).c_str());

    const auto windows = make_windows(scaled, variant.features, config.window,
                                      spec.horizon, config.split);
    const TrainResult trained = train(spec, windows.train, windows.valid, train_config);

    const Array2 test_pred_scaled = predict_samples(spec, trained.params, windows.test);
    const Array2 test_targets_scaled = stack_targets(windows.test);
    const Array2 actual =
        inverse_prices(prepared.scaler, config.target.name, test_targets_scaled);
    const Array2 predicted =
        inverse_prices(prepared.scaler, config.target.name, test_pred_scaled);
    const Metrics test_metrics = metrics(actual, predicted);

    std::vector<Date> anchors;
    for (const auto& s : windows.test) anchors.push_back(s.anchor_date);

    Checkpoint ckpt;
    ckpt.spec = spec;
    ckpt.params = trained.params;
    ckpt.scaler = prepared.scaler;
    ckpt.feature_columns = variant.features;
    ckpt.target_column = config.target.name;
    ckpt.window = config.window;

    json mj;
    mj["model"] = variant.name;
    mj["horizon"] = spec.horizon;
    mj["metrics"] = metrics_to_json(test_metrics);
    mj["per_step"] = json::array();
    for (const auto& m : per_step_metrics(actual, predicted))
        mj["per_step"].push_back(metrics_to_json(m));
    mj["valid_mse_scaled"] = trained.report.best_valid;
    mj["best_epoch"] = trained.report.best_epoch;
    mj["stop_reason"] = trained.report.stop_reason;
    mj["config_digest"] = config_digest(config);
    mj["split"] = split_signature_json(config, windows.test.size());

    const fs::path run_dir = fs::path(config.output_dir) / "runs" / variant.name;
    save_checkpoint(ckpt, (run_dir / "checkpoint.bin").string());
    write_train_report_csv(trained.report, (run_dir / "train_report.csv").string());
    write_text(run_dir / "metrics.json", mj.dump(2) + "\n");
    write_text(run_dir / "predictions.csv",
               predictions_csv(scaled.dates, anchors, actual, predicted));

    const std::string rel = "runs/" + variant.name + "/";
    StageResult result;
    result.files = {rel + "checkpoint.bin", rel + "train_report.csv",
                    rel + "metrics.json", rel + "predictions.csv"};
    update_manifest(config, "train:" + variant.name, result.files);
    return result;
}

StageResult run_ensemble(const ExperimentConfig& config, const EnsembleOptions& options) {
    const PreparedData prepared = load_prepared(config);
    const AlignedDataset scaled = build_model_dataset(config, prepared);

    // The ensemble is three Bi-GRU networks regardless of the single-model
    // cell configured for `train`.
    ModelSpec base;
    base.cell = Cell::Gru;
    base.bidirectional = true;
    base.input_features = 2;
    base.hidden_size = config.hidden_size;
    base.head_hidden = config.head_hidden;
    base.horizon = config.horizon;
    base.seed = derive_seed(config.seed, "ensemble");

    TrainConfig train_config = config.train;
    train_config.seed = derive_seed(config.seed, "ensemble-batches");

    const std::array<ScenarioSpec, 3> specs = {
        make_scenario(1, base, config.target.name),
        make_scenario(2, base, config.target.name),
        make_scenario(3, base, config.target.name)};

    const ScenarioRuns runs =
        run_scenarios(scaled, specs, config.split, train_config, config.window,
                      config.scenario2_target, config.parallel_scenarios,
                      config.target.name);

    WeightSearchResult search;
    if (options.weights_override) {
        search.weights = *options.weights_override;
        search.valid_mse =
            evaluate_ensemble(runs.valid, search.weights, prepared.scaler,
                              config.target.name, runs.valid_targets)
                .mse;
        search.evaluations = 0;
    } else {
        search = search_weights(runs.valid, runs.valid_targets, prepared.scaler,
                                config.target.name, config.grid_step);
    }

    const Metrics test_metrics =
        evaluate_ensemble(runs.test, search.weights, prepared.scaler,
                          config.target.name, runs.test_targets);

    const Array2 fused_scaled = fuse(runs.test, search.weights);
    const Array2 actual =
        inverse_prices(prepared.scaler, config.target.name, runs.test_targets);
    const Array2 fused =
        inverse_prices(prepared.scaler, config.target.name, fused_scaled);

    // Per-scenario test metrics in price space, same inversion path.
    std::array<Metrics, 3> scenario_metrics;
    std::array<double, 3> scenario_valid_mse{};
    const std::array<const Array2*, 3> test_f = {&runs.test.forecast_1,
                                                 &runs.test.forecast_2,
                                                 &runs.test.forecast_3};
    const std::array<const Array2*, 3> valid_f = {&runs.valid.forecast_1,
                                                  &runs.valid.forecast_2,
                                                  &runs.valid.forecast_3};
    for (std::size_t i = 0; i < 3; ++i) {
        scenario_metrics[i] =
            metrics(actual, inverse_prices(prepared.scaler, config.target.name, *test_f[i]));
        const Array2 valid_actual =
            inverse_prices(prepared.scaler, config.target.name, runs.valid_targets);
        scenario_valid_mse[i] =
            metrics(valid_actual,
                    inverse_prices(prepared.scaler, config.target.name, *valid_f[i]))
                .mse;
    }

    std::ostringstream fc;
    fc << "anchor_date,step,forecast_1,forecast_2,forecast_3,fused,actual\n";
    const Array2 f1 = inverse_prices(prepared.scaler, config.target.name, runs.test.forecast_1);
    const Array2 f2 = inverse_prices(prepared.scaler, config.target.name, runs.test.forecast_2);
    const Array2 f3 = inverse_prices(prepared.scaler, config.target.name, runs.test.forecast_3);
    for (int r = 0; r < fused.rows; ++r)
        for (int h = 0; h < fused.cols; ++h)
            fc << runs.test.anchors[static_cast<std::size_t>(r)].to_string() << ','
               << (h + 1) << ',' << csv::format_double(f1.at(r, h)) << ','
               << csv::format_double(f2.at(r, h)) << ','
               << csv::format_double(f3.at(r, h)) << ','
               << csv::format_double(fused.at(r, h)) << ','
               << csv::format_double(actual.at(r, h)) << '\n';

    json wj;
    wj["w1"] = search.weights.w1;
    wj["w2"] = search.weights.w2;
    wj["w3"] = search.weights.w3;
    wj["valid_mse"] = search.valid_mse;
    wj["grid_step"] = config.grid_step;
    wj["evaluations"] = search.evaluations;

    json mj;
    mj["model"] = "ers-bi-gru";
    mj["horizon"] = base.horizon;
    mj["metrics"] = metrics_to_json(test_metrics);
    mj["per_step"] = json::array();
    for (const auto& m : per_step_metrics(actual, fused))
        mj["per_step"].push_back(metrics_to_json(m));
    mj["scenario_metrics"] = json::array();
    for (const auto& m : scenario_metrics) mj["scenario_metrics"].push_back(metrics_to_json(m));
    mj["scenario_valid_mse"] = scenario_valid_mse;
    mj["ensemble_valid_mse"] = search.valid_mse;
    mj["weights"] = {{"w1", search.weights.w1},
                     {"w2", search.weights.w2},
                     {"w3", search.weights.w3}};
    mj["config_digest"] = config_digest(config);
    mj["split"] = split_signature_json(config, runs.test.anchors.size());

    const fs::path run_dir = fs::path(config.output_dir) / "runs" / "ers-bi-gru";
    write_text(run_dir / "weights.json", wj.dump(2) + "\n");
    write_text(run_dir / "forecasts.csv", fc.str());
    write_text(run_dir / "metrics.json", mj.dump(2) + "\n");
    write_text(run_dir / "predictions.csv",
               predictions_csv(scaled.dates, runs.test.anchors, actual, fused));
    for (std::size_t i = 0; i < 3; ++i) {
        write_train_report_csv(
            runs.reports[i],
            (run_dir / ("train_report_s" + std::to_string(i + 1) + ".csv")).string());
        Checkpoint ckpt;
        ckpt.spec = specs[i].model;
        ckpt.params = runs.params[i];
        ckpt.scaler = prepared.scaler;
        ckpt.feature_columns = specs[i].input_columns;
        ckpt.target_column =
            (specs[i].id == 2 && config.scenario2_target == Scenario2Target::Residual)
                ? "residual"
                : config.target.name;
        ckpt.window = config.window;
        save_checkpoint(ckpt,
                        (run_dir / ("checkpoint_s" + std::to_string(i + 1) + ".bin")).string());
    }

    const std::string rel = "runs/ers-bi-gru/";
    StageResult result;
    result.files = {rel + "weights.json",        rel + "forecasts.csv",
                    rel + "metrics.json",        rel + "predictions.csv",
                    rel + "train_report_s1.csv", rel + "train_report_s2.csv",
                    rel + "train_report_s3.csv", rel + "checkpoint_s1.bin",
                    rel + "checkpoint_s2.bin",   rel + "checkpoint_s3.bin"};
    update_manifest(config, "ensemble", result.files);
    return result;
}

StageResult report(const ExperimentConfig& config) {
    const fs::path runs_dir = fs::path(config.output_dir) / "runs";
    std::vector<std::string> run_names;
    if (fs::exists(runs_dir))
        for (const auto& entry : fs::directory_iterator(runs_dir))
            if (entry.is_directory() && fs::exists(entry.path() / "metrics.json"))
                run_names.push_back(entry.path().filename().string());
    std::sort(run_names.begin(), run_names.end());
    if (run_names.empty())
        throw MissingStageError("no evaluated runs under '" + runs_dir.string() +
                                "'; run `train` or `ensemble` first");

    std::vector<BenchmarkRow> rows;
    for (const auto& name : run_names) {
        const json mj = json::parse(read_text(runs_dir / name / "metrics.json"));
        BenchmarkRow row;
        row.model = mj.at("model").get<std::string>();
        row.horizon = mj.at("horizon").get<int>();
        row.metrics.mae = mj.at("metrics").at("mae").get<double>();
        row.metrics.mse = mj.at("metrics").at("mse").get<double>();
        row.metrics.rmse = mj.at("metrics").at("rmse").get<double>();
        row.metrics.n = mj.at("metrics").at("n").get<std::size_t>();
        row.metrics.horizon = row.horizon;
        row.config_digest = mj.at("config_digest").get<std::string>();
        row.split.train_end = Date::parse(mj.at("split").at("train_end").get<std::string>());
        row.split.valid_end = Date::parse(mj.at("split").at("valid_end").get<std::string>());
        row.split.test_samples = mj.at("split").at("test_samples").get<std::size_t>();
        rows.push_back(std::move(row));
    }
    rows = benchmark(std::move(rows));

    StageResult result;
    const fs::path out_dir(config.output_dir);
    write_text(out_dir / "benchmarks.csv", benchmark_csv(rows));
    write_text(out_dir / "benchmarks.txt", render_benchmark_table(rows));
    result.files = {"benchmarks.csv", "benchmarks.txt"};

    for (const auto& name : run_names) {
        std::istringstream in(read_text(runs_dir / name / "predictions.csv"));
        std::string line;
        std::getline(in, line); // header
        std::ostringstream plot;
        plot << "date,actual,predicted\n";
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto cells = csv::split_line(line);
            if (cells.size() != 5 || cells[1] != "1") continue;
            plot << cells[2] << ',' << cells[3] << ',' << cells[4] << '\n';
        }
        write_text(out_dir / ("plot_" + name + ".csv"), plot.str());
        result.files.push_back("plot_" + name + ".csv");
    }

    update_manifest(config, "report", result.files);
    return result;
}

} // namespace oilcast::pipeline
