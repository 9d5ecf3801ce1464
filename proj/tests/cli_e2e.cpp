// End-to-end exercise of the oilcast binary: stage ordering, exit-status
// contract, artifact shapes, and rerun determinism on a small synthetic
// dataset. Takes the binary path as argv[1].

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oilcast/date.hpp"
#include "oilcast/rng.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "[ok]" : "[FAILED]", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char ch : text)
        if (ch == '\n') ++n;
    return n;
}

// Synthetic daily series: a slow cycle plus noise, with correlated and
// uncorrelated companions, written as CSV fixtures.
void write_fixtures(const fs::path& dir) {
    const std::size_t n = 260;
    oilcast::Rng rng(20240817);
    std::vector<double> brent(n), sent(n), usdx(n), fog(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        brent[i] = 60.0 + 8.0 * std::sin(x * 2.0 * M_PI / 40.0) + 0.02 * x +
                   0.4 * rng.next_gaussian();
        sent[i] = 0.1 * brent[i] + 0.05 * rng.next_gaussian();
        usdx[i] = 100.0 - 0.3 * brent[i] + 0.2 * rng.next_gaussian();
        fog[i] = rng.next_gaussian();
    }
    auto write_series = [&](const std::string& name, const std::vector<double>& v,
                            std::size_t skip_every) {
        std::ofstream out(dir / (name + ".csv"), std::ios::binary);
        out << "Date,Close\n";
        for (std::size_t i = 0; i < n; ++i) {
            if (skip_every && i % skip_every == 7) continue; // holes to interpolate
            out << oilcast::Date(19000 + static_cast<std::int64_t>(i)).to_string() << ','
                << v[i] << '\n';
        }
    };
    write_series("brent", brent, 0);
    write_series("sent", sent, 9);
    write_series("usdx", usdx, 11);
    write_series("fog", fog, 0);
}

std::string config_text(const fs::path& data_dir, const fs::path& out_dir) {
    nlohmann::json j;
    auto src = [&](const std::string& name) {
        return nlohmann::json{{"name", name},
                              {"path", (data_dir / (name + ".csv")).string()},
                              {"date_column", "Date"},
                              {"value_column", "Close"}};
    };
    j["data"]["target"] = src("brent");
    j["data"]["candidates"] = {src("sent"), src("usdx"), src("fog")};
    // 260 rows: train ~ [0,180), valid ~ [180,220), test the rest.
    j["split"]["train_end"] = oilcast::Date(19000 + 179).to_string();
    j["split"]["valid_end"] = oilcast::Date(19000 + 219).to_string();
    j["selection"]["threshold"] = 0.6;
    j["window"] = 5;
    j["horizon"] = 3;
    j["decomposition"] = {{"mode", "centered"}, {"ma_window", 21}};
    j["model"] = {{"hidden_size", 8}, {"head_hidden", 8}};
    j["train"] = {{"batch_size", 16}, {"learning_rate", 0.003}, {"weight_decay", 0.01},
                  {"max_epochs", 8},  {"patience", 8},          {"shuffle", true}};
    j["ensemble"] = {{"grid_step", 0.25}, {"scenario2_target", "price"}};
    j["output_dir"] = out_dir.string();
    j["seed"] = 7;
    return j.dump(2) + "\n";
}

} // namespace

int run_checks(const std::string& bin);

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_e2e <path-to-oilcast-binary>\n");
        return 2;
    }
    try {
        return run_checks(argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cli_e2e: unhandled exception: %s\n", e.what());
        return 1;
    }
}

int run_checks(const std::string& bin) {
    const fs::path work =
        fs::temp_directory_path() / ("oilcast_e2e_" + std::to_string(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work / "data");
    const fs::path out_dir = work / "out";
    write_fixtures(work / "data");
    const fs::path config_path = work / "config.json";
    {
        std::ofstream out(config_path, std::ios::binary);
        out << config_text(work / "data", out_dir);
    }
    const std::string base = bin + " --config " + config_path.string();

    // Stage ordering: everything below depends on prepare's artifacts.
    check(run(base + " report > /dev/null 2>&1") == 3, "report before runs exits 3");
    check(run(base + " train sent-bi-gru > /dev/null 2>&1") == 3,
          "train before prepare exits 3");

    check(run(base + " prepare > " + (work / "prepare.log").string()) == 0,
          "prepare succeeds");
    check(fs::exists(out_dir / "prepared.csv"), "prepared.csv written");
    check(fs::exists(out_dir / "scaler.json"), "scaler.json written");
    check(fs::exists(out_dir / "decomposition.csv"), "decomposition.csv written");
    check(fs::exists(out_dir / "split_summary.json"), "split_summary.json written");
    check(fs::exists(out_dir / "manifest.json"), "manifest.json written");

    const std::string prepared_first = slurp(out_dir / "prepared.csv");
    check(run(base + " prepare > /dev/null") == 0, "prepare reruns cleanly");
    check(slurp(out_dir / "prepared.csv") == prepared_first,
          "rerun produces a byte-identical prepared.csv");

    {
        const nlohmann::json summary =
            nlohmann::json::parse(slurp(out_dir / "split_summary.json"));
        check(summary.at("train").at("rows").get<int>() == 180, "train split has 180 rows");
        check(summary.at("test").at("from").get<std::string>() ==
                  oilcast::Date(19000 + 220).to_string(),
              "test split starts after valid_end");
    }

    check(run(base + " select > /dev/null") == 0, "select succeeds");
    {
        const nlohmann::json sel =
            nlohmann::json::parse(slurp(out_dir / "selected_features.json"));
        const auto names = sel.at("selected").get<std::vector<std::string>>();
        bool has_sent = false, has_fog = false;
        for (const auto& n : names) {
            if (n == "sent") has_sent = true;
            if (n == "fog") has_fog = true;
        }
        check(has_sent, "select keeps the correlated candidate");
        check(!has_fog, "select drops the noise candidate");
    }

    check(run(base + " train no-such-model > /dev/null 2>&1") == 2,
          "unknown model name exits 2");
    check(run(base + " train sent-bi-gru > /dev/null") == 0, "train sent-bi-gru succeeds");
    const fs::path run_dir = out_dir / "runs" / "sent-bi-gru";
    check(fs::exists(run_dir / "checkpoint.bin"), "checkpoint written");
    check(fs::exists(run_dir / "train_report.csv"), "train report written");
    check(fs::exists(run_dir / "metrics.json"), "metrics written");
    check(fs::exists(run_dir / "predictions.csv"), "predictions written");

    {
        const std::string first_ckpt = slurp(run_dir / "checkpoint.bin");
        check(run(base + " train sent-bi-gru > /dev/null") == 0, "train reruns cleanly");
        check(slurp(run_dir / "checkpoint.bin") == first_ckpt,
              "same seed gives a byte-identical checkpoint");
    }

    check(run(base + " ensemble > /dev/null") == 0, "ensemble succeeds");
    const fs::path ens_dir = out_dir / "runs" / "ers-bi-gru";
    check(fs::exists(ens_dir / "weights.json"), "ensemble weights written");
    check(fs::exists(ens_dir / "forecasts.csv"), "ensemble forecasts written");
    {
        const nlohmann::json wj = nlohmann::json::parse(slurp(ens_dir / "weights.json"));
        check(wj.at("evaluations").get<long>() == 9 * 9 * 9,
              "grid step 0.25 evaluates 9^3 triples");
        const std::string header = slurp(ens_dir / "forecasts.csv").substr(0, 80);
        check(header.rfind("anchor_date,step,forecast_1,forecast_2,forecast_3,fused,actual",
                           0) == 0,
              "forecasts.csv has the documented columns");
    }

    // Weights override: (0,0,1) collapses the ensemble onto scenario 1.
    check(run(base + " ensemble --weights 0,0,1 > /dev/null") == 0,
          "ensemble accepts a weights override");
    {
        const nlohmann::json mj = nlohmann::json::parse(slurp(ens_dir / "metrics.json"));
        const double fused_mae = mj.at("metrics").at("mae").get<double>();
        const double s1_mae = mj.at("scenario_metrics").at(0).at("mae").get<double>();
        check(fused_mae == s1_mae, "override (0,0,1) reproduces scenario-1 MAE exactly");
    }

    check(run(base + " report > /dev/null") == 0, "report succeeds");
    check(fs::exists(out_dir / "benchmarks.csv"), "benchmarks.csv written");
    check(fs::exists(out_dir / "benchmarks.txt"), "benchmarks.txt written");
    {
        const std::string plot = slurp(out_dir / "plot_sent-bi-gru.csv");
        const nlohmann::json mj = nlohmann::json::parse(slurp(run_dir / "metrics.json"));
        const std::size_t test_samples = mj.at("split").at("test_samples").get<std::size_t>();
        check(line_count(plot) == test_samples + 1,
              "plot row count equals the test sample count");
        const nlohmann::json manifest = nlohmann::json::parse(slurp(out_dir / "manifest.json"));
        check(manifest.at("stages").contains("report"), "manifest records the report stage");
        bool all_listed_exist = true;
        for (const auto& [stage, entry] : manifest.at("stages").items())
            for (const auto& file : entry.at("files"))
                if (!fs::exists(out_dir / file.get<std::string>())) all_listed_exist = false;
        check(all_listed_exist, "every manifest-listed file exists on disk");
    }

    // An unreachable threshold empties the selection but only warns.
    {
        nlohmann::json j = nlohmann::json::parse(config_text(work / "data", out_dir));
        j["selection"]["threshold"] = 1.1;
        const fs::path strict = work / "strict_config.json";
        std::ofstream(strict, std::ios::binary) << j.dump(2);
        const int code = run(bin + " --config " + strict.string() + " select 2> " +
                             (work / "warn.log").string() + " > /dev/null");
        check(code == 0, "an over-strict threshold still exits 0");
        check(slurp(work / "warn.log").find("warning") != std::string::npos,
              "empty selection emits a warning");
        const nlohmann::json sel =
            nlohmann::json::parse(slurp(out_dir / "selected_features.json"));
        check(sel.at("selected").empty(), "selection is empty at threshold 1.1");
    }

    // Input errors: missing source file.
    {
        nlohmann::json j = nlohmann::json::parse(config_text(work / "data", out_dir));
        j["data"]["target"]["path"] = (work / "data" / "void.csv").string();
        const fs::path bad = work / "bad_config.json";
        std::ofstream(bad, std::ios::binary) << j.dump(2);
        const int code = run(bin + " --config " + bad.string() + " prepare 2> " +
                             (work / "err.log").string());
        check(code == 2, "missing input file exits 2");
        check(slurp(work / "err.log").find("void.csv") != std::string::npos,
              "the error names the missing path");
    }

    // OILCAST_OUT fallback directs output when --out is absent.
    {
        const fs::path env_out = work / "env_out";
        const int code = run("OILCAST_OUT=" + env_out.string() + " " + base +
                             " prepare > /dev/null");
        check(code == 0 && fs::exists(env_out / "prepared.csv"),
              "OILCAST_OUT fallback selects the output directory");
    }

    if (failures == 0) fs::remove_all(work);
    std::printf("%s\n", failures == 0 ? "cli_e2e: all checks passed"
                                      : "cli_e2e: FAILURES");
    return failures == 0 ? 0 : 1;
}
