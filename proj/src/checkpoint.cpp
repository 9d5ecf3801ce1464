#include "oilcast/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

constexpr char kMagic[8] = {'O', 'I', 'L', 'C', 'K', 'P', 'T', '1'};

void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void put_f64_le(std::string& out, double d) {
    put_u64_le(out, std::bit_cast<std::uint64_t>(d));
}

double get_f64_le(const unsigned char* p) {
    return std::bit_cast<double>(get_u64_le(p));
}

nlohmann::json spec_to_json(const ModelSpec& spec) {
    return {{"cell", cell_name(spec.cell)},
            {"bidirectional", spec.bidirectional},
            {"input_features", spec.input_features},
            {"hidden_size", spec.hidden_size},
            {"head_hidden", spec.head_hidden},
            {"horizon", spec.horizon},
            {"seed", spec.seed}};
}

ModelSpec spec_from_json(const nlohmann::json& j) {
    ModelSpec spec;
    spec.cell = parse_cell(j.at("cell").get<std::string>());
    spec.bidirectional = j.at("bidirectional").get<bool>();
    spec.input_features = j.at("input_features").get<int>();
    spec.hidden_size = j.at("hidden_size").get<int>();
    spec.head_hidden = j.at("head_hidden").get<int>();
    spec.horizon = j.at("horizon").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

} // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    nlohmann::json manifest;
    manifest["spec"] = spec_to_json(ckpt.spec);
    manifest["scaler"] = {{"names", ckpt.scaler.names()}};
    {
        std::vector<double> means, stds;
        for (const auto& name : ckpt.scaler.names()) {
            means.push_back(ckpt.scaler.mean(name));
            stds.push_back(ckpt.scaler.std(name));
        }
        manifest["scaler"]["means"] = means;
        manifest["scaler"]["stds"] = stds;
    }
    manifest["features"] = ckpt.feature_columns;
    manifest["target"] = ckpt.target_column;
    manifest["window"] = ckpt.window;

    std::string payload;
    nlohmann::json arrays = nlohmann::json::array();
    for (const auto& [name, arr] : ckpt.params) {
        arrays.push_back({{"name", name},
                          {"rows", arr.rows},
                          {"cols", arr.cols},
                          {"offset", payload.size()}});
        for (double v : arr.data) put_f64_le(payload, v);
    }
    manifest["arrays"] = std::move(arrays);

    const std::string header = manifest.dump();
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write checkpoint file: " + path);
    out.write(kMagic, sizeof kMagic);
    std::string len;
    put_u64_le(len, header.size());
    out.write(len.data(), static_cast<std::streamsize>(len.size()));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IngestError("short write while saving checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open checkpoint file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw IngestError(path + ": not a checkpoint file");

    const auto* base = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t header_len = get_u64_le(base + 8);
    if (16 + header_len > bytes.size())
        throw IngestError(path + ": truncated checkpoint manifest");
    const nlohmann::json manifest =
        nlohmann::json::parse(bytes.substr(16, header_len));
    const std::size_t payload_at = 16 + header_len;

    Checkpoint ckpt;
    ckpt.spec = spec_from_json(manifest.at("spec"));
    {
        const auto& sj = manifest.at("scaler");
        auto names = sj.at("names").get<std::vector<std::string>>();
        if (!names.empty())
            ckpt.scaler = Scaler(names, sj.at("means").get<std::vector<double>>(),
                                 sj.at("stds").get<std::vector<double>>());
    }
    ckpt.feature_columns = manifest.at("features").get<std::vector<std::string>>();
    ckpt.target_column = manifest.at("target").get<std::string>();
    ckpt.window = manifest.at("window").get<int>();

    for (const auto& entry : manifest.at("arrays")) {
        Array2 arr(entry.at("rows").get<int>(), entry.at("cols").get<int>());
        const std::size_t offset = payload_at + entry.at("offset").get<std::size_t>();
        if (offset + arr.size() * 8 > bytes.size())
            throw IngestError(path + ": truncated checkpoint payload");
        for (std::size_t i = 0; i < arr.size(); ++i)
            arr.data[i] = get_f64_le(base + offset + i * 8);
        ckpt.params.emplace(entry.at("name").get<std::string>(), std::move(arr));
    }
    return ckpt;
}

} // namespace oilcast
