#include "nqs/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nqs/errors.hpp"

namespace nqs {

namespace {

using json = nlohmann::json;

constexpr const char* kFormat = "nqs-rbm-checkpoint";
constexpr int kVersion = 1;

template <typename Vec>
json pairs(const Vec& v, Eigen::Index count) {
    json out = json::array();
    for (Eigen::Index k = 0; k < count; ++k) {
        const cplx z = v.data()[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw CheckpointError("refusing to checkpoint a non-finite parameter");
        }
        out.push_back({z.real(), z.imag()});
    }
    return out;
}

void read_pairs(const json& arr, const char* name, std::size_t expected, cplx* dst) {
    if (!arr.is_array() || arr.size() != expected) {
        throw CheckpointError(std::string("checkpoint field '") + name + "' must be an array of " +
                              std::to_string(expected) + " [re, im] pairs");
    }
    for (std::size_t k = 0; k < expected; ++k) {
        const json& p = arr[k];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw CheckpointError(std::string("checkpoint field '") + name + "' entry " + std::to_string(k) +
                                  " is not a [re, im] pair");
        }
        dst[k] = cplx(p[0].get<double>(), p[1].get<double>());
    }
}

}  // namespace

std::string checkpoint_to_string(const Checkpoint& checkpoint) {
    const RbmParams& p = checkpoint.params;
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["n_visible"] = p.n_visible();
    doc["n_hidden"] = p.n_hidden();
    doc["epoch"] = checkpoint.epoch;
    doc["seed"] = checkpoint.seed;
    doc["a"] = pairs(p.a(), p.a().size());
    doc["b"] = pairs(p.b(), p.b().size());
    doc["w"] = pairs(p.w(), p.w().size());
    return doc.dump() + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CheckpointError(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (doc.value("format", std::string()) != kFormat) throw CheckpointError("not an nqs-rbm-checkpoint document");
        if (doc.value("version", 0) != kVersion) throw CheckpointError("unsupported checkpoint version");
        const auto n = doc.at("n_visible").get<std::size_t>();
        const auto m = doc.at("n_hidden").get<std::size_t>();
        if (n == 0 || m == 0) throw CheckpointError("checkpoint has an empty layer");
        Checkpoint cp;
        cp.params = RbmParams(n, m);
        cp.epoch = doc.at("epoch").get<std::int64_t>();
        cp.seed = doc.at("seed").get<std::uint64_t>();
        read_pairs(doc.at("a"), "a", n, cp.params.a().data());
        read_pairs(doc.at("b"), "b", m, cp.params.b().data());
        read_pairs(doc.at("w"), "w", n * m, cp.params.w().data());
        return cp;
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
    out << checkpoint_to_string(checkpoint);
    if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_string(buf.str());
}

}  // namespace nqs
