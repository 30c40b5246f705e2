#include "nqs_cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nqs::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string epoch_stem(std::size_t epoch) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "epoch-%04zu", epoch);
    return buf;
}

void write_spectrum(const std::filesystem::path& dir, const std::string& stem, const SpectrumReport& report) {
    std::filesystem::create_directories(dir);
    std::ofstream table(dir / (stem + ".tsv"));
    if (!table) throw std::runtime_error("cannot write " + (dir / (stem + ".tsv")).string());
    table << "index\teigenvalue\tentanglement\tdegenerate\n";
    for (Eigen::Index k = 0; k < report.eigenvalues.size(); ++k) {
        table << (k + 1) << '\t' << format_number(report.eigenvalues[k]) << '\t'
              << format_number(report.entanglement[k]) << '\t' << (report.degenerate[static_cast<std::size_t>(k)] ? 1 : 0)
              << '\n';
    }

    nlohmann::json summary;
    summary["dimension"] = report.eigenvalues.size();
    summary["rank"] = report.rank;
    summary["trace"] = report.trace;
    summary["diag_count"] = report.diag_count;
    summary["lambda_max"] = report.eigenvalues.size() > 0 ? report.eigenvalues[0] : 0.0;
    auto kinks = nlohmann::json::array();
    for (const auto& k : report.kinks) kinks.push_back({{"index", k.index}, {"ratio", k.ratio}});
    summary["kinks"] = std::move(kinks);
    std::ofstream js(dir / (stem + ".summary.json"));
    if (!js) throw std::runtime_error("cannot write " + (dir / (stem + ".summary.json")).string());
    js << summary.dump(2) << '\n';
}

std::string spectrum_summary_line(const SpectrumReport& report) {
    std::ostringstream line;
    line << "rank " << report.rank << "  trace " << format_number(report.trace) << "  diag_count "
         << report.diag_count << "  kinks";
    if (report.kinks.empty()) line << " none";
    for (const auto& k : report.kinks) line << ' ' << k.index << " (" << format_number(k.ratio) << ')';
    return line.str();
}

}  // namespace nqs::cli
