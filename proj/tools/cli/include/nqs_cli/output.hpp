#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "nqs/spectral.hpp"

namespace nqs::cli {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Decimal with 17 significant digits ("nan", "inf", "-inf" for non-finite).
std::string format_number(double value);

/// "epoch-0042"
std::string epoch_stem(std::size_t epoch);

/// Writes <stem>.tsv (index, eigenvalue, entanglement, degenerate) and
/// <stem>.summary.json (rank, trace, diag_count, kinks) into `dir`.
void write_spectrum(const std::filesystem::path& dir, const std::string& stem, const SpectrumReport& report);

std::string spectrum_summary_line(const SpectrumReport& report);

}  // namespace nqs::cli
