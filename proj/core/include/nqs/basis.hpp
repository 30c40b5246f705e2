#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nqs/rbm.hpp"

namespace nqs {

enum class Sector {
    Full,
    /// sum_i x_i == 0 (requires an even number of sites)
    ZeroMagnetization,
};

std::string_view to_string(Sector sector);

/// Default enumeration cap for exact expectations and diagonalization.
inline constexpr std::size_t kMaxEnumerationSites = 20;

/// Basis index <-> configuration: bit k of the index is site k, bit 0 means
/// spin +1 and bit 1 means spin -1.
SpinConfig config_from_index(std::uint64_t index, std::size_t n_sites);
std::uint64_t index_from_config(const SpinConfig& config);

/// Sorted basis indices spanning `sector` for n_sites spins. Throws
/// OversizeSystem above `max_sites`.
std::vector<std::uint64_t> sector_basis(std::size_t n_sites, Sector sector,
                                        std::size_t max_sites = kMaxEnumerationSites);

}  // namespace nqs
