#include "nqs/basis.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "nqs/errors.hpp"

namespace nqs {

std::string_view to_string(Sector sector) {
    return sector == Sector::Full ? "full" : "jz-zero";
}

SpinConfig config_from_index(std::uint64_t index, std::size_t n_sites) {
    std::vector<int> spins(n_sites);
    for (std::size_t k = 0; k < n_sites; ++k) spins[k] = ((index >> k) & 1u) ? -1 : 1;
    return SpinConfig(std::move(spins));
}

std::uint64_t index_from_config(const SpinConfig& config) {
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < config.size(); ++k) {
        if (config[k] < 0) index |= (std::uint64_t{1} << k);
    }
    return index;
}

std::vector<std::uint64_t> sector_basis(std::size_t n_sites, Sector sector, std::size_t max_sites) {
    if (n_sites > max_sites || n_sites >= 63) {
        throw OversizeSystem("enumeration over " + std::to_string(n_sites) + " sites exceeds the cap of " +
                             std::to_string(max_sites));
    }
    if (sector == Sector::ZeroMagnetization && n_sites % 2 != 0) {
        throw std::invalid_argument("zero-magnetization sector needs an even number of sites");
    }
    const std::uint64_t dim = std::uint64_t{1} << n_sites;
    std::vector<std::uint64_t> basis;
    if (sector == Sector::Full) {
        basis.resize(dim);
        for (std::uint64_t s = 0; s < dim; ++s) basis[s] = s;
        return basis;
    }
    for (std::uint64_t s = 0; s < dim; ++s) {
        if (static_cast<std::size_t>(std::popcount(s)) * 2 == n_sites) basis.push_back(s);
    }
    return basis;
}

}  // namespace nqs
