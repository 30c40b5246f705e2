#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nqs/basis.hpp"
#include "nqs/hamiltonian.hpp"

namespace nqs::cli {

struct ModelSettings {
    std::string model;  // tfi1d | tfi2d | xxz
    std::size_t n = 0;  // chain length, or side length for tfi2d
    bool open = false;
    double h = 1.0;
    double delta = 1.0;
};

struct OptimizeSettings {
    ModelSettings model;
    std::size_t alpha = 3;
    double sigma = 0.01;
    std::string method = "sr";
    std::optional<double> eta;
    std::optional<double> eps;
    double rms_beta = 0.9;
    double rms_eps = 1e-8;
    std::size_t epochs = 0;
    std::string backend = "exact";
    std::string sector = "auto";
    std::size_t samples = 1000;
    std::size_t chains = 16;
    std::size_t thinning = 1;
    std::optional<std::size_t> burn_in;
    std::string move = "auto";
    std::uint64_t seed = 0;
    std::string out = "run";
    std::size_t spectrum_every = 5;
    std::string rank_mode = "auto";
    std::optional<double> reference;
    bool skip_ed = false;
    std::optional<double> stop_below;
    std::string init;
};

struct SpectrumSettings {
    std::string checkpoint;
    std::string backend = "exact";
    std::string sector = "full";
    std::size_t samples = 4000;
    std::size_t chains = 16;
    std::optional<std::size_t> burn_in;
    std::string move = "flip";
    std::uint64_t seed = 0;
    std::string rank_mode = "auto";
    std::string out = "spectrum";
};

struct GibbsSettings {
    std::string lattice = "square";
    std::size_t l = 0;
    bool open = false;
    std::vector<double> betas;
    std::string fisher = "exact";
    std::size_t samples = 20000;
    std::size_t wolff_steps = 3;
    std::size_t burn_in = 2000;
    bool rank = false;
    std::uint64_t seed = 0;
    std::string out = "gibbs";
};

struct ExactSettings {
    ModelSettings model;
    std::string sector = "auto";
    std::string checkpoint;
    std::string out;
};

Hamiltonian make_hamiltonian(const ModelSettings& settings);
Sector resolve_sector(const std::string& name, const Hamiltonian& ham);

/// `canonical_config` is the key=value dump used for the manifest hash.
int cmd_optimize(const OptimizeSettings& settings, const std::string& canonical_config, std::ostream& out);
int cmd_spectrum(const SpectrumSettings& settings, std::ostream& out);
int cmd_gibbs(const GibbsSettings& settings, std::ostream& out);
int cmd_exact(const ExactSettings& settings, std::ostream& out);

}  // namespace nqs::cli
