#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nqs/hamiltonian.hpp"
#include "nqs/lattice.hpp"
#include "nqs/rbm.hpp"

namespace nqs {

enum class MoveKind {
    SpinFlip,
    /// Exchange an up spin with a down spin; conserves sum_i x_i.
    Swap,
};

/// One Markov chain targeting |psi(x)|^(2T).
struct ChainState {
    LookupState lookup;
    double temperature = 1.0;
    std::mt19937_64 rng;
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;

    double acceptance_rate() const noexcept {
        return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
    }
};

/// N single-site flip proposals at uniformly random sites, each accepted with
/// probability min(1, |psi(x')/psi(x)|^(2T)). Proposals onto zero-amplitude
/// configurations are rejected.
void metropolis_flip_sweep(ChainState& chain, const RbmParams& params);

/// N proposals exchanging a uniformly chosen up site with a uniformly chosen
/// down site. Throws FrozenSector on a fully polarized configuration.
void metropolis_swap_sweep(ChainState& chain, const RbmParams& params);

/// Chains sorted by ascending temperature; the last chain is the physical
/// T = 1 chain that batches are drawn from.
struct ChainEnsemble {
    std::vector<ChainState> chains;
    MoveKind move = MoveKind::SpinFlip;
    std::mt19937_64 exchange_rng;
    bool odd_phase = false;
    std::uint64_t exchanges_proposed = 0;
    std::uint64_t exchanges_accepted = 0;

    ChainState& physical() { return chains.back(); }
    const ChainState& physical() const { return chains.back(); }
    double exchange_rate() const noexcept {
        return exchanges_proposed == 0 ? 0.0
                                       : static_cast<double>(exchanges_accepted) / static_cast<double>(exchanges_proposed);
    }
};

/// T_k = k / n for k = 1..n.
std::vector<double> linear_temperatures(std::size_t n_chains);

/// Builds an ensemble with random starting configurations. All chain and
/// exchange generators are split deterministically from `seed`. Swap
/// ensembles start in the sector with |sum_i x_i| <= 1.
ChainEnsemble make_ensemble(const RbmParams& params, std::size_t n_chains, MoveKind move, std::uint64_t seed);

/// Proposes exchanges between adjacent chains, alternating between even
/// pairs (0,1),(2,3),... and odd pairs (1,2),(3,4),... on successive calls.
void parallel_tempering_exchange(ChainEnsemble& ensemble, const RbmParams& params);

/// One sweep of every chain followed by one exchange round.
void sweep(ChainEnsemble& ensemble, const RbmParams& params);

/// Samples with their log-derivative vectors (one row per sample) and local
/// energies. Local energies are zero when no Hamiltonian was supplied.
struct SampleBatch {
    std::vector<SpinConfig> configs;
    Eigen::MatrixXcd o;
    Eigen::VectorXcd local_energies;

    std::size_t count() const noexcept { return configs.size(); }
};

struct SamplerConfig {
    std::size_t n_samples = 1000;
    std::size_t thinning = 1;
    /// Defaults to 10 * N sweeps.
    std::optional<std::size_t> burn_in;
    std::size_t n_chains = 16;
    MoveKind move = MoveKind::SpinFlip;
};

SampleBatch batch_from_configs(std::vector<SpinConfig> configs, const RbmParams& params, const Hamiltonian* ham);

/// Re-synchronizes every chain with `params`, runs `burn_in` sweeps, then
/// records the physical chain every `thinning` sweeps.
SampleBatch draw_batch(ChainEnsemble& ensemble, const RbmParams& params, const Hamiltonian* ham, std::size_t n_samples,
                       std::size_t thinning, std::size_t burn_in);
SampleBatch draw_batch(ChainEnsemble& ensemble, const RbmParams& params, const Hamiltonian* ham,
                       const SamplerConfig& config);

/// One Wolff cluster update for the ferromagnet H(x) = -sum_<ij> x_i x_j at
/// inverse temperature beta. Returns the cluster size.
std::size_t wolff_update(SpinConfig& config, double beta, const Lattice& lattice, std::mt19937_64& rng);
SpinConfig wolff_sweep(SpinConfig config, double beta, const Lattice& lattice, std::mt19937_64& rng);

}  // namespace nqs
