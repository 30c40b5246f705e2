#include "nqs/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nqs/errors.hpp"

namespace nqs {

namespace {

bool metropolis_accept(double log_ratio, std::mt19937_64& rng) {
    if (log_ratio >= 0.0) return true;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) < std::exp(log_ratio);
}

// log |psi(x')/psi(x)|^2, or -inf when psi(x') vanishes.
double log_prob_ratio(const LookupState& lookup, std::span<const std::size_t> flips, const RbmParams& params) {
    try {
        return 2.0 * log_psi_ratio(lookup, flips, params).real();
    } catch (const SingularAmplitude&) {
        return -std::numeric_limits<double>::infinity();
    }
}

std::mt19937_64 split_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x6e71u};
    return std::mt19937_64(seq);
}

}  // namespace

void metropolis_flip_sweep(ChainState& chain, const RbmParams& params) {
    const std::size_t n = chain.lookup.config().size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t step = 0; step < n; ++step) {
        const std::array<std::size_t, 1> flip{pick(chain.rng)};
        const double log_ratio = chain.temperature * log_prob_ratio(chain.lookup, flip, params);
        ++chain.proposed;
        if (metropolis_accept(log_ratio, chain.rng)) {
            chain.lookup.apply_flips(flip, params);
            ++chain.accepted;
        }
    }
}

void metropolis_swap_sweep(ChainState& chain, const RbmParams& params) {
    const std::size_t n = chain.lookup.config().size();
    std::vector<std::size_t> up, down;
    up.reserve(n);
    down.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        up.clear();
        down.clear();
        const SpinConfig& x = chain.lookup.config();
        for (std::size_t i = 0; i < n; ++i) (x[i] > 0 ? up : down).push_back(i);
        if (up.empty() || down.empty()) {
            throw FrozenSector("swap update impossible: configuration is fully polarized");
        }
        std::uniform_int_distribution<std::size_t> pick_up(0, up.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_down(0, down.size() - 1);
        const std::size_t i = up[pick_up(chain.rng)];
        const std::size_t j = down[pick_down(chain.rng)];
        const std::array<std::size_t, 2> pair{i, j};
        const double log_ratio = chain.temperature * log_prob_ratio(chain.lookup, pair, params);
        ++chain.proposed;
        if (metropolis_accept(log_ratio, chain.rng)) {
            chain.lookup.apply_flips(pair, params);
            ++chain.accepted;
        }
    }
}

std::vector<double> linear_temperatures(std::size_t n_chains) {
    if (n_chains == 0) throw std::invalid_argument("need at least one chain");
    std::vector<double> t(n_chains);
    for (std::size_t k = 0; k < n_chains; ++k) t[k] = static_cast<double>(k + 1) / static_cast<double>(n_chains);
    return t;
}

ChainEnsemble make_ensemble(const RbmParams& params, std::size_t n_chains, MoveKind move, std::uint64_t seed) {
    const auto temperatures = linear_temperatures(n_chains);
    const std::size_t n = params.n_visible();
    ChainEnsemble ensemble;
    ensemble.move = move;
    ensemble.exchange_rng = split_stream(seed, n_chains);
    ensemble.chains.reserve(n_chains);
    for (std::size_t k = 0; k < n_chains; ++k) {
        ChainState chain;
        chain.temperature = temperatures[k];
        chain.rng = split_stream(seed, k);
        std::vector<int> spins(n);
        if (move == MoveKind::Swap) {
            for (std::size_t i = 0; i < n; ++i) spins[i] = (i < n / 2) ? -1 : 1;
            std::shuffle(spins.begin(), spins.end(), chain.rng);
        } else {
            std::bernoulli_distribution coin(0.5);
            for (auto& s : spins) s = coin(chain.rng) ? 1 : -1;
        }
        chain.lookup = LookupState(SpinConfig(std::move(spins)), params);
        ensemble.chains.push_back(std::move(chain));
    }
    return ensemble;
}

void parallel_tempering_exchange(ChainEnsemble& ensemble, const RbmParams& params) {
    auto& chains = ensemble.chains;
    const std::size_t start = ensemble.odd_phase ? 1 : 0;
    ensemble.odd_phase = !ensemble.odd_phase;
    for (std::size_t k = start; k + 1 < chains.size(); k += 2) {
        const double lo = 2.0 * log_psi(chains[k].lookup, params).real();
        const double hi = 2.0 * log_psi(chains[k + 1].lookup, params).real();
        const double log_ratio = (chains[k].temperature - chains[k + 1].temperature) * (hi - lo);
        ++ensemble.exchanges_proposed;
        if (metropolis_accept(log_ratio, ensemble.exchange_rng)) {
            std::swap(chains[k].lookup, chains[k + 1].lookup);
            ++ensemble.exchanges_accepted;
        }
    }
}

void sweep(ChainEnsemble& ensemble, const RbmParams& params) {
    for (auto& chain : ensemble.chains) {
        if (ensemble.move == MoveKind::Swap) {
            metropolis_swap_sweep(chain, params);
        } else {
            metropolis_flip_sweep(chain, params);
        }
    }
    if (ensemble.chains.size() > 1) parallel_tempering_exchange(ensemble, params);
}

SampleBatch batch_from_configs(std::vector<SpinConfig> configs, const RbmParams& params, const Hamiltonian* ham) {
    SampleBatch batch;
    const auto count = static_cast<Eigen::Index>(configs.size());
    const auto d = static_cast<Eigen::Index>(params.n_params());
    batch.o.resize(count, d);
    batch.local_energies = Eigen::VectorXcd::Zero(count);
    Eigen::VectorXcd row(d);
    for (Eigen::Index k = 0; k < count; ++k) {
        LookupState lookup(configs[static_cast<std::size_t>(k)], params);
        o_vector_into(lookup, params, row);
        batch.o.row(k) = row.transpose();
        if (ham != nullptr) batch.local_energies[k] = local_energy(lookup, *ham, params);
    }
    batch.configs = std::move(configs);
    return batch;
}

SampleBatch draw_batch(ChainEnsemble& ensemble, const RbmParams& params, const Hamiltonian* ham, std::size_t n_samples,
                       std::size_t thinning, std::size_t burn_in) {
    if (n_samples == 0) throw std::invalid_argument("draw_batch needs n_samples >= 1");
    if (thinning == 0) throw std::invalid_argument("draw_batch needs thinning >= 1");
    if (ensemble.chains.empty()) throw std::invalid_argument("draw_batch on an empty ensemble");
    for (auto& chain : ensemble.chains) chain.lookup.resync(params);
    for (std::size_t s = 0; s < burn_in; ++s) sweep(ensemble, params);

    SampleBatch batch;
    const auto d = static_cast<Eigen::Index>(params.n_params());
    batch.configs.reserve(n_samples);
    batch.o.resize(static_cast<Eigen::Index>(n_samples), d);
    batch.local_energies.resize(static_cast<Eigen::Index>(n_samples));
    Eigen::VectorXcd row(d);
    for (std::size_t k = 0; k < n_samples; ++k) {
        for (std::size_t t = 0; t < thinning; ++t) sweep(ensemble, params);
        const LookupState& lookup = ensemble.physical().lookup;
        const auto r = static_cast<Eigen::Index>(k);
        batch.configs.push_back(lookup.config());
        o_vector_into(lookup, params, row);
        batch.o.row(r) = row.transpose();
        batch.local_energies[r] = ham != nullptr ? local_energy(lookup, *ham, params) : cplx(0.0);
    }
    return batch;
}

SampleBatch draw_batch(ChainEnsemble& ensemble, const RbmParams& params, const Hamiltonian* ham,
                       const SamplerConfig& config) {
    const std::size_t burn_in = config.burn_in.value_or(10 * params.n_visible());
    return draw_batch(ensemble, params, ham, config.n_samples, config.thinning, burn_in);
}

std::size_t wolff_update(SpinConfig& config, double beta, const Lattice& lattice, std::mt19937_64& rng) {
    if (config.size() != lattice.n_sites()) throw std::invalid_argument("configuration does not match lattice");
    if (!(beta >= 0.0)) throw std::invalid_argument("wolff_update needs beta >= 0");
    const double p_add = -std::expm1(-2.0 * beta);
    std::uniform_int_distribution<std::size_t> pick(0, config.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t seed_site = pick(rng);
    const int spin = config[seed_site];
    std::vector<char> in_cluster(config.size(), 0);
    std::vector<std::size_t> stack{seed_site};
    in_cluster[seed_site] = 1;
    std::size_t size = 0;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        ++size;
        for (std::size_t nb : lattice.neighbors(s)) {
            if (!in_cluster[nb] && config[nb] == spin && unit(rng) < p_add) {
                in_cluster[nb] = 1;
                stack.push_back(nb);
            }
        }
    }
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (in_cluster[i]) config.flip(i);
    }
    return size;
}

SpinConfig wolff_sweep(SpinConfig config, double beta, const Lattice& lattice, std::mt19937_64& rng) {
    wolff_update(config, beta, lattice, rng);
    return config;
}

}  // namespace nqs
