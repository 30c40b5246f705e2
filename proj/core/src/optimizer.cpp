#include "nqs/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nqs/errors.hpp"

namespace nqs {

SrConfig default_sr_config(const Hamiltonian& ham) {
    if (ham.kind() == HamiltonianKind::Xxz) return {0.02, 1e-3};
    const LatticeKind kind = ham.lattice().kind();
    const bool square = kind == LatticeKind::SquarePeriodic || kind == LatticeKind::SquareOpen;
    return {square ? 0.002 : 0.01, 1e-3};
}

Eigen::VectorXcd sr_direction(const Eigen::MatrixXcd& s, const Eigen::VectorXcd& r, double epsilon, double* residual) {
    if (s.rows() != s.cols() || s.rows() != r.size()) {
        throw std::invalid_argument("Fisher matrix and gradient dimensions differ");
    }
    if (!(epsilon >= 0.0)) throw std::invalid_argument("SR regularization must be non-negative");
    Eigen::MatrixXcd a = s;
    a.diagonal().array() += epsilon;
    const Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw IllConditioned("Cholesky factorization of S + eps*I failed (eps = " + std::to_string(epsilon) + ")");
    }
    Eigen::VectorXcd v = llt.solve(r);
    const double r_norm = r.norm();
    const double rel = r_norm == 0.0 ? (a * v).norm() : (a * v - r).norm() / r_norm;
    if (residual != nullptr) *residual = rel;
    if (!std::isfinite(rel) || rel > kSolveResidualTolerance) {
        std::ostringstream msg;
        msg << "SR solve residual " << rel << " exceeds " << kSolveResidualTolerance;
        throw IllConditioned(msg.str());
    }
    return v;
}

RbmParams sr_step(const RbmParams& params, const FisherMatrix& s, const GradientVector& g, const SrConfig& config,
                  double* residual) {
    if (!(config.eta > 0.0) || !(config.epsilon > 0.0)) throw std::invalid_argument("SR needs eta, epsilon > 0");
    if (s.entries.rows() != static_cast<Eigen::Index>(params.n_params())) {
        throw std::invalid_argument("Fisher matrix does not match the parameter count");
    }
    RbmParams out = params;
    out.add_scaled(sr_direction(s.entries, g.entries, config.epsilon, residual), -config.eta);
    return out;
}

RmsState RmsState::zeros(std::size_t dim, double beta, double eps_denom) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("RMSProp beta must lie in (0, 1)");
    if (!(eps_denom > 0.0)) throw std::invalid_argument("RMSProp epsilon must be positive");
    RmsState state;
    state.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    state.beta = beta;
    state.eps_denom = eps_denom;
    return state;
}

namespace {

RbmParams rms_update(const RbmParams& params, const GradientVector& g, const Eigen::VectorXcd& curvature,
                     RmsState& state, double eta) {
    const auto d = static_cast<Eigen::Index>(params.n_params());
    if (g.entries.size() != d || curvature.size() != d || state.v.size() != d) {
        throw std::invalid_argument("RMSProp dimensions do not match the parameter count");
    }
    state.v = state.beta * state.v + (1.0 - state.beta) * curvature.cwiseAbs2();
    ++state.t;
    const Eigen::VectorXcd step = g.entries.array() / (state.v.array().sqrt() + state.eps_denom).cast<cplx>();
    RbmParams out = params;
    out.add_scaled(step, -eta);
    return out;
}

}  // namespace

RbmParams rmsprop_gs_step(const RbmParams& params, const GradientVector& g, const Eigen::VectorXcd& mean_o,
                          RmsState& state, double eta) {
    return rms_update(params, g, mean_o, state, eta);
}

RbmParams rmsprop_classic_step(const RbmParams& params, const GradientVector& g, RmsState& state, double eta) {
    return rms_update(params, g, g.entries, state, eta);
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::StochasticReconfiguration: return "sr";
        case Method::RmspropGroundState: return "rmsprop-gs";
        case Method::RmspropClassic: return "rmsprop";
    }
    return "unknown";
}

OptimizationResult run_optimization(const Hamiltonian& ham, RbmParams initial, const OptimizationConfig& config,
                                    const EpochObserver& observer) {
    if (ham.n_sites() != initial.n_visible()) {
        throw std::invalid_argument("Hamiltonian and RBM disagree on the number of sites");
    }
    if (!(config.eta > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!initial.all_finite()) throw NonFiniteEnergy("initial parameters are not finite");
    const bool need_fisher = config.method == Method::StochasticReconfiguration || config.always_fisher;

    std::optional<ChainEnsemble> ensemble;
    if (const auto* mc = std::get_if<McmcBackend>(&config.backend)) {
        ensemble = make_ensemble(initial, mc->sampler.n_chains, mc->sampler.move, config.seed);
    }
    RmsState rms;
    if (config.method != Method::StochasticReconfiguration) {
        rms = RmsState::zeros(initial.n_params(), config.rms_beta, config.rms_eps);
    }

    OptimizationResult result;
    result.trajectory.reserve(config.epochs + 1);
    RbmParams params = std::move(initial);
    std::optional<double> initial_energy;
    const auto start = std::chrono::steady_clock::now();

    for (std::size_t epoch = 0;; ++epoch) {
        FisherMatrix fisher;
        GradientVector gradient;
        EpochRecord record;
        record.epoch = epoch;
        if (const auto* ex = std::get_if<ExactBackend>(&config.backend)) {
            EnumerationOptions options;
            options.sector = ex->sector;
            ExactMoments m = exact_moments(params, &ham, options, need_fisher);
            fisher = std::move(m.fisher);
            gradient = std::move(m.gradient);
        } else {
            const auto& mc = std::get<McmcBackend>(config.backend);
            const std::uint64_t proposed_before = ensemble->physical().proposed;
            const std::uint64_t accepted_before = ensemble->physical().accepted;
            SampleBatch batch = draw_batch(*ensemble, params, &ham, mc.sampler);
            gradient = gradient_from_batch(batch);
            if (need_fisher) {
                fisher = fisher_from_batch(batch);
            } else {
                fisher.source = EstimateSource::Sampled;
                fisher.mean_o = batch.o.colwise().mean().transpose();
            }
            const auto proposed = ensemble->physical().proposed - proposed_before;
            record.acceptance = proposed == 0 ? 0.0
                                              : static_cast<double>(ensemble->physical().accepted - accepted_before) /
                                                    static_cast<double>(proposed);
            record.exchange_rate = ensemble->exchange_rate();
        }

        record.energy = gradient.energy_mean;
        record.energy_variance = gradient.energy_variance;
        record.energy_error = gradient.energy_error;
        if (!std::isfinite(record.energy.real()) || !std::isfinite(record.energy.imag())) {
            throw NonFiniteEnergy("energy became non-finite at epoch " + std::to_string(epoch));
        }
        if (!initial_energy) initial_energy = record.energy.real();
        if (config.reference_energy) {
            const double span = *initial_energy - *config.reference_energy;
            record.rescaled_energy = (record.energy.real() - *config.reference_energy) / span;
        }

        const bool last = epoch >= config.epochs ||
                          (config.stop_below && record.rescaled_energy && *record.rescaled_energy < *config.stop_below);

        double residual = 0.0;
        RbmParams next;
        if (!last) {
            switch (config.method) {
                case Method::StochasticReconfiguration:
                    next = sr_step(params, fisher, gradient, {config.eta, config.epsilon}, &residual);
                    break;
                case Method::RmspropGroundState:
                    next = rmsprop_gs_step(params, gradient, fisher.mean_o, rms, config.eta);
                    break;
                case Method::RmspropClassic:
                    next = rmsprop_classic_step(params, gradient, rms, config.eta);
                    break;
            }
        }
        record.solve_residual = residual;
        record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.trajectory.push_back(record);
        if (observer) observer(EpochView{result.trajectory.back(), params, fisher, gradient, last});
        if (last) break;
        if (!next.all_finite()) {
            throw NonFiniteEnergy("parameters became non-finite after epoch " + std::to_string(epoch));
        }
        params = std::move(next);
    }
    result.final_params = std::move(params);
    return result;
}

}  // namespace nqs
