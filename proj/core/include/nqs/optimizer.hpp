#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nqs/basis.hpp"
#include "nqs/estimator.hpp"
#include "nqs/hamiltonian.hpp"
#include "nqs/rbm.hpp"
#include "nqs/sampler.hpp"

namespace nqs {

struct SrConfig {
    double eta = 0.01;
    /// Added uniformly to the diagonal of S.
    double epsilon = 1e-3;
};

/// Learning rates used for the reference simulations: 0.01 for the TFI
/// chain, 0.002 for the TFI square lattice, 0.02 for XXZ; epsilon 1e-3.
SrConfig default_sr_config(const Hamiltonian& ham);

inline constexpr double kSolveResidualTolerance = 1e-8;

/// v = (S + eps I)^{-1} R via Cholesky. Throws IllConditioned when the
/// factorization fails or the relative residual exceeds 1e-8.
Eigen::VectorXcd sr_direction(const Eigen::MatrixXcd& s, const Eigen::VectorXcd& r, double epsilon,
                              double* residual = nullptr);

/// theta - eta (S + eps I)^{-1} R
RbmParams sr_step(const RbmParams& params, const FisherMatrix& s, const GradientVector& g, const SrConfig& config,
                  double* residual = nullptr);

struct RmsState {
    Eigen::VectorXd v;
    std::uint64_t t = 0;
    double beta = 0.9;
    double eps_denom = 1e-8;

    static RmsState zeros(std::size_t dim, double beta = 0.9, double eps_denom = 1e-8);
};

/// Ground-state RMSProp: the curvature estimate is built from |<O>|^2 rather
/// than from the gradient.
RbmParams rmsprop_gs_step(const RbmParams& params, const GradientVector& g, const Eigen::VectorXcd& mean_o,
                          RmsState& state, double eta);

/// Textbook RMSProp with v built from |g|^2.
RbmParams rmsprop_classic_step(const RbmParams& params, const GradientVector& g, RmsState& state, double eta);

enum class Method { StochasticReconfiguration, RmspropGroundState, RmspropClassic };
std::string_view to_string(Method method);

struct ExactBackend {
    Sector sector = Sector::Full;
};
struct McmcBackend {
    SamplerConfig sampler;
};
using Backend = std::variant<ExactBackend, McmcBackend>;

struct OptimizationConfig {
    Method method = Method::StochasticReconfiguration;
    double eta = 0.01;
    double epsilon = 1e-3;
    double rms_beta = 0.9;
    double rms_eps = 1e-8;
    std::size_t epochs = 0;
    Backend backend = ExactBackend{};
    /// Master seed for the MCMC chains.
    std::uint64_t seed = 0;
    /// Ground-state energy used for the rescaled energy.
    std::optional<double> reference_energy;
    /// Stop as soon as the rescaled energy drops below this value.
    std::optional<double> stop_below;
    /// Build the full Fisher matrix even when the method does not need it.
    bool always_fisher = false;
};

struct EpochRecord {
    std::size_t epoch = 0;
    cplx energy{0.0, 0.0};
    double energy_variance = 0.0;
    double energy_error = 0.0;
    /// (E - E_ref) / (E_initial - E_ref) when a reference is configured.
    std::optional<double> rescaled_energy;
    double acceptance = 0.0;
    double exchange_rate = 0.0;
    double solve_residual = 0.0;
    double wall_seconds = 0.0;
};

/// Everything known at one epoch before the update is applied. `fisher`
/// holds an empty matrix when the method did not need one.
struct EpochView {
    const EpochRecord& record;
    const RbmParams& params;
    const FisherMatrix& fisher;
    const GradientVector& gradient;
    /// True for the last recorded epoch (epoch limit or early stop).
    bool final = false;
};

using EpochObserver = std::function<void(const EpochView&)>;

struct OptimizationResult {
    std::vector<EpochRecord> trajectory;
    RbmParams final_params;
};

/// Records epochs 0..epochs (epochs == 0 records the initial point only).
/// Throws NonFiniteEnergy as soon as the energy or the parameters stop being
/// finite.
OptimizationResult run_optimization(const Hamiltonian& ham, RbmParams initial, const OptimizationConfig& config,
                                    const EpochObserver& observer = {});

}  // namespace nqs
