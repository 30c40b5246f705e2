#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nqs/basis.hpp"
#include "nqs/hamiltonian.hpp"
#include "nqs/rbm.hpp"
#include "nqs/sampler.hpp"

namespace nqs {

enum class EstimateSource { Sampled, Exact };

/// S_ab = E[O*_a O_b] - E[O*_a] E[O_b], Hermitian by construction.
struct FisherMatrix {
    Eigen::MatrixXcd entries;
    Eigen::VectorXcd mean_o;
    EstimateSource source = EstimateSource::Exact;

    Eigen::Index dim() const noexcept { return entries.rows(); }
};

/// R_a = E[O*_a H_loc] - E[O*_a] E[H_loc] plus energy statistics.
/// `energy_error` is the naive standard error (zero for exact estimates).
struct GradientVector {
    Eigen::VectorXcd entries;
    cplx energy_mean{0.0, 0.0};
    double energy_variance = 0.0;
    double energy_error = 0.0;
};

/// Covariance with 1/count normalization, two-pass centered.
FisherMatrix fisher_from_batch(const SampleBatch& batch);
GradientVector gradient_from_batch(const SampleBatch& batch);

/// Trace of the sampled Fisher matrix without forming it.
double fisher_trace_from_batch(const SampleBatch& batch);
/// Same, streaming over configurations so that large D never needs a
/// count x D matrix.
double fisher_trace_from_configs(const std::vector<SpinConfig>& configs, const RbmParams& params);

/// E[(sum_i x_i)^2] / N^2
double jz2_estimate(const std::vector<SpinConfig>& configs);
double jz2_estimate(const SampleBatch& batch);

struct EnumerationOptions {
    Sector sector = Sector::Full;
    std::size_t max_sites = kMaxEnumerationSites;
    /// Configurations per accumulation block.
    std::size_t block_size = 256;
};

/// |psi|^2 / Z over a sector basis. Zero-amplitude configurations carry
/// log_psi with real part -inf and probability 0.
struct ExactDistribution {
    std::vector<std::uint64_t> basis;
    std::vector<cplx> log_psi;
    std::vector<double> probabilities;
};

ExactDistribution exact_distribution(const RbmParams& params, const EnumerationOptions& options = {});

struct ExactMoments {
    FisherMatrix fisher;
    GradientVector gradient;
};

/// Fisher matrix and (when `ham` is non-null) gradient by full enumeration.
/// With `with_covariance` false only fisher.mean_o is filled, which skips the
/// O(count * D^2) accumulation. Throws OversizeSystem above options.max_sites.
ExactMoments exact_moments(const RbmParams& params, const Hamiltonian* ham, const EnumerationOptions& options = {},
                           bool with_covariance = true);

FisherMatrix fisher_exact(const RbmParams& params, const EnumerationOptions& options = {});
GradientVector gradient_exact(const RbmParams& params, const Hamiltonian& ham, const EnumerationOptions& options = {});
double fisher_trace_exact(const RbmParams& params, const EnumerationOptions& options = {});
double jz2_exact(const RbmParams& params, const EnumerationOptions& options = {});

}  // namespace nqs
