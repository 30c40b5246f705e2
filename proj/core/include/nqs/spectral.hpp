#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "nqs/estimator.hpp"
#include "nqs/rbm.hpp"

namespace nqs {

enum class RankMode {
    /// count eigenvalues > rank_threshold
    Absolute,
    /// count eigenvalues > max(rank_threshold, relative_rank * lambda_1), for sampled matrices
    Relative,
};

struct SpectrumOptions {
    double rank_threshold = 1e-10;
    RankMode rank_mode = RankMode::Absolute;
    double relative_rank = 1e-6;
    double kink_ratio = 100.0;
    /// Eigenvalues below kink_floor * lambda_1 are round-off and never start
    /// or end a kink.
    double kink_floor = 1e-14;
    double diag_threshold = 1e-4;
    bool entanglement = true;
};

struct Kink {
    /// 1-based: lambda_index / lambda_{index+1} > threshold.
    std::size_t index = 0;
    double ratio = 0.0;
};

struct SpectrumReport {
    Eigen::VectorXd eigenvalues;  // descending
    std::size_t rank = 0;
    std::vector<Kink> kinks;
    double trace = 0.0;
    /// Per-eigenvector entropy in nats; NaN where the weight block vanishes.
    Eigen::VectorXd entanglement;
    /// True where an eigenvalue is degenerate with a neighbour, so the
    /// eigenvector (and its entanglement) is an arbitrary basis choice.
    std::vector<bool> degenerate;
    std::size_t diag_count = 0;
};

/// Throws NotHermitian when max |S - S^dagger| > 1e-8.
SpectrumReport spectrum(const Eigen::MatrixXcd& s, std::size_t n_visible, std::size_t n_hidden,
                        const SpectrumOptions& options = {});
SpectrumReport spectrum(const FisherMatrix& s, std::size_t n_visible, std::size_t n_hidden,
                        const SpectrumOptions& options = {});

std::size_t numerical_rank(const Eigen::VectorXd& eigenvalues, const SpectrumOptions& options = {});

/// `eigenvalues` sorted descending.
std::vector<Kink> detect_kinks(const Eigen::VectorXd& eigenvalues, double ratio_threshold = 100.0,
                               double relative_floor = 0.0);

/// Entanglement entropy (nats) of the weight block of a parameter-space
/// vector, reshaped N x M and normalized. Throws ZeroWeightBlock when the
/// block norm is below 1e-12.
double eigvec_entanglement(const Eigen::Ref<const Eigen::VectorXcd>& vec, std::size_t n_visible,
                           std::size_t n_hidden);

/// Leading-order Fisher matrix of a near-zero RBM, assuming independent
/// uniform spins:
///   S_aa = 1, S_ab = w, S_bb = w^dagger w, S_aw = 1 (x) b,
///   S_bw(j', ij) = w*_ij' b_j,
///   S_ww = (1 (x) w^dagger) X (1 (x) w) + 1 (x) |b><b|, X = 1 + V - 2 sum_j |jj><jj|.
Eigen::MatrixXcd random_rbm_predictor(const RbmParams& params);

double fisher_information_trace(const Eigen::MatrixXcd& s);
double fisher_information_trace(const FisherMatrix& s);

}  // namespace nqs
