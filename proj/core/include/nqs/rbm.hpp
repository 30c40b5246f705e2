#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nqs {

using cplx = std::complex<double>;
using WeightMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A computational-basis configuration with entries in {-1, +1}.
class SpinConfig {
public:
    SpinConfig() = default;
    /// All spins up.
    explicit SpinConfig(std::size_t n) : spins_(n, 1) {}
    explicit SpinConfig(std::vector<int> spins);
    SpinConfig(std::initializer_list<int> spins) : SpinConfig(std::vector<int>(spins)) {}

    std::size_t size() const noexcept { return spins_.size(); }
    int operator[](std::size_t i) const { return spins_[i]; }
    void flip(std::size_t i) { spins_[i] = -spins_[i]; }
    int magnetization() const;
    const std::vector<int>& spins() const noexcept { return spins_; }

    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

private:
    std::vector<int> spins_;
};

/// Complex RBM parameters theta = (a, b, vec(w)). Flat index of w(i, j) is
/// n_visible + n_hidden + i * n_hidden + j; this order is part of the API.
class RbmParams {
public:
    RbmParams() = default;
    /// Zero-initialized parameters.
    RbmParams(std::size_t n_visible, std::size_t n_hidden);
    RbmParams(Eigen::VectorXcd a, Eigen::VectorXcd b, WeightMatrix w);

    std::size_t n_visible() const noexcept { return static_cast<std::size_t>(a_.size()); }
    std::size_t n_hidden() const noexcept { return static_cast<std::size_t>(b_.size()); }
    std::size_t n_params() const noexcept { return n_visible() + n_hidden() + n_visible() * n_hidden(); }

    const Eigen::VectorXcd& a() const noexcept { return a_; }
    const Eigen::VectorXcd& b() const noexcept { return b_; }
    const WeightMatrix& w() const noexcept { return w_; }
    Eigen::VectorXcd& a() noexcept { return a_; }
    Eigen::VectorXcd& b() noexcept { return b_; }
    WeightMatrix& w() noexcept { return w_; }

    std::size_t b_offset() const noexcept { return n_visible(); }
    std::size_t w_offset() const noexcept { return n_visible() + n_hidden(); }
    std::size_t w_index(std::size_t i, std::size_t j) const noexcept { return w_offset() + i * n_hidden() + j; }

    Eigen::VectorXcd flatten() const;
    static RbmParams unflatten(std::size_t n_visible, std::size_t n_hidden, const Eigen::Ref<const Eigen::VectorXcd>& flat);

    /// theta <- theta + scale * delta, with delta in flat order.
    void add_scaled(const Eigen::Ref<const Eigen::VectorXcd>& delta, cplx scale);

    bool all_finite() const;

    friend bool operator==(const RbmParams& lhs, const RbmParams& rhs);

private:
    Eigen::VectorXcd a_;
    Eigen::VectorXcd b_;
    WeightMatrix w_;
};

/// log(2 cosh z) without overflow for large |Re z|. Throws SingularAmplitude
/// when |cosh z| < 1e-300.
cplx log_two_cosh(cplx z);

/// Effective angles chi_j(x) = b_j + sum_i w_ij x_i.
Eigen::VectorXcd effective_angles(const SpinConfig& config, const RbmParams& params);

/// a.x + sum_j log(2 cosh chi_j(x)), principal branch.
cplx log_psi(const SpinConfig& config, const RbmParams& params);

/// Cached effective angles for one configuration. Incremental updates are
/// re-synchronized from scratch every `kResyncInterval` applied flips.
class LookupState {
public:
    static constexpr std::size_t kResyncInterval = 1000;

    LookupState() = default;
    LookupState(SpinConfig config, const RbmParams& params);

    const SpinConfig& config() const noexcept { return config_; }
    const Eigen::VectorXcd& chi() const noexcept { return chi_; }

    /// chi_j -= 2 sum_{i in flips} w_ij x_i, then flips the stored spins.
    /// `flips` must hold distinct site indices.
    void apply_flips(std::span<const std::size_t> flips, const RbmParams& params);
    void resync(const RbmParams& params);

private:
    SpinConfig config_;
    Eigen::VectorXcd chi_;
    std::size_t updates_since_sync_ = 0;
};

cplx log_psi(const LookupState& lookup, const RbmParams& params);

/// log psi(x') - log psi(x), where x' flips the (distinct) sites in `flips`.
/// Costs O(|flips| * M).
cplx log_psi_ratio(const LookupState& lookup, std::span<const std::size_t> flips, const RbmParams& params);

/// Log-derivative vector (x, tanh chi, x (x) tanh chi) in flat parameter order.
Eigen::VectorXcd o_vector(const LookupState& lookup, const RbmParams& params);
void o_vector_into(const LookupState& lookup, const RbmParams& params, Eigen::Ref<Eigen::VectorXcd> out);

/// Real and imaginary parts of every parameter drawn i.i.d. from N(0, sigma^2).
/// sigma == 0 yields all-zero parameters.
RbmParams init_random(std::size_t n_visible, std::size_t n_hidden, double sigma, std::uint64_t seed);

}  // namespace nqs
