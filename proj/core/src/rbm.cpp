#include "nqs/rbm.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "nqs/errors.hpp"

namespace nqs {

namespace {

// log(1e-300): below this |cosh z| is treated as an exact zero.
constexpr double kLogSingular = -690.7755278982137;

cplx wrap_phase(cplx z) {
    double im = std::remainder(z.imag(), 2.0 * std::numbers::pi);
    if (im <= -std::numbers::pi) im += 2.0 * std::numbers::pi;
    return {z.real(), im};
}

void check_dims(const SpinConfig& config, const RbmParams& params) {
    if (config.size() != params.n_visible()) {
        throw std::invalid_argument("configuration has " + std::to_string(config.size()) + " sites, RBM expects " +
                                    std::to_string(params.n_visible()));
    }
}

// log|cosh z| evaluated stably.
double log_abs_cosh(cplx z) {
    if (z.real() < 0) z = -z;
    return z.real() + std::log(std::abs(1.0 + std::exp(-2.0 * z))) - std::numbers::ln2;
}

cplx checked_tanh(cplx z) {
    if (log_abs_cosh(z) < kLogSingular) {
        throw SingularAmplitude("tanh pole: |cosh chi| vanishes at chi = (" + std::to_string(z.real()) + ", " +
                                std::to_string(z.imag()) + ")");
    }
    return std::tanh(z);
}

}  // namespace

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) {
    for (int s : spins_) {
        if (s != 1 && s != -1) {
            throw std::invalid_argument("spin values must be -1 or +1, got " + std::to_string(s));
        }
    }
}

int SpinConfig::magnetization() const {
    int m = 0;
    for (int s : spins_) m += s;
    return m;
}

RbmParams::RbmParams(std::size_t n_visible, std::size_t n_hidden)
    : a_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_visible))),
      b_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_hidden))),
      w_(WeightMatrix::Zero(static_cast<Eigen::Index>(n_visible), static_cast<Eigen::Index>(n_hidden))) {
    if (n_visible == 0 || n_hidden == 0) {
        throw std::invalid_argument("RBM needs at least one visible and one hidden unit");
    }
}

RbmParams::RbmParams(Eigen::VectorXcd a, Eigen::VectorXcd b, WeightMatrix w)
    : a_(std::move(a)), b_(std::move(b)), w_(std::move(w)) {
    if (a_.size() == 0 || b_.size() == 0) {
        throw std::invalid_argument("RBM needs at least one visible and one hidden unit");
    }
    if (w_.rows() != a_.size() || w_.cols() != b_.size()) {
        throw std::invalid_argument("weight matrix shape does not match bias lengths");
    }
}

Eigen::VectorXcd RbmParams::flatten() const {
    Eigen::VectorXcd flat(static_cast<Eigen::Index>(n_params()));
    const auto n = a_.size();
    const auto m = b_.size();
    flat.head(n) = a_;
    flat.segment(n, m) = b_;
    flat.tail(n * m) = Eigen::Map<const Eigen::VectorXcd>(w_.data(), n * m);
    return flat;
}

RbmParams RbmParams::unflatten(std::size_t n_visible, std::size_t n_hidden,
                               const Eigen::Ref<const Eigen::VectorXcd>& flat) {
    RbmParams p(n_visible, n_hidden);
    if (static_cast<std::size_t>(flat.size()) != p.n_params()) {
        throw std::invalid_argument("flat parameter vector has length " + std::to_string(flat.size()) +
                                    ", expected " + std::to_string(p.n_params()));
    }
    p.add_scaled(flat, 1.0);
    return p;
}

void RbmParams::add_scaled(const Eigen::Ref<const Eigen::VectorXcd>& delta, cplx scale) {
    if (static_cast<std::size_t>(delta.size()) != n_params()) {
        throw std::invalid_argument("update length does not match parameter count");
    }
    const auto n = a_.size();
    const auto m = b_.size();
    a_ += scale * delta.head(n);
    b_ += scale * delta.segment(n, m);
    Eigen::Map<Eigen::VectorXcd>(w_.data(), n * m) += scale * delta.tail(n * m);
}

bool RbmParams::all_finite() const {
    return a_.allFinite() && b_.allFinite() && w_.allFinite();
}

bool operator==(const RbmParams& lhs, const RbmParams& rhs) {
    return lhs.a_.size() == rhs.a_.size() && lhs.b_.size() == rhs.b_.size() && lhs.a_ == rhs.a_ &&
           lhs.b_ == rhs.b_ && lhs.w_ == rhs.w_;
}

cplx log_two_cosh(cplx z) {
    // cosh is even, so fold onto Re z >= 0 where 2 cosh z = e^z (1 + e^{-2z}).
    if (z.real() < 0) z = -z;
    const cplx tail = 1.0 + std::exp(-2.0 * z);
    if (z.real() + std::log(std::abs(tail)) - std::numbers::ln2 < kLogSingular) {
        throw SingularAmplitude("RBM amplitude vanishes: |cosh chi| < 1e-300");
    }
    return z + std::log(tail);
}

Eigen::VectorXcd effective_angles(const SpinConfig& config, const RbmParams& params) {
    check_dims(config, params);
    Eigen::VectorXcd chi = params.b();
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (config[i] > 0) {
            chi += params.w().row(static_cast<Eigen::Index>(i)).transpose();
        } else {
            chi -= params.w().row(static_cast<Eigen::Index>(i)).transpose();
        }
    }
    return chi;
}

namespace {

cplx log_psi_from_angles(const SpinConfig& config, const Eigen::VectorXcd& chi, const RbmParams& params) {
    cplx result = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        result += params.a()[static_cast<Eigen::Index>(i)] * static_cast<double>(config[i]);
    }
    for (Eigen::Index j = 0; j < chi.size(); ++j) result += log_two_cosh(chi[j]);
    return wrap_phase(result);
}

}  // namespace

cplx log_psi(const SpinConfig& config, const RbmParams& params) {
    return log_psi_from_angles(config, effective_angles(config, params), params);
}

LookupState::LookupState(SpinConfig config, const RbmParams& params) : config_(std::move(config)) {
    chi_ = effective_angles(config_, params);
}

void LookupState::apply_flips(std::span<const std::size_t> flips, const RbmParams& params) {
    for (std::size_t site : flips) {
        const double x = config_[site];
        chi_ -= (2.0 * x) * params.w().row(static_cast<Eigen::Index>(site)).transpose();
        config_.flip(site);
    }
    if (!flips.empty() && ++updates_since_sync_ >= kResyncInterval) resync(params);
}

void LookupState::resync(const RbmParams& params) {
    chi_ = effective_angles(config_, params);
    updates_since_sync_ = 0;
}

cplx log_psi(const LookupState& lookup, const RbmParams& params) {
    return log_psi_from_angles(lookup.config(), lookup.chi(), params);
}

cplx log_psi_ratio(const LookupState& lookup, std::span<const std::size_t> flips, const RbmParams& params) {
    if (flips.empty()) return 0.0;
    const SpinConfig& x = lookup.config();
    const Eigen::VectorXcd& chi = lookup.chi();
    const auto& w = params.w();
    cplx delta = 0.0;
    for (std::size_t i : flips) delta -= 2.0 * params.a()[static_cast<Eigen::Index>(i)] * static_cast<double>(x[i]);
    // With 2 cosh z = e^z (1 + e^{-2z}) for Re z >= 0, the ratio splits into
    // a sum of folded angles and a product of tails; only the product needs a
    // log, taken once (or when it drifts far from 1).
    cplx tails = 1.0;
    for (Eigen::Index j = 0; j < chi.size(); ++j) {
        cplx shift = 0.0;
        for (std::size_t i : flips) shift += w(static_cast<Eigen::Index>(i), j) * static_cast<double>(x[i]);
        const cplx before = chi[j].real() < 0 ? -chi[j] : chi[j];
        const cplx moved = chi[j] - 2.0 * shift;
        const cplx after = moved.real() < 0 ? -moved : moved;
        const cplx tail_before = 1.0 + std::exp(-2.0 * before);
        const cplx tail_after = 1.0 + std::exp(-2.0 * after);
        if (std::norm(tail_before) < 1e-200 || std::norm(tail_after) < 1e-200) {
            delta += log_two_cosh(moved) - log_two_cosh(chi[j]);
            continue;
        }
        delta += after - before;
        tails *= tail_after / tail_before;
        if (const double mag = std::norm(tails); mag > 1e200 || mag < 1e-200) {
            delta += std::log(tails);
            tails = 1.0;
        }
    }
    return wrap_phase(delta + std::log(tails));
}

void o_vector_into(const LookupState& lookup, const RbmParams& params, Eigen::Ref<Eigen::VectorXcd> out) {
    const auto n = static_cast<Eigen::Index>(params.n_visible());
    const auto m = static_cast<Eigen::Index>(params.n_hidden());
    if (out.size() != static_cast<Eigen::Index>(params.n_params())) {
        throw std::invalid_argument("o_vector output has wrong length");
    }
    const SpinConfig& x = lookup.config();
    for (Eigen::Index j = 0; j < m; ++j) out[n + j] = checked_tanh(lookup.chi()[j]);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        out[i] = xi;
        out.segment(n + m + i * m, m) = xi * out.segment(n, m);
    }
}

Eigen::VectorXcd o_vector(const LookupState& lookup, const RbmParams& params) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(params.n_params()));
    o_vector_into(lookup, params, out);
    return out;
}

RbmParams init_random(std::size_t n_visible, std::size_t n_hidden, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("init_random: sigma must be finite and non-negative");
    }
    RbmParams params(n_visible, n_hidden);
    if (sigma == 0.0) return params;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    auto draw = [&]() {
        const double re = gauss(rng);
        const double im = gauss(rng);
        return cplx(re, im);
    };
    for (Eigen::Index i = 0; i < params.a().size(); ++i) params.a()[i] = draw();
    for (Eigen::Index j = 0; j < params.b().size(); ++j) params.b()[j] = draw();
    for (Eigen::Index i = 0; i < params.w().rows(); ++i)
        for (Eigen::Index j = 0; j < params.w().cols(); ++j) params.w()(i, j) = draw();
    return params;
}

}  // namespace nqs
