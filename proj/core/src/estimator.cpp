#include "nqs/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "nqs/errors.hpp"

namespace nqs {

namespace {

void require_samples(const SampleBatch& batch) {
    if (batch.count() < 2) throw std::invalid_argument("estimator needs at least two samples");
    if (static_cast<std::size_t>(batch.o.rows()) != batch.count() ||
        static_cast<std::size_t>(batch.local_energies.size()) != batch.count()) {
        throw std::invalid_argument("sample batch columns have inconsistent lengths");
    }
}

cplx log_psi_or_zero(const SpinConfig& config, const RbmParams& params) {
    try {
        return log_psi(config, params);
    } catch (const SingularAmplitude&) {
        return {-std::numeric_limits<double>::infinity(), 0.0};
    }
}

Eigen::VectorXcd o_of(const SpinConfig& config, const RbmParams& params) {
    return o_vector(LookupState(config, params), params);
}

// H_loc(x) from tabulated log amplitudes; falls back to the ansatz when a
// connected configuration lies outside the enumerated sector.
class TableLocalEnergy {
public:
    TableLocalEnergy(const ExactDistribution& dist, const Hamiltonian& ham, const RbmParams& params, bool dense_index)
        : dist_(dist), ham_(ham), params_(params), dense_index_(dense_index) {}

    cplx operator()(std::size_t k) {
        const std::uint64_t index = dist_.basis[k];
        const SpinConfig x = config_from_index(index, ham_.n_sites());
        ham_.connected_into(x, row_);
        cplx e = row_.diagonal;
        for (const FlipTerm& term : row_.off_diagonal) {
            std::uint64_t target = index;
            for (std::size_t s : term.flips()) target ^= (std::uint64_t{1} << s);
            cplx lp_target;
            if (const auto pos = locate(target); pos < dist_.basis.size()) {
                lp_target = dist_.log_psi[pos];
            } else {
                lp_target = log_psi_or_zero(config_from_index(target, ham_.n_sites()), params_);
            }
            if (std::isinf(lp_target.real())) continue;
            e += term.element * std::exp(lp_target - dist_.log_psi[k]);
        }
        return e;
    }

private:
    std::size_t locate(std::uint64_t index) const {
        if (dense_index_) return static_cast<std::size_t>(index);
        const auto it = std::lower_bound(dist_.basis.begin(), dist_.basis.end(), index);
        if (it == dist_.basis.end() || *it != index) return dist_.basis.size();
        return static_cast<std::size_t>(it - dist_.basis.begin());
    }

    const ExactDistribution& dist_;
    const Hamiltonian& ham_;
    const RbmParams& params_;
    bool dense_index_;
    ConnectedSet row_;
};

}  // namespace

FisherMatrix fisher_from_batch(const SampleBatch& batch) {
    require_samples(batch);
    const double n = static_cast<double>(batch.count());
    FisherMatrix out;
    out.source = EstimateSource::Sampled;
    out.mean_o = batch.o.colwise().mean().transpose();
    const Eigen::MatrixXcd centered = batch.o.rowwise() - out.mean_o.transpose();
    const Eigen::Index d = batch.o.cols();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d, d);
    s.selfadjointView<Eigen::Lower>().rankUpdate(centered.adjoint(), 1.0 / n);
    out.entries = s.selfadjointView<Eigen::Lower>();
    out.entries = 0.5 * (out.entries + out.entries.adjoint()).eval();
    return out;
}

GradientVector gradient_from_batch(const SampleBatch& batch) {
    require_samples(batch);
    const double n = static_cast<double>(batch.count());
    GradientVector out;
    const Eigen::VectorXcd mean_o = batch.o.colwise().mean().transpose();
    out.energy_mean = batch.local_energies.mean();
    const Eigen::VectorXcd de = batch.local_energies.array() - out.energy_mean;
    out.entries = (batch.o.rowwise() - mean_o.transpose()).adjoint() * de / n;
    out.energy_variance = de.squaredNorm() / n;
    out.energy_error = std::sqrt(out.energy_variance / n);
    return out;
}

double fisher_trace_from_batch(const SampleBatch& batch) {
    require_samples(batch);
    const Eigen::RowVectorXcd mean_o = batch.o.colwise().mean();
    return (batch.o.rowwise() - mean_o).squaredNorm() / static_cast<double>(batch.count());
}

double fisher_trace_from_configs(const std::vector<SpinConfig>& configs, const RbmParams& params) {
    if (configs.size() < 2) throw std::invalid_argument("estimator needs at least two samples");
    const double n = static_cast<double>(configs.size());
    Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n_params()));
    for (const auto& x : configs) mean += o_of(x, params);
    mean /= n;
    double trace = 0.0;
    for (const auto& x : configs) trace += (o_of(x, params) - mean).squaredNorm();
    return trace / n;
}

double jz2_estimate(const std::vector<SpinConfig>& configs) {
    if (configs.empty()) throw std::invalid_argument("jz2_estimate on an empty sample");
    const double n_sites = static_cast<double>(configs.front().size());
    double acc = 0.0;
    for (const auto& x : configs) {
        const double m = x.magnetization();
        acc += m * m;
    }
    return acc / static_cast<double>(configs.size()) / (n_sites * n_sites);
}

double jz2_estimate(const SampleBatch& batch) { return jz2_estimate(batch.configs); }

ExactDistribution exact_distribution(const RbmParams& params, const EnumerationOptions& options) {
    const std::size_t n = params.n_visible();
    ExactDistribution dist;
    dist.basis = sector_basis(n, options.sector, options.max_sites);
    dist.log_psi.resize(dist.basis.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dist.basis.size(); ++k) {
        dist.log_psi[k] = log_psi_or_zero(config_from_index(dist.basis[k], n), params);
        top = std::max(top, dist.log_psi[k].real());
    }
    if (std::isinf(top)) throw SingularAmplitude("every amplitude in the enumerated sector vanishes");
    dist.probabilities.resize(dist.basis.size());
    double z = 0.0;
    for (std::size_t k = 0; k < dist.basis.size(); ++k) {
        dist.probabilities[k] = std::exp(2.0 * (dist.log_psi[k].real() - top));
        z += dist.probabilities[k];
    }
    for (double& p : dist.probabilities) p /= z;
    return dist;
}

ExactMoments exact_moments(const RbmParams& params, const Hamiltonian* ham, const EnumerationOptions& options,
                           bool with_covariance) {
    if (ham != nullptr && ham->n_sites() != params.n_visible()) {
        throw std::invalid_argument("Hamiltonian and RBM disagree on the number of sites");
    }
    const std::size_t n = params.n_visible();
    const auto d = static_cast<Eigen::Index>(params.n_params());
    const ExactDistribution dist = exact_distribution(params, options);
    const std::size_t count = dist.basis.size();

    // Pass 1: means.
    ExactMoments out;
    out.fisher.source = EstimateSource::Exact;
    out.fisher.mean_o = Eigen::VectorXcd::Zero(d);
    std::vector<cplx> eloc(ham != nullptr ? count : 0);
    cplx energy = 0.0;
    {
        std::optional<TableLocalEnergy> local;
        if (ham != nullptr) local.emplace(dist, *ham, params, options.sector == Sector::Full);
        for (std::size_t k = 0; k < count; ++k) {
            const double p = dist.probabilities[k];
            if (p == 0.0) continue;
            out.fisher.mean_o += p * o_of(config_from_index(dist.basis[k], n), params);
            if (ham != nullptr) {
                eloc[k] = (*local)(k);
                energy += p * eloc[k];
            }
        }
    }

    // Pass 2: centered second moments, accumulated blockwise.
    const auto block = static_cast<Eigen::Index>(std::max<std::size_t>(options.block_size, 1));
    Eigen::MatrixXcd rows(block, d);
    Eigen::VectorXcd weighted_de(block);
    Eigen::MatrixXcd s = with_covariance ? Eigen::MatrixXcd::Zero(d, d) : Eigen::MatrixXcd();
    Eigen::VectorXcd grad = Eigen::VectorXcd::Zero(d);
    double variance = 0.0;
    Eigen::Index filled = 0;
    auto flush = [&]() {
        if (filled == 0) return;
        if (with_covariance) s.selfadjointView<Eigen::Lower>().rankUpdate(rows.topRows(filled).adjoint());
        if (ham != nullptr) grad.noalias() += rows.topRows(filled).adjoint() * weighted_de.head(filled);
        filled = 0;
    };
    for (std::size_t k = 0; k < count; ++k) {
        const double p = dist.probabilities[k];
        if (p == 0.0) continue;
        const double sp = std::sqrt(p);
        rows.row(filled) = (sp * (o_of(config_from_index(dist.basis[k], n), params) - out.fisher.mean_o)).transpose();
        if (ham != nullptr) {
            const cplx de = eloc[k] - energy;
            weighted_de[filled] = sp * de;
            variance += p * std::norm(de);
        }
        if (++filled == block) flush();
    }
    flush();
    if (with_covariance) out.fisher.entries = s.selfadjointView<Eigen::Lower>();

    out.gradient.entries = std::move(grad);
    out.gradient.energy_mean = energy;
    out.gradient.energy_variance = variance;
    out.gradient.energy_error = 0.0;
    return out;
}

FisherMatrix fisher_exact(const RbmParams& params, const EnumerationOptions& options) {
    return exact_moments(params, nullptr, options).fisher;
}

GradientVector gradient_exact(const RbmParams& params, const Hamiltonian& ham, const EnumerationOptions& options) {
    return exact_moments(params, &ham, options).gradient;
}

double fisher_trace_exact(const RbmParams& params, const EnumerationOptions& options) {
    const std::size_t n = params.n_visible();
    const ExactDistribution dist = exact_distribution(params, options);
    Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n_params()));
    for (std::size_t k = 0; k < dist.basis.size(); ++k) {
        if (dist.probabilities[k] > 0.0) mean += dist.probabilities[k] * o_of(config_from_index(dist.basis[k], n), params);
    }
    double trace = 0.0;
    for (std::size_t k = 0; k < dist.basis.size(); ++k) {
        if (dist.probabilities[k] > 0.0) {
            trace += dist.probabilities[k] * (o_of(config_from_index(dist.basis[k], n), params) - mean).squaredNorm();
        }
    }
    return trace;
}

double jz2_exact(const RbmParams& params, const EnumerationOptions& options) {
    const std::size_t n = params.n_visible();
    const ExactDistribution dist = exact_distribution(params, options);
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.basis.size(); ++k) {
        const double m = config_from_index(dist.basis[k], n).magnetization();
        acc += dist.probabilities[k] * m * m;
    }
    return acc / static_cast<double>(n * n);
}

}  // namespace nqs
