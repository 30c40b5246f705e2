#include "nqs/gibbsmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nqs {

namespace {

void normalize_log(std::vector<double>& logs) {
    const double top = *std::max_element(logs.begin(), logs.end());
    double z = 0.0;
    for (double v : logs) z += std::exp(v - top);
    const double shift = top + std::log(z);
    for (double& v : logs) v -= shift;
}

std::vector<double> boltzmann_logs(const IsingModel& model, std::size_t max_sites) {
    const std::size_t n = model.lattice.n_sites();
    const auto basis = sector_basis(n, Sector::Full, max_sites);
    std::vector<double> logs(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) logs[k] = -model.beta * model.energy(config_from_index(basis[k], n));
    normalize_log(logs);
    return logs;
}

}  // namespace

IsingModel IsingModel::ferromagnet(Lattice lattice, double beta) {
    IsingModel model{std::move(lattice), {}, beta};
    model.couplings.assign(model.lattice.n_edges(), -1.0);
    return model;
}

void IsingModel::validate() const {
    if (couplings.size() != lattice.n_edges()) throw std::invalid_argument("one coupling per edge is required");
    for (double j : couplings) {
        if (!std::isfinite(j)) throw std::invalid_argument("Ising couplings must be finite");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and non-negative");
}

double IsingModel::energy(const SpinConfig& config) const {
    if (config.size() != lattice.n_sites()) throw std::invalid_argument("configuration does not match lattice");
    double e = 0.0;
    const auto& edges = lattice.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) e += couplings[k] * config[edges[k].first] * config[edges[k].second];
    return e;
}

RbmParams gibbs_to_rbm(const IsingModel& model) {
    model.validate();
    if (!model.lattice.covers_all_sites()) {
        throw std::invalid_argument("every site must belong to at least one edge");
    }
    const std::size_t n = model.lattice.n_sites();
    const std::size_t m = model.lattice.n_edges();
    RbmParams params(n, m);
    const auto& edges = model.lattice.edges();
    for (std::size_t e = 0; e < m; ++e) {
        const double bj = model.beta * model.couplings[e];
        const double u = 0.5 * std::acosh(std::exp(std::abs(bj)));
        const auto col = static_cast<Eigen::Index>(e);
        params.w()(static_cast<Eigen::Index>(edges[e].first), col) = u;
        params.w()(static_cast<Eigen::Index>(edges[e].second), col) = bj <= 0.0 ? u : -u;
    }
    return params;
}

double verify_gibbs_state(const RbmParams& params, const IsingModel& model, std::size_t max_sites) {
    model.validate();
    const std::size_t n = model.lattice.n_sites();
    if (params.n_visible() != n) throw std::invalid_argument("RBM and Ising model disagree on the number of sites");
    const auto basis = sector_basis(n, Sector::Full, max_sites);
    std::vector<double> model_logs(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        model_logs[k] = 2.0 * log_psi(config_from_index(basis[k], n), params).real();
    }
    normalize_log(model_logs);
    const auto target = boltzmann_logs(model, max_sites);
    double worst = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        worst = std::max(worst, std::abs(std::expm1(model_logs[k] - target[k])));
    }
    return worst;
}

std::vector<double> boltzmann_distribution(const IsingModel& model, std::size_t max_sites) {
    model.validate();
    auto logs = boltzmann_logs(model, max_sites);
    for (double& v : logs) v = std::exp(v);
    return logs;
}

}  // namespace nqs
