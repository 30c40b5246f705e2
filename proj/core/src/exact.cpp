#include "nqs/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nqs/errors.hpp"

namespace nqs {

namespace {

std::size_t locate(const std::vector<std::uint64_t>& basis, bool dense_index, std::uint64_t index) {
    if (dense_index) return static_cast<std::size_t>(index);
    const auto it = std::lower_bound(basis.begin(), basis.end(), index);
    if (it == basis.end() || *it != index) return basis.size();
    return static_cast<std::size_t>(it - basis.begin());
}

void check_sector(const Hamiltonian& ham, Sector sector) {
    if (sector != Sector::Full && !ham.conserves_magnetization()) {
        throw std::invalid_argument("sector restriction requires a magnetization-conserving Hamiltonian");
    }
}

struct LanczosOutcome {
    double theta = 0.0;
    Eigen::VectorXd vector;
};

// Plain three-term Lanczos without stored basis. The first pass builds the
// tridiagonal matrix until the lowest Ritz value has converged; the second
// pass replays the same recursion to assemble the Ritz vector.
LanczosOutcome lanczos_pass(const Hamiltonian& ham, const std::vector<std::uint64_t>& basis, bool dense_index,
                            const Eigen::VectorXd& start, std::size_t max_iterations, double tolerance) {
    const auto dim = start.size();
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = start.normalized();
    Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd w(dim);

    Eigen::VectorXd ritz;
    double theta = 0.0;
    auto solve_tridiagonal = [&]() {
        const auto k = static_cast<Eigen::Index>(alpha.size());
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
        Eigen::VectorXd off = k > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1))
                                    : Eigen::VectorXd();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
        theta = tri.eigenvalues()[0];
        ritz = tri.eigenvectors().col(0);
    };

    double last_beta = 0.0;
    for (std::size_t j = 0; j < max_iterations; ++j) {
        apply_hamiltonian(ham, basis, dense_index, v, w);
        if (j > 0) w -= beta.back() * v_prev;
        const double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        last_beta = w.norm();
        const bool exhausted = last_beta < 1e-13 * std::max(1.0, std::abs(a));
        if (exhausted || (j + 1) % 8 == 0 || j + 1 == max_iterations) {
            solve_tridiagonal();
            const double estimate = last_beta * std::abs(ritz[ritz.size() - 1]);
            if (exhausted || estimate < tolerance * std::max(1.0, std::abs(theta))) break;
        }
        beta.push_back(last_beta);
        v_prev = v;
        v = w / last_beta;
    }

    // Replay.
    const auto k = ritz.size();
    LanczosOutcome out;
    out.theta = theta;
    out.vector = Eigen::VectorXd::Zero(dim);
    v = start.normalized();
    v_prev.setZero();
    for (Eigen::Index j = 0; j < k; ++j) {
        out.vector += ritz[j] * v;
        if (j + 1 == k) break;
        apply_hamiltonian(ham, basis, dense_index, v, w);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * v_prev;
        w -= alpha[static_cast<std::size_t>(j)] * v;
        v_prev = v;
        v = w / beta[static_cast<std::size_t>(j)];
    }
    out.vector.normalize();
    return out;
}

}  // namespace

Eigen::MatrixXd dense_hamiltonian(const Hamiltonian& ham, Sector sector, std::size_t max_sites) {
    check_sector(ham, sector);
    const std::size_t n = ham.n_sites();
    const auto basis = sector_basis(n, sector, max_sites);
    const bool dense_index = sector == Sector::Full;
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    ConnectedSet row;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const std::uint64_t index = basis[static_cast<std::size_t>(k)];
        ham.connected_into(config_from_index(index, n), row);
        h(k, k) += row.diagonal;
        for (const FlipTerm& term : row.off_diagonal) {
            std::uint64_t target = index;
            for (std::size_t s : term.flips()) target ^= (std::uint64_t{1} << s);
            h(k, static_cast<Eigen::Index>(locate(basis, dense_index, target))) += term.element;
        }
    }
    return h;
}

void apply_hamiltonian(const Hamiltonian& ham, const std::vector<std::uint64_t>& basis, bool dense_index,
                       const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const std::size_t n = ham.n_sites();
    y.resize(x.size());
    ConnectedSet row;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const std::uint64_t index = basis[k];
        ham.connected_into(config_from_index(index, n), row);
        double acc = row.diagonal * x[static_cast<Eigen::Index>(k)];
        for (const FlipTerm& term : row.off_diagonal) {
            std::uint64_t target = index;
            for (std::size_t s : term.flips()) target ^= (std::uint64_t{1} << s);
            const std::size_t pos = locate(basis, dense_index, target);
            if (pos == basis.size()) throw std::logic_error("Hamiltonian leaves the enumerated sector");
            acc += term.element * x[static_cast<Eigen::Index>(pos)];
        }
        y[static_cast<Eigen::Index>(k)] = acc;
    }
}

EdResult exact_ground(const Hamiltonian& ham, const EdOptions& options) {
    check_sector(ham, options.sector);
    EdResult result;
    result.sector = options.sector;
    result.basis = sector_basis(ham.n_sites(), options.sector, options.max_sites);
    const bool dense_index = options.sector == Sector::Full;
    const auto dim = static_cast<Eigen::Index>(result.basis.size());

    Eigen::VectorXd vector;
    if (result.basis.size() <= options.dense_limit) {
        result.method = "dense";
        const Eigen::MatrixXd h = dense_hamiltonian(ham, options.sector, options.max_sites);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            h, options.keep_vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw std::runtime_error("dense eigensolver did not converge");
        result.ground_energy = eig.eigenvalues()[0];
        if (options.keep_vector) vector = eig.eigenvectors().col(0);
    } else {
        result.method = "lanczos";
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> gauss;
        Eigen::VectorXd start(dim);
        for (Eigen::Index k = 0; k < dim; ++k) start[k] = gauss(rng);
        Eigen::VectorXd hv(dim);
        for (int restart = 0; restart < 8; ++restart) {
            LanczosOutcome pass = lanczos_pass(ham, result.basis, dense_index, start, options.max_iterations,
                                               options.residual_tolerance * 1e-2);
            apply_hamiltonian(ham, result.basis, dense_index, pass.vector, hv);
            const double energy = pass.vector.dot(hv);
            const double residual = (hv - energy * pass.vector).norm();
            result.ground_energy = energy;
            vector = std::move(pass.vector);
            result.residual = residual;
            if (residual < options.residual_tolerance * std::max(1.0, std::abs(energy))) break;
            start = vector;
        }
    }

    if (options.keep_vector) {
        Eigen::VectorXd hv(dim);
        apply_hamiltonian(ham, result.basis, dense_index, vector, hv);
        result.residual = (hv - result.ground_energy * vector).norm() / vector.norm();
        result.ground_vector = vector.cast<cplx>();
    } else if (result.method == "dense") {
        result.residual = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

ExactExpectations exact_expectations(const RbmParams& params, const Hamiltonian& ham, Sector sector,
                                     std::size_t max_sites) {
    EnumerationOptions options;
    options.sector = sector;
    options.max_sites = max_sites;
    ExactMoments m = exact_moments(params, &ham, options);
    ExactExpectations out;
    out.energy = m.gradient.energy_mean.real();
    out.fisher = std::move(m.fisher);
    out.gradient = std::move(m.gradient);
    return out;
}

}  // namespace nqs
