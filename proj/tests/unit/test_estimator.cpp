#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nqs/basis.hpp"
#include "nqs/errors.hpp"
#include "nqs/estimator.hpp"
#include "nqs/gibbsmap.hpp"
#include "oracles.hpp"

using nqs::cplx;
using nqs::RbmParams;
using nqs::SpinConfig;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<SpinConfig> all_configs(std::size_t n) {
    std::vector<SpinConfig> out;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) out.push_back(nqs::config_from_index(k, n));
    return out;
}

std::vector<SpinConfig> iid_samples(const RbmParams& p, std::size_t count, std::mt19937_64& rng) {
    const auto dist = nqs::exact_distribution(p);
    std::discrete_distribution<std::size_t> draw(dist.probabilities.begin(), dist.probabilities.end());
    std::vector<SpinConfig> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(nqs::config_from_index(dist.basis[draw(rng)], p.n_visible()));
    return out;
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("identical samples have no covariance") {
    std::mt19937_64 rng(1);
    const auto p = oracle::random_complex(4, 3, 0.5, rng);
    const std::vector<SpinConfig> same(8, SpinConfig{1, -1, 1, 1});
    const auto batch = nqs::batch_from_configs(same, p, nullptr);
    const auto s = nqs::fisher_from_batch(batch);
    CHECK(max_abs(s.entries) == 0.0);
    CHECK(s.source == nqs::EstimateSource::Sampled);
    CHECK(nqs::fisher_trace_from_batch(batch) == 0.0);
}

TEST_CASE("uniform state over every configuration") {
    const RbmParams p(3, 2);
    const auto s = nqs::fisher_from_batch(nqs::batch_from_configs(all_configs(3), p, nullptr));
    const Eigen::MatrixXcd expected_a = Eigen::MatrixXcd::Identity(3, 3);
    CHECK(max_abs(s.entries.topLeftCorner(3, 3) - expected_a) < 1e-15);
    CHECK(max_abs(s.entries.bottomRightCorner(8, 8)) == 0.0);
    const auto exact = nqs::fisher_exact(p);
    CHECK(max_abs(exact.entries.topLeftCorner(3, 3) - expected_a) < 1e-15);
    CHECK(max_abs(exact.entries.bottomRightCorner(8, 8)) == 0.0);
    CHECK(exact.source == nqs::EstimateSource::Exact);
}

TEST_CASE("exact Fisher matrix matches differentiated amplitudes") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 4; ++rep) {
        const auto p = oracle::random_complex(3, 2, 0.6, rng);
        const auto s = nqs::fisher_exact(p);
        CHECK(max_abs(s.entries - oracle::fisher_by_differences(p)) < 1e-8);
        CHECK(max_abs(s.entries - s.entries.adjoint()) == 0.0);
    }
}

TEST_CASE("sampled Fisher of an exhaustive batch is the unweighted covariance") {
    std::mt19937_64 rng(3);
    const auto p = oracle::random_complex(3, 2, 0.6, rng);
    const auto batch = nqs::batch_from_configs(all_configs(3), p, nullptr);
    const Eigen::MatrixXcd& o = batch.o;
    const Eigen::RowVectorXcd mean = o.colwise().mean();
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(o.cols(), o.cols());
    for (Eigen::Index r = 0; r < o.rows(); ++r) expected += (o.row(r) - mean).adjoint() * (o.row(r) - mean);
    expected /= static_cast<double>(o.rows());
    CHECK(max_abs(nqs::fisher_from_batch(batch).entries - expected) < 1e-14);
    CHECK(nqs::fisher_trace_from_batch(batch) == doctest::Approx(expected.trace().real()).epsilon(1e-13));
    CHECK(nqs::fisher_trace_from_configs(batch.configs, p) == doctest::Approx(expected.trace().real()).epsilon(1e-13));
}

TEST_CASE("quantum Fisher is a quarter of the classical Fisher for real amplitudes") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 2 + rep % 3, m = 1 + rep % 4;
        const auto p = oracle::random_real(n, m, 0.7, rng);
        const auto s = nqs::fisher_exact(p);
        const Eigen::MatrixXd f = oracle::classical_fisher_complex_step(p);
        CHECK(max_abs(s.entries - 0.25 * f.cast<cplx>()) < 1e-10);
    }
}

TEST_CASE("gradient") {
    std::mt19937_64 rng(5);
    SUBCASE("uniform state in the TFI chain") {
        const auto ham = nqs::Hamiltonian::transverse_field_ising(nqs::build_chain(4, true), 1.0);
        const auto g = nqs::gradient_exact(RbmParams(4, 3), ham);
        // O = (x, 0, 0) and H_loc = -sum x_i x_{i+1} - 4; every covariance is an odd moment.
        CHECK(g.entries.cwiseAbs().maxCoeff() < 1e-15);
        CHECK(g.energy_mean.real() == doctest::Approx(-4.0).epsilon(1e-15));
        CHECK(g.energy_variance == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(g.energy_error == 0.0);
    }
    SUBCASE("matches differences of the energy") {
        const auto ham = nqs::Hamiltonian::transverse_field_ising(nqs::build_chain(5, true), 0.7);
        for (int rep = 0; rep < 3; ++rep) {
            const auto p = oracle::random_real(5, 3, 0.4, rng);
            const auto g = nqs::gradient_exact(p, ham);
            const Eigen::VectorXd fd = oracle::energy_gradient_by_differences(p, ham);
            const Eigen::VectorXd analytic = 2.0 * g.entries.real();
            CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-6 * analytic.cwiseAbs().maxCoeff());
        }
    }
    SUBCASE("vanishes on an eigenstate") {
        const auto lat = nqs::build_chain(6, true);
        const auto ham = nqs::Hamiltonian::transverse_field_ising(lat, 0.0);
        const auto p = nqs::gibbs_to_rbm(nqs::IsingModel::ferromagnet(lat, 20.0));
        const auto g = nqs::gradient_exact(p, ham);
        CHECK(g.entries.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(g.energy_variance < 1e-16);
    }
    SUBCASE("sampled estimate") {
        const auto ham = nqs::Hamiltonian::transverse_field_ising(nqs::build_chain(4, true), 1.0);
        const auto p = oracle::random_complex(4, 3, 0.3, rng);
        const auto batch = nqs::batch_from_configs(iid_samples(p, 20000, rng), p, &ham);
        const auto g = nqs::gradient_from_batch(batch);
        const double exact = oracle::rayleigh_energy(p, ham);
        CHECK(g.energy_error > 0.0);
        CHECK(std::abs(g.energy_mean.real() - exact) < 5.0 * g.energy_error);
        CHECK(std::abs(g.energy_mean.imag()) < 5.0 * g.energy_error);
    }
}

TEST_CASE("sampled Fisher converges at the square-root rate") {
    std::mt19937_64 rng(6);
    const auto p = oracle::random_complex(4, 4, 0.4, rng);
    const auto exact = nqs::fisher_exact(p);
    const std::vector<std::size_t> sizes{500, 2000, 8000, 32000};
    std::vector<double> lx, ly;
    for (auto count : sizes) {
        double err = 0.0;
        const int reps = 12;
        for (int r = 0; r < reps; ++r) {
            const auto s = nqs::fisher_from_batch(nqs::batch_from_configs(iid_samples(p, count, rng), p, nullptr));
            err += max_abs(s.entries - exact.entries) / reps;
        }
        lx.push_back(std::log(static_cast<double>(count)));
        ly.push_back(std::log(err));
    }
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) mx += lx[k] / lx.size(), my += ly[k] / ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) sxy += (lx[k] - mx) * (ly[k] - my), sxx += (lx[k] - mx) * (lx[k] - mx);
    const double slope = sxy / sxx;
    CAPTURE(slope);
    CHECK(slope > -0.6);
    CHECK(slope < -0.4);
}

TEST_CASE("exact moments") {
    std::mt19937_64 rng(7);
    const auto ham = nqs::Hamiltonian::xxz(nqs::build_chain(6, true), 0.8);
    const auto p = oracle::random_complex(6, 4, 0.5, rng);
    SUBCASE("block size does not matter") {
        nqs::EnumerationOptions small;
        small.block_size = 1;
        const auto a = nqs::exact_moments(p, &ham, small);
        const auto b = nqs::exact_moments(p, &ham);
        CHECK(max_abs(a.fisher.entries - b.fisher.entries) < 1e-13);
        CHECK((a.gradient.entries - b.gradient.entries).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("covariance can be skipped") {
        const auto full = nqs::exact_moments(p, &ham);
        const auto lean = nqs::exact_moments(p, &ham, {}, false);
        CHECK(lean.fisher.entries.size() == 0);
        CHECK(lean.fisher.mean_o == full.fisher.mean_o);
        CHECK(lean.gradient.entries == full.gradient.entries);
    }
    SUBCASE("sector distributions are normalized") {
        RbmParams polarizing(6, 2);
        polarizing.a().setConstant(3.0);
        const auto dist = nqs::exact_distribution(polarizing, {nqs::Sector::ZeroMagnetization});
        CHECK(dist.basis.size() == 20);
        double total = 0.0;
        for (double v : dist.probabilities) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("trace shortcut") {
        CHECK(nqs::fisher_trace_exact(p) == doctest::Approx(nqs::fisher_exact(p).entries.trace().real()).epsilon(1e-12));
    }
    SUBCASE("size cap") {
        nqs::EnumerationOptions tight;
        tight.max_sites = 5;
        CHECK_THROWS_AS(nqs::exact_moments(p, &ham, tight), nqs::OversizeSystem);
    }
}

TEST_CASE("magnetization estimator") {
    CHECK(nqs::jz2_estimate(std::vector<SpinConfig>{SpinConfig(6), SpinConfig(6)}) == 1.0);
    CHECK(nqs::jz2_estimate(std::vector<SpinConfig>{SpinConfig{1, -1, 1, -1}, SpinConfig{-1, -1, 1, 1}}) == 0.0);
    CHECK(nqs::jz2_exact(RbmParams(4, 2)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(nqs::jz2_exact(RbmParams(4, 2), {nqs::Sector::ZeroMagnetization}) == 0.0);
    RbmParams polarized(6, 2);
    polarized.a().setConstant(40.0);
    CHECK(nqs::jz2_exact(polarized) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<SpinConfig> configs;
    for (std::uint64_t k = 0; k < 16; ++k) configs.push_back(nqs::config_from_index(k, 4));
    CHECK(nqs::jz2_estimate(configs) == doctest::Approx(0.25).epsilon(1e-15));
}

}  // TEST_SUITE
