#include <cmath>
#include <random>

#include "doctest.h"
#include "nqs/basis.hpp"
#include "nqs/errors.hpp"
#include "nqs/exact.hpp"
#include "oracles.hpp"

using nqs::Hamiltonian;
using nqs::Sector;

namespace {

Hamiltonian tfi_ring(std::size_t n, double h) { return Hamiltonian::transverse_field_ising(nqs::build_chain(n, true), h); }
Hamiltonian xxz_ring(std::size_t n, double d) { return Hamiltonian::xxz(nqs::build_chain(n, true), d); }

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("classical limits") {
    CHECK(nqs::exact_ground(Hamiltonian::transverse_field_ising(nqs::build_chain(2, false), 0.0)).ground_energy ==
          doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(nqs::exact_ground(tfi_ring(4, 0.0)).ground_energy == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(nqs::exact_ground(tfi_ring(8, 0.0)).ground_energy == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(nqs::exact_ground(xxz_ring(4, 1.0)).ground_energy == doctest::Approx(-8.0).epsilon(1e-13));
}

TEST_CASE("dense matrix equals the Kronecker construction") {
    for (const auto& ham : {tfi_ring(5, 0.7), xxz_ring(6, 0.5), Hamiltonian::classical_ising(nqs::build_square(2, false), 1.3),
                            Hamiltonian::transverse_field_ising(nqs::build_square(3, true), 2.0)}) {
        const Eigen::MatrixXcd kron = oracle::kron_hamiltonian(ham);
        CHECK((nqs::dense_hamiltonian(ham).cast<nqs::cplx>() - kron).cwiseAbs().maxCoeff() < 1e-14);
        if (!ham.conserves_magnetization() || ham.n_sites() % 2 != 0) continue;
        const auto basis = nqs::sector_basis(ham.n_sites(), Sector::ZeroMagnetization);
        const auto sub = nqs::dense_hamiltonian(ham, Sector::ZeroMagnetization);
        REQUIRE(sub.rows() == static_cast<Eigen::Index>(basis.size()));
        for (std::size_t r = 0; r < basis.size(); ++r)
            for (std::size_t c = 0; c < basis.size(); ++c)
                CHECK(std::abs(sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -
                               kron(static_cast<Eigen::Index>(basis[r]), static_cast<Eigen::Index>(basis[c]))) < 1e-14);
    }
}

TEST_CASE("sector blocks commute with the Hamiltonian") {
    const auto ham = xxz_ring(6, 0.8);
    const Eigen::MatrixXcd kron = oracle::kron_hamiltonian(ham);
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(64, 64);
    for (auto k : nqs::sector_basis(6, Sector::ZeroMagnetization)) proj(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    CHECK((kron * proj - proj * kron).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("reference ground energies") {
    struct Case {
        Hamiltonian ham;
        double energy;
    };
    const std::vector<Case> cases{
        {tfi_ring(4, 1.0), -5.226251859505504},
        {tfi_ring(6, 1.0), -7.727406610312549},
        {tfi_ring(8, 0.5), -8.509082235140284},
        {tfi_ring(10, 0.5), -10.635604409347952},
        {tfi_ring(10, 1.0), -12.784906442999313},
        {tfi_ring(10, 2.0), -21.271208818695992},
        {Hamiltonian::transverse_field_ising(nqs::build_square(3, true), 3.0), -29.209708887381083},
        {xxz_ring(6, 0.5), -9.472135954999576},
        {xxz_ring(8, 1.0), -14.604373635748678},
        {tfi_ring(12, 1.0), -15.322595151080767},
        {xxz_ring(12, 1.0), -21.5495636697808},
        {Hamiltonian::xxz(nqs::build_chain(10, false), 2.0), -23.330725460886537},
    };
    for (const auto& c : cases) {
        CAPTURE(c.energy);
        const auto r = nqs::exact_ground(c.ham);
        CHECK(r.ground_energy == doctest::Approx(c.energy).epsilon(1e-10));
        if (c.ham.conserves_magnetization()) {
            nqs::EdOptions opt;
            opt.sector = Sector::ZeroMagnetization;
            CHECK(nqs::exact_ground(c.ham, opt).ground_energy == doctest::Approx(c.energy).epsilon(1e-10));
        }
    }
}

TEST_CASE("Lanczos agrees with dense diagonalization") {
    for (const auto& ham : {tfi_ring(8, 1.0), xxz_ring(8, 1.0), tfi_ring(10, 0.5)}) {
        nqs::EdOptions lanczos;
        lanczos.dense_limit = 0;
        lanczos.keep_vector = true;
        const auto a = nqs::exact_ground(ham, lanczos);
        nqs::EdOptions dense;
        dense.dense_limit = 1u << 12;
        const auto b = nqs::exact_ground(ham, dense);
        CHECK(a.method == "lanczos");
        CHECK(b.method == "dense");
        CHECK(a.ground_energy == doctest::Approx(b.ground_energy).epsilon(1e-11));
        CHECK(a.residual < 1e-8);
    }
}

TEST_CASE("ground vector") {
    const auto ham = tfi_ring(6, 1.0);
    nqs::EdOptions opt;
    opt.keep_vector = true;
    const auto r = nqs::exact_ground(ham, opt);
    REQUIRE(r.ground_vector.has_value());
    const Eigen::VectorXcd& v = *r.ground_vector;
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((oracle::kron_hamiltonian(ham) * v - r.ground_energy * v).norm() < 1e-10);
    CHECK(r.residual < 1e-10);
    CHECK(std::isnan(nqs::exact_ground(ham).residual));
}

TEST_CASE("variational expectations") {
    std::mt19937_64 rng(3);
    const auto ham = tfi_ring(6, 1.0);
    const double e0 = nqs::exact_ground(ham).ground_energy;
    for (int rep = 0; rep < 5; ++rep) {
        const auto p = oracle::random_complex(6, 4, 0.4, rng);
        const auto ex = nqs::exact_expectations(p, ham);
        CHECK(ex.energy == doctest::Approx(oracle::rayleigh_energy(p, ham)).epsilon(1e-12));
        CHECK(ex.energy >= e0 - 1e-12);
        CHECK(ex.fisher.entries.rows() == static_cast<Eigen::Index>(p.n_params()));
    }
    CHECK(nqs::exact_expectations(nqs::RbmParams(6, 2), ham).energy == doctest::Approx(-6.0).epsilon(1e-14));
}

TEST_CASE("sector expectations") {
    std::mt19937_64 rng(4);
    const auto ham = xxz_ring(6, 1.0);
    const auto p = oracle::random_complex(6, 3, 0.4, rng);
    const auto basis = nqs::sector_basis(6, Sector::ZeroMagnetization);
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k)
        psi[static_cast<Eigen::Index>(k)] = std::exp(nqs::log_psi(nqs::config_from_index(basis[k], 6), p));
    const Eigen::MatrixXd h = nqs::dense_hamiltonian(ham, Sector::ZeroMagnetization);
    const double expected = (psi.adjoint() * h.cast<nqs::cplx>() * psi)(0, 0).real() / psi.squaredNorm();
    CHECK(nqs::exact_expectations(p, ham, Sector::ZeroMagnetization).energy == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("invalid requests") {
    nqs::EdOptions opt;
    opt.sector = Sector::ZeroMagnetization;
    CHECK_THROWS_AS(nqs::exact_ground(tfi_ring(4, 1.0), opt), std::invalid_argument);
    nqs::EdOptions tight;
    tight.max_sites = 8;
    CHECK_THROWS_AS(nqs::exact_ground(tfi_ring(10, 1.0), tight), nqs::OversizeSystem);
    CHECK_THROWS_AS(nqs::dense_hamiltonian(tfi_ring(10, 1.0), Sector::Full, 8), nqs::OversizeSystem);
    CHECK_THROWS_AS(nqs::exact_expectations(nqs::RbmParams(10, 2), tfi_ring(10, 1.0), Sector::Full, 8), nqs::OversizeSystem);
}

}  // TEST_SUITE
