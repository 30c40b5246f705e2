#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nqs/basis.hpp"
#include "nqs/estimator.hpp"
#include "nqs/hamiltonian.hpp"
#include "nqs/rbm.hpp"

namespace nqs {

struct EdOptions {
    Sector sector = Sector::Full;
    bool keep_vector = false;
    std::size_t max_sites = kMaxEnumerationSites;
    /// Sector dimensions up to this size use dense diagonalization; above it
    /// a matrix-free Lanczos iteration is used.
    std::size_t dense_limit = 1024;
    std::size_t max_iterations = 2000;
    double residual_tolerance = 1e-10;
};

struct EdResult {
    double ground_energy = 0.0;
    /// Amplitudes over `basis` (sector order), present with keep_vector.
    std::optional<Eigen::VectorXcd> ground_vector;
    std::vector<std::uint64_t> basis;
    Sector sector = Sector::Full;
    std::string method;
    /// ||H v - E v|| / ||v|| when the vector was computed, otherwise NaN.
    double residual = 0.0;
};

/// Sector-restricted dense matrix; rows and columns follow sector_basis().
Eigen::MatrixXd dense_hamiltonian(const Hamiltonian& ham, Sector sector = Sector::Full,
                                  std::size_t max_sites = 14);

/// y = H x over a sector basis without forming H.
void apply_hamiltonian(const Hamiltonian& ham, const std::vector<std::uint64_t>& basis, bool dense_index,
                       const Eigen::VectorXd& x, Eigen::VectorXd& y);

/// Throws OversizeSystem above options.max_sites.
EdResult exact_ground(const Hamiltonian& ham, const EdOptions& options = {});

struct ExactExpectations {
    FisherMatrix fisher;
    GradientVector gradient;
    double energy = 0.0;
};

ExactExpectations exact_expectations(const RbmParams& params, const Hamiltonian& ham, Sector sector = Sector::Full,
                                     std::size_t max_sites = kMaxEnumerationSites);

}  // namespace nqs
