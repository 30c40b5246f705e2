#pragma once

#include <cstddef>
#include <vector>

#include "nqs/basis.hpp"
#include "nqs/lattice.hpp"
#include "nqs/rbm.hpp"

namespace nqs {

/// Classical Ising model H(x) = sum_e J_e x_i x_j at inverse temperature beta.
/// With this sign convention the ferromagnet has J_e = -1.
struct IsingModel {
    Lattice lattice;
    std::vector<double> couplings;
    double beta = 0.0;

    /// Uniform ferromagnet, H(x) = -sum_<ij> x_i x_j.
    static IsingModel ferromagnet(Lattice lattice, double beta);

    double energy(const SpinConfig& config) const;
    void validate() const;
};

/// RBM with one hidden unit per edge whose amplitude is exp(-beta H(x) / 2)
/// up to normalization. a = b = 0. For edge (i, j):
///   beta J <= 0:  w_ie = w_je = acosh(exp(-beta J)) / 2
///   beta J >  0:  w_ie = -w_je = acosh(exp(beta J)) / 2
/// Both branches are real.
RbmParams gibbs_to_rbm(const IsingModel& model);

/// max_x | p_psi(x) / p_Boltzmann(x) - 1 | with both distributions normalized.
double verify_gibbs_state(const RbmParams& params, const IsingModel& model,
                          std::size_t max_sites = kMaxEnumerationSites);

/// Exact Boltzmann probabilities in basis-index order.
std::vector<double> boltzmann_distribution(const IsingModel& model, std::size_t max_sites = kMaxEnumerationSites);

}  // namespace nqs
