#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nqs/lattice.hpp"
#include "nqs/rbm.hpp"

namespace nqs {

enum class HamiltonianKind {
    /// -sum_<ij> sz sz - h sum_i sx
    TransverseFieldIsing,
    /// sum_<ij> (sx sx + sy sy + delta sz sz)
    Xxz,
    /// -coupling sum_<ij> x_i x_j, diagonal only
    ClassicalIsing,
};

std::string_view to_string(HamiltonianKind kind);

/// One off-diagonal term <x|H|x'> where x' flips one or two sites of x.
struct FlipTerm {
    std::array<std::size_t, 2> sites{};
    std::size_t n_flips = 0;
    double element = 0.0;

    std::span<const std::size_t> flips() const noexcept { return {sites.data(), n_flips}; }
};

/// Row x of H: the diagonal element and all non-zero off-diagonal elements.
/// Matrix elements of the supported models are real in the z basis.
struct ConnectedSet {
    double diagonal = 0.0;
    std::vector<FlipTerm> off_diagonal;
};

class Hamiltonian {
public:
    static Hamiltonian transverse_field_ising(Lattice lattice, double field);
    static Hamiltonian xxz(Lattice lattice, double anisotropy);
    static Hamiltonian classical_ising(Lattice lattice, double coupling = 1.0);

    HamiltonianKind kind() const noexcept { return kind_; }
    const Lattice& lattice() const noexcept { return lattice_; }
    std::size_t n_sites() const noexcept { return lattice_.n_sites(); }
    double field() const noexcept { return field_; }
    double anisotropy() const noexcept { return anisotropy_; }
    double coupling() const noexcept { return coupling_; }

    /// True when H commutes with total sz (XXZ and classical Ising).
    bool conserves_magnetization() const noexcept { return kind_ != HamiltonianKind::TransverseFieldIsing; }

    double diagonal(const SpinConfig& config) const;

    /// Off-diagonal terms with a zero matrix element are omitted.
    ConnectedSet connected(const SpinConfig& config) const;
    void connected_into(const SpinConfig& config, ConnectedSet& out) const;

private:
    Hamiltonian(HamiltonianKind kind, Lattice lattice) : kind_(kind), lattice_(std::move(lattice)) {}

    HamiltonianKind kind_;
    Lattice lattice_;
    double field_ = 0.0;
    double anisotropy_ = 0.0;
    double coupling_ = 1.0;
};

/// H_loc(x) = <x|H|psi> / <x|psi>, kept complex.
cplx local_energy(const LookupState& lookup, const Hamiltonian& ham, const RbmParams& params);

}  // namespace nqs
