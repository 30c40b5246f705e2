#include "nqs/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nqs {

std::string_view to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::TransverseFieldIsing: return "tfi";
        case HamiltonianKind::Xxz: return "xxz";
        case HamiltonianKind::ClassicalIsing: return "classical-ising";
    }
    return "unknown";
}

Hamiltonian Hamiltonian::transverse_field_ising(Lattice lattice, double field) {
    if (!std::isfinite(field)) throw std::invalid_argument("transverse field must be finite");
    Hamiltonian h(HamiltonianKind::TransverseFieldIsing, std::move(lattice));
    h.field_ = field;
    return h;
}

Hamiltonian Hamiltonian::xxz(Lattice lattice, double anisotropy) {
    if (!std::isfinite(anisotropy)) throw std::invalid_argument("XXZ anisotropy must be finite");
    Hamiltonian h(HamiltonianKind::Xxz, std::move(lattice));
    h.anisotropy_ = anisotropy;
    return h;
}

Hamiltonian Hamiltonian::classical_ising(Lattice lattice, double coupling) {
    if (!std::isfinite(coupling)) throw std::invalid_argument("Ising coupling must be finite");
    Hamiltonian h(HamiltonianKind::ClassicalIsing, std::move(lattice));
    h.coupling_ = coupling;
    return h;
}

double Hamiltonian::diagonal(const SpinConfig& config) const {
    if (config.size() != n_sites()) {
        throw std::invalid_argument("configuration length " + std::to_string(config.size()) +
                                    " does not match lattice with " + std::to_string(n_sites()) + " sites");
    }
    double zz = 0.0;
    for (const Edge& e : lattice_.edges()) zz += config[e.first] * config[e.second];
    switch (kind_) {
        case HamiltonianKind::TransverseFieldIsing: return -zz;
        case HamiltonianKind::Xxz: return anisotropy_ * zz;
        case HamiltonianKind::ClassicalIsing: return -coupling_ * zz;
    }
    return 0.0;
}

void Hamiltonian::connected_into(const SpinConfig& config, ConnectedSet& out) const {
    out.diagonal = diagonal(config);
    out.off_diagonal.clear();
    switch (kind_) {
        case HamiltonianKind::TransverseFieldIsing:
            if (field_ != 0.0) {
                for (std::size_t i = 0; i < n_sites(); ++i) out.off_diagonal.push_back({{i, 0}, 1, -field_});
            }
            break;
        case HamiltonianKind::Xxz:
            // (sx sx + sy sy) maps |+-> to 2|-+> and annihilates aligned pairs.
            for (const Edge& e : lattice_.edges()) {
                if (config[e.first] != config[e.second]) out.off_diagonal.push_back({{e.first, e.second}, 2, 2.0});
            }
            break;
        case HamiltonianKind::ClassicalIsing:
            break;
    }
}

ConnectedSet Hamiltonian::connected(const SpinConfig& config) const {
    ConnectedSet out;
    connected_into(config, out);
    return out;
}

cplx local_energy(const LookupState& lookup, const Hamiltonian& ham, const RbmParams& params) {
    thread_local ConnectedSet row;
    ham.connected_into(lookup.config(), row);
    cplx e = row.diagonal;
    for (const FlipTerm& term : row.off_diagonal) {
        e += term.element * std::exp(log_psi_ratio(lookup, term.flips(), params));
    }
    return e;
}

}  // namespace nqs
