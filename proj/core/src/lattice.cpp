#include "nqs/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace nqs {

std::string_view to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::ChainPeriodic: return "chain-periodic";
        case LatticeKind::ChainOpen: return "chain-open";
        case LatticeKind::SquarePeriodic: return "square-periodic";
        case LatticeKind::SquareOpen: return "square-open";
        case LatticeKind::Custom: return "custom";
    }
    return "unknown";
}

Lattice::Lattice(std::size_t n_sites, std::vector<Edge> edges, LatticeKind kind)
    : n_sites_(n_sites), edges_(std::move(edges)), kind_(kind), adjacency_(n_sites) {
    if (n_sites_ == 0) {
        throw std::invalid_argument("lattice needs at least one site");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto& e : edges_) {
        if (e.first >= n_sites_ || e.second >= n_sites_) {
            throw std::invalid_argument("edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) +
                                        ") references a site outside [0, " + std::to_string(n_sites_) + ")");
        }
        if (e.first == e.second) {
            throw std::invalid_argument("self-loop on site " + std::to_string(e.first));
        }
        if (e.first > e.second) std::swap(e.first, e.second);
        if (!seen.emplace(e.first, e.second).second) {
            throw std::invalid_argument("duplicate edge (" + std::to_string(e.first) + ", " +
                                        std::to_string(e.second) + ")");
        }
        adjacency_[e.first].push_back(e.second);
        adjacency_[e.second].push_back(e.first);
    }
}

bool Lattice::covers_all_sites() const {
    return std::none_of(adjacency_.begin(), adjacency_.end(), [](const auto& nb) { return nb.empty(); });
}

Lattice build_chain(std::size_t length, bool periodic) {
    if (periodic && length < 3) {
        throw std::invalid_argument("periodic chain needs length >= 3 (length 2 would double the bond)");
    }
    if (length < 2) {
        throw std::invalid_argument("chain needs length >= 2");
    }
    std::vector<Edge> edges;
    edges.reserve(length);
    for (std::size_t i = 0; i + 1 < length; ++i) edges.push_back({i, i + 1});
    if (periodic) edges.push_back({length - 1, 0});
    return Lattice(length, std::move(edges), periodic ? LatticeKind::ChainPeriodic : LatticeKind::ChainOpen);
}

Lattice build_square(std::size_t side, bool periodic) {
    if (side < 2) {
        throw std::invalid_argument("square lattice needs side >= 2");
    }
    if (periodic && side < 3) {
        throw std::invalid_argument("periodic square lattice needs side >= 3");
    }
    std::vector<Edge> edges;
    edges.reserve(2 * side * side);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const std::size_t s = r * side + c;
            if (c + 1 < side) {
                edges.push_back({s, s + 1});
            } else if (periodic) {
                edges.push_back({s, r * side});
            }
            if (r + 1 < side) {
                edges.push_back({s, s + side});
            } else if (periodic) {
                edges.push_back({s, c});
            }
        }
    }
    return Lattice(side * side, std::move(edges), periodic ? LatticeKind::SquarePeriodic : LatticeKind::SquareOpen);
}

}  // namespace nqs
