#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace nqs {

enum class LatticeKind { ChainPeriodic, ChainOpen, SquarePeriodic, SquareOpen, Custom };

std::string_view to_string(LatticeKind kind);

/// Unordered nearest-neighbour bond, stored with first < second.
struct Edge {
    std::size_t first;
    std::size_t second;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable interaction graph. Sites are numbered 0..n_sites-1; 2D lattices
/// use row-major numbering (site = row * side + column).
class Lattice {
public:
    /// Validates indices, rejects self-loops and duplicate bonds, and
    /// canonicalizes every edge to first < second (input order is kept).
    Lattice(std::size_t n_sites, std::vector<Edge> edges, LatticeKind kind = LatticeKind::Custom);

    std::size_t n_sites() const noexcept { return n_sites_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    LatticeKind kind() const noexcept { return kind_; }

    /// Sites sharing an edge with `site`, in edge order.
    const std::vector<std::size_t>& neighbors(std::size_t site) const { return adjacency_.at(site); }

    /// True when every site belongs to at least one edge.
    bool covers_all_sites() const;

private:
    std::size_t n_sites_;
    std::vector<Edge> edges_;
    LatticeKind kind_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

/// Nearest-neighbour chain. Periodic chains need length >= 3 so that the
/// wrap-around bond is distinct from (0, 1).
Lattice build_chain(std::size_t length, bool periodic);

/// side x side square lattice; side >= 2, and side >= 3 when periodic.
Lattice build_square(std::size_t side, bool periodic);

}  // namespace nqs
