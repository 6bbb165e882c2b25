#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "icncap/topology.hpp"

namespace icncap {

/// Per-node possession flags for the single content. The server's copy is
/// implicit and never stored here.
class CacheField {
  public:
    CacheField() = default;
    explicit CacheField(std::size_t nodes, bool value = false) : flags_(nodes, value ? 1 : 0) {}

    std::size_t size() const { return flags_.size(); }
    bool has(NodeId v) const { return flags_[v] != 0; }
    void set(NodeId v, bool value) { flags_[v] = value ? 1 : 0; }
    std::size_t count() const { return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), 1)); }

  private:
    std::vector<std::uint8_t> flags_;
};

template <class F>
concept FlagSource = requires(F& field, NodeId v) {
    { field.has(v) } -> std::convertible_to<bool>;
};

enum class SourceKind { Cache, Server };

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct DiscoveryOutcome {
    SourceKind source = SourceKind::Server;
    NodeId node = kNoNode;   // serving node when source == Cache
    int hops = 0;
    std::uint32_t probed = 0;  // nodes that saw the query; not part of capacity math
};

/// Walks the requester's shortest path to the server and stops at the first
/// node holding the content. The requester's own flag is never consulted.
template <FlagSource F>
DiscoveryOutcome pathwise_discover(const GridTopology& grid, F& field, NodeId requester) {
    DiscoveryOutcome out;
    const NodeId server = grid.server();
    NodeId v = requester;
    int hops = 0;
    while (v != server) {
        v = grid.next_hop(v);
        ++hops;
        ++out.probed;
        if (field.has(v)) {
            out.source = SourceKind::Cache;
            out.node = v;
            out.hops = hops;
            return out;
        }
    }
    out.hops = hops;
    return out;
}

/// Expanding ring search: the answer is the lexicographically smallest
/// (x, y) holder on the smallest Manhattan ring that contains any holder.
/// Rings are clipped at the lattice edge. Without any holder the server answers.
template <FlagSource F>
DiscoveryOutcome flood_discover(const GridTopology& grid, F& field, NodeId requester) {
    DiscoveryOutcome out;
    const GridPoint origin = grid.point(requester);
    const int reach = grid.eccentricity(requester);
    for (int radius = 1; radius <= reach; ++radius) {
        NodeId found = kNoNode;
        for (int dx = -radius; dx <= radius; ++dx) {
            const int x = origin.x + dx;
            if (x < 0 || x >= grid.side()) continue;
            const int rest = radius - (dx < 0 ? -dx : dx);
            for (int dy : {-rest, rest}) {
                const GridPoint p{x, origin.y + dy};
                if (grid.contains(p)) {
                    ++out.probed;
                    const NodeId u = grid.node(p);
                    if (found == kNoNode && field.has(u)) found = u;
                }
                if (rest == 0) break;
            }
        }
        if (found != kNoNode) {
            out.source = SourceKind::Cache;
            out.node = found;
            out.hops = radius;
            return out;
        }
    }
    out.hops = grid.server_distance(requester);
    return out;
}

/// Cell-by-cell search toward the server cell. Hop 1 covers the requester's
/// own cell and the next cell on the path (own cell first); hop h > 1 covers
/// the h-th cell of the path. The source is uniform among the holders of the
/// first cell that has any. If no cell on the path has one the server
/// answers; a request from inside the server cell still costs one hop.
template <FlagSource F, class URBG>
DiscoveryOutcome cell_pathwise_discover(const RandomCellTopology& topo, F& field, NodeId requester,
                                        URBG& rng) {
    DiscoveryOutcome out;
    std::vector<NodeId> holders;
    auto scan = [&](CellId cell) {
        holders.clear();
        for (NodeId u : topo.members(cell)) {
            if (u == requester) continue;
            ++out.probed;
            if (field.has(u)) holders.push_back(u);
        }
        if (holders.empty()) return false;
        std::uniform_int_distribution<std::size_t> pick(0, holders.size() - 1);
        out.source = SourceKind::Cache;
        out.node = holders[pick(rng)];
        return true;
    };

    const CellId home = topo.cell_of(requester);
    const CellId target = topo.server_cell();
    out.hops = 1;
    if (scan(home)) return out;
    CellId cell = home;
    int hops = 0;
    while (cell != target) {
        cell = topo.next_cell(cell);
        ++hops;
        out.hops = hops;
        if (scan(cell)) return out;
    }
    out.source = SourceKind::Server;
    out.node = kNoNode;
    out.hops = std::max(hops, 1);
    return out;
}

}  // namespace icncap
