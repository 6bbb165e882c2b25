#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "icncap/model.hpp"

namespace icncap {

using NodeId = std::uint32_t;
using CellId = std::uint32_t;

struct GridPoint {
    int x = 0;
    int y = 0;
    auto operator<=>(const GridPoint&) const = default;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// Square lattice of side sqrt(n); node id = y * side + x. The server is
/// attached to the node at (side/2, side/2).
class GridTopology {
  public:
    /// Throws ParameterError unless n is a perfect square >= 4.
    static GridTopology build(std::uint64_t n);

    int side() const { return side_; }
    std::size_t node_count() const { return static_cast<std::size_t>(side_) * side_; }
    NodeId server() const { return node({side_ / 2, side_ / 2}); }
    GridPoint server_point() const { return {side_ / 2, side_ / 2}; }

    bool contains(GridPoint p) const { return p.x >= 0 && p.y >= 0 && p.x < side_ && p.y < side_; }
    bool contains(NodeId v) const { return v < node_count(); }
    GridPoint point(NodeId v) const { return {static_cast<int>(v % side_), static_cast<int>(v / side_)}; }
    NodeId node(GridPoint p) const { return static_cast<NodeId>(p.y) * side_ + static_cast<NodeId>(p.x); }

    int hop_distance(NodeId a, NodeId b) const;
    int server_distance(NodeId v) const;
    /// Largest distance from v to any node of the lattice.
    int eccentricity(NodeId v) const;
    /// Hops from v to the nearest lattice edge (0 on the boundary).
    int boundary_distance(NodeId v) const;

    /// Next node on v's shortest path to the server; x is corrected before y.
    NodeId next_hop(NodeId v) const;
    /// Nodes after v on its path, ending at the server node. Empty for the server node.
    std::vector<NodeId> path_to_server(NodeId v) const;
    std::vector<NodeId> neighbors(NodeId v) const;

    double mean_server_distance() const;
    int max_server_distance() const { return 2 * (side_ / 2); }

  private:
    explicit GridTopology(int side) : side_(side) {}
    void check(NodeId v) const;

    int side_;
};

/// Exact mean Manhattan distance from the nodes of a side x side lattice to (side/2, side/2).
double grid_mean_server_distance(int side);

/// Unit square split into a g x g grid of cells, g = floor(1/r(n)),
/// r(n) = scale * sqrt(log n / n). One hop is one cell step; the server sits
/// in cell (g/2, g/2).
class RandomCellTopology {
  public:
    /// Throws ParameterError for n < 16.
    static RandomCellTopology build(std::uint64_t n, CellMode mode, std::uint64_t seed,
                                    double cell_scale = 1.0);
    /// Idealized layout with an explicit cell grid and per-cell population.
    static RandomCellTopology idealized(int cell_grid_side, int nodes_per_cell, std::uint64_t seed);

    std::uint64_t nominal_n() const { return nominal_n_; }
    std::size_t node_count() const { return cell_of_.size(); }
    CellMode mode() const { return mode_; }
    int cell_grid_side() const { return grid_side_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(grid_side_) * grid_side_; }
    double transmission_range() const { return range_; }
    double cell_side() const { return 1.0 / grid_side_; }

    bool contains(NodeId v) const { return v < node_count(); }
    CellId cell_of(NodeId v) const { return cell_of_[v]; }
    GridPoint cell_point(CellId c) const { return {static_cast<int>(c % grid_side_), static_cast<int>(c / grid_side_)}; }
    CellId cell_at(GridPoint p) const { return static_cast<CellId>(p.y) * grid_side_ + static_cast<CellId>(p.x); }
    std::span<const NodeId> members(CellId c) const;
    Position position(NodeId v) const { return positions_[v]; }
    CellId server_cell() const { return cell_at({grid_side_ / 2, grid_side_ / 2}); }

    int cell_distance(CellId a, CellId b) const;
    int hop_distance(NodeId a, NodeId b) const;
    int server_distance(NodeId v) const;
    CellId next_cell(CellId c) const;
    /// Cells after c on its path to the server cell, ending at the server cell.
    std::vector<CellId> cell_path_to_server(CellId c) const;

    /// Node-averaged cell distance to the server cell.
    double mean_server_distance() const;
    int max_server_distance() const;

  private:
    RandomCellTopology() = default;
    void index_cells();
    void check(NodeId v) const;

    std::uint64_t nominal_n_ = 0;
    CellMode mode_ = CellMode::Idealized;
    int grid_side_ = 1;
    double range_ = 0.0;
    std::vector<Position> positions_;
    std::vector<CellId> cell_of_;
    std::vector<std::uint32_t> cell_offsets_;
    std::vector<NodeId> cell_members_;
};

using Topology = std::variant<GridTopology, RandomCellTopology>;

enum class PathUnit { Node, Cell };

struct ServerPath {
    PathUnit unit = PathUnit::Node;
    std::vector<std::uint32_t> steps;  // excludes the starting node / cell
    std::size_t length() const { return steps.size(); }
};

/// Builds the topology a scenario runs on.
Topology build_topology(const ScenarioConfig& config);

std::size_t node_count(const Topology& topo);
int hop_distance(const Topology& topo, NodeId a, NodeId b);
ServerPath path_to_server(const Topology& topo, NodeId v);
double mean_server_distance(const Topology& topo);
int max_server_distance(const Topology& topo);

/// Plain-text listing: a '#' header, then "id x y cell" per node.
void dump_topology(const Topology& topo, std::ostream& out);

}  // namespace icncap
