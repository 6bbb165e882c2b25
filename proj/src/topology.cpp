#include "icncap/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include "icncap/random.hpp"

namespace icncap {

namespace {

int manhattan(GridPoint a, GridPoint b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// One step from `from` toward `to`, x first.
GridPoint step_toward(GridPoint from, GridPoint to) {
    if (from.x != to.x) return {from.x + (to.x > from.x ? 1 : -1), from.y};
    if (from.y != to.y) return {from.x, from.y + (to.y > from.y ? 1 : -1)};
    return from;
}

}  // namespace

// ---------------------------------------------------------------- grid

GridTopology GridTopology::build(std::uint64_t n) {
    if (n < 4) throw ParameterError("grid needs n >= 4, got " + std::to_string(n));
    if (!is_perfect_square(n)) {
        throw ParameterError("grid needs a perfect-square n, got " + std::to_string(n) +
                             " (nearest valid: " + std::to_string(nearest_perfect_square(n)) + ")");
    }
    return GridTopology(static_cast<int>(integer_sqrt(n)));
}

void GridTopology::check(NodeId v) const {
    if (!contains(v)) throw ParameterError("node " + std::to_string(v) + " is outside the grid");
}

int GridTopology::hop_distance(NodeId a, NodeId b) const {
    check(a);
    check(b);
    return manhattan(point(a), point(b));
}

int GridTopology::server_distance(NodeId v) const {
    check(v);
    return manhattan(point(v), server_point());
}

int GridTopology::eccentricity(NodeId v) const {
    check(v);
    const GridPoint p = point(v);
    return std::max(p.x, side_ - 1 - p.x) + std::max(p.y, side_ - 1 - p.y);
}

int GridTopology::boundary_distance(NodeId v) const {
    check(v);
    const GridPoint p = point(v);
    return std::min({p.x, p.y, side_ - 1 - p.x, side_ - 1 - p.y});
}

NodeId GridTopology::next_hop(NodeId v) const {
    check(v);
    return node(step_toward(point(v), server_point()));
}

std::vector<NodeId> GridTopology::path_to_server(NodeId v) const {
    check(v);
    std::vector<NodeId> path;
    path.reserve(static_cast<std::size_t>(server_distance(v)));
    const NodeId target = server();
    while (v != target) {
        v = next_hop(v);
        path.push_back(v);
    }
    return path;
}

std::vector<NodeId> GridTopology::neighbors(NodeId v) const {
    check(v);
    const GridPoint p = point(v);
    std::vector<NodeId> out;
    for (GridPoint q : {GridPoint{p.x - 1, p.y}, GridPoint{p.x + 1, p.y}, GridPoint{p.x, p.y - 1},
                        GridPoint{p.x, p.y + 1}}) {
        if (contains(q)) out.push_back(node(q));
    }
    return out;
}

double GridTopology::mean_server_distance() const { return grid_mean_server_distance(side_); }

double grid_mean_server_distance(int side) {
    if (side < 1) throw ParameterError("side must be positive");
    // Manhattan distance separates: mean = 2 * mean |i - side/2|.
    const int c = side / 2;
    long double sum = 0;
    for (int i = 0; i < side; ++i) sum += std::abs(i - c);
    return static_cast<double>(2 * sum / side);
}

// ---------------------------------------------------------------- random cells

RandomCellTopology RandomCellTopology::build(std::uint64_t n, CellMode mode, std::uint64_t seed,
                                             double cell_scale) {
    if (n < 16) throw ParameterError("random topology needs n >= 16, got " + std::to_string(n));
    if (!(cell_scale > 0.0)) throw ParameterError("cell_scale must be positive");
    const double log_n = std::log(static_cast<double>(n));
    const double range = cell_scale * std::sqrt(log_n / static_cast<double>(n));
    const int g = std::max(1, static_cast<int>(std::floor(1.0 / range)));

    if (mode == CellMode::Idealized) {
        RandomCellTopology topo = idealized(g, static_cast<int>(std::ceil(log_n)), seed);
        topo.nominal_n_ = n;
        topo.range_ = range;
        return topo;
    }

    RandomCellTopology topo;
    topo.nominal_n_ = n;
    topo.mode_ = CellMode::Empirical;
    topo.grid_side_ = g;
    topo.range_ = range;
    Rng rng = make_stream(seed, 0x7090);
    topo.positions_.resize(n);
    topo.cell_of_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        const Position p{uniform01(rng), uniform01(rng)};
        const int cx = std::min(g - 1, static_cast<int>(p.x * g));
        const int cy = std::min(g - 1, static_cast<int>(p.y * g));
        topo.positions_[v] = p;
        topo.cell_of_[v] = topo.cell_at({cx, cy});
    }
    topo.index_cells();
    return topo;
}

RandomCellTopology RandomCellTopology::idealized(int cell_grid_side, int nodes_per_cell,
                                                 std::uint64_t seed) {
    if (cell_grid_side < 1 || nodes_per_cell < 1) {
        throw ParameterError("idealized layout needs a positive cell grid and population");
    }
    RandomCellTopology topo;
    topo.mode_ = CellMode::Idealized;
    topo.grid_side_ = cell_grid_side;
    topo.range_ = 1.0 / cell_grid_side;
    const std::size_t cells = topo.cell_count();
    const std::size_t total = cells * static_cast<std::size_t>(nodes_per_cell);
    topo.nominal_n_ = total;
    topo.positions_.resize(total);
    topo.cell_of_.resize(total);
    Rng rng = make_stream(seed, 0x1dea);
    const double side = topo.cell_side();
    NodeId v = 0;
    for (CellId c = 0; c < cells; ++c) {
        const GridPoint cp = topo.cell_point(c);
        for (int k = 0; k < nodes_per_cell; ++k, ++v) {
            topo.positions_[v] = {(cp.x + uniform01(rng)) * side, (cp.y + uniform01(rng)) * side};
            topo.cell_of_[v] = c;
        }
    }
    topo.index_cells();
    return topo;
}

void RandomCellTopology::index_cells() {
    const std::size_t cells = cell_count();
    cell_offsets_.assign(cells + 1, 0);
    for (CellId c : cell_of_) ++cell_offsets_[c + 1];
    for (std::size_t c = 0; c < cells; ++c) cell_offsets_[c + 1] += cell_offsets_[c];
    cell_members_.resize(cell_of_.size());
    std::vector<std::uint32_t> fill(cell_offsets_.begin(), cell_offsets_.end() - 1);
    for (NodeId v = 0; v < cell_of_.size(); ++v) cell_members_[fill[cell_of_[v]]++] = v;
}

void RandomCellTopology::check(NodeId v) const {
    if (!contains(v)) throw ParameterError("node " + std::to_string(v) + " is outside the topology");
}

std::span<const NodeId> RandomCellTopology::members(CellId c) const {
    return {cell_members_.data() + cell_offsets_[c], cell_offsets_[c + 1] - cell_offsets_[c]};
}

int RandomCellTopology::cell_distance(CellId a, CellId b) const {
    return manhattan(cell_point(a), cell_point(b));
}

int RandomCellTopology::hop_distance(NodeId a, NodeId b) const {
    check(a);
    check(b);
    return cell_distance(cell_of(a), cell_of(b));
}

int RandomCellTopology::server_distance(NodeId v) const {
    check(v);
    return cell_distance(cell_of(v), server_cell());
}

CellId RandomCellTopology::next_cell(CellId c) const {
    return cell_at(step_toward(cell_point(c), cell_point(server_cell())));
}

std::vector<CellId> RandomCellTopology::cell_path_to_server(CellId c) const {
    std::vector<CellId> path;
    const CellId target = server_cell();
    while (c != target) {
        c = next_cell(c);
        path.push_back(c);
    }
    return path;
}

double RandomCellTopology::mean_server_distance() const {
    if (node_count() == 0) return 0.0;
    long double sum = 0;
    const CellId target = server_cell();
    for (CellId c : cell_of_) sum += cell_distance(c, target);
    return static_cast<double>(sum / node_count());
}

int RandomCellTopology::max_server_distance() const {
    int best = 0;
    const CellId target = server_cell();
    for (CellId c = 0; c < cell_count(); ++c) {
        if (!members(c).empty()) best = std::max(best, cell_distance(c, target));
    }
    return best;
}

// ---------------------------------------------------------------- variant helpers

Topology build_topology(const ScenarioConfig& config) {
    if (is_grid(config.scenario)) return GridTopology::build(config.n);
    return RandomCellTopology::build(config.n, config.cell_mode, config.seed, config.cell_scale);
}

std::size_t node_count(const Topology& topo) {
    return std::visit([](const auto& t) { return t.node_count(); }, topo);
}

int hop_distance(const Topology& topo, NodeId a, NodeId b) {
    return std::visit([&](const auto& t) { return t.hop_distance(a, b); }, topo);
}

ServerPath path_to_server(const Topology& topo, NodeId v) {
    if (const auto* grid = std::get_if<GridTopology>(&topo)) {
        return {PathUnit::Node, grid->path_to_server(v)};
    }
    const auto& cells = std::get<RandomCellTopology>(topo);
    if (!cells.contains(v)) throw ParameterError("node " + std::to_string(v) + " is outside the topology");
    return {PathUnit::Cell, cells.cell_path_to_server(cells.cell_of(v))};
}

double mean_server_distance(const Topology& topo) {
    return std::visit([](const auto& t) { return t.mean_server_distance(); }, topo);
}

int max_server_distance(const Topology& topo) {
    return std::visit([](const auto& t) { return t.max_server_distance(); }, topo);
}

void dump_topology(const Topology& topo, std::ostream& out) {
    if (const auto* grid = std::get_if<GridTopology>(&topo)) {
        const GridPoint s = grid->server_point();
        out << "# grid side=" << grid->side() << " nodes=" << grid->node_count() << " server=("
            << s.x << "," << s.y << ")\n";
        out << "# id x y cell\n";
        for (NodeId v = 0; v < grid->node_count(); ++v) {
            const GridPoint p = grid->point(v);
            out << v << ' ' << p.x << ' ' << p.y << ' ' << v << '\n';
        }
        return;
    }
    const auto& cells = std::get<RandomCellTopology>(topo);
    const GridPoint s = cells.cell_point(cells.server_cell());
    out << "# random mode=" << to_string(cells.mode()) << " n=" << cells.nominal_n()
        << " nodes=" << cells.node_count() << " cell_grid=" << cells.cell_grid_side()
        << " range=" << cells.transmission_range() << " server_cell=(" << s.x << "," << s.y << ")\n";
    out << "# id x y cell\n";
    for (NodeId v = 0; v < cells.node_count(); ++v) {
        const Position p = cells.position(v);
        out << v << ' ' << p.x << ' ' << p.y << ' ' << cells.cell_of(v) << '\n';
    }
}

}  // namespace icncap
