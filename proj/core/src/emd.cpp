#include "saleval/emd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace saleval {
namespace {

constexpr double kMassEps = 1e-12;     // cells below this are pruned
constexpr double kReducedCostTol = 1e-12;

struct BasisArc {
  int supply = 0;
  int demand = 0;
  double flow = 0.0;
  bool active = false;
};

// Transportation simplex over the complete bipartite graph of supplies and
// demands. The basis is a spanning tree rebuilt from the active arc list at
// every iteration (cheap at these sizes); entering arcs are found with block
// pricing and we fall back to Bland's rule during long degenerate streaks so
// the pivot sequence cannot cycle.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   std::vector<double> cost_matrix)
      : s_(std::move(supply)),
        d_(std::move(demand)),
        cost_(std::move(cost_matrix)),
        m_(static_cast<int>(s_.size())),
        n_(static_cast<int>(d_.size())) {}

  // Returns basic flows x_ij (supply index, demand index, mass).
  std::vector<BasisArc> solve() {
    northwest_corner_start();
    const int node_count = m_ + n_;
    parent_.assign(node_count, -1);
    parent_arc_.assign(node_count, -1);
    depth_.assign(node_count, 0);
    potential_.assign(node_count, 0.0);
    order_.reserve(node_count);

    const long long max_iters = 2000LL * (m_ + n_) + 20000;
    int degenerate_streak = 0;
    std::size_t cursor = 0;
    for (long long iter = 0; iter < max_iters; ++iter) {
      if (arcs_.size() > static_cast<std::size_t>(4 * (m_ + n_)))
        std::erase_if(arcs_, [](const BasisArc& arc) { return !arc.active; });
      rebuild_tree();
      const bool bland = degenerate_streak > 2 * (m_ + n_);
      const auto [enter_i, enter_j] = find_entering(cursor, bland);
      if (enter_i < 0) {
        std::vector<BasisArc> result;
        for (const BasisArc& arc : arcs_)
          if (arc.active) result.push_back(arc);
        return result;
      }
      const double theta = pivot(enter_i, enter_j);
      degenerate_streak = theta > kMassEps ? 0 : degenerate_streak + 1;
    }
    raise(ErrorCode::NumericalFailure, "transportation simplex iteration cap exceeded");
  }

 private:
  double cost_at(int i, int j) const { return cost_[static_cast<std::size_t>(i) * n_ + j]; }

  void northwest_corner_start() {
    std::vector<double> rs = s_;
    std::vector<double> rd = d_;
    int i = 0, j = 0;
    while (i < m_ && j < n_) {
      const double x = std::min(rs[i], rd[j]);
      arcs_.push_back({i, j, x, true});
      rs[i] -= x;
      rd[j] -= x;
      // advance one side only, so exactly m+n-1 arcs come out even when a
      // supply and a demand exhaust together
      if (i == m_ - 1 && j == n_ - 1) break;
      if (rs[i] <= rd[j] && i < m_ - 1)
        ++i;
      else if (j < n_ - 1)
        ++j;
      else
        ++i;
    }
  }

  // BFS from node 0 over active arcs; fills parents, depths, potentials.
  void rebuild_tree() {
    const int node_count = m_ + n_;
    adj_.assign(node_count, {});
    for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
      if (!arcs_[a].active) continue;
      adj_[arcs_[a].supply].push_back(a);
      adj_[m_ + arcs_[a].demand].push_back(a);
    }
    std::fill(parent_.begin(), parent_.end(), -1);
    std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
    order_.clear();
    order_.push_back(0);
    parent_[0] = 0;
    depth_[0] = 0;
    potential_[0] = 0.0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const int node = order_[head];
      for (int a : adj_[node]) {
        const int other = (node < m_) ? m_ + arcs_[a].demand : arcs_[a].supply;
        if (parent_[other] >= 0) continue;
        parent_[other] = node;
        parent_arc_[other] = a;
        depth_[other] = depth_[node] + 1;
        // basic arcs satisfy u_i + v_j = c_ij
        const double c = cost_at(arcs_[a].supply, arcs_[a].demand);
        potential_[other] = c - potential_[node];
        order_.push_back(other);
      }
    }
    if (static_cast<int>(order_.size()) != node_count)
      raise(ErrorCode::NumericalFailure, "transportation basis lost connectivity");
  }

  double reduced_cost(int i, int j) const {
    return cost_at(i, j) - potential_[i] - potential_[m_ + j];
  }

  std::pair<int, int> find_entering(std::size_t& cursor, bool bland) {
    const std::size_t total = static_cast<std::size_t>(m_) * n_;
    if (bland) {
      for (std::size_t k = 0; k < total; ++k) {
        const int i = static_cast<int>(k / n_);
        const int j = static_cast<int>(k % n_);
        if (reduced_cost(i, j) < -kReducedCostTol) return {i, j};
      }
      return {-1, -1};
    }
    const std::size_t block = std::max<std::size_t>(64, total / 64);
    std::size_t scanned = 0;
    double best = -kReducedCostTol;
    int best_i = -1, best_j = -1;
    while (scanned < total) {
      const std::size_t stop = std::min(block, total - scanned);
      for (std::size_t b = 0; b < stop; ++b) {
        const std::size_t k = (cursor + scanned + b) % total;
        const int i = static_cast<int>(k / n_);
        const int j = static_cast<int>(k % n_);
        const double r = reduced_cost(i, j);
        if (r < best) {
          best = r;
          best_i = i;
          best_j = j;
        }
      }
      scanned += stop;
      if (best_i >= 0) break;  // best candidate within the scanned blocks
    }
    cursor = (cursor + scanned) % total;
    return {best_i, best_j};
  }

  // Push flow around the unique tree cycle closed by the entering arc and
  // swap the entering arc for the leaving one. Returns theta.
  double pivot(int enter_i, int enter_j) {
    int a = enter_i;
    int b = m_ + enter_j;
    // Arcs on the paths from both endpoints to their meeting point carry
    // -theta, +theta, ... starting with -theta.
    minus_scratch_.clear();
    plus_scratch_.clear();
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    bool plus_sign_a = false;  // next arc on a's path gets minus when false
    bool plus_sign_b = false;
    auto step = [&](int& node, bool& plus_sign) {
      const int arc = parent_arc_[node];
      if (!plus_sign) {
        // smallest arc index among minimal flows, for a deterministic
        // Bland-compatible leaving rule
        if (arcs_[arc].flow < theta || (arcs_[arc].flow == theta && arc < leaving)) {
          theta = arcs_[arc].flow;
          leaving = arc;
        }
        minus_scratch_.push_back(arc);
      } else {
        plus_scratch_.push_back(arc);
      }
      plus_sign = !plus_sign;
      node = parent_[node];
    };
    while (a != b) {
      if (depth_[a] >= depth_[b])
        step(a, plus_sign_a);
      else
        step(b, plus_sign_b);
    }

    for (int arc : minus_scratch_) arcs_[arc].flow -= theta;
    for (int arc : plus_scratch_) arcs_[arc].flow += theta;
    arcs_[leaving].flow = 0.0;
    arcs_[leaving].active = false;
    arcs_.push_back({enter_i, enter_j, theta, true});
    return theta;
  }

  std::vector<double> s_, d_;
  std::vector<double> cost_;
  int m_, n_;
  std::vector<BasisArc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_, parent_arc_, depth_, order_;
  std::vector<double> potential_;
  std::vector<int> minus_scratch_, plus_scratch_;
};

DensityMap downsample_block_sum(const DensityMap& map, int factor) {
  const int out_w = (map.width + factor - 1) / factor;
  const int out_h = (map.height + factor - 1) / factor;
  DensityMap out(out_w, out_h);
  for (int y = 0; y < map.height; ++y)
    for (int x = 0; x < map.width; ++x) out.at(x / factor, y / factor) += map.at(x, y);
  return out;
}

std::vector<MassPoint> collect_cells(const DensityMap& map) {
  std::vector<MassPoint> cells;
  for (std::size_t i = 0; i < map.values.size(); ++i)
    if (map.values[i] > kMassEps) cells.push_back({static_cast<int>(i), map.values[i]});
  return cells;
}

void rebalance(std::vector<MassPoint>& lighter, double deficit) {
  auto it = std::max_element(lighter.begin(), lighter.end(),
                             [](const MassPoint& a, const MassPoint& b) { return a.mass < b.mass; });
  it->mass += deficit;
}

}  // namespace

double TransportProblem::cost(int from_cell, int to_cell) const {
  const double dx = static_cast<double>(from_cell % grid_width) - (to_cell % grid_width);
  const double dy = static_cast<double>(from_cell / grid_width) - (to_cell / grid_width);
  return std::hypot(dx, dy);
}

TransportSolution solve_transport(const TransportProblem& problem) {
  double supply_total = 0.0, demand_total = 0.0;
  for (const MassPoint& p : problem.supplies) {
    if (p.mass < 0.0) raise(ErrorCode::UnbalancedProblem, "negative supply mass");
    supply_total += p.mass;
  }
  for (const MassPoint& p : problem.demands) {
    if (p.mass < 0.0) raise(ErrorCode::UnbalancedProblem, "negative demand mass");
    demand_total += p.mass;
  }
  const double scale = std::max({1.0, supply_total, demand_total});
  if (std::abs(supply_total - demand_total) > 1e-9 * scale)
    raise(ErrorCode::UnbalancedProblem, "total supply " + std::to_string(supply_total) +
                                            " != total demand " + std::to_string(demand_total));
  if (problem.supplies.empty() || problem.demands.empty()) return {};

  const int m = static_cast<int>(problem.supplies.size());
  const int n = static_cast<int>(problem.demands.size());
  std::vector<double> supply(m), demand(n);
  for (int i = 0; i < m; ++i) supply[i] = problem.supplies[i].mass;
  for (int j = 0; j < n; ++j) demand[j] = problem.demands[j].mass;
  // absorb the (tolerated) rounding imbalance so the simplex sees an exactly
  // balanced problem
  demand[n - 1] += supply_total - demand_total;

  std::vector<double> cost(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      cost[static_cast<std::size_t>(i) * n + j] =
          problem.cost(problem.supplies[i].cell, problem.demands[j].cell);

  TransportSimplex simplex(std::move(supply), std::move(demand), std::move(cost));
  TransportSolution solution;
  for (const BasisArc& arc : simplex.solve()) {
    if (arc.flow <= 0.0) continue;
    solution.cost += arc.flow * problem.cost(problem.supplies[arc.supply].cell,
                                             problem.demands[arc.demand].cell);
    solution.flows.push_back({problem.supplies[arc.supply].cell,
                              problem.demands[arc.demand].cell, arc.flow});
  }
  return solution;
}

double emd_metric(const DensityMap& sal, const DensityMap& gt, const EmdConfig& cfg) {
  if (sal.width != gt.width || sal.height != gt.height)
    raise(ErrorCode::ShapeMismatch, "EMD inputs have different dimensions");
  if (cfg.max_side < 2) raise(ErrorCode::InvalidSpec, "max_side must be >= 2");

  DensityMap a = normalize_to_distribution(sal);
  DensityMap b = normalize_to_distribution(gt);

  const int longest = std::max(a.width, a.height);
  if (cfg.downsample && longest > cfg.max_side) {
    const int factor = (longest + cfg.max_side - 1) / cfg.max_side;
    a = normalize_to_distribution(downsample_block_sum(a, factor));
    b = normalize_to_distribution(downsample_block_sum(b, factor));
  }

  // Shared mass never has to move under a metric ground distance, so only
  // the residuals enter the transportation problem.
  DensityMap residual_supply(a.width, a.height);
  DensityMap residual_demand(a.width, a.height);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double diff = a.values[i] - b.values[i];
    if (diff > 0.0)
      residual_supply.values[i] = diff;
    else
      residual_demand.values[i] = -diff;
  }

  TransportProblem problem;
  problem.grid_width = a.width;
  problem.supplies = collect_cells(residual_supply);
  problem.demands = collect_cells(residual_demand);
  if (problem.supplies.empty() || problem.demands.empty()) return 0.0;

  double supply_total = 0.0, demand_total = 0.0;
  for (const MassPoint& p : problem.supplies) supply_total += p.mass;
  for (const MassPoint& p : problem.demands) demand_total += p.mass;
  if (supply_total > demand_total)
    rebalance(problem.demands, supply_total - demand_total);
  else
    rebalance(problem.supplies, demand_total - supply_total);

  return solve_transport(problem).cost;
}

}  // namespace saleval
