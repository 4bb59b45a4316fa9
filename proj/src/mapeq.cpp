#include "mlcd/mapeq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlcd/error.hpp"
#include "mlcd/random.hpp"

namespace mlcd {

namespace {

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

constexpr double kMinImprovement = 1e-12;

struct Link {
  std::uint32_t node;
  double flow;
};

// One level of the multilevel scheme: nodes are leaves or merged modules,
// arcs between distinct nodes only.
struct Level {
  std::vector<double> flow;
  std::vector<double> out_flow;  // total flow on outgoing arcs
  std::vector<std::uint32_t> out_offsets, in_offsets;
  std::vector<Link> out, in;

  std::size_t size() const { return flow.size(); }
  std::span<const Link> outs(std::uint32_t u) const {
    return std::span<const Link>(out).subspan(out_offsets[u], out_offsets[u + 1] - out_offsets[u]);
  }
  std::span<const Link> ins(std::uint32_t u) const {
    return std::span<const Link>(in).subspan(in_offsets[u], in_offsets[u + 1] - in_offsets[u]);
  }
};

Level make_level(std::vector<double> flow, std::vector<FlowArc> arcs) {
  Level level;
  const std::size_t n = flow.size();
  level.flow = std::move(flow);
  std::sort(arcs.begin(), arcs.end(), [](const FlowArc& a, const FlowArc& b) {
    return std::pair(a.source, a.target) < std::pair(b.source, b.target);
  });
  // Merge parallel arcs.
  std::vector<FlowArc> merged;
  for (const FlowArc& a : arcs) {
    if (a.source == a.target) continue;
    if (!merged.empty() && merged.back().source == a.source && merged.back().target == a.target) {
      merged.back().flow += a.flow;
    } else {
      merged.push_back(a);
    }
  }
  level.out_flow.assign(n, 0.0);
  level.out_offsets.assign(n + 1, 0);
  level.in_offsets.assign(n + 1, 0);
  for (const FlowArc& a : merged) {
    ++level.out_offsets[a.source + 1];
    ++level.in_offsets[a.target + 1];
    level.out_flow[a.source] += a.flow;
  }
  std::partial_sum(level.out_offsets.begin(), level.out_offsets.end(), level.out_offsets.begin());
  std::partial_sum(level.in_offsets.begin(), level.in_offsets.end(), level.in_offsets.begin());
  level.out.resize(merged.size());
  level.in.resize(merged.size());
  std::vector<std::uint32_t> oc(level.out_offsets.begin(), level.out_offsets.end() - 1);
  std::vector<std::uint32_t> ic(level.in_offsets.begin(), level.in_offsets.end() - 1);
  for (const FlowArc& a : merged) {
    level.out[oc[a.source]++] = {a.target, a.flow};
    level.in[ic[a.target]++] = {a.source, a.flow};
  }
  return level;
}

// Module bookkeeping over one level. Holds the partition-dependent part of
// the codelength:
//   plogp(sum_m exit_m) - 2 sum_m plogp(exit_m) + sum_m plogp(exit_m + flow_m)
// The remaining term, -sum_leaf plogp(p_leaf), does not depend on the
// partition.
class ModuleState {
 public:
  ModuleState(const Level& level, std::vector<CommunityId> module_of, std::size_t num_modules)
      : level_(&level), module_of_(std::move(module_of)) {
    exit_.assign(num_modules, 0.0);
    flow_.assign(num_modules, 0.0);
    recompute();
  }

  CommunityId module_of(std::uint32_t u) const { return module_of_[u]; }
  const std::vector<CommunityId>& modules() const { return module_of_; }
  std::size_t num_slots() const { return exit_.size(); }

  void recompute() {
    std::fill(exit_.begin(), exit_.end(), 0.0);
    std::fill(flow_.begin(), flow_.end(), 0.0);
    for (std::uint32_t u = 0; u < level_->size(); ++u) {
      const CommunityId m = module_of_[u];
      flow_[m] += level_->flow[u];
      for (const Link& l : level_->outs(u)) {
        if (module_of_[l.node] != m) exit_[m] += l.flow;
      }
    }
    sum_exit_ = 0.0;
    sum_plogp_exit_ = 0.0;
    sum_plogp_total_ = 0.0;
    for (std::size_t m = 0; m < exit_.size(); ++m) {
      sum_exit_ += exit_[m];
      sum_plogp_exit_ += plogp(exit_[m]);
      sum_plogp_total_ += plogp(exit_[m] + flow_[m]);
    }
  }

  /// Partition-dependent codelength part (see class comment).
  double objective() const {
    return plogp(sum_exit_) - 2.0 * sum_plogp_exit_ + sum_plogp_total_;
  }

  struct Move {
    double exit_from, exit_to;
  };

  // Flow between u and the members of its current module (`out_cur`,
  // `in_cur`) and of the target module (`out_to`, `in_to`).
  Move updated_exits(std::uint32_t u, CommunityId to, double out_cur, double in_cur, double out_to,
                     double in_to) const {
    const CommunityId from = module_of_[u];
    const double out_u = level_->out_flow[u];
    return {exit_[from] - out_u + out_cur + in_cur, exit_[to] + out_u - out_to - in_to};
  }

  double delta(std::uint32_t u, CommunityId to, double out_cur, double in_cur, double out_to,
               double in_to) const {
    const CommunityId from = module_of_[u];
    if (from == to) return 0.0;
    const Move mv = updated_exits(u, to, out_cur, in_cur, out_to, in_to);
    const double p = level_->flow[u];
    const double new_sum_exit = sum_exit_ - exit_[from] - exit_[to] + mv.exit_from + mv.exit_to;
    double d = plogp(new_sum_exit) - plogp(sum_exit_);
    d -= 2.0 * (plogp(mv.exit_from) - plogp(exit_[from]) + plogp(mv.exit_to) - plogp(exit_[to]));
    d += plogp(mv.exit_from + flow_[from] - p) - plogp(exit_[from] + flow_[from]);
    d += plogp(mv.exit_to + flow_[to] + p) - plogp(exit_[to] + flow_[to]);
    return d;
  }

  void move(std::uint32_t u, CommunityId to, double out_cur, double in_cur, double out_to,
            double in_to) {
    const CommunityId from = module_of_[u];
    const Move mv = updated_exits(u, to, out_cur, in_cur, out_to, in_to);
    const double p = level_->flow[u];
    sum_exit_ += mv.exit_from + mv.exit_to - exit_[from] - exit_[to];
    sum_plogp_exit_ += plogp(mv.exit_from) + plogp(mv.exit_to) - plogp(exit_[from]) - plogp(exit_[to]);
    sum_plogp_total_ += plogp(mv.exit_from + flow_[from] - p) + plogp(mv.exit_to + flow_[to] + p) -
                        plogp(exit_[from] + flow_[from]) - plogp(exit_[to] + flow_[to]);
    exit_[from] = mv.exit_from;
    exit_[to] = mv.exit_to;
    flow_[from] -= p;
    flow_[to] += p;
    module_of_[u] = to;
  }

 private:
  const Level* level_;
  std::vector<CommunityId> module_of_;
  std::vector<double> exit_, flow_;
  double sum_exit_ = 0.0, sum_plogp_exit_ = 0.0, sum_plogp_total_ = 0.0;
};

// Per-node scratch for flows from/to neighbouring modules.
class NeighborFlows {
 public:
  explicit NeighborFlows(std::size_t slots) : out_(slots, 0.0), in_(slots, 0.0), seen_(slots, 0) {}

  void collect(const Level& level, const ModuleState& state, std::uint32_t u) {
    clear();
    for (const Link& l : level.outs(u)) touch(state.module_of(l.node), l.flow, 0.0);
    for (const Link& l : level.ins(u)) touch(state.module_of(l.node), 0.0, l.flow);
    std::sort(touched_.begin(), touched_.end());
  }

  std::span<const CommunityId> modules() const { return touched_; }
  double out_to(CommunityId m) const { return out_[m]; }
  double in_from(CommunityId m) const { return in_[m]; }

 private:
  void touch(CommunityId m, double out, double in) {
    if (!seen_[m]) {
      seen_[m] = 1;
      touched_.push_back(m);
    }
    out_[m] += out;
    in_[m] += in;
  }

  void clear() {
    for (CommunityId m : touched_) {
      out_[m] = in_[m] = 0.0;
      seen_[m] = 0;
    }
    touched_.clear();
  }

  std::vector<double> out_, in_;
  std::vector<std::uint8_t> seen_;
  std::vector<CommunityId> touched_;
};

// Repeated passes of single-node moves in a shuffled order until a pass
// makes no move. Returns true if any node moved.
bool local_moving(const Level& level, ModuleState& state, Rng& rng, int max_passes) {
  std::vector<std::uint32_t> order(level.size());
  std::iota(order.begin(), order.end(), 0u);
  NeighborFlows scratch(state.num_slots());
  bool any = false;
  for (int pass = 0; pass < max_passes; ++pass) {
    rng.shuffle(std::span<std::uint32_t>(order));
    bool moved = false;
    for (std::uint32_t u : order) {
      scratch.collect(level, state, u);
      const CommunityId cur = state.module_of(u);
      const double out_cur = scratch.out_to(cur);
      const double in_cur = scratch.in_from(cur);
      double best = -kMinImprovement;
      CommunityId best_module = cur;
      for (CommunityId m : scratch.modules()) {
        if (m == cur) continue;
        const double d = state.delta(u, m, out_cur, in_cur, scratch.out_to(m), scratch.in_from(m));
        if (d < best) {
          best = d;
          best_module = m;
        }
      }
      if (best_module != cur) {
        state.move(u, best_module, out_cur, in_cur, scratch.out_to(best_module),
                   scratch.in_from(best_module));
        moved = true;
      }
    }
    state.recompute();
    if (!moved) break;
    any = true;
  }
  return any;
}

// Renumbers the non-empty modules of `state` to 0..K-1 in node order.
std::vector<CommunityId> compact(const std::vector<CommunityId>& modules, std::size_t& count) {
  std::vector<CommunityId> relabel(modules.size(), std::numeric_limits<CommunityId>::max());
  std::vector<CommunityId> out(modules.size());
  count = 0;
  for (std::size_t u = 0; u < modules.size(); ++u) {
    CommunityId& r = relabel[modules[u]];
    if (r == std::numeric_limits<CommunityId>::max()) r = static_cast<CommunityId>(count++);
    out[u] = r;
  }
  return out;
}

Level coarsen(const Level& level, const std::vector<CommunityId>& module_of, std::size_t count) {
  std::vector<double> flow(count, 0.0);
  std::vector<FlowArc> arcs;
  for (std::uint32_t u = 0; u < level.size(); ++u) {
    flow[module_of[u]] += level.flow[u];
    for (const Link& l : level.outs(u)) {
      if (module_of[u] != module_of[l.node]) arcs.push_back({module_of[u], module_of[l.node], l.flow});
    }
  }
  return make_level(std::move(flow), std::move(arcs));
}

std::vector<CommunityId> identity_modules(std::size_t n) {
  std::vector<CommunityId> m(n);
  std::iota(m.begin(), m.end(), CommunityId{0});
  return m;
}

CommunityAssignment run_trial(const Level& leaves, Rng& rng, int max_passes) {
  const std::size_t n = leaves.size();
  std::vector<CommunityId> leaf_to_node = identity_modules(n);
  Level coarse;
  const Level* level = &leaves;
  while (level->size() > 1) {
    ModuleState state(*level, identity_modules(level->size()), level->size());
    if (!local_moving(*level, state, rng, max_passes)) break;
    std::size_t count = 0;
    const auto module_of = compact(state.modules(), count);
    for (auto& node : leaf_to_node) node = module_of[node];
    if (count == level->size()) break;
    coarse = coarsen(*level, module_of, count);
    level = &coarse;
  }

  std::size_t count = 0;
  auto modules = compact(leaf_to_node, count);
  ModuleState fine(leaves, std::move(modules), n);
  local_moving(leaves, fine, rng, max_passes);
  return CommunityAssignment{fine.modules(), ElementSet::GraphVertices}.canonicalized();
}

Level level_of(const FlowNetwork& net) { return make_level(net.node_flow, net.arcs); }

}  // namespace

FlowNetwork flow_network(const Graph& g) {
  FlowNetwork net;
  const std::size_t n = g.size();
  const double total = 2.0 * g.total_weight();
  if (!(total > 0.0)) {
    net.node_flow.assign(n, n ? 1.0 / double(n) : 0.0);
    return net;
  }
  net.node_flow.resize(n);
  for (VertexId v = 0; v < n; ++v) net.node_flow[v] = g.strength(v) / total;
  net.arcs.reserve(2 * g.num_edges());
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    net.arcs.push_back({e.u, e.v, e.w / total});
    net.arcs.push_back({e.v, e.u, e.w / total});
  }
  return net;
}

FlowNetwork flow_network(const Transition& t, std::span<const double> p) {
  if (p.size() != t.size()) throw DimensionError("distribution does not match the flow graph");
  FlowNetwork net;
  net.universe = ElementSet::FlowStates;
  net.node_flow.assign(p.begin(), p.end());
  net.arcs.reserve(t.num_arcs());
  for (std::uint32_t u = 0; u < t.size(); ++u) {
    for (std::uint32_t k = t.offsets[u]; k < t.offsets[u + 1]; ++k) {
      if (t.targets[k] == u) continue;
      net.arcs.push_back({u, t.targets[k], p[u] * t.probs[k]});
    }
  }
  return net;
}

FlowNetwork flow_network(const FlowGraph& f, const StationaryDistribution& p) {
  return flow_network(f.transition, p.p);
}

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= plogp(x);
  return h;
}

Codelength codelength(const FlowNetwork& net, const CommunityAssignment& assignment) {
  if (assignment.size() != net.size()) {
    throw CoverageError("assignment covers " + std::to_string(assignment.size()) + " of " +
                        std::to_string(net.size()) + " vertices");
  }
  CommunityId max_id = 0;
  for (CommunityId c : assignment.comm) max_id = std::max(max_id, c);
  const std::size_t k = net.size() ? std::size_t(max_id) + 1 : 0;
  std::vector<double> exit(k, 0.0), flow(k, 0.0);
  for (std::size_t v = 0; v < net.size(); ++v) flow[assignment.comm[v]] += net.node_flow[v];
  for (const FlowArc& a : net.arcs) {
    if (assignment.comm[a.source] != assignment.comm[a.target]) exit[assignment.comm[a.source]] += a.flow;
  }
  double q = 0.0, sum_plogp_exit = 0.0, sum_plogp_total = 0.0;
  for (std::size_t m = 0; m < k; ++m) {
    q += exit[m];
    sum_plogp_exit += plogp(exit[m]);
    sum_plogp_total += plogp(exit[m] + flow[m]);
  }
  Codelength L;
  L.index_term = plogp(q) - sum_plogp_exit;
  L.module_terms = sum_plogp_total - sum_plogp_exit + entropy_bits(net.node_flow);
  L.bits = L.index_term + L.module_terms;
  return L;
}

Codelength codelength(const Graph& g, const CommunityAssignment& assignment) {
  return codelength(flow_network(g), assignment);
}

Codelength codelength(const FlowGraph& f, const StationaryDistribution& p,
                      const CommunityAssignment& assignment) {
  return codelength(flow_network(f, p), assignment);
}

double move_delta(const FlowNetwork& net, const CommunityAssignment& assignment, VertexId vertex,
                  CommunityId target) {
  if (assignment.size() != net.size()) throw CoverageError("assignment does not cover the network");
  if (vertex >= net.size()) throw IndexError("vertex out of range");
  const Level level = level_of(net);
  CommunityId max_id = target;
  for (CommunityId c : assignment.comm) max_id = std::max(max_id, c);
  ModuleState state(level, assignment.comm, std::size_t(max_id) + 1);
  double out_cur = 0.0, in_cur = 0.0, out_to = 0.0, in_to = 0.0;
  const CommunityId cur = assignment.comm[vertex];
  for (const Link& l : level.outs(vertex)) {
    if (assignment.comm[l.node] == cur) out_cur += l.flow;
    if (assignment.comm[l.node] == target) out_to += l.flow;
  }
  for (const Link& l : level.ins(vertex)) {
    if (assignment.comm[l.node] == cur) in_cur += l.flow;
    if (assignment.comm[l.node] == target) in_to += l.flow;
  }
  return state.delta(vertex, target, out_cur, in_cur, out_to, in_to);
}

CommunityAssignment rank_by_flow(const CommunityAssignment& assignment,
                                 std::span<const double> node_flow) {
  const CommunityAssignment first = assignment.canonicalized();
  const std::size_t k = first.num_communities();
  std::vector<double> mass(k, 0.0);
  for (std::size_t v = 0; v < first.size(); ++v) mass[first.comm[v]] += node_flow[v];
  std::vector<CommunityId> order = identity_modules(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](CommunityId a, CommunityId b) { return mass[a] > mass[b]; });
  std::vector<CommunityId> rank(k);
  for (std::size_t i = 0; i < k; ++i) rank[order[i]] = static_cast<CommunityId>(i);
  CommunityAssignment out = first;
  for (auto& c : out.comm) c = rank[c];
  return out;
}

Detection detect(const FlowNetwork& net, const DetectOptions& opts) {
  if (opts.trials < 1) throw ParameterError("trials must be at least 1");
  const std::size_t n = net.size();
  if (n == 0) return {CommunityAssignment{{}, net.universe}, Codelength{}};

  const Level leaves = level_of(net);

  auto consider = [&](Detection& best, bool& have, CommunityAssignment candidate) {
    candidate.universe = net.universe;
    candidate = rank_by_flow(candidate, net.node_flow);
    const Codelength L = codelength(net, candidate);
    if (!have || L.bits < best.codelength.bits - 1e-12 ||
        (std::abs(L.bits - best.codelength.bits) <= 1e-12 && candidate.comm < best.assignment.comm)) {
      best = {std::move(candidate), L};
      have = true;
    }
  };

  Detection best;
  bool have = false;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng(derive_seed(opts.rng_seed, static_cast<std::uint64_t>(trial)));
    consider(best, have, run_trial(leaves, rng, opts.max_passes));
  }
  consider(best, have, CommunityAssignment{std::vector<CommunityId>(n, 0), net.universe});
  consider(best, have, CommunityAssignment{identity_modules(n), net.universe});
  return best;
}

Detection detect(const Graph& g, const DetectOptions& opts) { return detect(flow_network(g), opts); }

Detection detect(const FlowGraph& f, const StationaryDistribution& p, const DetectOptions& opts) {
  return detect(flow_network(f, p), opts);
}

}  // namespace mlcd
