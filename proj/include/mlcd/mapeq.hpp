#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlcd/assignment.hpp"
#include "mlcd/flow.hpp"
#include "mlcd/graph.hpp"
#include "mlcd/multilayer.hpp"

namespace mlcd {

struct FlowArc {
  VertexId source;
  VertexId target;
  double flow;
};

/// Visit rates and per-arc flow of a random walk; the input of the map
/// equation. Self-arcs are omitted since they never cross a module
/// boundary.
struct FlowNetwork {
  std::vector<double> node_flow;
  std::vector<FlowArc> arcs;
  ElementSet universe = ElementSet::GraphVertices;

  std::size_t size() const noexcept { return node_flow.size(); }
};

/// Undirected convention: p = strength / sum of strengths, each edge carries
/// w / (2W) in both directions, no teleportation. An edgeless graph gets
/// uniform visit rates.
FlowNetwork flow_network(const Graph& g);

/// Directed convention: p from the stationary distribution, arc flow
/// p_u * P(u -> v).
FlowNetwork flow_network(const FlowGraph& f, const StationaryDistribution& p);
FlowNetwork flow_network(const Transition& t, std::span<const double> p);

struct Codelength {
  double bits = 0.0;
  double index_term = 0.0;   ///< q * H(Q)
  double module_terms = 0.0;  ///< sum over modules of p_m * H(P^m)
};

/// Shannon entropy in bits; zero entries contribute nothing.
double entropy_bits(std::span<const double> p);

/// Two-level map equation in bits.
Codelength codelength(const FlowNetwork& net, const CommunityAssignment& assignment);
Codelength codelength(const Graph& g, const CommunityAssignment& assignment);
Codelength codelength(const FlowGraph& f, const StationaryDistribution& p,
                      const CommunityAssignment& assignment);

/// Change in codelength when `vertex` moves to module `target`, evaluated
/// with the optimizer's incremental update.
double move_delta(const FlowNetwork& net, const CommunityAssignment& assignment, VertexId vertex,
                  CommunityId target);

struct DetectOptions {
  int trials = 10;
  std::uint64_t rng_seed = 42;
  int max_passes = 200;  ///< per level, before giving up on convergence
};

struct Detection {
  CommunityAssignment assignment;  ///< ids ranked by community flow, 0 heaviest
  Codelength codelength;
};

/// Greedy multilevel minimisation of the map equation. Each trial starts
/// from singletons and a seeded vertex order, moves vertices to the
/// neighbouring module with the largest decrease, aggregates modules and
/// repeats, then fine-tunes single vertices. The best of all trials (and of
/// the one-module and all-singleton partitions) is returned.
Detection detect(const FlowNetwork& net, const DetectOptions& opts = {});
Detection detect(const Graph& g, const DetectOptions& opts = {});
Detection detect(const FlowGraph& f, const StationaryDistribution& p,
                 const DetectOptions& opts = {});

/// Relabels ids so that 0 is the community with the largest total flow;
/// ties go to the community whose first member comes first.
CommunityAssignment rank_by_flow(const CommunityAssignment& assignment,
                                 std::span<const double> node_flow);

}  // namespace mlcd
