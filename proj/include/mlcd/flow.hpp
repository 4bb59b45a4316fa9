#pragma once

#include <span>
#include <vector>

#include "mlcd/assignment.hpp"
#include "mlcd/graph.hpp"
#include "mlcd/multilayer.hpp"

namespace mlcd {

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  ///< on the L1 change between iterates
  int max_iter = 1000;
};

struct StationaryDistribution {
  std::vector<double> p;
  double damping = 0.85;
  double tolerance = 1e-10;
  int iterations = 0;

  std::size_t size() const noexcept { return p.size(); }
};

/// Power iteration with uniform teleportation at rate 1 - damping; mass on
/// dangling rows is spread uniformly every step. Starts from `initial` when
/// given (normalised), otherwise from the uniform vector.
StationaryDistribution pagerank(const Transition& t, const PageRankOptions& opts = {},
                                std::span<const double> initial = {});
StationaryDistribution pagerank(const Graph& g, const PageRankOptions& opts = {});
StationaryDistribution pagerank(const FlowGraph& f, const PageRankOptions& opts = {});

/// Community ids sorted by total member mass, heaviest first; equal masses
/// keep the smaller id first.
std::vector<CommunityId> community_pagerank_order(const CommunityAssignment& assignment,
                                                  std::span<const double> p);
inline std::vector<CommunityId> community_pagerank_order(const CommunityAssignment& assignment,
                                                         const StationaryDistribution& p) {
  return community_pagerank_order(assignment, p.p);
}

}  // namespace mlcd
