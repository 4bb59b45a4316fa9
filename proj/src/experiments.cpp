#include "mlcd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mlcd/error.hpp"
#include "mlcd/random.hpp"

namespace mlcd {

Graph planted_partition(const PlantedPartitionSpec& spec) {
  if (!(spec.p_in >= 0.0 && spec.p_in <= 1.0 && spec.p_out >= 0.0 && spec.p_out <= 1.0)) {
    throw ParameterError("planted partition probabilities must lie in [0, 1]");
  }
  const std::size_t n = spec.blocks * spec.block_size;
  const std::size_t width = std::to_string(n ? n - 1 : 0).size();
  GraphBuilder builder;
  std::vector<std::size_t> handle(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::string digits = std::to_string(v);
    handle[v] = builder.add_vertex("u" + std::string(width - digits.size(), '0') + digits);
  }
  Rng rng(spec.seed);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool same = u / spec.block_size == v / spec.block_size;
      if (rng.uniform01() < (same ? spec.p_in : spec.p_out)) builder.add_edge_by_handle(handle[u], handle[v], 1.0);
    }
  }
  return std::move(builder).build();
}

std::size_t shared_count(double fraction, std::size_t layer_size) {
  // The epsilon absorbs representation error such as 0.9 * 500 = 450.00000000000006.
  return static_cast<std::size_t>(std::ceil(fraction * double(layer_size) - 1e-9));
}

OverlapSample sample_overlap(const Graph& base, const OverlapSpec& spec) {
  if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
    throw ParameterError("overlap fraction must lie in (0, 1]");
  }
  const std::size_t m = spec.layer_size;
  const std::size_t shared = shared_count(spec.fraction, m);
  const std::size_t own = m - shared;
  if (m > base.size() || shared + 2 * own > base.size()) {
    throw CapacityError("base graph has " + std::to_string(base.size()) +
                        " vertices; need " + std::to_string(shared + 2 * own));
  }

  std::vector<VertexId> order(base.size());
  std::iota(order.begin(), order.end(), VertexId{0});
  Rng rng(spec.rng_seed);
  rng.shuffle(std::span<VertexId>(order));

  const auto s_begin = order.begin();
  const auto u1_begin = s_begin + std::ptrdiff_t(shared);
  const auto u2_begin = u1_begin + std::ptrdiff_t(own);
  std::vector<VertexId> v1(s_begin, u2_begin);
  std::vector<VertexId> v2(s_begin, u1_begin);
  v2.insert(v2.end(), u2_begin, u2_begin + std::ptrdiff_t(own));

  std::vector<AlignedPair> truth;
  for (auto it = s_begin; it != u1_begin; ++it) {
    if (base.kind(*it) == VertexKind::User) truth.push_back({base.label(*it), base.label(*it)});
  }
  return {induced_subgraph(base, v1), induced_subgraph(base, v2), AlignmentSet(std::move(truth))};
}

namespace {

MultilayerDetection finish(const Detection& d, const IdentityMap& identities) {
  return {project_assignment(d.assignment, identities), d.codelength, d.assignment.num_communities()};
}

}  // namespace

MultilayerDetection detect_multilayer(Method method, const Graph& g1, const Graph& g2,
                                      const SeedSet& seeds, const PipelineOptions& opts) {
  switch (method) {
    case Method::Aggregation: {
      const Aggregation agg = build_aggregation(g1, g2, seeds, opts.combine);
      if (agg.graph.size() == 0) throw DomainError("both layers are empty");
      return finish(detect(agg.graph, opts.detect), agg.merge_map);
    }
    case Method::Linking:
    case Method::Relaxed: {
      const FlowGraph f = method == Method::Linking
                              ? build_linking(g1, g2, seeds, opts.omega)
                              : build_relaxed(g1, g2, seeds, RelaxRate(opts.relax_rate));
      if (f.size() == 0) throw DomainError("both layers are empty");
      const StationaryDistribution p = pagerank(f, opts.pagerank);
      return finish(detect(f, p, opts.detect), identity_map(f));
    }
  }
  throw ParameterError("unknown method");
}

MultilayerDetection detect_single(const Graph& g, const DetectOptions& opts) {
  if (g.size() == 0) throw DomainError("graph is empty");
  const Detection d = detect(g, opts);
  return {project_single(d.assignment, g), d.codelength, d.assignment.num_communities()};
}

}  // namespace mlcd
