#include "mlcd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlcd/error.hpp"

namespace mlcd {

std::string_view kind_name(VertexKind kind) {
  return kind == VertexKind::Hashtag ? "hashtag" : "user";
}

const std::string& Graph::label(VertexId v) const {
  if (v >= vertices_.size()) throw IndexError("vertex " + std::to_string(v) + " out of range");
  return vertices_[v].label;
}

VertexKind Graph::kind(VertexId v) const {
  if (v >= vertices_.size()) throw IndexError("vertex " + std::to_string(v) + " out of range");
  return vertices_[v].kind;
}

std::optional<VertexId> Graph::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Neighbor> Graph::neighbors(VertexId v) const {
  if (v >= vertices_.size()) throw IndexError("vertex " + std::to_string(v) + " out of range");
  return std::span<const Neighbor>(adjacency_).subspan(adj_offsets_[v],
                                                       adj_offsets_[v + 1] - adj_offsets_[v]);
}

double Graph::strength(VertexId v) const {
  if (v >= vertices_.size()) throw IndexError("vertex " + std::to_string(v) + " out of range");
  return strength_[v];
}

std::size_t GraphBuilder::add_vertex(std::string_view label) {
  if (label.empty()) throw ParameterError("empty vertex label");
  const auto [it, inserted] = handles_.try_emplace(std::string(label), labels_.size());
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

void GraphBuilder::add_edge(std::string_view a, std::string_view b, double weight) {
  const std::size_t ha = add_vertex(a);
  const std::size_t hb = add_vertex(b);
  add_edge_by_handle(ha, hb, weight);
}

void GraphBuilder::add_edge_by_handle(std::size_t a, std::size_t b, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ParameterError("edge weight must be positive and finite");
  }
  if (a >= labels_.size() || b >= labels_.size()) throw IndexError("unknown vertex handle");
  weights_[{std::min(a, b), std::max(a, b)}] += weight;
}

Graph GraphBuilder::build() && {
  Graph g;
  const std::size_t n = labels_.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return labels_[a] < labels_[b]; });
  std::vector<VertexId> id_of_handle(n);
  g.vertices_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    id_of_handle[order[i]] = static_cast<VertexId>(i);
    VertexKind kind = kind_of(labels_[order[i]]);
    g.vertices_.push_back({std::move(labels_[order[i]]), kind});
  }
  for (std::size_t i = 0; i < n; ++i) g.index_.emplace(g.vertices_[i].label, VertexId(i));

  g.edges_.reserve(weights_.size());
  for (const auto& [key, w] : weights_) {
    VertexId u = id_of_handle[key.first];
    VertexId v = id_of_handle[key.second];
    if (u > v) std::swap(u, v);
    g.edges_.push_back({u, v, w});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });

  g.strength_.assign(n, 0.0);
  std::vector<std::uint32_t> degree(n, 0);
  for (const Edge& e : g.edges_) {
    g.total_weight_ += e.w;
    g.strength_[e.u] += e.w;
    g.strength_[e.v] += e.w;
    ++degree[e.u];
    if (e.u != e.v) ++degree[e.v];
  }
  g.adj_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.adj_offsets_[v + 1] = g.adj_offsets_[v] + degree[v];
  g.adjacency_.resize(g.adj_offsets_[n]);
  std::vector<std::uint32_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[cursor[e.u]++] = {e.v, e.w};
    if (e.u != e.v) g.adjacency_[cursor[e.v]++] = {e.u, e.w};
  }
  // Edges are sorted by (u, v), so each row comes out ordered by neighbour id.
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.adjacency_.begin() + g.adj_offsets_[v], g.adjacency_.begin() + g.adj_offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  return g;
}

double Transition::prob(std::size_t u, std::size_t v) const {
  for (std::uint32_t k = offsets[u]; k < offsets[u + 1]; ++k) {
    if (targets[k] == v) return probs[k];
  }
  return 0.0;
}

Transition left_normalize(const Graph& g) {
  Transition t;
  const std::size_t n = g.size();
  t.offsets.reserve(n + 1);
  t.dangling.assign(n, 0);
  for (VertexId u = 0; u < n; ++u) {
    const double s = g.strength(u);
    if (s > 0.0) {
      for (const Neighbor& nb : g.neighbors(u)) {
        const double w = nb.vertex == u ? 2.0 * nb.weight : nb.weight;
        t.targets.push_back(nb.vertex);
        t.probs.push_back(w / s);
      }
    } else {
      t.dangling[u] = 1;
    }
    t.offsets.push_back(static_cast<std::uint32_t>(t.targets.size()));
  }
  return t;
}

Graph ingest_edge_lists(std::span<const EdgeRecord> records) {
  GraphBuilder builder;
  for (const EdgeRecord& r : records) {
    if (r.count < 1) throw ParameterError("edge count must be positive");
    builder.add_edge(r.src, r.dst, static_cast<double>(r.count));
  }
  return std::move(builder).build();
}

Graph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
  std::vector<std::uint8_t> keep(g.size(), 0);
  GraphBuilder builder;
  for (VertexId v : vertices) {
    if (v >= g.size()) throw IndexError("vertex " + std::to_string(v) + " out of range");
    keep[v] = 1;
    builder.add_vertex(g.label(v));
  }
  for (const Edge& e : g.edges()) {
    if (keep[e.u] && keep[e.v]) builder.add_edge(g.label(e.u), g.label(e.v), e.w);
  }
  return std::move(builder).build();
}

}  // namespace mlcd
