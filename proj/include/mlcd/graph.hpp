#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mlcd {

using VertexId = std::uint32_t;

enum class VertexKind : std::uint8_t { User, Hashtag };

/// Hashtags are recognised purely by a leading '#'.
inline VertexKind kind_of(std::string_view label) {
  return !label.empty() && label.front() == '#' ? VertexKind::Hashtag : VertexKind::User;
}

std::string_view kind_name(VertexKind kind);

struct VertexMeta {
  std::string label;
  VertexKind kind = VertexKind::User;

  friend bool operator==(const VertexMeta&, const VertexMeta&) = default;
};

/// Undirected edge stored once with u <= v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  VertexId vertex;
  double weight;
};

/// Raw interaction record before collapsing edge types.
struct EdgeRecord {
  std::string src;
  std::string dst;
  std::string etype;
  std::int64_t count = 1;
};

/// Weighted undirected graph with unique string labels. Vertex ids are
/// assigned in lexicographic label order, so two graphs built from the same
/// labels and weights compare equal regardless of insertion order.
/// Immutable once built.
class Graph {
 public:
  Graph() = default;

  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const VertexMeta> vertices() const noexcept { return vertices_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  const std::string& label(VertexId v) const;
  VertexKind kind(VertexId v) const;
  std::optional<VertexId> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  /// Adjacency of v; a self-loop appears once with its own weight.
  std::span<const Neighbor> neighbors(VertexId v) const;

  /// Sum of incident weights; self-loops count twice.
  double strength(VertexId v) const;
  std::span<const double> strengths() const noexcept { return strength_; }

  /// Sum of edge weights, each edge once.
  double total_weight() const noexcept { return total_weight_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  friend class GraphBuilder;

  std::vector<VertexMeta> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<std::uint32_t> adj_offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> strength_;
  double total_weight_ = 0.0;
};

/// Accumulates labelled weighted edges; repeated pairs have their weights
/// summed.
class GraphBuilder {
 public:
  /// Returns a builder-local handle for the label, creating it if needed.
  std::size_t add_vertex(std::string_view label);
  void add_edge(std::string_view a, std::string_view b, double weight);
  void add_edge_by_handle(std::size_t a, std::size_t b, double weight);

  Graph build() &&;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> handles_;
  std::map<std::pair<std::size_t, std::size_t>, double> weights_;
};

/// Row-stochastic transition structure in CSR form. Rows with no outgoing
/// weight are flagged dangling and hold no entries.
struct Transition {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> targets;
  std::vector<double> probs;
  std::vector<std::uint8_t> dangling;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  std::size_t num_arcs() const noexcept { return targets.size(); }
  bool is_dangling(std::size_t v) const { return dangling[v] != 0; }

  /// Transition probability u -> v, or 0 when there is no arc.
  double prob(std::size_t u, std::size_t v) const;
};

/// P(u->v) = w(u,v) / strength(u); self-loops contribute 2w to their row.
Transition left_normalize(const Graph& g);

/// Collapses edge types: one vertex per label, weight = total count.
Graph ingest_edge_lists(std::span<const EdgeRecord> records);

/// Vertex-induced subgraph on the given vertices of g.
Graph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);

// Text formats.

/// Reads `src<TAB>dst<TAB>etype<TAB>count` lines. Lines starting with "//"
/// and blank lines are skipped.
std::vector<EdgeRecord> parse_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

void write_graph_json(std::ostream& out, const Graph& g);
Graph read_graph_json(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace mlcd
