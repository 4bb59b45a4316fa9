#include "mlcd/multilayer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "mlcd/error.hpp"
#include "mlcd/text.hpp"

namespace mlcd {

namespace {

std::string describe(const AlignedPair& p) { return "(" + p.first + ", " + p.second + ")"; }

// Aligned vertex pairs used by every builder: the seeds plus every hashtag
// present in both layers. Sorted by layer-1 id.
std::vector<std::pair<VertexId, VertexId>> aligned_vertices(const Graph& g1, const Graph& g2,
                                                            const SeedSet& seeds) {
  validate_pairs(seeds, g1, g2);
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(seeds.size());
  for (const AlignedPair& p : seeds.pairs()) out.emplace_back(*g1.find(p.first), *g2.find(p.second));
  for (VertexId v = 0; v < g1.size(); ++v) {
    if (g1.kind(v) != VertexKind::Hashtag) continue;
    if (const auto w = g2.find(g1.label(v))) out.emplace_back(v, *w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void sort_row(std::vector<std::pair<std::uint32_t, double>>& row) {
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

void append_row(FlowGraph& f, std::vector<std::pair<std::uint32_t, double>>& row, double total) {
  sort_row(row);
  if (total > 0.0) {
    for (const auto& [target, w] : row) {
      f.transition.targets.push_back(target);
      f.transition.probs.push_back(w / total);
    }
    f.transition.dangling.push_back(0);
  } else {
    f.transition.dangling.push_back(1);
  }
  f.transition.offsets.push_back(static_cast<std::uint32_t>(f.transition.targets.size()));
}

FlowGraph empty_flow(const Graph& g1, const Graph& g2) {
  FlowGraph f;
  f.layer1_size = g1.size();
  f.identity.reserve(g1.size() + g2.size());
  for (const auto& v : g1.vertices()) f.identity.push_back({Layer::First, v.label});
  for (const auto& v : g2.vertices()) f.identity.push_back({Layer::Second, v.label});
  f.transition.offsets.reserve(f.identity.size() + 1);
  f.transition.dangling.reserve(f.identity.size());
  return f;
}

// Intra-layer weights of v, self-loops doubled, shifted to state ids.
void add_intra(std::vector<std::pair<std::uint32_t, double>>& row, const Graph& g, VertexId v,
               std::uint32_t offset, double scale) {
  for (const Neighbor& nb : g.neighbors(v)) {
    const double w = nb.vertex == v ? 2.0 * nb.weight : nb.weight;
    row.emplace_back(nb.vertex + offset, scale * w);
  }
}

}  // namespace

template <class Tag>
PairSet<Tag>::PairSet(std::vector<AlignedPair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::set<std::string_view> firsts;
  std::set<std::string_view> seconds;
  for (const AlignedPair& p : pairs_) {
    if (p.first.empty() || p.second.empty()) throw AlignmentError("empty label in pair " + describe(p));
    if (!firsts.insert(p.first).second) {
      throw AlignmentError("label '" + p.first + "' aligned more than once in layer 1");
    }
    if (!seconds.insert(p.second).second) {
      throw AlignmentError("label '" + p.second + "' aligned more than once in layer 2");
    }
  }
}

template <class Tag>
bool PairSet<Tag>::contains(const AlignedPair& p) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

template class PairSet<AlignmentTag>;
template class PairSet<SeedTag>;

bool is_subset(const SeedSet& seeds, const AlignmentSet& truth) {
  return std::includes(truth.pairs().begin(), truth.pairs().end(), seeds.pairs().begin(),
                       seeds.pairs().end());
}

SeedSet as_seeds(const AlignmentSet& truth) {
  return SeedSet(std::vector<AlignedPair>(truth.pairs().begin(), truth.pairs().end()));
}

template <class Tag>
void validate_pairs(const PairSet<Tag>& pairs, const Graph& g1, const Graph& g2) {
  for (const AlignedPair& p : pairs.pairs()) {
    if (kind_of(p.first) == VertexKind::Hashtag || kind_of(p.second) == VertexKind::Hashtag) {
      throw AlignmentError("pair " + describe(p) + " involves a hashtag");
    }
    if (!g1.contains(p.first)) throw AlignmentError("pair " + describe(p) + ": '" + p.first + "' not in layer 1");
    if (!g2.contains(p.second)) throw AlignmentError("pair " + describe(p) + ": '" + p.second + "' not in layer 2");
  }
}

template void validate_pairs(const AlignmentSet&, const Graph&, const Graph&);
template void validate_pairs(const SeedSet&, const Graph&, const Graph&);

std::vector<AlignedPair> parse_pairs(std::istream& in) {
  std::vector<AlignedPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_skippable(line)) continue;
    const auto fields = text::split_tabs(line);
    if (fields.size() != 2) throw ParseError("expected two tab-separated labels", line_no);
    if (fields[0].empty() || fields[1].empty()) throw ParseError("empty label", line_no);
    if (fields[0].front() == '#' || fields[1].front() == '#') {
      throw ParseError("hashtags cannot be aligned pairs", line_no);
    }
    pairs.push_back({std::string(fields[0]), std::string(fields[1])});
  }
  return pairs;
}

std::vector<AlignedPair> read_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_pairs(in);
}

void write_pairs(std::ostream& out, std::span<const AlignedPair> pairs) {
  for (const AlignedPair& p : pairs) out << p.first << '\t' << p.second << '\n';
}

void write_pairs_file(const std::string& path, std::span<const AlignedPair> pairs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_pairs(out, pairs);
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Aggregation:
      return "aggregation";
    case Method::Linking:
      return "linking";
    case Method::Relaxed:
      return "relaxed";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "aggregation") return Method::Aggregation;
  if (text == "linking") return Method::Linking;
  if (text == "relaxed") return Method::Relaxed;
  throw ParameterError("unknown method '" + std::string(text) + "'");
}

std::string_view combine_name(Combine c) { return c == Combine::Sum ? "sum" : "mean"; }

Combine parse_combine(std::string_view text) {
  if (text == "sum") return Combine::Sum;
  if (text == "mean") return Combine::Mean;
  throw ParameterError("unknown combine rule '" + std::string(text) + "'");
}

RelaxRate::RelaxRate(double r) : r_(r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("relax rate must lie in [0, 1]");
}

IdentityMap identity_map(const FlowGraph& flow) {
  IdentityMap map;
  map.entries.reserve(flow.size());
  for (std::size_t s = 0; s < flow.size(); ++s) map.entries.emplace_back(flow.identity[s], VertexId(s));
  return map;
}

Aggregation build_aggregation(const Graph& g1, const Graph& g2, const SeedSet& seeds,
                              Combine combine) {
  const auto aligned = aligned_vertices(g1, g2, seeds);

  constexpr std::size_t kNone = std::size_t(-1);
  std::vector<std::size_t> handle1(g1.size(), kNone);
  std::vector<std::size_t> handle2(g2.size(), kNone);
  std::vector<std::string> labels;
  std::vector<unsigned> layers;  // bit 0: present in layer 1, bit 1: layer 2

  for (const auto& [v1, v2] : aligned) {
    const std::string& a = g1.label(v1);
    const std::string& b = g2.label(v2);
    handle1[v1] = handle2[v2] = labels.size();
    labels.push_back(a == b ? a : a + "|" + b);
    layers.push_back(3u);
  }
  for (VertexId v = 0; v < g1.size(); ++v) {
    if (handle1[v] != kNone) continue;
    handle1[v] = labels.size();
    labels.push_back(g1.label(v) + "@1");
    layers.push_back(1u);
  }
  for (VertexId v = 0; v < g2.size(); ++v) {
    if (handle2[v] != kNone) continue;
    handle2[v] = labels.size();
    labels.push_back(g2.label(v) + "@2");
    layers.push_back(2u);
  }

  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  auto accumulate = [&](const Graph& g, const std::vector<std::size_t>& handle) {
    for (const Edge& e : g.edges()) {
      const std::size_t a = handle[e.u];
      const std::size_t b = handle[e.v];
      weights[{std::min(a, b), std::max(a, b)}] += e.w;
    }
  };
  accumulate(g1, handle1);
  accumulate(g2, handle2);

  GraphBuilder builder;
  for (const auto& label : labels) builder.add_vertex(label);
  for (const auto& [key, w] : weights) {
    double weight = w;
    if (combine == Combine::Mean) {
      // Mean over the layers in which both endpoints exist.
      weight /= std::popcount(layers[key.first] & layers[key.second]);
    }
    builder.add_edge_by_handle(key.first, key.second, weight);
  }
  Aggregation out;
  out.graph = std::move(builder).build();
  if (out.graph.size() != labels.size()) {
    throw AlignmentError("merged vertex labels collide; rename labels containing '|' or '@'");
  }

  out.merge_map.entries.reserve(g1.size() + g2.size());
  for (VertexId v = 0; v < g1.size(); ++v) {
    out.merge_map.entries.emplace_back(LayerLabel{Layer::First, g1.label(v)},
                                       *out.graph.find(labels[handle1[v]]));
  }
  for (VertexId v = 0; v < g2.size(); ++v) {
    out.merge_map.entries.emplace_back(LayerLabel{Layer::Second, g2.label(v)},
                                       *out.graph.find(labels[handle2[v]]));
  }
  return out;
}

FlowGraph build_linking(const Graph& g1, const Graph& g2, const SeedSet& seeds, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ParameterError("omega must be positive");
  const auto aligned = aligned_vertices(g1, g2, seeds);
  const auto n1 = static_cast<std::uint32_t>(g1.size());

  constexpr std::uint32_t kNone = std::uint32_t(-1);
  std::vector<std::uint32_t> twin(g1.size() + g2.size(), kNone);
  for (const auto& [v1, v2] : aligned) {
    twin[v1] = n1 + v2;
    twin[n1 + v2] = v1;
  }

  FlowGraph f = empty_flow(g1, g2);
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::uint32_t s = 0; s < f.size(); ++s) {
    row.clear();
    const bool first = s < n1;
    const Graph& g = first ? g1 : g2;
    const VertexId v = first ? s : s - n1;
    add_intra(row, g, v, first ? 0 : n1, 1.0);
    double total = g.strength(v);
    if (twin[s] != kNone) {
      row.emplace_back(twin[s], omega);
      total += omega;
    }
    append_row(f, row, total);
  }
  return f;
}

FlowGraph build_relaxed(const Graph& g1, const Graph& g2, const SeedSet& seeds, RelaxRate rate) {
  const auto aligned = aligned_vertices(g1, g2, seeds);
  const auto n1 = static_cast<std::uint32_t>(g1.size());
  const double r = rate.value();

  constexpr std::uint32_t kNone = std::uint32_t(-1);
  std::vector<std::uint32_t> twin(g1.size() + g2.size(), kNone);
  for (const auto& [v1, v2] : aligned) {
    twin[v1] = n1 + v2;
    twin[n1 + v2] = v1;
  }

  auto locate = [&](std::uint32_t s) -> std::pair<const Graph*, VertexId> {
    return s < n1 ? std::pair(&g1, VertexId(s)) : std::pair(&g2, VertexId(s - n1));
  };

  FlowGraph f = empty_flow(g1, g2);
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::uint32_t s = 0; s < f.size(); ++s) {
    row.clear();
    const auto [g, v] = locate(s);
    const std::uint32_t offset = s < n1 ? 0 : n1;
    const double own = g->strength(v);

    double own_share = 1.0;
    double twin_share = 0.0;
    const Graph* tg = nullptr;
    VertexId tv = 0;
    if (twin[s] != kNone) {
      std::tie(tg, tv) = locate(twin[s]);
      const bool twin_live = tg->strength(tv) > 0.0;
      if (own > 0.0 && twin_live) {
        own_share = r;
        twin_share = 1.0 - r;
      } else if (own <= 0.0 && twin_live && r < 1.0) {
        // A dangling state borrows its twin's row, unless relaxation is off.
        own_share = 0.0;
        twin_share = 1.0;
      }
    }
    if (own > 0.0 && own_share > 0.0) add_intra(row, *g, v, offset, own_share / own);
    if (twin_share > 0.0) add_intra(row, *tg, tv, twin[s] < n1 ? 0 : n1, twin_share / tg->strength(tv));
    append_row(f, row, row.empty() ? 0.0 : 1.0);
  }
  return f;
}

LayeredAssignment project_assignment(const CommunityAssignment& assignment,
                                     const IdentityMap& identities) {
  if (assignment.size() == 0) throw LookupError("cannot project an empty assignment");
  LayeredAssignment out;
  for (const auto& [key, element] : identities.entries) {
    if (element >= assignment.size()) {
      throw LookupError("identity '" + key.label + "' maps outside the assignment");
    }
    out[key] = assignment.comm[element];
  }
  return out;
}

LayeredAssignment project_single(const CommunityAssignment& assignment, const Graph& g) {
  if (assignment.size() != g.size()) throw DimensionError("assignment does not cover the graph");
  LayeredAssignment out;
  for (VertexId v = 0; v < g.size(); ++v) out[{Layer::Base, g.label(v)}] = assignment.comm[v];
  return out;
}

}  // namespace mlcd
