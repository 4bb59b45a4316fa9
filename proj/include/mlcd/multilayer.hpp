#pragma once

#include <compare>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlcd/assignment.hpp"
#include "mlcd/graph.hpp"

namespace mlcd {

struct AlignedPair {
  std::string first;   ///< label in layer 1
  std::string second;  ///< label in layer 2

  friend auto operator<=>(const AlignedPair&, const AlignedPair&) = default;
};

/// Set of cross-layer pairs forming a partial matching: every label occurs
/// in at most one pair per side. Stored sorted.
template <class Tag>
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(std::vector<AlignedPair> pairs);

  std::span<const AlignedPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  bool contains(const AlignedPair& p) const;

  friend bool operator==(const PairSet&, const PairSet&) = default;

 private:
  std::vector<AlignedPair> pairs_;
};

/// The complete known correspondence T.
using AlignmentSet = PairSet<struct AlignmentTag>;
/// The seeds S handed to the builders; S is a subset of T.
using SeedSet = PairSet<struct SeedTag>;

bool is_subset(const SeedSet& seeds, const AlignmentSet& truth);
SeedSet as_seeds(const AlignmentSet& truth);

/// Throws AlignmentError naming the first pair whose labels are missing
/// from their layers or that involves a hashtag.
template <class Tag>
void validate_pairs(const PairSet<Tag>& pairs, const Graph& g1, const Graph& g2);

/// TSV `label_layer1<TAB>label_layer2`; hashtags are rejected.
std::vector<AlignedPair> parse_pairs(std::istream& in);
std::vector<AlignedPair> read_pairs_file(const std::string& path);
void write_pairs(std::ostream& out, std::span<const AlignedPair> pairs);
void write_pairs_file(const std::string& path, std::span<const AlignedPair> pairs);

enum class Method : std::uint8_t { Aggregation, Linking, Relaxed };
std::string_view method_name(Method m);
Method parse_method(std::string_view text);

enum class Combine : std::uint8_t { Sum, Mean };
std::string_view combine_name(Combine c);
Combine parse_combine(std::string_view text);

/// Probability of continuing in the current layer for the relaxed walk.
class RelaxRate {
 public:
  explicit RelaxRate(double r);
  double value() const noexcept { return r_; }

 private:
  double r_;
};

/// Sends physical identities to element indices of a built network.
struct IdentityMap {
  std::vector<std::pair<LayerLabel, VertexId>> entries;
};

/// Directed supra-graph with a row-stochastic transition structure.
struct FlowGraph {
  Transition transition;
  std::vector<LayerLabel> identity;  ///< per state; layer is First or Second
  std::size_t layer1_size = 0;       ///< states [0, layer1_size) are layer 1

  std::size_t size() const noexcept { return identity.size(); }
};

IdentityMap identity_map(const FlowGraph& flow);

struct Aggregation {
  Graph graph;
  IdentityMap merge_map;
};

/// Merges seed pairs and shared hashtags into single vertices. Labels of
/// unmerged vertices get an "@1" / "@2" suffix; a merged pair (a, b) is
/// labelled "a" when a == b and "a|b" otherwise.
Aggregation build_aggregation(const Graph& g1, const Graph& g2, const SeedSet& seeds,
                              Combine combine = Combine::Sum);

/// Disjoint union of the layers plus an interlayer edge of weight omega
/// between every aligned pair, row-normalised.
FlowGraph build_linking(const Graph& g1, const Graph& g2, const SeedSet& seeds,
                        double omega = 1.0);

/// Relaxed walk: an aligned state follows its own layer with probability r
/// and its counterpart's neighbourhood with probability 1 - r.
FlowGraph build_relaxed(const Graph& g1, const Graph& g2, const SeedSet& seeds,
                        RelaxRate r = RelaxRate(0.85));

/// Community of each physical identity; merged vertices report their
/// community for both constituents.
LayeredAssignment project_assignment(const CommunityAssignment& assignment,
                                     const IdentityMap& identities);

/// Assignment over a single graph keyed by (Base, label).
LayeredAssignment project_single(const CommunityAssignment& assignment, const Graph& g);

}  // namespace mlcd
