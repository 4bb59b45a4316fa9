#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mlcd {

using CommunityId = std::uint32_t;

/// Which universe an assignment ranges over.
enum class ElementSet : std::uint8_t { GraphVertices, FlowStates };

/// Total map element index -> community id.
struct CommunityAssignment {
  std::vector<CommunityId> comm;
  ElementSet universe = ElementSet::GraphVertices;

  std::size_t size() const noexcept { return comm.size(); }
  /// Number of distinct community ids.
  std::size_t num_communities() const;
  /// Relabels ids to 0..K-1 in order of first appearance.
  CommunityAssignment canonicalized() const;

  friend bool operator==(const CommunityAssignment&, const CommunityAssignment&) = default;
};

/// Which network a physical identity belongs to. Base is a single-graph
/// assignment (e.g. a reference over the original graph), Merged marks
/// aggregation vertices that stand for an aligned pair.
enum class Layer : std::uint8_t { Base = 0, First = 1, Second = 2, Merged = 3 };

std::string_view layer_name(Layer layer);
Layer parse_layer(std::string_view text);

struct LayerLabel {
  Layer layer = Layer::Base;
  std::string label;

  friend auto operator<=>(const LayerLabel&, const LayerLabel&) = default;
};

/// Community per physical (layer, label) identity.
using LayeredAssignment = std::map<LayerLabel, CommunityId>;

/// TSV `label<TAB>layer<TAB>community_id`, sorted by (layer, label).
void write_assignment(std::ostream& out, const LayeredAssignment& assignment);
LayeredAssignment read_assignment(std::istream& in);
LayeredAssignment read_assignment_file(const std::string& path);
void write_assignment_file(const std::string& path, const LayeredAssignment& assignment);

}  // namespace mlcd
