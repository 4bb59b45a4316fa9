#include "mlcd/assignment.hpp"

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "mlcd/error.hpp"
#include "mlcd/text.hpp"

namespace mlcd {

std::size_t CommunityAssignment::num_communities() const {
  return std::unordered_set<CommunityId>(comm.begin(), comm.end()).size();
}

CommunityAssignment CommunityAssignment::canonicalized() const {
  CommunityAssignment out;
  out.universe = universe;
  out.comm.reserve(comm.size());
  std::unordered_map<CommunityId, CommunityId> relabel;
  for (CommunityId c : comm) {
    const auto [it, inserted] = relabel.try_emplace(c, static_cast<CommunityId>(relabel.size()));
    out.comm.push_back(it->second);
  }
  return out;
}

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::Base:
      return "0";
    case Layer::First:
      return "1";
    case Layer::Second:
      return "2";
    case Layer::Merged:
      return "merged";
  }
  return "?";
}

Layer parse_layer(std::string_view text) {
  if (text == "0") return Layer::Base;
  if (text == "1") return Layer::First;
  if (text == "2") return Layer::Second;
  if (text == "merged") return Layer::Merged;
  throw Error("unknown layer '" + std::string(text) + "'");
}

void write_assignment(std::ostream& out, const LayeredAssignment& assignment) {
  for (const auto& [key, c] : assignment) {
    out << key.label << '\t' << layer_name(key.layer) << '\t' << c << '\n';
  }
}

LayeredAssignment read_assignment(std::istream& in) {
  LayeredAssignment result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_skippable(line)) continue;
    const auto fields = text::split_tabs(line);
    if (fields.size() != 3) throw ParseError("expected label, layer, community_id", line_no);
    if (fields[0].empty()) throw ParseError("empty label", line_no);
    CommunityId c = 0;
    if (!text::parse_int(fields[2], c)) throw ParseError("bad community id", line_no);
    Layer layer;
    try {
      layer = parse_layer(fields[1]);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!result.emplace(LayerLabel{layer, std::string(fields[0])}, c).second) {
      throw ParseError("duplicate entry for '" + std::string(fields[0]) + "'", line_no);
    }
  }
  return result;
}

LayeredAssignment read_assignment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_assignment(in);
}

void write_assignment_file(const std::string& path, const LayeredAssignment& assignment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_assignment(out, assignment);
}

}  // namespace mlcd
