#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mlcd/error.hpp"
#include "mlcd/graph.hpp"
#include "mlcd/text.hpp"

namespace mlcd {

std::vector<EdgeRecord> parse_edge_list(std::istream& in) {
  std::vector<EdgeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_skippable(line)) continue;
    const auto fields = text::split_tabs(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError("empty vertex label", line_no);
    if (fields[2].empty()) throw ParseError("empty edge type", line_no);
    std::int64_t count = 0;
    const auto* first = fields[3].data();
    const auto* last = first + fields[3].size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last) {
      throw ParseError("count is not an integer: '" + std::string(fields[3]) + "'", line_no);
    }
    if (count < 1) throw ParseError("count must be positive", line_no);
    records.push_back(
        {std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), count});
  }
  return records;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  const auto records = parse_edge_list(in);
  return ingest_edge_lists(records);
}

void write_graph_json(std::ostream& out, const Graph& g) {
  // Hand-rolled writer: weights are printed with round-trip precision and
  // the layout is stable byte-for-byte.
  out << "{\"vertices\":[";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out << ',';
    out << "{\"label\":" << nlohmann::json(g.vertices()[i].label).dump()
        << ",\"kind\":\"" << kind_name(g.vertices()[i].kind) << "\"}";
  }
  out << "],\"edges\":[";
  bool first = true;
  for (const Edge& e : g.edges()) {
    if (!first) out << ',';
    first = false;
    out << '[' << e.u << ',' << e.v << ',' << text::format_double(e.w) << ']';
  }
  out << "]}\n";
}

Graph read_graph_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges")) {
    throw Error("graph JSON: expected object with \"vertices\" and \"edges\"");
  }
  GraphBuilder builder;
  std::vector<std::string> labels;
  for (const auto& v : doc.at("vertices")) {
    if (!v.is_object() || !v.contains("label") || !v.at("label").is_string()) {
      throw Error("graph JSON: vertex entries need a string \"label\"");
    }
    labels.push_back(v.at("label").get<std::string>());
    if (v.contains("kind")) {
      const auto kind = v.at("kind").get<std::string>();
      if (kind != kind_name(kind_of(labels.back()))) {
        throw Error("graph JSON: kind '" + kind + "' disagrees with label '" + labels.back() + "'");
      }
    }
    if (builder.add_vertex(labels.back()) != labels.size() - 1) {
      throw Error("graph JSON: duplicate label '" + labels.back() + "'");
    }
  }
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw Error("graph JSON: edges are [u, v, w] triples");
    const auto u = e.at(0).get<std::size_t>();
    const auto v = e.at(1).get<std::size_t>();
    const auto w = e.at(2).get<double>();
    if (u >= labels.size() || v >= labels.size()) throw IndexError("graph JSON: edge endpoint out of range");
    builder.add_edge(labels[u], labels[v], w);
  }
  return std::move(builder).build();
}

Graph read_graph_file(const std::string& path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_graph_json(in);
  }
  return read_edge_list_file(path);
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_graph_json(out, g);
}

}  // namespace mlcd
