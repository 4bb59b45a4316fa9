#include "mlcd/seedsel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "mlcd/error.hpp"
#include "mlcd/random.hpp"
#include "mlcd/text.hpp"

namespace mlcd {

std::string_view strategy_name(SeedStrategy s) {
  switch (s) {
    case SeedStrategy::Random:
      return "random";
    case SeedStrategy::Degree:
      return "degree";
    case SeedStrategy::PageRank:
      return "pagerank";
  }
  return "?";
}

SeedStrategy parse_strategy(std::string_view text) {
  if (text == "random") return SeedStrategy::Random;
  if (text == "degree") return SeedStrategy::Degree;
  if (text == "pagerank") return SeedStrategy::PageRank;
  throw ParameterError("unknown seed strategy '" + std::string(text) + "'");
}

ScoreTable degree_scores(const Graph& g) {
  ScoreTable t;
  for (VertexId v = 0; v < g.size(); ++v) t.emplace(g.label(v), g.strength(v));
  return t;
}

ScoreTable pagerank_scores(const Graph& g, const PageRankOptions& opts) {
  ScoreTable t;
  if (g.size() == 0) return t;
  const auto pr = pagerank(g, opts);
  for (VertexId v = 0; v < g.size(); ++v) t.emplace(g.label(v), pr.p[v]);
  return t;
}

ScoreTable read_score_table(std::istream& in) {
  ScoreTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_skippable(line)) continue;
    const auto fields = text::split_tabs(line);
    if (fields.size() != 2) throw ParseError("expected label and score", line_no);
    double score = 0.0;
    if (!text::parse_double(fields[1], score)) throw ParseError("bad score", line_no);
    if (!t.emplace(std::string(fields[0]), score).second) throw ParseError("duplicate label", line_no);
  }
  return t;
}

ScoreTable read_score_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_score_table(in);
}

PairScorer PairScorer::single(ScoreTable table) { return PairScorer(std::move(table), std::nullopt); }

PairScorer PairScorer::paired(ScoreTable layer1, ScoreTable layer2) {
  return PairScorer(std::move(layer1), std::move(layer2));
}

double PairScorer::score(const AlignedPair& pair) const {
  auto lookup = [](const ScoreTable& t, const std::string& label) {
    const auto it = t.find(label);
    if (it == t.end()) throw ScoringError("no score for '" + label + "'");
    return it->second;
  };
  const double a = lookup(first_, pair.first);
  const double b = lookup(second_ ? *second_ : first_, pair.second);
  return 0.5 * (a + b);
}

std::size_t seed_count(std::size_t truth_size, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("seed fraction must lie in [0, 1]");
  return std::min(truth_size, static_cast<std::size_t>(std::floor(fraction * double(truth_size) + 0.5)));
}

SeedSet select_seeds(const AlignmentSet& truth, SeedStrategy strategy, double fraction,
                     std::uint64_t rng_seed, const PairScorer* scorer) {
  const std::size_t k = seed_count(truth.size(), fraction);
  const auto pairs = truth.pairs();
  std::vector<std::size_t> idx(pairs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  if (strategy == SeedStrategy::Random) {
    Rng rng(rng_seed);
    // Partial Fisher-Yates: the first k slots are a uniform sample.
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
  } else {
    if (scorer == nullptr) throw ScoringError("centrality strategies need score tables");
    std::vector<double> score(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) score[i] = scorer->score(pairs[i]);
    // Pairs are stored sorted, so index order is lexicographic order.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  }
  std::vector<AlignedPair> chosen;
  chosen.reserve(k);
  for (std::size_t i = 0; i < k; ++i) chosen.push_back(pairs[idx[i]]);
  return SeedSet(std::move(chosen));
}

}  // namespace mlcd
