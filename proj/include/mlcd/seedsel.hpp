#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mlcd/flow.hpp"
#include "mlcd/graph.hpp"
#include "mlcd/multilayer.hpp"

namespace mlcd {

enum class SeedStrategy : std::uint8_t { Random, Degree, PageRank };
std::string_view strategy_name(SeedStrategy s);
SeedStrategy parse_strategy(std::string_view text);

using ScoreTable = std::map<std::string, double, std::less<>>;

/// Weighted degree (strength) per label.
ScoreTable degree_scores(const Graph& g);
/// PageRank per label.
ScoreTable pagerank_scores(const Graph& g, const PageRankOptions& opts = {});

/// TSV `label<TAB>score`.
ScoreTable read_score_table(std::istream& in);
ScoreTable read_score_table_file(const std::string& path);

/// Centrality of an aligned pair. Single mode scores both labels from one
/// table (e.g. the original graph) and averages them; paired mode averages
/// the layer-1 score of the first label with the layer-2 score of the
/// second.
class PairScorer {
 public:
  static PairScorer single(ScoreTable table);
  static PairScorer paired(ScoreTable layer1, ScoreTable layer2);

  double score(const AlignedPair& pair) const;

 private:
  PairScorer(ScoreTable a, std::optional<ScoreTable> b) : first_(std::move(a)), second_(std::move(b)) {}

  ScoreTable first_;
  std::optional<ScoreTable> second_;
};

/// round-half-up(fraction * |truth|) pairs. Random samples uniformly
/// without replacement; Degree and PageRank take the top-scored pairs, ties
/// going to the lexicographically smaller pair. `scorer` may be null for
/// Random.
SeedSet select_seeds(const AlignmentSet& truth, SeedStrategy strategy, double fraction,
                     std::uint64_t rng_seed, const PairScorer* scorer);

std::size_t seed_count(std::size_t truth_size, double fraction);

}  // namespace mlcd
