#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mlcd/error.hpp"
#include "mlcd/seedsel.hpp"

using namespace mlcd;

namespace {

AlignmentSet numbered_truth(std::size_t n) {
  std::vector<AlignedPair> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({testing::vname(i), "y" + testing::vname(i)});
  return AlignmentSet(std::move(pairs));
}

PairScorer random_scorer(const AlignmentSet& truth, Rng& rng, int levels) {
  ScoreTable s1, s2;
  for (const auto& p : truth.pairs()) {
    s1[p.first] = double(rng.uniform_index(levels));
    s2[p.second] = double(rng.uniform_index(levels));
  }
  return PairScorer::paired(s1, s2);
}

}  // namespace

TEST_CASE("seed counts round half up") {
  CHECK(seed_count(10, 0.05) == 1);
  CHECK(seed_count(10, 0.04) == 0);
  CHECK(seed_count(10, 0.25) == 3);
  CHECK(seed_count(7, 1.0) == 7);
  CHECK(seed_count(7, 0.0) == 0);
  CHECK_THROWS_AS(seed_count(7, 1.2), ParameterError);
}

TEST_CASE("extreme fractions") {
  const AlignmentSet truth = numbered_truth(12);
  Rng rng(1);
  const PairScorer scorer = random_scorer(truth, rng, 5);
  for (auto s : {SeedStrategy::Random, SeedStrategy::Degree, SeedStrategy::PageRank}) {
    const PairScorer* sc = s == SeedStrategy::Random ? nullptr : &scorer;
    CHECK(select_seeds(truth, s, 1.0, 3, sc).pairs().size() == 12);
    CHECK(is_subset(select_seeds(truth, s, 1.0, 3, sc), truth));
    CHECK(select_seeds(truth, s, 0.0, 3, sc).empty());
  }
}

TEST_CASE("paired scores are averaged") {
  const AlignmentSet truth(std::vector<AlignedPair>{{"a", "b"}, {"c", "d"}});
  const PairScorer scorer = PairScorer::paired({{"a", 4}, {"c", 1}}, {{"b", 2}, {"d", 1}});
  CHECK(scorer.score({"a", "b"}) == 3.0);
  const SeedSet s = select_seeds(truth, SeedStrategy::Degree, 0.5, 0, &scorer);
  REQUIRE(s.pairs().size() == 1);
  CHECK(s.pairs()[0].first == "a");

  const PairScorer single = PairScorer::single({{"a", 1}, {"b", 3}});
  CHECK(single.score({"a", "b"}) == 2.0);
}

TEST_CASE("ties go to the smaller pair") {
  const AlignmentSet truth(std::vector<AlignedPair>{{"c", "c"}, {"a", "a"}, {"b", "b"}});
  const PairScorer flat = PairScorer::single({{"a", 1}, {"b", 1}, {"c", 1}});
  const SeedSet s = select_seeds(truth, SeedStrategy::PageRank, 0.6, 0, &flat);
  REQUIRE(s.pairs().size() == 2);
  CHECK(s.pairs()[0].first == "a");
  CHECK(s.pairs()[1].first == "b");
}

TEST_CASE("missing scores name the label") {
  const AlignmentSet truth(std::vector<AlignedPair>{{"a", "b"}});
  const PairScorer scorer = PairScorer::paired({{"a", 1}}, {});
  try {
    select_seeds(truth, SeedStrategy::Degree, 1.0, 0, &scorer);
    FAIL("expected ScoringError");
  } catch (const ScoringError& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }
  CHECK_THROWS_AS(select_seeds(truth, SeedStrategy::Degree, 1.0, 0, nullptr), ScoringError);
}

TEST_CASE("nesting across fractions and reproducibility") {
  Rng rng(14);
  for (int round = 0; round < 20; ++round) {
    const AlignmentSet truth = numbered_truth(5 + rng.uniform_index(60));
    const PairScorer scorer = random_scorer(truth, rng, 4);
    const std::uint64_t seed = rng.next();
    for (auto s : {SeedStrategy::Random, SeedStrategy::Degree, SeedStrategy::PageRank}) {
      SeedSet previous;
      for (double f = 0.0; f <= 1.0001; f += 0.1) {
        const SeedSet cur = select_seeds(truth, s, std::min(f, 1.0), seed, &scorer);
        CHECK(is_subset(previous, AlignmentSet(std::vector<AlignedPair>(cur.pairs().begin(), cur.pairs().end()))));
        CHECK(cur == select_seeds(truth, s, std::min(f, 1.0), seed, &scorer));
        previous = cur;
      }
    }
  }
}

TEST_CASE("centrality tables") {
  const Graph g = testing::make_graph({{"a", "b", 2}, {"a", "c", 1}});
  const ScoreTable deg = degree_scores(g);
  CHECK(deg.at("a") == 3.0);
  const ScoreTable pr = pagerank_scores(g);
  CHECK(pr.at("a") > pr.at("b"));
  std::istringstream in("a\t0.5\n// note\nb\t2\n");
  const ScoreTable t = read_score_table(in);
  CHECK(t.at("b") == 2.0);
  std::istringstream bad("a\tx\n");
  CHECK_THROWS_AS(read_score_table(bad), ParseError);
}
