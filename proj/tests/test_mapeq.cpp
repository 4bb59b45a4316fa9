#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "mlcd/error.hpp"
#include "mlcd/mapeq.hpp"

using namespace mlcd;
using testing::make_graph;

namespace {

Graph two_triangles() {
  return make_graph({{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}, {"d", "e", 1}, {"e", "f", 1}, {"d", "f", 1},
                     {"c", "d", 1}});
}

CommunityAssignment uniform(std::size_t n, CommunityId id = 0) {
  return {std::vector<CommunityId>(n, id), ElementSet::GraphVertices};
}

double brute_force_minimum(const Graph& g) {
  double best = std::numeric_limits<double>::infinity();
  testing::for_each_partition(g.size(), [&](const std::vector<std::uint32_t>& m) {
    best = std::min(best, testing::reference_codelength(g, m));
  });
  return best;
}

}  // namespace

TEST_CASE("partition enumeration counts Bell numbers") {
  std::size_t count = 0;
  testing::for_each_partition(5, [&](const auto&) { ++count; });
  CHECK(count == 52);
  count = 0;
  testing::for_each_partition(8, [&](const auto&) { ++count; });
  CHECK(count == 4140);
}

TEST_CASE("one module costs the entropy of the visit rates") {
  const Graph g = two_triangles();
  const auto L = codelength(g, uniform(g.size()));
  const double oracle = testing::h({2, 2, 2, 2, 3, 3});
  CHECK(std::abs(L.bits - oracle) < 1e-12);
  CHECK(L.bits == doctest::Approx(2.5567).epsilon(1e-4));
  CHECK(L.index_term == 0.0);

  Rng rng(4);
  for (int round = 0; round < 30; ++round) {
    const Graph r = testing::random_weighted_graph(2 + rng.uniform_index(15), 0.4, rng);
    if (r.total_weight() == 0.0) continue;
    CHECK(std::abs(codelength(r, uniform(r.size(), 7)).bits - entropy_bits(flow_network(r).node_flow)) < 1e-12);
  }
}

TEST_CASE("splitting the bridged triangles lowers the codelength") {
  const Graph g = two_triangles();
  CommunityAssignment split = uniform(g.size());
  for (const char* l : {"d", "e", "f"}) split.comm[*g.find(l)] = 1;
  const double L2 = codelength(g, split).bits;
  CHECK(L2 < codelength(g, uniform(g.size())).bits);
  CHECK(std::abs(L2 - testing::reference_codelength(g, split.comm)) < 1e-12);
}

TEST_CASE("codelength agrees with the explicit formula") {
  Rng rng(8);
  for (int round = 0; round < 60; ++round) {
    const Graph g = testing::random_weighted_graph(2 + rng.uniform_index(12), 0.35, rng);
    if (g.total_weight() == 0.0) continue;
    CommunityAssignment c = uniform(g.size());
    const std::size_t k = 1 + rng.uniform_index(g.size());
    for (auto& x : c.comm) x = CommunityId(rng.uniform_index(k));
    const auto L = codelength(g, c);
    CHECK(std::abs(L.bits - testing::reference_codelength(g, c.comm)) < 1e-10);
    CHECK(std::abs(L.bits - (L.index_term + L.module_terms)) < 1e-12);
    CHECK(L.bits >= 0.0);
  }
}

TEST_CASE("directed flow: one module costs the entropy") {
  Rng rng(12);
  const Graph g1 = testing::random_weighted_graph(8, 0.4, rng);
  const Graph g2 = testing::random_weighted_graph(9, 0.4, rng);
  const FlowGraph f = build_linking(g1, g2, SeedSet{}, 1.0);
  const auto p = pagerank(f);
  CommunityAssignment c{std::vector<CommunityId>(f.size(), 0), ElementSet::FlowStates};
  CHECK(std::abs(codelength(f, p, c).bits - entropy_bits(p.p)) < 1e-12);
  CHECK_THROWS_AS(codelength(f, p, uniform(3)), CoverageError);
}

TEST_CASE("incremental move deltas match recomputation") {
  Rng rng(31);
  for (int round = 0; round < 40; ++round) {
    const Graph g = testing::random_weighted_graph(3 + rng.uniform_index(12), 0.4, rng);
    if (g.total_weight() == 0.0) continue;
    const FlowNetwork net = flow_network(g);
    CommunityAssignment c = uniform(g.size());
    for (auto& x : c.comm) x = CommunityId(rng.uniform_index(4));
    for (int move = 0; move < 10; ++move) {
      const VertexId v = VertexId(rng.uniform_index(g.size()));
      const CommunityId target = CommunityId(rng.uniform_index(5));
      CommunityAssignment after = c;
      after.comm[v] = target;
      const double expected = codelength(net, after).bits - codelength(net, c).bits;
      CHECK(std::abs(move_delta(net, c, v, target) - expected) < 1e-10);
      c = after;
    }
  }
}

TEST_CASE("detection examples") {
  SUBCASE("two cliques") {
    const Graph g = testing::clique_pair(16);
    const Detection d = detect(g);
    CHECK(d.assignment.num_communities() == 2);
    for (VertexId v = 0; v < g.size(); ++v) CHECK(d.assignment.comm[v] == d.assignment.comm[v < 16 ? 0 : 31]);
    CHECK(d.assignment.comm[0] != d.assignment.comm[31]);
    CHECK(d.codelength.bits < codelength(g, uniform(g.size())).bits);
  }
  SUBCASE("edgeless graph") {
    const Graph g = make_graph({}, {"a", "b", "c", "d"});
    const Detection d = detect(g);
    CHECK(d.assignment.num_communities() == 4);
    CHECK(d.codelength.bits == 0.0);
    CHECK(codelength(g, uniform(4)).bits == doctest::Approx(2.0));
  }
  SUBCASE("triangle") {
    const Graph g = make_graph({{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}});
    CHECK(detect(g).assignment.num_communities() == 1);
    CHECK(std::abs(detect(g).codelength.bits - brute_force_minimum(g)) < 1e-12);
  }
}

TEST_CASE("greedy search reaches the exhaustive optimum on small graphs") {
  Rng rng(2024);
  int matched = 0, total = 0;
  for (int round = 0; round < 30; ++round) {
    const Graph g = testing::random_weighted_graph(3 + rng.uniform_index(5), 0.5, rng);
    if (g.total_weight() == 0.0) continue;
    ++total;
    const Detection d = detect(g);
    const double best = brute_force_minimum(g);
    CHECK(d.codelength.bits >= best - 1e-9);
    CHECK(std::abs(d.codelength.bits - testing::reference_codelength(g, d.assignment.comm)) < 1e-10);
    if (std::abs(d.codelength.bits - best) < 1e-9) ++matched;
  }
  CHECK(matched * 20 >= total * 19);
}

TEST_CASE("detection is deterministic per seed and ids follow flow rank") {
  Rng rng(55);
  const Graph g = testing::random_weighted_graph(40, 0.1, rng);
  const Detection a = detect(g, {5, 9, 200});
  const Detection b = detect(g, {5, 9, 200});
  CHECK(a.assignment.comm == b.assignment.comm);
  CHECK(a.codelength.bits == b.codelength.bits);

  const FlowNetwork net = flow_network(g);
  std::vector<double> mass(a.assignment.num_communities(), 0.0);
  for (VertexId v = 0; v < g.size(); ++v) mass[a.assignment.comm[v]] += net.node_flow[v];
  for (std::size_t m = 1; m < mass.size(); ++m) CHECK(mass[m - 1] >= mass[m]);
}

TEST_CASE("rank_by_flow") {
  const CommunityAssignment c{{5, 5, 2, 9}, ElementSet::GraphVertices};
  const std::vector<double> flow{0.1, 0.1, 0.5, 0.3};
  CHECK(rank_by_flow(c, flow).comm == std::vector<CommunityId>{2, 2, 0, 1});
  const std::vector<double> tied{0.25, 0.25, 0.25, 0.25};
  CHECK(rank_by_flow(CommunityAssignment{{3, 1, 1, 3}, ElementSet::GraphVertices}, tied).comm ==
        std::vector<CommunityId>{0, 1, 1, 0});
}
