#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "mlcd/error.hpp"
#include "mlcd/metrics.hpp"

using namespace mlcd;

namespace {

CommunityAssignment part(std::vector<CommunityId> ids) { return {std::move(ids), ElementSet::GraphVertices}; }

double vi(const CommunityAssignment& a, const CommunityAssignment& b) {
  return variation_of_information(contingency(a, b));
}

// VI = 2 H(C, C') - H(C) - H(C'), from raw label counts.
double vi_oracle(const std::vector<CommunityId>& a, const std::vector<CommunityId>& b) {
  std::map<CommunityId, double> ca, cb;
  std::map<std::pair<CommunityId, CommunityId>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    joint[{a[i], b[i]}] += 1;
  }
  auto H = [&](const auto& counts) {
    std::vector<double> v;
    for (const auto& [k, x] : counts) v.push_back(x);
    return testing::h(v);
  };
  return 2 * H(joint) - H(ca) - H(cb);
}

std::vector<CommunityId> random_partition(std::size_t n, Rng& rng) {
  std::vector<CommunityId> ids(n);
  const std::size_t k = 1 + rng.uniform_index(n);
  for (auto& x : ids) x = CommunityId(rng.uniform_index(k));
  return ids;
}

}  // namespace

TEST_CASE("contingency examples") {
  const auto n = contingency(part({0, 0, 1}), part({0, 0, 1}));
  REQUIRE(n.rows() == 2);
  REQUIRE(n.cols() == 2);
  CHECK(n.at(0, 0) == 2);
  CHECK(n.at(0, 1) == 0);
  CHECK(n.at(1, 1) == 1);

  const auto m = contingency(part({0, 0, 0, 0}), part({0, 0, 1, 1}));
  CHECK(m.rows() == 1);
  CHECK(m.counts == std::vector<std::uint64_t>{2, 2});
  CHECK(m.n == 4);

  CHECK_THROWS_AS(contingency(part({0, 1}), part({0})), DimensionError);
}

TEST_CASE("layered contingency uses shared identities") {
  LayeredAssignment ref{{{Layer::Base, "a"}, 0}, {{Layer::Base, "b"}, 1}, {{Layer::Base, "#t"}, 1}};
  LayeredAssignment test{{{Layer::First, "a"}, 4}, {{Layer::Second, "a"}, 4}, {{Layer::Second, "b"}, 5},
                         {{Layer::First, "#t"}, 5}, {{Layer::First, "zz"}, 5}};
  const auto n = contingency(ref, test);
  CHECK(n.n == 4);
  CHECK(variation_of_information(n) == 0.0);
  CHECK(contingency(ref, test, true).n == 3);

  LayeredAssignment other{{{Layer::First, "q"}, 0}};
  CHECK_THROWS_AS(contingency(ref, other), DomainError);
}

TEST_CASE("Jaccard matrix") {
  // {1,2,3} vs {2,3,4} over elements 0..4
  const auto n = contingency(part({0, 1, 1, 1, 2}), part({0, 0, 1, 1, 1}));
  const auto j = jaccard_matrix(n);
  CHECK(j.at(1, 1) == doctest::Approx(0.5));

  Rng rng(6);
  for (int round = 0; round < 20; ++round) {
    const auto c = part(random_partition(30, rng));
    const auto id = jaccard_matrix(contingency(c, c));
    for (std::size_t r = 0; r < id.rows(); ++r)
      for (std::size_t s = 0; s < id.cols(); ++s) CHECK(id.at(r, s) == (r == s ? 1.0 : 0.0));
  }

  const std::vector<CommunityId> rows{2, 0, 1}, cols{1, 0};
  const auto reordered = jaccard_matrix(n, rows, cols);
  CHECK(reordered.row_ids == rows);
  CHECK(reordered.at(2, 0) == doctest::Approx(0.5));

  std::ostringstream csv;
  write_jaccard_csv(csv, j);
  CHECK(csv.str().rfind("reference\\test,0,1\n", 0) == 0);
}

TEST_CASE("VI examples") {
  CHECK(std::abs(vi(part({0, 0, 1, 1}), part({0, 0, 0, 0})) - 1.0) < 1e-12);
  CHECK(std::abs(vi(part({0, 1, 2, 3}), part({0, 0, 0, 0})) - 2.0) < 1e-12);
  CHECK(vi(part({3, 3, 1}), part({3, 3, 1})) == 0.0);
  CHECK(vi(part({3, 3, 1}), part({0, 0, 7})) == 0.0);
}

TEST_CASE("VI against the joint-entropy oracle, symmetry and bounds") {
  Rng rng(19);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng.uniform_index(64);
    const auto a = random_partition(n, rng), b = random_partition(n, rng);
    const double ab = vi(part(a), part(b));
    CHECK(ab == vi(part(b), part(a)));
    CHECK(std::abs(ab - vi_oracle(a, b)) < 1e-10);
    CHECK(ab >= 0.0);
    CHECK(ab <= std::log2(double(n)) + 1e-12);
    CHECK(vi(part(a), part(a)) == 0.0);
  }
}

TEST_CASE("VI triangle inequality on all partitions of four elements") {
  std::vector<std::vector<std::uint32_t>> all;
  testing::for_each_partition(4, [&](const auto& p) { all.push_back(p); });
  REQUIRE(all.size() == 15);
  int violations = 0;
  for (const auto& x : all)
    for (const auto& y : all)
      for (const auto& z : all)
        if (vi(part(x), part(z)) > vi(part(x), part(y)) + vi(part(y), part(z)) + 1e-12) ++violations;
  CHECK(violations == 0);
}

TEST_CASE("oracle accuracy") {
  const AlignmentSet truth(std::vector<AlignedPair>{{"a", "a"}, {"b", "b"}, {"c", "c"}, {"d", "d"}, {"e", "e"}});
  const SeedSet seeds(std::vector<AlignedPair>{{"e", "e"}});
  LayeredAssignment c;
  for (const char* l : {"a", "b", "c", "d", "e"}) {
    c[{Layer::First, l}] = 1;
    c[{Layer::Second, l}] = 1;
  }
  c[{Layer::Second, "d"}] = 2;
  CHECK(oracle_accuracy(truth, seeds, c) == 0.75);

  // Relabeling communities does not change the score.
  LayeredAssignment relabeled;
  for (const auto& [k, v] : c) relabeled[k] = 10 - v;
  CHECK(oracle_accuracy(truth, seeds, relabeled) == 0.75);

  LayeredAssignment apart;
  for (const auto& [k, v] : c) apart[k] = k.layer == Layer::First ? 0 : 1;
  CHECK(oracle_accuracy(truth, seeds, apart) == 0.0);

  CHECK_THROWS_AS(oracle_accuracy(truth, SeedSet(std::vector<AlignedPair>(truth.pairs().begin(), truth.pairs().end())), c),
                  DomainError);
}

TEST_CASE("replicate_base") {
  const LayeredAssignment base{{{Layer::Base, "a"}, 2}};
  const auto r = replicate_base(base);
  CHECK(r.size() == 2);
  CHECK(r.at({Layer::First, "a"}) == 2);
  CHECK(r.at({Layer::Second, "a"}) == 2);
}
