#include "mlcd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mlcd/error.hpp"
#include "mlcd/text.hpp"

namespace mlcd {

namespace {

ContingencyMatrix from_pairs(const std::vector<std::pair<CommunityId, CommunityId>>& pairs) {
  if (pairs.empty()) throw DomainError("partitions share no elements");
  ContingencyMatrix m;
  for (const auto& [a, b] : pairs) {
    m.row_ids.push_back(a);
    m.col_ids.push_back(b);
  }
  auto unique_sorted = [](std::vector<CommunityId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(m.row_ids);
  unique_sorted(m.col_ids);
  m.counts.assign(m.rows() * m.cols(), 0);
  m.row_sums.assign(m.rows(), 0);
  m.col_sums.assign(m.cols(), 0);
  for (const auto& [a, b] : pairs) {
    const auto i = std::size_t(std::lower_bound(m.row_ids.begin(), m.row_ids.end(), a) - m.row_ids.begin());
    const auto j = std::size_t(std::lower_bound(m.col_ids.begin(), m.col_ids.end(), b) - m.col_ids.begin());
    ++m.counts[i * m.cols() + j];
    ++m.row_sums[i];
    ++m.col_sums[j];
  }
  m.n = pairs.size();
  return m;
}

}  // namespace

ContingencyMatrix ContingencyMatrix::transposed() const {
  ContingencyMatrix t;
  t.row_ids = col_ids;
  t.col_ids = row_ids;
  t.row_sums = col_sums;
  t.col_sums = row_sums;
  t.n = n;
  t.counts.resize(counts.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) t.counts[j * rows() + i] = at(i, j);
  }
  return t;
}

ContingencyMatrix contingency(const CommunityAssignment& reference, const CommunityAssignment& test) {
  if (reference.size() != test.size()) {
    throw DimensionError("assignments cover different element sets");
  }
  std::vector<std::pair<CommunityId, CommunityId>> pairs;
  pairs.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) pairs.emplace_back(reference.comm[i], test.comm[i]);
  return from_pairs(pairs);
}

LayeredAssignment replicate_base(const LayeredAssignment& assignment) {
  LayeredAssignment out;
  for (const auto& [key, c] : assignment) {
    if (key.layer == Layer::Base) {
      out[{Layer::First, key.label}] = c;
      out[{Layer::Second, key.label}] = c;
    } else {
      out[key] = c;
    }
  }
  return out;
}

ContingencyMatrix contingency(const LayeredAssignment& reference, const LayeredAssignment& test,
                              bool users_only) {
  const bool ref_base = std::any_of(reference.begin(), reference.end(),
                                    [](const auto& e) { return e.first.layer == Layer::Base; });
  const bool test_base = std::any_of(test.begin(), test.end(),
                                     [](const auto& e) { return e.first.layer == Layer::Base; });
  // Both on the base graph: compare directly. Otherwise lift base-layer
  // assignments onto the two layers.
  const LayeredAssignment ref = ref_base && !test_base ? replicate_base(reference) : reference;
  const LayeredAssignment tst = test_base && !ref_base ? replicate_base(test) : test;

  std::vector<std::pair<CommunityId, CommunityId>> pairs;
  auto it = ref.begin();
  auto jt = tst.begin();
  while (it != ref.end() && jt != tst.end()) {
    if (it->first < jt->first) {
      ++it;
    } else if (jt->first < it->first) {
      ++jt;
    } else {
      if (!users_only || kind_of(it->first.label) == VertexKind::User) {
        pairs.emplace_back(it->second, jt->second);
      }
      ++it;
      ++jt;
    }
  }
  return from_pairs(pairs);
}

JaccardMatrix jaccard_matrix(const ContingencyMatrix& n) {
  return jaccard_matrix(n, n.row_ids, n.col_ids);
}

JaccardMatrix jaccard_matrix(const ContingencyMatrix& n, std::span<const CommunityId> row_order,
                             std::span<const CommunityId> col_order) {
  auto index_of = [](const std::vector<CommunityId>& ids, CommunityId id) {
    const auto pos = std::lower_bound(ids.begin(), ids.end(), id);
    if (pos == ids.end() || *pos != id) throw LookupError("community " + std::to_string(id) + " not in matrix");
    return std::size_t(pos - ids.begin());
  };
  JaccardMatrix j;
  j.row_ids.assign(row_order.begin(), row_order.end());
  j.col_ids.assign(col_order.begin(), col_order.end());
  j.values.reserve(j.rows() * j.cols());
  for (CommunityId r : row_order) {
    const std::size_t i = index_of(n.row_ids, r);
    for (CommunityId c : col_order) {
      const std::size_t k = index_of(n.col_ids, c);
      const std::uint64_t nij = n.at(i, k);
      j.values.push_back(double(nij) / double(n.row_sums[i] + n.col_sums[k] - nij));
    }
  }
  return j;
}

double variation_of_information(const ContingencyMatrix& n) {
  std::vector<double> terms;
  const double total = double(n.n);
  for (std::size_t i = 0; i < n.rows(); ++i) {
    for (std::size_t j = 0; j < n.cols(); ++j) {
      const std::uint64_t nij = n.at(i, j);
      if (nij == 0) continue;
      const double pij = double(nij) / total;
      const double a = std::log2(double(nij) / double(n.row_sums[i]));
      const double b = std::log2(double(nij) / double(n.col_sums[j]));
      terms.push_back(-pij * (a + b));
    }
  }
  std::sort(terms.begin(), terms.end());
  double vi = 0.0;
  for (double t : terms) vi += t;
  return vi;
}

double oracle_accuracy(const AlignmentSet& truth, const SeedSet& seeds,
                       const LayeredAssignment& assignment) {
  std::size_t evaluated = 0;
  std::size_t hits = 0;
  auto lookup = [&](Layer layer, const std::string& label) {
    const auto it = assignment.find({layer, label});
    if (it == assignment.end()) {
      throw LookupError("no community for '" + label + "' in layer " + std::string(layer_name(layer)));
    }
    return it->second;
  };
  for (const AlignedPair& p : truth.pairs()) {
    if (seeds.contains(p)) continue;
    ++evaluated;
    if (lookup(Layer::First, p.first) == lookup(Layer::Second, p.second)) ++hits;
  }
  if (evaluated == 0) throw DomainError("oracle accuracy: every truth pair is a seed");
  return double(hits) / double(evaluated);
}

void write_jaccard_csv(std::ostream& out, const JaccardMatrix& j) {
  out << "reference\\test";
  for (CommunityId c : j.col_ids) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < j.rows(); ++r) {
    out << j.row_ids[r];
    for (std::size_t c = 0; c < j.cols(); ++c) out << ',' << text::format_double(j.at(r, c));
    out << '\n';
  }
}

}  // namespace mlcd
