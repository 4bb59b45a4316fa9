#pragma once

// Test-only oracles and fixtures. Nothing here calls the optimizer or the
// library's codelength/PageRank code.

#include <cmath>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "mlcd/graph.hpp"
#include "mlcd/random.hpp"

namespace testing {

using WeightedEdge = std::tuple<std::string, std::string, double>;

inline mlcd::Graph make_graph(std::initializer_list<WeightedEdge> edges,
                              std::initializer_list<std::string> isolated = {}) {
  mlcd::GraphBuilder b;
  for (const auto& label : isolated) b.add_vertex(label);
  for (const auto& [u, v, w] : edges) b.add_edge(u, v, w);
  return std::move(b).build();
}

inline std::string vname(std::size_t i) {
  std::string s = std::to_string(i);
  return "v" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

inline mlcd::Graph clique_pair(std::size_t k) {
  mlcd::GraphBuilder b;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) b.add_edge(vname(c * k + i), vname(c * k + j), 1.0);
  b.add_edge(vname(k - 1), vname(k), 1.0);
  return std::move(b).build();
}

inline mlcd::Graph random_weighted_graph(std::size_t n, double p, mlcd::Rng& rng) {
  mlcd::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex(vname(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) b.add_edge(vname(i), vname(j), 0.5 + 2.5 * rng.uniform01());
  return std::move(b).build();
}

/// Every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> a(n, 0), maxv(n, 0);
  if (n == 0) {
    fn(a);
    return;
  }
  while (true) {
    fn(a);
    std::size_t i = n - 1;
    while (i > 0 && a[i] == maxv[i - 1] + 1) --i;
    if (i == 0) return;
    ++a[i];
    for (std::size_t j = i; j < n; ++j) {
      if (j > i) a[j] = 0;
      maxv[j] = std::max(maxv[j - 1], a[j]);
    }
  }
}

inline double h(const std::vector<double>& probs) {
  double total = 0.0;
  for (double x : probs) total += x;
  double out = 0.0;
  for (double x : probs)
    if (x > 0.0) out -= (x / total) * std::log2(x / total);
  return out;
}

/// Two-level map equation written directly as
/// q H(Q) + sum_m p_m H(P^m) for an undirected graph.
inline double reference_codelength(const mlcd::Graph& g, const std::vector<std::uint32_t>& module) {
  const double two_w = 2.0 * g.total_weight();
  std::map<std::uint32_t, double> exit, flow;
  std::map<std::uint32_t, std::vector<double>> members;
  for (mlcd::VertexId v = 0; v < g.size(); ++v) {
    const double p = g.strength(v) / two_w;
    flow[module[v]] += p;
    members[module[v]].push_back(p);
    exit[module[v]] += 0.0;
  }
  for (const auto& e : g.edges()) {
    if (module[e.u] != module[e.v]) {
      exit[module[e.u]] += e.w / two_w;
      exit[module[e.v]] += e.w / two_w;
    }
  }
  std::vector<double> q_parts;
  double q = 0.0;
  for (const auto& [m, x] : exit) {
    q_parts.push_back(x);
    q += x;
  }
  double L = q > 0.0 ? q * h(q_parts) : 0.0;
  for (const auto& [m, ps] : members) {
    std::vector<double> codebook = ps;
    codebook.push_back(exit[m]);
    const double pm = exit[m] + flow[m];
    if (pm > 0.0) L += pm * h(codebook);
  }
  return L;
}

/// Dense power iteration; independent PageRank oracle for small graphs.
inline std::vector<double> dense_pagerank(const std::vector<std::vector<double>>& w, double d, int iters) {
  const std::size_t n = w.size();
  std::vector<double> p(n, 1.0 / double(n)), next(n);
  for (int it = 0; it < iters; ++it) {
    std::fill(next.begin(), next.end(), (1.0 - d) / double(n));
    for (std::size_t u = 0; u < n; ++u) {
      double s = 0.0;
      for (double x : w[u]) s += x;
      for (std::size_t v = 0; v < n; ++v) next[v] += s > 0.0 ? d * p[u] * w[u][v] / s : d * p[u] / double(n);
    }
    p = next;
  }
  return p;
}

}  // namespace testing
