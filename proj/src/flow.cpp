#include "mlcd/flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "mlcd/error.hpp"
#include "mlcd/kernels.hpp"

namespace mlcd {

namespace {

// Column-major copy of the transition: row v lists (u, P(u->v)).
struct Transposed {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> sources;
  std::vector<double> probs;

  kernels::CsrView view() const { return {offsets, sources, probs}; }
};

Transposed transpose(const Transition& t) {
  const std::size_t n = t.size();
  Transposed out;
  out.offsets.assign(n + 1, 0);
  for (std::uint32_t target : t.targets) ++out.offsets[target + 1];
  std::partial_sum(out.offsets.begin(), out.offsets.end(), out.offsets.begin());
  out.sources.resize(t.num_arcs());
  out.probs.resize(t.num_arcs());
  std::vector<std::uint32_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t k = t.offsets[u]; k < t.offsets[u + 1]; ++k) {
      const std::uint32_t slot = cursor[t.targets[k]]++;
      out.sources[slot] = u;
      out.probs[slot] = t.probs[k];
    }
  }
  return out;
}

}  // namespace

StationaryDistribution pagerank(const Transition& t, const PageRankOptions& opts,
                                std::span<const double> initial) {
  const std::size_t n = t.size();
  if (n == 0) throw DomainError("pagerank needs at least one vertex");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) {
    throw ParameterError("damping must lie in (0, 1]");
  }
  if (!(opts.tolerance > 0.0)) throw ParameterError("tolerance must be positive");

  const Transposed tt = transpose(t);
  std::vector<std::uint32_t> dangling;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (t.is_dangling(v)) dangling.push_back(v);
  }

  std::vector<double> p(n, 1.0 / double(n));
  if (!initial.empty()) {
    if (initial.size() != n) throw DimensionError("initial vector has the wrong length");
    p.assign(initial.begin(), initial.end());
    const double s = kernels::sum(p);
    if (!(s > 0.0)) throw ParameterError("initial vector must have positive mass");
    kernels::affine(p, 1.0 / s, 0.0);
  }
  std::vector<double> next(n);

  const double d = opts.damping;
  const double inv_n = 1.0 / double(n);
  double residual = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    double dangling_mass = 0.0;
    for (std::uint32_t v : dangling) dangling_mass += p[v];
    kernels::spmv(tt.view(), p, next);
    kernels::affine(next, d, (d * dangling_mass + (1.0 - d)) * inv_n);
    const double s = kernels::sum(next);
    kernels::affine(next, 1.0 / s, 0.0);
    residual = kernels::l1_distance(next, p);
    p.swap(next);
    if (residual < opts.tolerance) {
      return {std::move(p), d, opts.tolerance, iter};
    }
  }
  std::ostringstream msg;
  msg << "pagerank did not converge in " << opts.max_iter << " iterations (residual " << residual
      << ")";
  throw ConvergenceError(msg.str(), residual);
}

StationaryDistribution pagerank(const Graph& g, const PageRankOptions& opts) {
  return pagerank(left_normalize(g), opts);
}

StationaryDistribution pagerank(const FlowGraph& f, const PageRankOptions& opts) {
  return pagerank(f.transition, opts);
}

std::vector<CommunityId> community_pagerank_order(const CommunityAssignment& assignment,
                                                  std::span<const double> p) {
  if (assignment.size() != p.size()) {
    throw DimensionError("assignment and distribution cover different vertex sets");
  }
  std::map<CommunityId, double> mass;
  for (std::size_t v = 0; v < p.size(); ++v) mass[assignment.comm[v]] += p[v];
  std::vector<std::pair<CommunityId, double>> ranked(mass.begin(), mass.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<CommunityId> order;
  order.reserve(ranked.size());
  for (const auto& entry : ranked) order.push_back(entry.first);
  return order;
}

}  // namespace mlcd
