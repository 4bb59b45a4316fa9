#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlcd/assignment.hpp"
#include "mlcd/flow.hpp"
#include "mlcd/graph.hpp"
#include "mlcd/mapeq.hpp"
#include "mlcd/multilayer.hpp"
#include "mlcd/seedsel.hpp"

namespace mlcd {

// ---------------------------------------------------------------------------
// Synthetic base graphs

struct PlantedPartitionSpec {
  std::size_t blocks = 10;
  std::size_t block_size = 100;
  double p_in = 0.1;
  double p_out = 0.005;
  std::uint64_t seed = 1;
};

/// Unit-weight planted-partition graph. Vertex labels are "u" plus a
/// zero-padded index, so vertex id order equals generation order and vertex
/// v belongs to block v / block_size.
Graph planted_partition(const PlantedPartitionSpec& spec);

// ---------------------------------------------------------------------------
// Overlap sampling

struct OverlapSpec {
  double fraction = 1.0;       ///< shared fraction f in (0, 1]
  std::size_t layer_size = 0;  ///< vertices per layer m
  std::uint64_t rng_seed = 0;
};

struct OverlapSample {
  Graph layer1;
  Graph layer2;
  AlignmentSet truth;  ///< (v, v) for every shared user vertex
};

std::size_t shared_count(double fraction, std::size_t layer_size);

/// Two vertex-induced subgraphs of m vertices each sharing exactly
/// ceil(f * m) vertices, all chosen uniformly at random.
OverlapSample sample_overlap(const Graph& base, const OverlapSpec& spec);

// ---------------------------------------------------------------------------
// Detection pipeline

struct PipelineOptions {
  double omega = 1.0;
  double relax_rate = 0.85;
  Combine combine = Combine::Sum;
  PageRankOptions pagerank{};
  DetectOptions detect{};
};

struct MultilayerDetection {
  LayeredAssignment assignment;
  Codelength codelength;
  std::size_t num_communities = 0;
};

/// Build the chosen construction, run the detector on it and project the
/// result back onto (layer, label) identities.
MultilayerDetection detect_multilayer(Method method, const Graph& g1, const Graph& g2,
                                      const SeedSet& seeds, const PipelineOptions& opts);

/// Detector on a single graph, keyed by (Base, label).
MultilayerDetection detect_single(const Graph& g, const DetectOptions& opts);

// ---------------------------------------------------------------------------
// Sweeps

enum class ReferenceMode : std::uint8_t { Base, PairFullSeeds };
std::string_view reference_name(ReferenceMode m);
ReferenceMode parse_reference(std::string_view text);

/// Where Degree/PageRank centralities come from: the base graph (single
/// table) or the two layers (averaged per pair).
enum class CentralitySource : std::uint8_t { Base, Layers };

struct SweepConfig {
  // Either a base graph to sample from, or two fixed layers plus truth.
  std::optional<Graph> base;
  std::optional<Graph> layer1;
  std::optional<Graph> layer2;
  std::optional<AlignmentSet> truth;

  std::vector<Method> methods;
  std::vector<double> overlaps;
  std::vector<SeedStrategy> strategies;
  std::vector<double> seed_fractions;
  int trials = 1;
  std::uint64_t rng_seed = 0;
  ReferenceMode reference = ReferenceMode::PairFullSeeds;
  CentralitySource centrality = CentralitySource::Base;
  std::size_t layer_size = 0;  ///< 0: half the base graph
  bool users_only = false;
  PipelineOptions pipeline{};
};

struct SweepRow {
  Method method = Method::Aggregation;
  double overlap = 0.0;
  SeedStrategy strategy = SeedStrategy::Random;
  double seed_fraction = 0.0;
  int trial = 0;
  double vi_bits = 0.0;
  std::optional<double> oracle_accuracy;  ///< empty when every truth pair is a seed
  double codelength_bits = 0.0;
  std::size_t num_communities = 0;
};

struct SweepFailure {
  std::string row;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> failures;
};

/// Runs every (method, overlap, strategy, seed fraction, trial) combination.
/// Rows come back in that nesting order whatever `jobs` is.
SweepResult run_sweep(const SweepConfig& config, int jobs = 1);

/// Parses the JSON config; relative paths resolve against `base_dir`.
SweepConfig parse_sweep_config(const std::string& json_text, const std::string& base_dir);
SweepConfig load_sweep_config(const std::string& path);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace mlcd
