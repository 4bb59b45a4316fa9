#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mlcd/error.hpp"
#include "mlcd/experiments.hpp"
#include "mlcd/metrics.hpp"
#include "mlcd/random.hpp"
#include "mlcd/text.hpp"

namespace mlcd {

std::string_view reference_name(ReferenceMode m) {
  return m == ReferenceMode::Base ? "base" : "pair-full-seeds";
}

ReferenceMode parse_reference(std::string_view text) {
  if (text == "base") return ReferenceMode::Base;
  if (text == "pair-full-seeds") return ReferenceMode::PairFullSeeds;
  throw ParameterError("unknown reference mode '" + std::string(text) + "'");
}

namespace {

// Stream tags for derive_seed.
enum : std::uint64_t { kSampleStream = 1, kSeedStream = 2, kDetectStream = 3, kBaseStream = 4 };

struct RowKey {
  std::size_t method, overlap, strategy, fraction;
  int trial;

  auto tie() const { return std::tie(method, overlap, strategy, fraction, trial); }
};

struct KeyedRow {
  RowKey key;
  SweepRow row;
};

struct KeyedFailure {
  RowKey key;
  SweepFailure failure;
};

struct GroupOutput {
  std::vector<KeyedRow> rows;
  std::vector<KeyedFailure> failures;
};

std::string describe(const SweepConfig& c, const RowKey& k, double overlap) {
  std::ostringstream s;
  s << method_name(c.methods[k.method]) << ",overlap=" << overlap
    << "," << strategy_name(c.strategies[k.strategy]) << ",seeds=" << c.seed_fractions[k.fraction]
    << ",trial=" << k.trial;
  return s.str();
}

struct Shared {
  std::optional<MultilayerDetection> base_reference;
  std::optional<PairScorer> degree, pagerank;
};

// All rows for one (overlap, trial): they share the sampled layers, the
// references and the detector seed.
GroupOutput run_group(const SweepConfig& c, const Shared& shared, std::size_t oi, int trial) {
  GroupOutput out;
  const bool sampled = c.base.has_value();

  auto fail_all = [&](const std::string& reason, double overlap) {
    for (std::size_t mi = 0; mi < c.methods.size(); ++mi)
      for (std::size_t si = 0; si < c.strategies.size(); ++si)
        for (std::size_t fi = 0; fi < c.seed_fractions.size(); ++fi) {
          RowKey key{mi, oi, si, fi, trial};
          out.failures.push_back({key, {describe(c, key, overlap), reason}});
        }
  };

  Graph sampled1, sampled2;
  AlignmentSet sampled_truth;
  double overlap = 0.0;
  if (sampled) {
    overlap = c.overlaps[oi];
    try {
      const std::size_t m = c.layer_size ? c.layer_size : c.base->size() / 2;
      auto sample = sample_overlap(
          *c.base, {overlap, m, derive_seed(c.rng_seed, kSampleStream, oi, std::uint64_t(trial))});
      sampled1 = std::move(sample.layer1);
      sampled2 = std::move(sample.layer2);
      sampled_truth = std::move(sample.truth);
    } catch (const Error& e) {
      fail_all(e.what(), overlap);
      return out;
    }
  }
  const Graph& g1 = sampled ? sampled1 : *c.layer1;
  const Graph& g2 = sampled ? sampled2 : *c.layer2;
  const AlignmentSet& truth = sampled ? sampled_truth : *c.truth;
  if (!sampled) {
    overlap = double(truth.size()) / double(std::max<std::size_t>(1, std::min(g1.size(), g2.size())));
  }

  std::optional<PairScorer> layer_degree, layer_pagerank;
  const PairScorer* degree = shared.degree ? &*shared.degree : nullptr;
  const PairScorer* pr = shared.pagerank ? &*shared.pagerank : nullptr;
  if (c.centrality == CentralitySource::Layers) {
    layer_degree = PairScorer::paired(degree_scores(g1), degree_scores(g2));
    layer_pagerank = PairScorer::paired(pagerank_scores(g1, c.pipeline.pagerank),
                                        pagerank_scores(g2, c.pipeline.pagerank));
    degree = &*layer_degree;
    pr = &*layer_pagerank;
  }

  PipelineOptions opts = c.pipeline;
  opts.detect.rng_seed = derive_seed(c.rng_seed, kDetectStream, oi, std::uint64_t(trial));

  for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
    const Method method = c.methods[mi];
    LayeredAssignment reference;
    try {
      if (c.reference == ReferenceMode::Base) {
        reference = shared.base_reference->assignment;
      } else {
        reference = detect_multilayer(method, g1, g2, as_seeds(truth), opts).assignment;
      }
    } catch (const Error& e) {
      for (std::size_t si = 0; si < c.strategies.size(); ++si)
        for (std::size_t fi = 0; fi < c.seed_fractions.size(); ++fi) {
          RowKey key{mi, oi, si, fi, trial};
          out.failures.push_back({key, {describe(c, key, overlap), std::string("reference: ") + e.what()}});
        }
      continue;
    }

    for (std::size_t si = 0; si < c.strategies.size(); ++si) {
      const SeedStrategy strategy = c.strategies[si];
      for (std::size_t fi = 0; fi < c.seed_fractions.size(); ++fi) {
        const RowKey key{mi, oi, si, fi, trial};
        try {
          const PairScorer* scorer = strategy == SeedStrategy::Degree     ? degree
                                     : strategy == SeedStrategy::PageRank ? pr
                                                                          : nullptr;
          const SeedSet seeds =
              select_seeds(truth, strategy, c.seed_fractions[fi],
                           derive_seed(c.rng_seed, kSeedStream, oi, std::uint64_t(trial)), scorer);
          const MultilayerDetection found = detect_multilayer(method, g1, g2, seeds, opts);
          SweepRow row;
          row.method = method;
          row.overlap = overlap;
          row.strategy = strategy;
          row.seed_fraction = c.seed_fractions[fi];
          row.trial = trial;
          row.vi_bits = variation_of_information(contingency(reference, found.assignment, c.users_only));
          if (seeds.size() < truth.size()) row.oracle_accuracy = oracle_accuracy(truth, seeds, found.assignment);
          row.codelength_bits = found.codelength.bits;
          row.num_communities = found.num_communities;
          out.rows.push_back({key, row});
        } catch (const Error& e) {
          out.failures.push_back({key, {describe(c, key, overlap), e.what()}});
        }
      }
    }
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& c, int jobs) {
  const bool sampled = c.base.has_value();
  if (!sampled && !(c.layer1 && c.layer2 && c.truth)) {
    throw ParameterError("sweep needs a base graph or layer1, layer2 and truth");
  }
  if (c.trials < 0) throw ParameterError("trials must be non-negative");
  if (!sampled && c.reference == ReferenceMode::Base) {
    throw ParameterError("reference mode 'base' needs a base graph");
  }
  if (!sampled && c.centrality == CentralitySource::Base) {
    throw ParameterError("base centrality needs a base graph; use \"layers\"");
  }
  SweepResult result;
  if (c.methods.empty() || c.strategies.empty() || c.seed_fractions.empty() || c.trials == 0) return result;
  const std::size_t num_overlaps = sampled ? c.overlaps.size() : 1;
  if (num_overlaps == 0) return result;

  Shared shared;
  if (sampled && c.reference == ReferenceMode::Base) {
    DetectOptions d = c.pipeline.detect;
    d.rng_seed = derive_seed(c.rng_seed, kBaseStream);
    shared.base_reference = detect_single(*c.base, d);
  }
  if (sampled && c.centrality == CentralitySource::Base) {
    shared.degree = PairScorer::single(degree_scores(*c.base));
    shared.pagerank = PairScorer::single(pagerank_scores(*c.base, c.pipeline.pagerank));
  }

  std::vector<std::pair<std::size_t, int>> groups;
  for (std::size_t oi = 0; oi < num_overlaps; ++oi)
    for (int t = 0; t < c.trials; ++t) groups.emplace_back(oi, t);

  std::vector<GroupOutput> outputs(groups.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) {
      try {
        outputs[g] = run_group(c, shared, groups[g].first, groups[g].second);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, int(groups.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<KeyedRow> rows;
  std::vector<KeyedFailure> failures;
  for (auto& o : outputs) {
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.key.tie() < b.key.tie(); });
  std::sort(failures.begin(), failures.end(),
            [](const auto& a, const auto& b) { return a.key.tie() < b.key.tie(); });
  for (auto& r : rows) result.rows.push_back(std::move(r.row));
  for (auto& f : failures) result.failures.push_back(std::move(f.failure));
  return result;
}

namespace {

template <class T, class F>
std::vector<T> parse_list(const nlohmann::json& doc, const char* key, F&& convert) {
  std::vector<T> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ParameterError(std::string("config: \"") + key + "\" must be an array");
  for (const auto& v : arr) out.push_back(convert(v));
  return out;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text, const std::string& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("config: expected a JSON object");

  static const std::set<std::string> known = {
      "base_graph", "layer1",      "layer2",     "truth",         "methods",       "overlaps",
      "strategies", "seed_fractions", "trials",  "rng_seed",      "reference",     "relax_rate",
      "omega",      "combine",     "layer_size", "detect_trials", "users_only",    "centrality",
      "damping"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ParameterError("config: unknown key \"" + key + "\"");
  }

  SweepConfig c;
  try {
    if (doc.contains("base_graph")) {
      const auto& b = doc.at("base_graph");
      if (b.is_string()) {
        c.base = read_graph_file(resolve(base_dir, b.get<std::string>()));
      } else if (b.is_object() && b.contains("planted")) {
        const auto& p = b.at("planted");
        PlantedPartitionSpec spec;
        spec.blocks = p.value("blocks", spec.blocks);
        spec.block_size = p.value("block_size", spec.block_size);
        spec.p_in = p.value("p_in", spec.p_in);
        spec.p_out = p.value("p_out", spec.p_out);
        spec.seed = p.value("seed", spec.seed);
        c.base = planted_partition(spec);
      } else {
        throw ParameterError("config: base_graph must be a path or {\"planted\": {...}}");
      }
    }
    if (doc.contains("layer1") || doc.contains("layer2") || doc.contains("truth")) {
      if (c.base) throw ParameterError("config: give either base_graph or layer1/layer2/truth");
      if (!(doc.contains("layer1") && doc.contains("layer2") && doc.contains("truth"))) {
        throw ParameterError("config: layer1, layer2 and truth go together");
      }
      c.layer1 = read_graph_file(resolve(base_dir, doc.at("layer1").get<std::string>()));
      c.layer2 = read_graph_file(resolve(base_dir, doc.at("layer2").get<std::string>()));
      c.truth = AlignmentSet(read_pairs_file(resolve(base_dir, doc.at("truth").get<std::string>())));
      validate_pairs(*c.truth, *c.layer1, *c.layer2);
      c.centrality = CentralitySource::Layers;
    }
    if (!c.base && !c.layer1) throw ParameterError("config: need base_graph or layer1/layer2/truth");

    c.methods = parse_list<Method>(doc, "methods", [](const auto& v) { return parse_method(v.template get<std::string>()); });
    c.overlaps = parse_list<double>(doc, "overlaps", [](const auto& v) { return v.template get<double>(); });
    c.strategies = parse_list<SeedStrategy>(doc, "strategies", [](const auto& v) { return parse_strategy(v.template get<std::string>()); });
    c.seed_fractions = parse_list<double>(doc, "seed_fractions", [](const auto& v) { return v.template get<double>(); });
    c.trials = doc.value("trials", 1);
    c.rng_seed = doc.value("rng_seed", std::uint64_t{0});
    if (doc.contains("reference")) c.reference = parse_reference(doc.at("reference").get<std::string>());
    if (doc.contains("centrality")) {
      const auto s = doc.at("centrality").get<std::string>();
      if (s == "base") c.centrality = CentralitySource::Base;
      else if (s == "layers") c.centrality = CentralitySource::Layers;
      else throw ParameterError("config: centrality must be \"base\" or \"layers\"");
    }
    c.pipeline.relax_rate = doc.value("relax_rate", c.pipeline.relax_rate);
    c.pipeline.omega = doc.value("omega", c.pipeline.omega);
    if (doc.contains("combine")) c.pipeline.combine = parse_combine(doc.at("combine").get<std::string>());
    c.pipeline.detect.trials = doc.value("detect_trials", c.pipeline.detect.trials);
    c.pipeline.pagerank.damping = doc.value("damping", c.pipeline.pagerank.damping);
    c.layer_size = doc.value("layer_size", std::size_t{0});
    c.users_only = doc.value("users_only", false);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  RelaxRate check(c.pipeline.relax_rate);
  (void)check;
  for (double f : c.overlaps)
    if (!(f > 0.0 && f <= 1.0)) throw ParameterError("config: overlaps must lie in (0, 1]");
  for (double f : c.seed_fractions)
    if (!(f >= 0.0 && f <= 1.0)) throw ParameterError("config: seed_fractions must lie in [0, 1]");
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "method,overlap,strategy,seed_fraction,trial,vi_bits,oracle_accuracy,codelength_bits,num_communities\n";
  for (const SweepRow& r : rows) {
    out << method_name(r.method) << ',' << text::format_double(r.overlap) << ','
        << strategy_name(r.strategy) << ',' << text::format_double(r.seed_fraction) << ',' << r.trial
        << ',' << text::format_fixed(r.vi_bits, 10) << ','
        << (r.oracle_accuracy ? text::format_fixed(*r.oracle_accuracy, 10) : std::string()) << ','
        << text::format_fixed(r.codelength_bits, 10) << ',' << r.num_communities << '\n';
  }
}

}  // namespace mlcd
