#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "mlcd/error.hpp"
#include "mlcd/experiments.hpp"
#include "mlcd/flow.hpp"
#include "mlcd/graph.hpp"
#include "mlcd/kernels.hpp"
#include "mlcd/metrics.hpp"
#include "mlcd/multilayer.hpp"
#include "mlcd/seedsel.hpp"
#include "mlcd/text.hpp"

namespace mlcd::cli {

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

const char* kFormats = R"(File formats:
  edge list     TSV  src<TAB>dst<TAB>etype<TAB>count   ("//" starts a comment;
                     a leading '#' is a hashtag label, not a comment)
  graph         JSON {"vertices":[{"label":..,"kind":"user|hashtag"}],"edges":[[u,v,w]]}
  pairs         TSV  label_layer1<TAB>label_layer2     (truth and seed files)
  scores        TSV  label<TAB>score
  assignment    TSV  label<TAB>layer<TAB>community_id  (layer 0 = single graph, 1, 2)
  sweep output  CSV  method,overlap,strategy,seed_fraction,trial,vi_bits,
                     oracle_accuracy,codelength_bits,num_communities
)";

// Writes to the named file, or to `fallback` when the name is empty.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write(out);
}

struct Options {
  std::string isa = "auto";

  // shared
  std::string input, out;
  std::optional<std::uint64_t> rng_seed;

  // pagerank
  double damping = 0.85, tol = 1e-10;
  int max_iter = 1000;

  // select-seeds
  std::string strategy, truth, scores, scores1, scores2;
  double fraction = 0.0;

  // sample-overlap
  std::size_t layer_size = 0;
  std::string out_prefix;

  // detect
  std::string method, layer1, layer2, seeds, combine = "sum";
  int trials = 10;
  double omega = 1.0, relax_rate = 0.85;

  // metrics
  std::string reference, test, jaccard;
  bool users_only = false;

  // sweep
  std::string config;
  int jobs = 1;
};

int cmd_ingest(const Options& o, std::ostream& out) {
  const Graph g = read_graph_file(o.input);
  emit(o.out, out, [&](std::ostream& s) { write_graph_json(s, g); });
  return 0;
}

int cmd_pagerank(const Options& o, std::ostream& out) {
  const Graph g = read_graph_file(o.input);
  if (g.size() == 0) throw DomainError("graph is empty");
  const auto pr = pagerank(g, {o.damping, o.tol, o.max_iter});
  std::vector<VertexId> order(g.size());
  for (VertexId v = 0; v < g.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return pr.p[a] > pr.p[b]; });
  emit(o.out, out, [&](std::ostream& s) {
    for (VertexId v : order) s << g.label(v) << '\t' << text::format_double(pr.p[v]) << '\n';
  });
  return 0;
}

int cmd_select_seeds(const Options& o, std::ostream& out) {
  const AlignmentSet truth(read_pairs_file(o.truth));
  const SeedStrategy strategy = parse_strategy(o.strategy);
  std::optional<PairScorer> scorer;
  if (!o.scores.empty()) {
    scorer = PairScorer::single(read_score_table_file(o.scores));
  } else if (!o.scores1.empty() || !o.scores2.empty()) {
    if (o.scores1.empty() || o.scores2.empty()) throw ParameterError("--scores1 and --scores2 go together");
    scorer = PairScorer::paired(read_score_table_file(o.scores1), read_score_table_file(o.scores2));
  } else if (strategy != SeedStrategy::Random) {
    throw ParameterError("strategy '" + o.strategy + "' needs --scores or --scores1/--scores2");
  }
  const SeedSet seeds = select_seeds(truth, strategy, o.fraction, *o.rng_seed, scorer ? &*scorer : nullptr);
  emit(o.out, out, [&](std::ostream& s) { write_pairs(s, seeds.pairs()); });
  return 0;
}

int cmd_sample_overlap(const Options& o, std::ostream& out) {
  const Graph base = read_graph_file(o.input);
  const OverlapSample sample = sample_overlap(base, {o.fraction, o.layer_size, *o.rng_seed});
  write_graph_file(o.out_prefix + ".layer1.json", sample.layer1);
  write_graph_file(o.out_prefix + ".layer2.json", sample.layer2);
  write_pairs_file(o.out_prefix + ".truth.tsv", sample.truth.pairs());
  out << "shared=" << shared_count(o.fraction, o.layer_size) << "\ntruth_pairs=" << sample.truth.size() << '\n';
  return 0;
}

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
  DetectOptions d;
  d.trials = o.trials;
  d.rng_seed = o.rng_seed.value_or(42);
  MultilayerDetection found;
  if (o.method == "single") {
    if (o.input.empty()) throw ParameterError("--method single needs --input");
    found = detect_single(read_graph_file(o.input), d);
  } else {
    if (o.layer1.empty() || o.layer2.empty()) throw ParameterError("--layer1 and --layer2 are required");
    const Method method = parse_method(o.method);
    const Graph g1 = read_graph_file(o.layer1);
    const Graph g2 = read_graph_file(o.layer2);
    const SeedSet seeds(o.seeds.empty() ? std::vector<AlignedPair>{} : read_pairs_file(o.seeds));
    PipelineOptions p;
    p.omega = o.omega;
    p.relax_rate = o.relax_rate;
    p.combine = parse_combine(o.combine);
    p.pagerank.damping = o.damping;
    p.detect = d;
    found = detect_multilayer(method, g1, g2, seeds, p);
  }
  emit(o.out, out, [&](std::ostream& s) { write_assignment(s, found.assignment); });
  std::ostream& summary = o.out.empty() ? err : out;
  summary << "codelength_bits=" << text::format_fixed(found.codelength.bits, 10) << '\n'
          << "num_communities=" << found.num_communities << '\n';
  return 0;
}

int cmd_metrics(const Options& o, std::ostream& out) {
  const LayeredAssignment reference = read_assignment_file(o.reference);
  const LayeredAssignment test = read_assignment_file(o.test);
  const ContingencyMatrix n = contingency(reference, test, o.users_only);
  out << "vi_bits=" << text::format_fixed(variation_of_information(n), 10) << '\n';
  if (!o.truth.empty()) {
    const AlignmentSet truth(read_pairs_file(o.truth));
    const SeedSet seeds(o.seeds.empty() ? std::vector<AlignedPair>{} : read_pairs_file(o.seeds));
    if (!is_subset(seeds, truth)) throw AlignmentError("seeds are not a subset of the truth pairs");
    out << "oracle_accuracy=" << text::format_fixed(oracle_accuracy(truth, seeds, replicate_base(test)), 10)
        << '\n';
  }
  if (!o.jaccard.empty()) {
    emit(o.jaccard, out, [&](std::ostream& s) { write_jaccard_csv(s, jaccard_matrix(n)); });
  }
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  SweepConfig config = load_sweep_config(o.config);
  config.rng_seed = *o.rng_seed;
  const SweepResult result = run_sweep(config, o.jobs);
  emit(o.out, out, [&](std::ostream& s) { write_sweep_csv(s, result.rows); });
  for (const auto& f : result.failures) err << "row failed [" << f.row << "]: " << f.reason << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community detection across partially aligned networks"};
  app.footer(kFormats);
  app.require_subcommand(1);
  Options o;
  app.add_option("--isa", o.isa, "Kernel variant: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto* ingest = app.add_subcommand("ingest", "Collapse an edge-type TSV into a weighted graph JSON");
  ingest->add_option("--input", o.input, "Edge-list TSV (or graph JSON)")->required();
  ingest->add_option("--out", o.out, "Output graph JSON (default stdout)");

  auto* pr = app.add_subcommand("pagerank", "PageRank scores as label<TAB>score, highest first");
  pr->add_option("--input", o.input, "Graph JSON or edge-list TSV")->required();
  pr->add_option("--damping", o.damping, "Damping factor")->check(CLI::Range(0.0, 1.0));
  pr->add_option("--tol", o.tol, "L1 convergence tolerance");
  pr->add_option("--max-iter", o.max_iter, "Iteration cap");
  pr->add_option("--out", o.out, "Output TSV (default stdout)");

  auto* sel = app.add_subcommand("select-seeds", "Pick a seed subset of the truth pairs");
  sel->add_option("--strategy", o.strategy, "random, degree or pagerank")
      ->required()
      ->check(CLI::IsMember({"random", "degree", "pagerank"}));
  sel->add_option("--fraction", o.fraction, "Fraction of truth pairs to use")->required()->check(CLI::Range(0.0, 1.0));
  sel->add_option("--truth", o.truth, "Truth pairs TSV")->required();
  sel->add_option("--scores", o.scores, "Single centrality table (both labels scored from it)");
  sel->add_option("--scores1", o.scores1, "Layer-1 centrality table");
  sel->add_option("--scores2", o.scores2, "Layer-2 centrality table");
  sel->add_option("--rng-seed", o.rng_seed, "Random seed")->required();
  sel->add_option("--out", o.out, "Output pairs TSV (default stdout)");

  auto* samp = app.add_subcommand("sample-overlap", "Sample two overlapping induced subgraphs");
  samp->add_option("--base", o.input, "Base graph")->required();
  samp->add_option("--fraction", o.fraction, "Shared-vertex fraction in (0, 1]")->required();
  samp->add_option("--layer-size", o.layer_size, "Vertices per layer")->required();
  samp->add_option("--rng-seed", o.rng_seed, "Random seed")->required();
  samp->add_option("--out-prefix", o.out_prefix, "Writes PREFIX.layer1.json, PREFIX.layer2.json, PREFIX.truth.tsv")
      ->required();

  auto* det = app.add_subcommand("detect", "Detect communities on a two-layer construction or a single graph");
  det->add_option("--method", o.method, "aggregation, linking, relaxed or single")
      ->required()
      ->check(CLI::IsMember({"aggregation", "linking", "relaxed", "single"}));
  det->add_option("--input", o.input, "Graph for --method single");
  det->add_option("--layer1", o.layer1, "Layer-1 graph");
  det->add_option("--layer2", o.layer2, "Layer-2 graph");
  det->add_option("--seeds", o.seeds, "Seed pairs TSV (default none)");
  det->add_option("--trials", o.trials, "Optimizer restarts")->check(CLI::PositiveNumber);
  det->add_option("--rng-seed", o.rng_seed, "Random seed (default 42)");
  det->add_option("--omega", o.omega, "Interlayer edge weight for linking");
  det->add_option("--relax-rate", o.relax_rate, "Stay-in-layer probability for relaxed")->check(CLI::Range(0.0, 1.0));
  det->add_option("--combine", o.combine, "Aggregation edge rule: sum or mean")->check(CLI::IsMember({"sum", "mean"}));
  det->add_option("--damping", o.damping, "PageRank damping for linking/relaxed flow")->check(CLI::Range(0.0, 1.0));
  det->add_option("--out", o.out, "Assignment TSV (default stdout)");

  auto* met = app.add_subcommand("metrics", "Compare two assignments");
  met->add_option("--reference", o.reference, "Reference assignment TSV")->required();
  met->add_option("--test", o.test, "Test assignment TSV")->required();
  met->add_option("--truth", o.truth, "Truth pairs TSV; enables oracle accuracy");
  met->add_option("--seeds", o.seeds, "Seed pairs excluded from oracle accuracy");
  met->add_option("--jaccard", o.jaccard, "Write the Jaccard matrix CSV here");
  met->add_flag("--users-only", o.users_only, "Ignore hashtag vertices in VI and Jaccard");

  auto* sw = app.add_subcommand("sweep", "Run an overlap / seed-fraction sweep from a JSON config");
  sw->add_option("--config", o.config, "Sweep config JSON")->required();
  sw->add_option("--rng-seed", o.rng_seed, "Master random seed")->required();
  sw->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--out", o.out, "Output CSV (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  if (o.isa != "auto") {
    const auto isa = o.isa == "avx2" ? kernels::Isa::Avx2 : kernels::Isa::Scalar;
    if (!kernels::select_isa(isa)) {
      err << "kernel variant '" << o.isa << "' is not available on this CPU\n";
      return kUsage;
    }
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*pr) return cmd_pagerank(o, out);
    if (*sel) return cmd_select_seeds(o, out);
    if (*samp) return cmd_sample_overlap(o, out);
    if (*det) return cmd_detect(o, out, err);
    if (*met) return cmd_metrics(o, out);
    if (*sw) return cmd_sweep(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace mlcd::cli
