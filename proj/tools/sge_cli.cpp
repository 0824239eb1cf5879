// Command-line front end: sample-size, embed, kernel, knn, audit, rho.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "sge/audit.hpp"
#include "sge/embed.hpp"
#include "sge/graph.hpp"
#include "sge/hash.hpp"
#include "sge/kernel.hpp"
#include "sge/parallel.hpp"
#include "sge/sampler.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Shared {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out = ".";
};

std::ofstream open_output(const Shared& shared, const std::string& name) {
  fs::create_directories(shared.out);
  const fs::path path = fs::path(shared.out) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sge::DataError("cannot write " + path.string());
  return out;
}

// ---------------------------------------------------------------- sample-size

struct SampleSizeArgs {
  std::uint64_t a = 0;
  double epsilon = 0.0;
  double delta = 0.0;
};

int run_sample_size(const SampleSizeArgs& args) {
  std::cout << sge::sample_size(args.a, args.epsilon, args.delta) << '\n';
  return 0;
}

// ---------------------------------------------------------------------- embed

struct EmbedArgs {
  std::string graphs;
  std::string manifest;
  std::uint32_t max_edges = 0;
  std::uint32_t t_min = 1;
  std::optional<std::uint64_t> runs;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::uint64_t> a_override;
  bool per_size = false;
  double alpha = 0.5;
  std::string hash = "auto";
  bool labeled = false;
  bool normalize = false;
  bool transductive = false;
};

std::uint64_t class_count(const EmbedArgs& args, int t) {
  if (args.a_override) return *args.a_override;
  if (t < 1 || t > 10) throw UsageError("no class count known for t = " + std::to_string(t) + "; pass --a-override");
  return sge::graphlet_count_table(t);
}

int run_embed(const EmbedArgs& args, const Shared& shared) {
  if (args.runs.has_value() == (args.epsilon.has_value() || args.delta.has_value())) {
    throw UsageError("give either --M or --epsilon with --delta");
  }
  if (!args.runs && !(args.epsilon && args.delta)) throw UsageError("--epsilon and --delta go together");
  if (args.per_size && args.runs) throw UsageError("--per-size needs --epsilon/--delta");

  sge::SamplerParams params;
  params.max_edges = args.max_edges;
  params.alpha = args.alpha;
  params.seed = shared.seed;
  std::vector<std::uint64_t> budgets;
  if (args.runs) {
    params.runs = *args.runs;
  } else if (args.per_size) {
    for (std::uint32_t t = args.t_min; t <= args.max_edges; ++t) {
      budgets.push_back(sge::sample_size(class_count(args, static_cast<int>(t)), *args.epsilon, *args.delta));
    }
    params.runs = budgets.empty() ? 1 : *std::ranges::max_element(budgets);
  } else {
    params.runs = sge::sample_size(class_count(args, static_cast<int>(args.max_edges)), *args.epsilon, *args.delta);
  }
  try {
    params.validate();
    if (args.t_min < 1 || args.t_min > args.max_edges) throw std::invalid_argument("--t-min must lie in [1, T]");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const sge::HashFunctionId fn = sge::parse_hash_function(args.hash);

  const std::vector<sge::Graph> all = sge::read_graph_file(args.graphs);
  sge::DatasetManifest manifest;
  if (!args.manifest.empty()) {
    manifest = sge::read_manifest_file(args.manifest);
  } else {
    for (const auto& g : all) manifest.entries.push_back({g.id(), "", sge::Split::unsplit});
  }
  const std::vector<sge::Graph> graphs = sge::select_by_manifest(all, manifest);

  for (const auto& g : graphs) {
    if (g.num_edges() == 0) throw sge::DataError("graph " + g.id() + " has no edges");
  }
  std::vector<sge::GraphHistogram> histograms(graphs.size());
  const unsigned inner = graphs.size() == 1 ? shared.threads : 1;
  sge::parallel_for(graphs.size(), shared.threads, [&](std::size_t i) {
    histograms[i] = args.per_size
                        ? sge::embed_graph_per_size(graphs[i], budgets, params, fn, args.t_min, args.labeled, inner)
                        : sge::embed_graph(graphs[i], params, fn, args.t_min, args.labeled, inner);
  });

  const bool has_train = std::ranges::any_of(manifest.entries, [](const auto& e) { return e.split == sge::Split::train; });
  std::vector<sge::GraphHistogram> reference;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (args.transductive || !has_train || manifest.entries[i].split == sge::Split::train) {
      reference.push_back(histograms[i]);
    }
  }
  const sge::Vocabulary vocab = sge::build_vocabulary(reference);

  sge::EmbeddingMeta meta;
  meta.runs = params.runs;
  meta.max_edges = params.max_edges;
  meta.alpha = params.alpha;
  meta.seed = params.seed;
  meta.fn = fn;
  meta.t_min = args.t_min;
  meta.labeled = args.labeled;
  const auto embeddings = sge::finalize_embeddings(histograms, vocab, meta);

  {
    auto out = open_output(shared, "vocabulary.txt");
    sge::write_vocabulary(out, vocab);
  }
  {
    auto out = open_output(shared, "embeddings.tsv");
    sge::write_embeddings(out, embeddings, args.normalize);
  }
  {
    nlohmann::ordered_json j;
    j["M"] = params.runs;
    j["T"] = params.max_edges;
    j["t_min"] = args.t_min;
    j["alpha"] = params.alpha;
    j["seed"] = params.seed;
    j["hash"] = std::string(sge::to_string(fn));
    j["labeled"] = args.labeled;
    j["normalize"] = args.normalize;
    j["vocabulary"] = args.transductive || !has_train ? "all" : "train";
    if (!budgets.empty()) j["M_per_size"] = budgets;
    j["bins"] = vocab.size();
    auto out = open_output(shared, "meta.json");
    out << j.dump(2) << '\n';
  }

  std::cout << "graph_id\tsum_h\tdead_end_runs\toov\n";
  std::uint64_t dead_total = 0;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    std::uint64_t sum = 0;
    for (auto c : embeddings[i].counts) sum += static_cast<std::uint64_t>(c);
    dead_total += histograms[i].dead_end_runs;
    std::cout << embeddings[i].graph_id << '\t' << sum << '\t' << histograms[i].dead_end_runs << '\t'
              << embeddings[i].oov_count << '\n';
  }
  std::cout << "# graphs=" << embeddings.size() << " bins=" << vocab.size() << " M=" << params.runs
            << " dead_end_runs=" << dead_total << '\n';
  return 0;
}

// --------------------------------------------------------------- kernel / knn

struct KernelArgs {
  std::string embeddings;
  std::string manifest;
  std::string kind = "hist-int";
  double gamma = 0.0;
};

struct Dataset {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> labels;
  std::vector<sge::Split> splits;
};

Dataset load_dataset(const std::string& embeddings, const std::string& manifest_path, bool labels_required) {
  Dataset d;
  for (auto& row : sge::read_embedding_file(embeddings)) {
    d.ids.push_back(std::move(row.graph_id));
    d.vectors.push_back(std::move(row.values));
  }
  if (manifest_path.empty()) {
    if (labels_required) throw UsageError("--manifest is required for class labels");
    d.labels.assign(d.ids.size(), "0");
    d.splits.assign(d.ids.size(), sge::Split::unsplit);
    return d;
  }
  const auto manifest = sge::read_manifest_file(manifest_path);
  std::unordered_map<std::string, const sge::ManifestEntry*> by_id;
  for (const auto& e : manifest.entries) by_id.emplace(e.graph_id, &e);
  for (const auto& id : d.ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw sge::DataError("graph " + id + " missing from manifest");
    if (it->second->class_label.empty()) throw sge::DataError("graph " + id + " has no class label");
    d.labels.push_back(it->second->class_label);
    d.splits.push_back(it->second->split);
  }
  return d;
}

sge::KernelSpec make_spec(const KernelArgs& args) {
  sge::KernelSpec spec{sge::parse_kernel_kind(args.kind), args.gamma};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int run_kernel(const KernelArgs& args, const Shared& shared) {
  const sge::KernelSpec spec = make_spec(args);
  const Dataset d = load_dataset(args.embeddings, args.manifest, false);
  if (d.vectors.empty()) throw sge::DataError("embedding file has no rows");
  const sge::KernelMatrix k = sge::kernel_matrix(d.vectors, spec, shared.threads);
  auto out = open_output(shared, "kernel.txt");
  sge::write_precomputed_kernel(out, k, d.labels);
  std::cout << "kernel " << sge::to_string(spec.kind) << ": " << k.size() << " x " << k.size() << '\n';
  return 0;
}

int run_knn(const KernelArgs& args, std::size_t k, const Shared& shared) {
  const sge::KernelSpec spec = make_spec(args);
  const Dataset d = load_dataset(args.embeddings, args.manifest, true);
  const std::size_t n = d.vectors.size();
  if (k == 0 || k >= n) throw UsageError("--k must lie in [1, n - 1]");
  const sge::KernelMatrix sim = sge::kernel_matrix(d.vectors, spec, shared.threads);

  const auto hits = sge::knn_retrieval_scores(sim, d.labels, k);
  {
    auto out = open_output(shared, "retrieval.tsv");
    sge::write_retrieval_report(out, hits);
  }

  // train -> test when the manifest splits the data, leave-one-out otherwise
  std::vector<std::size_t> train;
  std::vector<std::size_t> queries;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.splits[i] == sge::Split::train) train.push_back(i);
    if (d.splits[i] == sge::Split::test) queries.push_back(i);
  }
  const bool split_mode = !train.empty() && !queries.empty();
  if (!split_mode) {
    queries.resize(n);
    std::iota(queries.begin(), queries.end(), std::size_t{0});
  } else if (k > train.size()) {
    throw UsageError("--k exceeds the training set size");
  }
  std::size_t correct = 0;
  auto out = open_output(shared, "predictions.tsv");
  out << "graph_id\tlabel\tpredicted\n";
  for (std::size_t q : queries) {
    std::vector<std::size_t> ranked;
    if (split_mode) {
      std::vector<double> sims;
      for (std::size_t i : train) sims.push_back(sim(q, i));
      for (std::size_t r : sge::rank_by_similarity(sims)) ranked.push_back(train[r]);
    } else {
      ranked = sge::rank_by_similarity(sim.row(q), q);
    }
    const std::string predicted = sge::majority_label(ranked, d.labels, k);
    if (predicted == d.labels[q]) ++correct;
    out << d.ids[q] << '\t' << d.labels[q] << '\t' << predicted << '\n';
  }
  std::cout << (split_mode ? "test" : "leave-one-out") << " accuracy " << correct << "/" << queries.size() << '\n';
  for (std::size_t j = 0; j < hits.size(); ++j) std::cout << "rank " << (j + 1) << '\t' << hits[j] << '\n';
  return 0;
}

// ---------------------------------------------------------------------- audit

struct AuditArgs {
  std::string hash = "all";
  std::size_t t = 0;
};

int run_audit(const AuditArgs& args, const Shared& shared) {
  std::vector<sge::HashFunctionId> fns;
  if (args.hash == "all") {
    fns = {sge::HashFunctionId::betweenness, sge::HashFunctionId::core, sge::HashFunctionId::degree,
           sge::HashFunctionId::clustering};
  } else {
    fns = {sge::parse_hash_function(args.hash)};
  }
  if (args.t < 1 || args.t > sge::kMaxEnumeratedEdges) {
    throw UsageError("--t must lie in [1, " + std::to_string(sge::kMaxEnumeratedEdges) + "]");
  }
  const auto graphs = sge::enumerate_connected(args.t);
  std::vector<sge::CollisionReport> reports;
  for (auto fn : fns) reports.push_back(sge::collision_report(fn, args.t, graphs, shared.threads));

  auto out = open_output(shared, "audit.tsv");
  sge::write_report_header(out);
  sge::write_report_header(std::cout);
  for (const auto& r : reports) {
    sge::write_report_row(out, r);
    sge::write_report_row(std::cout, r);
  }
  for (const auto& r : reports) sge::write_colliding_pairs(out, r);
  return 0;
}

// ------------------------------------------------------------------------ rho

struct RhoArgs {
  std::string system;
  std::string truth;
};

// query id -> ranked model ids
std::map<std::string, std::vector<std::string>> read_rankings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sge::DataError("cannot open ranking file " + path);
  std::map<std::string, std::vector<std::string>> rankings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string query;
    std::string model;
    std::getline(fields, query, '\t');
    std::vector<std::string> models;
    while (std::getline(fields, model, '\t')) models.push_back(model);
    if (models.empty()) throw sge::ParseError(lineno, "ranking without models");
    if (!rankings.emplace(query, std::move(models)).second) throw sge::ParseError(lineno, "duplicate query " + query);
  }
  return rankings;
}

int run_rho(const RhoArgs& args, const Shared& shared) {
  const auto system = read_rankings(args.system);
  const auto truth = read_rankings(args.truth);
  auto out = open_output(shared, "rho.tsv");
  out << "query\tr_cg\tr_gc\trho\n";
  double total = 0.0;
  auto rank_of = [](const std::vector<std::string>& ranking, const std::string& model, const std::string& query) {
    const auto it = std::ranges::find(ranking, model);
    if (it == ranking.end()) throw sge::DataError("model " + model + " not ranked for query " + query);
    return static_cast<std::uint64_t>(it - ranking.begin()) + 1;
  };
  for (const auto& [query, sys] : system) {
    const auto it = truth.find(query);
    if (it == truth.end()) throw sge::DataError("query " + query + " has no ground-truth ranking");
    sge::RankingPair pair{rank_of(it->second, sys.front(), query), rank_of(sys, it->second.front(), query)};
    const double rho = sge::rho_score(pair);
    total += rho;
    out << query << '\t' << pair.r_cg << '\t' << pair.r_gc << '\t' << sge::format_real(rho) << '\n';
  }
  const double mean = system.empty() ? 0.0 : total / static_cast<double>(system.size());
  out << "mean\t\t\t" << sge::format_real(mean) << '\n';
  std::cout << "mean rho " << sge::format_real(mean) << " over " << system.size() << " queries\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic graphlet embedding toolkit"};
  app.require_subcommand(1);
  Shared shared;
  auto add_shared = [&](CLI::App* cmd) {
    cmd->add_option("--seed", shared.seed, "Random seed");
    cmd->add_option("--threads", shared.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", shared.out, "Output directory");
  };

  SampleSizeArgs ss;
  auto* sample_size = app.add_subcommand("sample-size", "Runs needed for an (epsilon, delta) guarantee");
  sample_size->add_option("--a", ss.a, "Number of graphlet classes")->required();
  sample_size->add_option("--epsilon", ss.epsilon, "L1 error")->required();
  sample_size->add_option("--delta", ss.delta, "Failure probability")->required();

  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "Sample graphlets and write vocabulary + embeddings");
  add_shared(embed);
  embed->add_option("--graphs", ea.graphs, "Graph transaction file")->required();
  embed->add_option("--manifest", ea.manifest, "Dataset manifest");
  embed->add_option("--T", ea.max_edges, "Maximum graphlet edges")->required();
  embed->add_option("--t-min", ea.t_min, "Smallest graphlet size counted");
  embed->add_option("--M", ea.runs, "Runs per graph");
  embed->add_option("--epsilon", ea.epsilon, "Derive M from this error");
  embed->add_option("--delta", ea.delta, "Derive M from this failure probability");
  embed->add_option("--a-override", ea.a_override, "Class count used when deriving M");
  embed->add_flag("--per-size", ea.per_size, "Separate run budget for every size in [t-min, T]");
  embed->add_option("--alpha", ea.alpha, "Probability of extending from the last reached node");
  embed->add_option("--hash", ea.hash, "auto, degree, betweenness, core or clustering");
  embed->add_flag("--labeled", ea.labeled, "Include node/edge labels in codes");
  embed->add_flag("--normalize", ea.normalize, "Write L1-normalized embeddings");
  embed->add_flag("--transductive", ea.transductive, "Build the vocabulary from every split");

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Precomputed kernel matrix");
  add_shared(kernel);
  kernel->add_option("--embeddings", ka.embeddings, "Embedding file")->required();
  kernel->add_option("--manifest", ka.manifest, "Manifest with class labels");
  kernel->add_option("--kind", ka.kind, "dot, rbf, hist-int or cosine");
  kernel->add_option("--gamma", ka.gamma, "rbf width");

  KernelArgs knn_args;
  std::size_t k = 0;
  auto* knn = app.add_subcommand("knn", "k-NN retrieval counts and classification");
  add_shared(knn);
  knn->add_option("--embeddings", knn_args.embeddings, "Embedding file")->required();
  knn->add_option("--manifest", knn_args.manifest, "Manifest with class labels")->required();
  knn->add_option("--k", k, "Neighbors")->required();
  knn->add_option("--kind", knn_args.kind, "dot, rbf, hist-int or cosine");
  knn->add_option("--gamma", knn_args.gamma, "rbf width");

  AuditArgs aa;
  auto* audit = app.add_subcommand("audit", "Hash collisions over all connected graphs with t edges");
  add_shared(audit);
  audit->add_option("--hash", aa.hash, "Hash function or 'all'");
  audit->add_option("--t", aa.t, "Edge count")->required();

  RhoArgs ra;
  auto* rho = app.add_subcommand("rho", "Mutual top-rank agreement score");
  add_shared(rho);
  rho->add_option("--system-ranks", ra.system, "System rankings (query<TAB>model...)")->required();
  rho->add_option("--truth-ranks", ra.truth, "Ground-truth rankings")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sample_size) return run_sample_size(ss);
    if (*embed) return run_embed(ea, shared);
    if (*kernel) return run_kernel(ka, shared);
    if (*knn) return run_knn(knn_args, k, shared);
    if (*audit) return run_audit(aa, shared);
    if (*rho) return run_rho(ra, shared);
  } catch (const sge::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
