// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>

#include "collision_table.hpp"
#include "sge/audit.hpp"
#include "sge/embed.hpp"
#include "sge/hash.hpp"
#include "sge/kernel.hpp"
#include "sge/sampler.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace sge;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures while letting the criterion finish its sweep.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(failures_) + " failure(s), first: " + first_};
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sge_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SGE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

SamplerParams sampler(std::uint64_t runs, std::uint32_t t, std::uint64_t seed) {
  SamplerParams p;
  p.runs = runs;
  p.max_edges = t;
  p.seed = seed;
  return p;
}

// ------------------------------------------------------------------ criteria

Outcome sample_sizes() {
  // rows: a, then M for (0.1,0.1), (0.1,0.05), (0.05,0.1), (0.05,0.05)
  static constexpr std::uint64_t table[10][5] = {
      {1, 600, 738, 2397, 2952},          {1, 600, 738, 2397, 2952},
      {3, 877, 1016, 3506, 4061},         {5, 1154, 1293, 4615, 5170},
      {12, 2125, 2263, 8497, 9051},       {30, 4620, 4759, 18478, 19033},
      {79, 11413, 11551, 45649, 46204},   {227, 31930, 32069, 127718, 128273},
      {710, 98888, 99027, 395550, 396105}, {2322, 322359, 322497, 1289433, 1289987},
  };
  static constexpr std::pair<double, double> columns[4] = {{0.1, 0.1}, {0.1, 0.05}, {0.05, 0.1}, {0.05, 0.05}};
  Check c;
  std::size_t exact = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t t = 1; t <= 10; ++t) {
    const auto& row = table[t - 1];
    c.expect(graphlet_count_table(t) == row[0], "class count at t=" + std::to_string(t));
    for (std::size_t k = 0; k < 4; ++k) {
      const std::uint64_t m = sample_size(row[0], columns[k].first, columns[k].second);
      if (m == row[k + 1]) ++exact;
      c.expect(m == row[k + 1], "a=" + std::to_string(row[0]) + " gave " + std::to_string(m) + ", expected " +
                                    std::to_string(row[k + 1]));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  return c.done(std::to_string(exact) + "/40 exact");
}

Outcome collision_table() {
  Check c;
  const std::size_t max_t = test::slow_tests_enabled() ? 10 : 8;
  const auto start = std::chrono::steady_clock::now();
  const auto levels = enumerate_connected_levels(max_t);
  std::size_t rows = 0;
  for (const auto& row : test::collision_table()) {
    if (row.t > max_t) continue;
    const CollisionReport r = collision_report(row.fn, row.t, levels[row.t - 1], 0);
    const std::string where = std::string(to_string(row.fn)) + " t=" + std::to_string(row.t);
    c.expect(r.n_graphs == graphlet_count_table(row.t), where + " graph count " + std::to_string(r.n_graphs));
    c.expect(r.n_pairs == r.n_graphs * (r.n_graphs - 1) / 2, where + " pair count");
    c.expect(r.n_collisions == row.collisions, where + " collisions " + std::to_string(r.n_collisions) + " vs " +
                                                    std::to_string(row.collisions));
    const std::string e = format_decimal(r.e_f, row.digits);
    c.expect(e == row.e_decimal, where + " E " + e + " vs " + std::string(row.e_decimal));
    ++rows;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 120.0, "took " + std::to_string(secs) + " s");
  char buf[64];
  std::snprintf(buf, sizeof buf, " in %.2f s", secs);
  return c.done(std::to_string(rows) + " rows (t=1.." + std::to_string(max_t) + ", 4 functions) exact" + buf);
}

Outcome hash_invariance() {
  Check c;
  std::mt19937_64 rng(1001);
  const HashFunctionId fns[] = {HashFunctionId::degree, HashFunctionId::betweenness, HashFunctionId::core,
                                HashFunctionId::clustering};
  std::size_t trials = 0;
  for (HashFunctionId fn : fns) {
    for (bool labeled : {false, true}) {
      for (int i = 0; i < 1000; ++i) {
        const Graphlet g = test::random_connected_graphlet(rng, 1 + rng() % 10, labeled);
        const Graphlet p = test::shuffled_copy(rng, g);
        c.expect(hash_code(g, fn).str() == hash_code(p, fn).str(),
                 std::string(to_string(fn)) + (labeled ? " labeled" : " unlabeled") + " mismatch");
        ++trials;
      }
    }
  }
  return c.done(std::to_string(trials) + " trials, 4 functions x {unlabeled, labeled}");
}

Outcome oracle_soundness() {
  Check c;
  std::mt19937_64 rng(1002);
  const HashFunctionId fns[] = {HashFunctionId::degree, HashFunctionId::betweenness, HashFunctionId::core,
                                HashFunctionId::clustering};
  std::size_t pairs_checked = 0;
  std::size_t persisted = 0;
  for (std::size_t t = 1; t <= 6; ++t) {
    const auto gs = enumerate_connected(t);
    for (HashFunctionId fn : fns) {
      const std::string where = std::string(to_string(fn)) + " t=" + std::to_string(t);
      std::vector<std::string> codes;
      for (const Graphlet& g : gs) {
        codes.push_back(hash_code(g, fn).str());
        for (int k = 0; k < 10; ++k) {
          const Graphlet p = test::shuffled_copy(rng, g);
          c.expect(is_isomorphic(g, p), where + " oracle missed a relabeling");
          c.expect(hash_code(p, fn).str() == codes.back(), where + " relabeling changed the code");
        }
      }
      std::set<std::pair<std::size_t, std::size_t>> expected;
      for (std::size_t i = 0; i < gs.size(); ++i) {
        for (std::size_t j = i + 1; j < gs.size(); ++j) {
          ++pairs_checked;
          c.expect(!test::isomorphic_by_permutations(gs[i], gs[j]), where + " duplicate class");
          c.expect(!is_isomorphic(gs[i], gs[j]), where + " oracle reports a false isomorphism");
          if (codes[i] == codes[j]) expected.insert({i, j});
        }
      }

      // read the persisted pairs back and map each graph to its class
      const CollisionReport r = collision_report(fn, t, gs);
      std::ostringstream out;
      write_colliding_pairs(out, r);
      const auto blocks = parse_graphs(out.str());
      c.expect(blocks.size() == 2 * r.colliding_pairs.size(), where + " block count");
      auto class_of = [&](const Graph& g) {
        const Graphlet gl = as_graphlet(g);
        for (std::size_t i = 0; i < gs.size(); ++i) {
          if (test::isomorphic_by_permutations(gl, gs[i])) return i;
        }
        return gs.size();
      };
      std::set<std::pair<std::size_t, std::size_t>> stored;
      for (std::size_t b = 0; b + 1 < blocks.size(); b += 2) {
        std::size_t i = class_of(blocks[b]);
        std::size_t j = class_of(blocks[b + 1]);
        if (i > j) std::swap(i, j);
        stored.insert({i, j});
      }
      persisted += stored.size();
      c.expect(stored == expected, where + " persisted pairs differ from the brute-force collision set");
    }
  }
  return c.done(std::to_string(pairs_checked) + " class pairs, " + std::to_string(persisted) +
                " persisted collisions matched");
}

Outcome sampler_structure() {
  Check c;
  std::mt19937_64 rng(1003);
  std::size_t traces = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 29;
    const Graph g = test::random_graph(rng, "s" + std::to_string(trial), n, 1 + rng() % (2 * n), trial % 4 == 0);
    const auto t = static_cast<std::uint32_t>(1 + rng() % 8);
    const std::set<Edge> parent(g.edges().begin(), g.edges().end());
    for (const RunTrace& trace : sample_all(g, sampler(30, t, trial), 1)) {
      ++traces;
      c.expect(trace.graphlets.size() <= t, "trace longer than T");
      c.expect(trace.dead_end == (trace.graphlets.size() < t), "dead-end flag");
      for (std::size_t i = 0; i < trace.graphlets.size(); ++i) {
        const Graphlet& a = trace.graphlets[i];
        c.expect(a.t() == i + 1, "|A_t| != t");
        c.expect(is_connected(a), "disconnected graphlet");
        std::set<Edge> mapped;
        for (const Edge& e : a.edges) mapped.insert(make_edge(a.nodes[e.u], a.nodes[e.v]));
        c.expect(mapped.size() == a.t(), "repeated edge");
        c.expect(std::ranges::includes(parent, mapped), "edge outside the parent graph");
        if (i > 0) {
          const Graphlet& prev = trace.graphlets[i - 1];
          std::set<Edge> prev_mapped;
          for (const Edge& e : prev.edges) prev_mapped.insert(make_edge(prev.nodes[e.u], prev.nodes[e.v]));
          c.expect(std::ranges::includes(mapped, prev_mapped), "A_t does not contain A_{t-1}");
        }
      }
    }
  }

  // graphs whose every component carries at least T edges
  std::size_t sum_checks = 0;
  while (sum_checks < 50) {
    const std::size_t n = 4 + rng() % 27;
    const Graph g = test::random_graph(rng, "d" + std::to_string(sum_checks), n, n + rng() % (2 * n));
    const auto t = static_cast<std::uint32_t>(1 + rng() % 8);
    const auto t_min = static_cast<std::uint32_t>(1 + rng() % t);
    std::size_t count = 0;
    const auto comp = connected_components(g, &count);
    std::vector<std::size_t> edges_in(count, 0);
    for (const Edge& e : g.edges()) ++edges_in[comp[e.u]];
    if (std::ranges::any_of(edges_in, [&](std::size_t m) { return m < t; })) continue;
    const std::uint64_t m = 200;
    const GraphHistogram h = embed_graph(g, sampler(m, t, sum_checks), HashFunctionId::automatic, t_min);
    std::uint64_t sum = 0;
    for (const auto& [code, k] : h.counts) sum += k;
    c.expect(h.dead_end_runs == 0, "dead end on a graph with >= T edges per component");
    c.expect(sum == m * (t - t_min + 1), "sum of counts " + std::to_string(sum));
    ++sum_checks;
  }
  return c.done(std::to_string(traces) + " traces on 100 graphs; count sums exact on " + std::to_string(sum_checks) +
                " saturating graphs");
}

Outcome determinism() {
  Check c;
  const fs::path dir = scratch("determinism");
  std::mt19937_64 rng(1004);
  std::string graphs;
  std::string manifest;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 6 + rng() % 20;
    const Graph g = test::random_graph(rng, "g" + std::to_string(i), n, n + rng() % n);
    graphs += serialize_graph(g);
    manifest += g.id() + "\tc" + std::to_string(i % 3) + "\t" + (i % 5 == 0 ? "test" : "train") + "\n";
  }
  write_file(dir / "graphs.txt", graphs);
  write_file(dir / "manifest.tsv", manifest);

  const std::string files[] = {"vocabulary.txt", "embeddings.tsv", "meta.json", "kernel.txt", "audit.tsv"};
  std::map<std::string, std::string> outputs[2];
  const unsigned threads[2] = {1, 8};
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("t" + std::to_string(threads[k]));
    const std::string shared = " --seed 7 --threads " + std::to_string(threads[k]) + " --out " + out.string();
    const fs::path log = dir / "log.txt";
    c.expect(run_cli("embed --graphs " + (dir / "graphs.txt").string() + " --manifest " +
                         (dir / "manifest.tsv").string() + " --T 6 --t-min 1 --M 2000" + shared,
                     log) == 0,
             "embed failed");
    c.expect(run_cli("kernel --embeddings " + (out / "embeddings.tsv").string() + " --manifest " +
                         (dir / "manifest.tsv").string() + " --kind hist-int" + shared,
                     log) == 0,
             "kernel failed");
    c.expect(run_cli("audit --hash all --t 7" + shared, log) == 0, "audit failed");
    for (const auto& f : files) outputs[k][f] = test::read_file((out / f).string());
  }
  std::size_t bytes = 0;
  for (const auto& f : files) {
    c.expect(!outputs[0][f].empty(), f + " is empty");
    c.expect(outputs[0][f] == outputs[1][f], f + " differs between 1 and 8 threads");
    bytes += outputs[0][f].size();
  }
  return c.done("5 output files (" + std::to_string(bytes) + " bytes) identical at --threads 1 and 8 on 50 graphs");
}

Outcome convergence() {
  Check c;
  std::mt19937_64 rng(1005);
  Graph g = test::random_graph(rng, "conv", 20, 45);
  std::size_t components = 0;
  while (connected_components(g, &components), components != 1) g = test::random_graph(rng, "conv", 20, 45);

  const std::uint64_t m = sample_size(graphlet_count_table(4), 0.05, 0.05);
  c.expect(m == 5170, "M resolved to " + std::to_string(m));
  auto normalized = [&](std::uint64_t seed) {
    const GraphHistogram h = embed_graph(g, sampler(m, 4, seed), HashFunctionId::automatic, 4, false, 0);
    std::map<std::string, double> p;
    for (const auto& [code, k] : h.counts) p[code] = static_cast<double>(k) / static_cast<double>(h.sampled);
    return p;
  };
  std::size_t within = 0;
  double worst = 0.0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto a = normalized(2 * rep + 1);
    const auto b = normalized(2 * rep + 2);
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    double l1 = 0.0;
    for (const auto& k : keys) {
      const double x = a.count(k) ? a.at(k) : 0.0;
      const double y = b.count(k) ? b.at(k) : 0.0;
      l1 += std::abs(x - y);
    }
    worst = std::max(worst, l1);
    if (l1 <= 0.1) ++within;
  }
  c.expect(within >= 18, std::to_string(within) + "/20 within 0.1");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/20 repetitions with L1 <= 0.1 (max %.4f), M=%llu", within, worst,
                static_cast<unsigned long long>(m));
  return c.done(buf);
}

Outcome kernels() {
  Check c;
  std::mt19937_64 rng(1006);
  auto random_embedding = [&](std::size_t dim) {
    std::vector<double> v(dim);
    for (double& x : v) x = static_cast<double>(rng() % 30);
    return v;
  };
  std::vector<std::vector<double>> es;
  // fewer bins than graphs, so the Gram matrix is singular and round-off shows
  for (int i = 0; i < 50; ++i) es.push_back(random_embedding(10));
  const KernelMatrix k = kernel_matrix(es, {KernelKind::dot, 0.0}, 4);
  Eigen::MatrixXd m(50, 50);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 50; ++j) m(i, j) = k(i, j);
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  c.expect(min_eig >= -1e-8, "minimum eigenvalue " + std::to_string(min_eig));

  const KernelSpec hi{KernelKind::hist_intersection, 0.0};
  const KernelSpec rbf{KernelKind::rbf, 0.001};
  const KernelSpec cos{KernelKind::cosine, 0.0};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + rng() % 40;
    std::vector<double> x = random_embedding(dim);
    const std::vector<double> y = random_embedding(dim);
    if (trial % 20 == 0) std::ranges::fill(x, 0.0);
    double sx = 0;
    double sy = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      sx += x[i];
      sy += y[i];
    }
    for (const KernelSpec& s : {hi, rbf, cos}) {
      c.expect(kernel_value(x, y, s) == kernel_value(y, x, s), std::string(to_string(s.kind)) + " asymmetric");
    }
    c.expect(kernel_value(x, y, hi) <= std::min(sx, sy), "hist-int above min mass");
    const double r = kernel_value(x, y, rbf);
    const double q = kernel_value(x, y, cos);
    c.expect(r >= 0.0 && r <= 1.0, "rbf out of [0,1]");
    c.expect(q >= 0.0 && q <= 1.0, "cosine out of [0,1]");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "dot Gram min eigenvalue %.3g; 1000 random pairs symmetric and bounded", min_eig);
  return c.done(buf);
}

Outcome smoke_classification() {
  Check c;
  const fs::path dir = scratch("smoke");
  std::mt19937_64 rng(1007);
  std::string graphs;
  std::string manifest;
  // shapes with a few random edges added and one removed
  auto noisy = [&](const std::string& id, std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
    std::set<Edge> es;
    for (auto [u, v] : edges) es.insert(make_edge(u, v));
    es.erase(std::next(es.begin(), static_cast<long>(rng() % es.size())));
    for (std::size_t added = 0, want = 1 + rng() % 2; added < want;) {
      const auto u = static_cast<NodeId>(rng() % n);
      const auto v = static_cast<NodeId>(rng() % n);
      if (u != v && es.insert(make_edge(u, v)).second) ++added;
    }
    return Graph(id, n, std::vector<Edge>(es.begin(), es.end()));
  };
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 8 + rng() % 7;
    std::vector<std::pair<NodeId, NodeId>> cycle;
    for (NodeId v = 0; v < n; ++v) cycle.emplace_back(v, static_cast<NodeId>((v + 1) % n));
    const Graph g = noisy("cycle" + std::to_string(i), n, cycle);
    graphs += serialize_graph(g);
    manifest += g.id() + "\tcycle\tunsplit\n";

    std::vector<std::pair<NodeId, NodeId>> star;
    for (NodeId v = 1; v < n; ++v) star.emplace_back(0, v);
    const Graph s = noisy("star" + std::to_string(i), n, star);
    graphs += serialize_graph(s);
    manifest += s.id() + "\tstar\tunsplit\n";
  }
  write_file(dir / "graphs.txt", graphs);
  write_file(dir / "manifest.tsv", manifest);
  const std::string shared = " --seed 3 --threads 4 --out " + dir.string();
  const fs::path log = dir / "log.txt";
  c.expect(run_cli("embed --graphs " + (dir / "graphs.txt").string() + " --manifest " +
                       (dir / "manifest.tsv").string() + " --T 5 --t-min 1 --M 1000" + shared,
                   dir / "embed.log") == 0,
           "embed failed");
  c.expect(run_cli("knn --embeddings " + (dir / "embeddings.tsv").string() + " --manifest " +
                       (dir / "manifest.tsv").string() + " --k 5 --kind hist-int" + shared,
                   log) == 0,
           "knn failed");
  std::size_t correct = 0;
  std::size_t total = 0;
  std::istringstream predictions(test::read_file((dir / "predictions.tsv").string()));
  std::string line;
  std::getline(predictions, line);
  while (std::getline(predictions, line)) {
    std::istringstream f(line);
    std::string id, label, predicted;
    std::getline(f, id, '\t');
    std::getline(f, label, '\t');
    std::getline(f, predicted, '\t');
    ++total;
    if (label == predicted) ++correct;
  }
  c.expect(total == 120, "predictions for " + std::to_string(total) + " graphs");
  const double accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  c.expect(accuracy >= 0.95, "accuracy " + std::to_string(accuracy));

  // precomputed kernel file: n rows, index column, n values, symmetric
  c.expect(run_cli("kernel --embeddings " + (dir / "embeddings.tsv").string() + " --manifest " +
                       (dir / "manifest.tsv").string() + " --kind hist-int" + shared,
                   log) == 0,
           "kernel failed");
  std::istringstream kernel(test::read_file((dir / "kernel.txt").string()));
  std::vector<std::vector<double>> values;
  std::size_t row = 0;
  while (std::getline(kernel, line)) {
    ++row;
    std::istringstream f(line);
    std::string label;
    std::string tok;
    f >> label;
    c.expect(label == "cycle" || label == "star", "row label " + label);
    f >> tok;
    c.expect(tok == "0:" + std::to_string(row), "row " + std::to_string(row) + " index field " + tok);
    std::vector<double> v;
    std::size_t col = 0;
    while (f >> tok) {
      ++col;
      const auto colon = tok.find(':');
      c.expect(tok.substr(0, colon) == std::to_string(col), "column tag " + tok);
      v.push_back(std::stod(tok.substr(colon + 1)));
    }
    values.push_back(std::move(v));
  }
  c.expect(values.size() == 120, "kernel rows " + std::to_string(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    c.expect(values[i].size() == values.size(), "kernel row length");
    for (std::size_t j = 0; j < values[i].size() && j < values.size(); ++j) {
      if (i < values[j].size()) c.expect(values[i][j] == values[j][i], "kernel file not symmetric");
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "leave-one-out accuracy %zu/%zu (%.1f%%); kernel file %zu x %zu symmetric", correct,
                total, 100.0 * accuracy, values.size(), values.empty() ? 0 : values[0].size());
  return c.done(buf);
}

Outcome rho() {
  Check c;
  c.expect(rho_score({1, 1}) == 1.0, "rho(1,1)");
  c.expect(rho_score({2, 1}) == 0.75, "rho(2,1)");
  c.expect(rho_score({4, 4}) == 0.25, "rho(4,4)");
  return c.done("rho(1,1)=1, rho(2,1)=0.75, rho(4,4)=0.25");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"sample sizes", sample_sizes},
      {"collision table", collision_table},
      {"hash invariance", hash_invariance},
      {"oracle soundness", oracle_soundness},
      {"sampler structure", sampler_structure},
      {"thread determinism", determinism},
      {"statistical convergence", convergence},
      {"kernel correctness", kernels},
      {"smoke classification", smoke_classification},
      {"rho metric", rho},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << index << " (" << name << "): " << o.detail
              << std::endl;
  }
  std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
