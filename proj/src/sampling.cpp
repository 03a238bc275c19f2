#include "pfm/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "pfm/kernels.hpp"
#include "pfm/rng.hpp"

namespace pfm {

std::uint64_t model_hash(const PfmModel& model) {
  // FNV-1a over the bytes of S plus the partition labels.
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto absorb = [&h](const unsigned char* data, size_t len) {
    for (size_t i = 0; i < len; ++i) {
      h ^= data[i];
      h *= 0x100000001B3ull;
    }
  };
  absorb(reinterpret_cast<const unsigned char*>(model.S.data()),
         sizeof(double) * model.S.size());
  absorb(reinterpret_cast<const unsigned char*>(model.partition.labels.data()),
         sizeof(int) * model.partition.labels.size());
  const unsigned char self = model.allow_self_loops ? 1 : 0;
  absorb(&self, 1);
  return h;
}

SampledGraph sample_adjacency(const PfmModel& model, std::uint64_t seed) {
  SampledGraph graph;
  graph.seed = seed;
  graph.model_hash = model_hash(model);
  kernels::sample_bernoulli(graph.A, model.S, seed, model.allow_self_loops);
  graph.empirical_degrees = kernels::row_sums_bytes(graph.A);
  graph.dhat_min = graph.empirical_degrees.minCoeff();
  return graph;
}

std::vector<DegreeConcentrationRow> degree_concentration_check(const PfmModel& model,
                                                               const SampledGraph& graph,
                                                               double epsilon) {
  const int n = model.partition.n;
  std::vector<DegreeConcentrationRow> rows(n);
  for (int i = 0; i < n; ++i) {
    const double d = model.expected_degrees[i];
    const double dev = std::abs(std::sqrt(graph.empirical_degrees[i]) - std::sqrt(d));
    const double prob = 2.0 * std::exp(-epsilon * epsilon / (2.0 + epsilon / std::sqrt(d)));
    rows[i] = {d, dev, std::min(1.0, prob), dev > epsilon};
  }
  return rows;
}

DegreeConcentrationSummary degree_concentration_mc(const PfmModel& model, double epsilon,
                                                   int num_seeds, std::uint64_t master_seed) {
  const int n = model.partition.n;
  std::vector<int> failures(n, 0);
#pragma omp parallel
  {
    std::vector<int> local(n, 0);
#pragma omp for schedule(static)
    for (int s = 0; s < num_seeds; ++s) {
      const SampledGraph graph = sample_adjacency(model, rng::derive(master_seed, s));
      for (int i = 0; i < n; ++i) {
        const double dev =
            std::abs(std::sqrt(graph.empirical_degrees[i]) - std::sqrt(model.expected_degrees[i]));
        if (dev > epsilon) ++local[i];
      }
    }
#pragma omp critical
    for (int i = 0; i < n; ++i) failures[i] += local[i];
  }

  DegreeConcentrationSummary summary{epsilon, num_seeds, 0.0, -1e300};
  for (int i = 0; i < n; ++i) {
    const double d = model.expected_degrees[i];
    const double bound =
        std::min(1.0, 2.0 * std::exp(-epsilon * epsilon / (2.0 + epsilon / std::sqrt(d))));
    const double frac = static_cast<double>(failures[i]) / num_seeds;
    const double se = std::sqrt(std::max(bound * (1.0 - bound), frac * (1.0 - frac)) / num_seeds);
    summary.worst_empirical_failure = std::max(summary.worst_empirical_failure, frac);
    summary.worst_margin = std::max(summary.worst_margin, frac - (bound + 3.0 * se));
  }
  return summary;
}

void write_edge_list(const SampledGraph& graph, const std::string& csv_path,
                     const std::string& sidecar_json_path) {
  std::ofstream csv(csv_path);
  if (!csv) fail(ErrorCode::ConfigError, "cannot write " + csv_path);
  csv << "i,j\n";
  const int n = static_cast<int>(graph.A.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (graph.A(i, j)) csv << i << ',' << j << '\n';

  nlohmann::json side;
  side["seed"] = graph.seed;
  side["n"] = n;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(graph.model_hash));
  side["model_hash"] = hex;
  std::ofstream sj(sidecar_json_path);
  if (!sj) fail(ErrorCode::ConfigError, "cannot write " + sidecar_json_path);
  sj << side.dump(2) << '\n';
}

SampledGraph read_edge_list(const std::string& csv_path, const std::string& sidecar_json_path) {
  std::ifstream sj(sidecar_json_path);
  if (!sj) fail(ErrorCode::ConfigError, "cannot read " + sidecar_json_path);
  nlohmann::json side;
  sj >> side;
  const int n = side.at("n").get<int>();

  SampledGraph graph;
  graph.seed = side.value("seed", 0ull);
  graph.model_hash = std::strtoull(side.value("model_hash", "0").c_str(), nullptr, 16);
  graph.A.setZero(n, n);

  std::ifstream csv(csv_path);
  if (!csv) fail(ErrorCode::ConfigError, "cannot read " + csv_path);
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    int i = -1, j = -1;
    if (std::sscanf(line.c_str(), "%d,%d", &i, &j) != 2 || i < 0 || j < i || j >= n)
      fail(ErrorCode::ConfigError, "bad edge list line: " + line);
    graph.A(i, j) = 1;
    graph.A(j, i) = 1;
  }
  graph.empirical_degrees = kernels::row_sums_bytes(graph.A);
  graph.dhat_min = graph.empirical_degrees.minCoeff();
  return graph;
}

}  // namespace pfm
