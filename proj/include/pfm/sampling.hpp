#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfm/model.hpp"

namespace pfm {

using ByteMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// One Bernoulli realization of a model. A is symmetric 0/1; a self-loop
// contributes 1 to its node's degree.
struct SampledGraph {
  ByteMatrix A;
  Vector empirical_degrees;
  double dhat_min = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t model_hash = 0;
};

// Pair (i, j), i < j, decided by the counter stream in row-major order over
// the upper triangle; the diagonal is sampled only when the model allows
// self-loops. Identical (model, seed) gives a bit-identical graph.
SampledGraph sample_adjacency(const PfmModel& model, std::uint64_t seed);

std::uint64_t model_hash(const PfmModel& model);

struct DegreeConcentrationRow {
  double expected_degree;
  double deviation;          // |sqrt(dhat_i) - sqrt(d_i)|
  double bound_failure_prob;  // min(1, 2 exp(-eps^2 / (2 + eps / sqrt(d_i))))
  bool exceeded;             // deviation > eps
};

// Per-node Chernoff-style concentration report for one sample.
std::vector<DegreeConcentrationRow> degree_concentration_check(const PfmModel& model,
                                                               const SampledGraph& graph,
                                                               double epsilon);

struct DegreeConcentrationSummary {
  double epsilon;
  int num_seeds;
  double worst_empirical_failure;  // max over nodes of the per-node failure fraction
  double worst_margin;  // max over nodes of empirical - (bound + 3 SE); <= 0 means the bound held
};

// Replays the check over many seeds and compares each node's empirical
// failure fraction with its bound plus three Monte-Carlo standard errors.
DegreeConcentrationSummary degree_concentration_mc(const PfmModel& model, double epsilon,
                                                   int num_seeds, std::uint64_t master_seed);

// Edge-list round trip: "i,j" per undirected edge, 0-indexed, i <= j, sorted.
void write_edge_list(const SampledGraph& graph, const std::string& csv_path,
                     const std::string& sidecar_json_path);
SampledGraph read_edge_list(const std::string& csv_path, const std::string& sidecar_json_path);

}  // namespace pfm
