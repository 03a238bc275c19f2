#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pfm/clustering.hpp"
#include "pfm/model.hpp"
#include "pfm/theory.hpp"

namespace pfm {

// Model construction recipe, loadable from the JSON config format.
struct ModelConfig {
  std::string type;  // hpfm | pfm | sbm | sbm_pq
  nlohmann::json frame;
  std::vector<int> sizes;
  // weights (hpfm)
  std::string weights_dist = "uniform";
  double weights_low = 0.5, weights_high = 1.0;
  std::vector<double> weight_values;          // explicit weights
  std::vector<double> weight_cluster_scales;  // per-community multiplier
  // degree spec (pfm)
  std::string degree_dist = "uniform";
  std::vector<std::vector<double>> degree_pi;
  double d_tot = 0.0;
  // sbm
  nlohmann::json B;
  double p = 0.0, q = 0.0;
  bool allow_self_loops = true;
  std::uint64_t seed = 0;  // weight / profile draw

  static ModelConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct ExperimentConfig {
  ModelConfig model;
  int K = 0;  // 0: use the frame's K
  int kmeans_restarts = 50;
  std::uint64_t seed = 0;
  int replicates = 1;
  int jobs = 1;
  bool expected_model = false;
  TheoryConstants constants;
  std::string out_dir;  // empty: no files
  std::string format = "json";

  static ExperimentConfig from_json(const nlohmann::json& doc);
};

struct ReplicateRecord {
  int index = 0;
  std::uint64_t seed = 0;
  double p_err = 0.0;
  double norm_diff = 0.0;
  double sigma_hat = 0.0;
  double dhat_min = 0.0;
  AssumptionReport assumptions;
  std::vector<BoundReport> bounds;
  std::vector<RelatedWorkRecord> related_work;
  std::vector<double> top_eigenvalues;
  std::vector<int> found_labels;
};

struct ExperimentResult {
  PfmModel model;
  SeparationReport separation;
  std::vector<ReplicateRecord> replicates;
  double median_p_err = 0.0, q25_p_err = 0.0, q75_p_err = 0.0;
  double median_norm_diff = 0.0, q25_norm_diff = 0.0, q75_norm_diff = 0.0;
  std::vector<double> expected_top_eigenvalues;
  double expected_sigma = 0.0;
  double log_n = 0.0;
};

PfmModel build_model(const ModelConfig& config);

// Full pipeline per replicate (sample, embed, cluster, check, bound); writes
// results.json, replicates.csv, scree.csv and embedding.csv when out_dir set.
ExperimentResult run_experiment(const ExperimentConfig& config);

nlohmann::json result_to_json(const ExperimentResult& result);

// The built-in section-4.2 comparison instance. variant: "main" (per-community
// calibrated weight scales, the g_max > 0 regime) or "alt" (community-blind
// uniform weights, the regime where the separation assumption fails).
ExperimentConfig sec42_config(const std::string& variant = "main", std::uint64_t seed = 4242,
                              int replicates = 10);

struct Sec42Row {
  std::string quantity;
  std::string paper;
  std::string observed;
};

struct Sec42Report {
  ExperimentResult result;
  std::vector<Sec42Row> table;
  std::string rendered;  // ready-to-print table
};

Sec42Report reproduce_sec42(const std::string& variant = "main", std::uint64_t seed = 4242,
                            int replicates = 10, const std::string& out_dir = "");

}  // namespace pfm
