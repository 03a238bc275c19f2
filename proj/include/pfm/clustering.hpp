#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pfm/model.hpp"
#include "pfm/partition.hpp"

namespace pfm {

struct Clustering {
  std::vector<int> labels;
  Matrix centers;          // K x dim
  double objective = 0.0;  // within-cluster sum of squared distances
  int iterations = 0;
  int best_restart = 0;
  std::vector<double> objective_history;  // per-Lloyd-iteration, non-increasing
};

struct KmeansOptions {
  int restarts = 50;
  int max_iter = 100;
  std::uint64_t seed = 0;
  double rel_tol = 1e-12;
};

// Best-of-restarts Lloyd with weighted distance-squared seeding. Deterministic
// given the seed; ties between restarts resolved by restart index.
Clustering kmeans(const Matrix& points, int K, const KmeansOptions& options = {});

// Exact mis-clustering rate: 1 - max over bijections of the matched overlap
// fraction. Brute force over K! for K <= 8, Hungarian assignment above.
double misclustering_rate(const std::vector<int>& found, const std::vector<int>& truth, int K);
double misclustering_rate(const Clustering& found, const Partition& truth);

// K x K overlap counts, overlap(t, f) = |{i : truth_i = t, found_i = f}|.
Eigen::MatrixXi overlap_matrix(const std::vector<int>& found, const std::vector<int>& truth,
                               int K);

// Force the assignment-solver path regardless of K (test hook).
double misclustering_rate_assignment(const std::vector<int>& found,
                                     const std::vector<int>& truth, int K);

struct SeparationReport {
  double c_max = 0.0, c_min = 0.0;            // d_{C_k} / (d_tot rho_k)
  double c_stmt_max = 0.0, c_stmt_min = 0.0;  // d_{C_k} / (n rho_k), as printed in the statement
  double ct_max = 0.0, ct_min = 0.0;          // n_k / (n rho_k), column-normalized variant
  Matrix pair_g;                              // K x K, diagonal zero
  double g_max = 0.0;                         // min over pairs k != m
  double g_max_tilde = 0.0;                   // same with the tilde constants
  double min_center_distance_sq = -1.0;       // min cross-community ||V_i - V_j||^2 when V given
};

// Separation constants of Prop. 4. When V (n x K embedding rows) is supplied,
// also reports the observed min cross-community squared row distance.
SeparationReport separation_gmax(const PreferenceFrame& frame, const PfmModel& model,
                                 const Matrix* V = nullptr);

}  // namespace pfm
