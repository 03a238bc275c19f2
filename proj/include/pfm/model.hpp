#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pfm/frame.hpp"
#include "pfm/partition.hpp"

namespace pfm {

// Node propensities, all strictly positive.
struct NodeWeights {
  Vector w;
  Vector cluster_sums(const Partition& part) const;
};

// Per-cluster degree profiles and a total volume, for the constructive
// parametrization d_i = d_tot * rho_k * pi_{C_k, i}.
struct DegreeSpec {
  std::vector<Vector> pi;  // one probability vector per community
  double d_tot = 0.0;
};

// Edge-probability model admitting a preference frame.
struct PfmModel {
  PreferenceFrame frame;
  Partition partition;
  Matrix S;                 // symmetric, entries in [0, 1]
  Vector expected_degrees;  // row sums of S
  double d_tot = 0.0;
  Vector cluster_volumes;   // d_{C_k}
  double d_min = 0.0;
  double d_max_scaled = 0.0;  // max_ij n * S_ij
  bool allow_self_loops = true;
  bool is_hpfm = false;
};

// Eq.-2 construction: S_ij = R_ml w_i w_j / rho_l for i in C_l, j in C_m.
PfmModel hpfm_matrix(const PreferenceFrame& frame, const Partition& partition,
                     const NodeWeights& weights, bool allow_self_loops = true);

// Constructive free parametrization: P_ij = R_kl pi_{C_l, j}, d_i = d_tot rho_k pi_{C_k, i},
// S = D P.
PfmModel pfm_from_degrees(const PreferenceFrame& frame, const Partition& partition,
                          const DegreeSpec& spec);

// Stochastic block model with connectivity matrix B (must be symmetric).
PfmModel sbm_model(const Matrix& B, const Partition& partition, bool allow_self_loops = false);

// Closed-form frame of the SBM(p, q) with the given community sizes.
PreferenceFrame sbm_pq_frame(double p, double q, const std::vector<int>& sizes,
                             bool allow_self_loops = false);

struct BlockStochasticCheck {
  Matrix R_hat;         // mean block transition sums
  double max_residual;  // max over nodes and blocks of |row block sum - R_hat|
};

// Eq.-1 checker on an arbitrary nonnegative matrix.
BlockStochasticCheck verify_block_stochastic(const Matrix& S, const Partition& partition);

// Resamples S inside each block with double-centered symmetric noise, leaving
// every degree and every block transition sum unchanged. amplitude in [0, 1]
// scales the perturbation relative to the room each block has inside [0, 1].
// Produces general (non-factorized) members of the model's frame class.
PfmModel block_preserving_perturbation(const PfmModel& model, double amplitude,
                                       std::uint64_t seed);

}  // namespace pfm
