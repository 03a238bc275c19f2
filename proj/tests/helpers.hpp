#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pfm/frame.hpp"
#include "pfm/model.hpp"
#include "pfm/partition.hpp"
#include "pfm/rng.hpp"

namespace test_helpers {

using pfm::Matrix;
using pfm::Vector;

// Reversible stochastic matrix from random symmetric positive weights.
inline Matrix random_reversible(int K, pfm::rng::Sequence& rand, double diag_boost = 1.0) {
  Matrix W(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = i; j < K; ++j) {
      const double v = 0.2 + rand.next_uniform();
      W(i, j) = v;
      W(j, i) = v;
    }
  W.diagonal().array() += diag_boost;
  Matrix R(K, K);
  for (int i = 0; i < K; ++i) R.row(i) = W.row(i) / W.row(i).sum();
  return R;
}

inline pfm::PreferenceFrame random_frame(int K, pfm::rng::Sequence& rand,
                                         double diag_boost = 1.0) {
  return pfm::build_preference_frame(random_reversible(K, rand, diag_boost));
}

inline pfm::DegreeSpec random_degree_spec(const pfm::Partition& part, double d_tot,
                                          pfm::rng::Sequence& rand) {
  pfm::DegreeSpec spec;
  spec.d_tot = d_tot;
  for (int k = 0; k < part.K; ++k) {
    Vector pi(part.sizes[k]);
    for (int j = 0; j < part.sizes[k]; ++j) pi[j] = 0.2 + rand.next_uniform();
    pi /= pi.sum();
    spec.pi.push_back(pi);
  }
  return spec;
}

inline pfm::NodeWeights random_weights(int n, pfm::rng::Sequence& rand, double lo = 0.5,
                                       double hi = 1.0) {
  pfm::NodeWeights weights;
  weights.w.resize(n);
  for (int i = 0; i < n; ++i) weights.w[i] = rand.next_uniform(lo, hi);
  return weights;
}

// Weights whose community sums are proportional to rho: the canonical case in
// which the homogeneous construction admits the input frame exactly.
inline pfm::NodeWeights canonical_weights(const pfm::PreferenceFrame& frame,
                                          const pfm::Partition& part, pfm::rng::Sequence& rand,
                                          double total = 0.0) {
  pfm::NodeWeights weights = random_weights(part.n, rand, 0.5, 1.0);
  const Vector sums = weights.cluster_sums(part);
  if (total <= 0.0) total = 0.1 * part.n;
  for (int i = 0; i < part.n; ++i) {
    const int k = part.labels[i];
    weights.w[i] *= total * frame.rho[k] / sums[k];
  }
  return weights;
}

// The frame an Eq.-2 model with the given cluster weight sums actually admits:
// row-normalized R_lm * (w_{C_m} / rho_m).
inline Matrix effective_hpfm_frame(const pfm::PreferenceFrame& frame, const Vector& cluster_w) {
  const int K = frame.K;
  Matrix R(K, K);
  for (int l = 0; l < K; ++l) {
    for (int m = 0; m < K; ++m) R(l, m) = frame.R(l, m) * cluster_w[m] / frame.rho[m];
    R.row(l) /= R.row(l).sum();
  }
  return R;
}

}  // namespace test_helpers
