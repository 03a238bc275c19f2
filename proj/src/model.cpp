#include "pfm/model.hpp"

#include <cmath>
#include <string>

#include "pfm/kernels.hpp"
#include "pfm/rng.hpp"

namespace pfm {

namespace {

void finalize_model(PfmModel& model) {
  const int n = model.partition.n;
  model.expected_degrees = kernels::row_sums(model.S);
  for (int i = 0; i < n; ++i)
    if (!(model.expected_degrees[i] > 0.0))
      fail(ErrorCode::ZeroDegreeRow, "expected degree of node " + std::to_string(i) + " is zero");
  model.d_tot = model.expected_degrees.sum();
  model.d_min = model.expected_degrees.minCoeff();
  model.cluster_volumes.setZero(model.partition.K);
  for (int i = 0; i < n; ++i)
    model.cluster_volumes[model.partition.labels[i]] += model.expected_degrees[i];
  model.d_max_scaled = n * model.S.maxCoeff();
}

void check_probabilities(const Matrix& S) {
  const double top = S.maxCoeff();
  if (top > 1.0)
    fail(ErrorCode::ProbabilityOverflow,
         "max edge probability " + std::to_string(top) + " exceeds 1");
}

}  // namespace

Vector NodeWeights::cluster_sums(const Partition& part) const {
  Vector sums = Vector::Zero(part.K);
  for (int i = 0; i < part.n; ++i) sums[part.labels[i]] += w[i];
  return sums;
}

PfmModel hpfm_matrix(const PreferenceFrame& frame, const Partition& partition,
                     const NodeWeights& weights, bool allow_self_loops) {
  if (static_cast<int>(weights.w.size()) != partition.n)
    fail(ErrorCode::SizeMismatch, "weight vector length does not match partition");
  if (weights.w.minCoeff() <= 0.0) fail(ErrorCode::InvalidSpec, "weights must be positive");
  if (frame.K != partition.K) fail(ErrorCode::SizeMismatch, "frame and partition disagree on K");

  // coef(l, m) = R_ml / rho_l; the upper triangle is computed once and
  // mirrored, which makes S exactly symmetric.
  Matrix coef(frame.K, frame.K);
  for (int l = 0; l < frame.K; ++l)
    for (int m = 0; m < frame.K; ++m) coef(l, m) = frame.R(m, l) / frame.rho[l];

  PfmModel model;
  model.frame = frame;
  model.partition = partition;
  model.allow_self_loops = allow_self_loops;
  model.is_hpfm = true;
  kernels::fill_weighted_blocks(model.S, weights.w, partition.labels, coef);
  if (!allow_self_loops) model.S.diagonal().setZero();
  check_probabilities(model.S);
  finalize_model(model);
  return model;
}

PfmModel pfm_from_degrees(const PreferenceFrame& frame, const Partition& partition,
                          const DegreeSpec& spec) {
  if (frame.K != partition.K) fail(ErrorCode::SizeMismatch, "frame and partition disagree on K");
  if (static_cast<int>(spec.pi.size()) != partition.K)
    fail(ErrorCode::InvalidSpec, "need one degree profile per community");
  if (!(spec.d_tot > 0.0)) fail(ErrorCode::InvalidSpec, "d_tot must be positive");

  Vector pi_flat(partition.n);
  Vector degrees(partition.n);
  for (int k = 0; k < partition.K; ++k) {
    const Vector& pik = spec.pi[k];
    if (static_cast<int>(pik.size()) != partition.sizes[k])
      fail(ErrorCode::InvalidSpec, "degree profile " + std::to_string(k) + " has wrong length");
    if (std::abs(pik.sum() - 1.0) > 1e-12)
      fail(ErrorCode::InvalidSpec, "degree profile " + std::to_string(k) + " does not sum to 1");
    for (int j = 0; j < partition.sizes[k]; ++j) {
      if (!(pik[j] > 0.0))
        fail(ErrorCode::InvalidSpec,
             "degree profile " + std::to_string(k) + " has a nonpositive entry");
      const int node = partition.members[k][j];
      pi_flat[node] = pik[j];
      degrees[node] = spec.d_tot * frame.rho[k] * pik[j];
    }
  }

  PfmModel model;
  model.frame = frame;
  model.partition = partition;
  model.allow_self_loops = true;
  model.is_hpfm = false;
  kernels::fill_degree_blocks(model.S, degrees, pi_flat, partition.labels, frame.R);
  if (model.S.maxCoeff() > 1.0)
    fail(ErrorCode::ProbabilityOverflow,
         "d_tot too large: max edge probability " + std::to_string(model.S.maxCoeff()));
  finalize_model(model);
  return model;
}

PfmModel sbm_model(const Matrix& B, const Partition& partition, bool allow_self_loops) {
  if (B.rows() != partition.K || B.cols() != partition.K)
    fail(ErrorCode::SizeMismatch, "B and partition disagree on K");
  if (B.minCoeff() < 0.0 || B.maxCoeff() > 1.0)
    fail(ErrorCode::InvalidProbability, "B entries must lie in [0, 1]");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorCode::InvalidProbability, "B must be symmetric for an undirected model");

  const int n = partition.n;
  PfmModel model;
  model.partition = partition;
  model.allow_self_loops = allow_self_loops;
  model.is_hpfm = false;
  model.S.resize(n, n);
  Vector ones = Vector::Ones(n);
  kernels::fill_weighted_blocks(model.S, ones, partition.labels, B);
  if (!allow_self_loops) model.S.diagonal().setZero();

  // Closed-form frame: R_kl proportional to the block row sums of S.
  Matrix R(partition.K, partition.K);
  for (int k = 0; k < partition.K; ++k) {
    double dk = 0.0;
    for (int l = 0; l < partition.K; ++l) {
      double mass = B(k, l) * partition.sizes[l];
      if (l == k && !allow_self_loops) mass -= B(k, k);
      R(k, l) = mass;
      dk += mass;
    }
    if (dk <= 0.0) fail(ErrorCode::ZeroDegreeRow, "community " + std::to_string(k) + " has zero degree");
    R.row(k) /= dk;
  }
  FrameOptions options;
  options.row_normalize = false;
  options.tol_stoch = 1e-9;
  model.frame = build_preference_frame(R, options);
  finalize_model(model);
  return model;
}

PreferenceFrame sbm_pq_frame(double p, double q, const std::vector<int>& sizes,
                             bool allow_self_loops) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
    fail(ErrorCode::InvalidProbability, "p and q must lie in [0, 1]");
  const int K = static_cast<int>(sizes.size());
  int n = 0;
  for (int s : sizes) n += s;
  Matrix R(K, K);
  for (int l = 0; l < K; ++l) {
    const double within = p * (sizes[l] - (allow_self_loops ? 0 : 1));
    const double d = within + q * (n - sizes[l]);
    if (d <= 0.0) fail(ErrorCode::ZeroDegreeRow, "community " + std::to_string(l) + " has zero degree");
    for (int m = 0; m < K; ++m) R(l, m) = (m == l ? within : q * sizes[m]) / d;
  }
  FrameOptions options;
  options.row_normalize = false;
  options.tol_stoch = 1e-9;
  return build_preference_frame(R, options);
}

BlockStochasticCheck verify_block_stochastic(const Matrix& S, const Partition& partition) {
  const int n = partition.n;
  const int K = partition.K;
  if (S.rows() != n || S.cols() != n)
    fail(ErrorCode::SizeMismatch, "S and partition disagree on n");
  const Vector d = kernels::row_sums(S);
  for (int i = 0; i < n; ++i)
    if (!(d[i] > 0.0)) fail(ErrorCode::ZeroDegreeRow, "row " + std::to_string(i) + " sums to zero");

  Matrix row_blocks;
  kernels::block_transition_sums(row_blocks, S, d, partition.labels, K);

  BlockStochasticCheck check;
  check.R_hat.setZero(K, K);
  for (int i = 0; i < n; ++i) check.R_hat.row(partition.labels[i]) += row_blocks.row(i);
  for (int k = 0; k < K; ++k) check.R_hat.row(k) /= partition.sizes[k];
  check.max_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dev =
        (row_blocks.row(i) - check.R_hat.row(partition.labels[i])).cwiseAbs().maxCoeff();
    check.max_residual = std::max(check.max_residual, dev);
  }
  return check;
}

PfmModel block_preserving_perturbation(const PfmModel& model, double amplitude,
                                       std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude > 1.0)
    fail(ErrorCode::InvalidSpec, "amplitude must lie in [0, 1]");
  const Partition& part = model.partition;
  PfmModel out = model;
  out.is_hpfm = false;
  rng::Sequence rand(seed);

  for (int k = 0; k < part.K; ++k) {
    for (int l = k; l < part.K; ++l) {
      const auto& rows = part.members[k];
      const auto& cols = part.members[l];
      const int nk = static_cast<int>(rows.size());
      const int nl = static_cast<int>(cols.size());
      if (nk < 2 || nl < 2) continue;  // no room for a centered perturbation

      Matrix E(nk, nl);
      double lo = 1.0, hi = 0.0;
      for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nl; ++b) {
          E(a, b) = rand.next_uniform() - 0.5;
          const double s = model.S(rows[a], cols[b]);
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
      if (k == l) E = 0.5 * (E + E.transpose()).eval();
      // Double centering: every row and column of E sums to zero, so degrees
      // and Eq.-1 block sums are untouched.
      const Vector rmean = E.rowwise().mean();
      const Vector cmean = E.colwise().mean().transpose();
      const double total = E.mean();
      for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nl; ++b) E(a, b) += total - rmean[a] - cmean[b];

      const double margin = std::min(lo, 1.0 - hi);
      const double emax = E.cwiseAbs().maxCoeff();
      if (margin <= 0.0 || emax <= 0.0) continue;
      E *= amplitude * margin / emax;

      for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nl; ++b) {
          out.S(rows[a], cols[b]) += E(a, b);
          if (l != k) out.S(cols[b], rows[a]) += E(a, b);
        }
    }
  }
  out.S = 0.5 * (out.S + out.S.transpose()).eval();
  finalize_model(out);
  return out;
}

}  // namespace pfm
