#include "pfm/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pfm {

std::vector<int> magnitude_order(const Vector& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(values[a]), mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return values[a] > values[b];  // positive before negative on ties
  });
  return order;
}

Vector stationary_distribution(const Matrix& R, double tol_sing) {
  const int K = static_cast<int>(R.rows());
  const Matrix M = R.transpose() - Matrix::Identity(K, K);
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const Vector& sing = svd.singularValues();
  if (K >= 2 && sing[K - 2] <= tol_sing)
    fail(ErrorCode::DisconnectedFrame, "eigenvalue 1 of R has multiplicity > 1");
  Vector rho = svd.matrixV().col(K - 1);
  const double total = rho.sum();
  if (std::abs(total) < 1e-12)
    fail(ErrorCode::NoConvergence, "null vector of R^T - I has zero sum");
  rho /= total;
  for (int k = 0; k < K; ++k)
    if (!(rho[k] > 0.0))
      fail(ErrorCode::DisconnectedFrame,
           "stationary distribution has a nonpositive entry at " + std::to_string(k));
  const double residual = (rho.transpose() * R - rho.transpose()).cwiseAbs().maxCoeff();
  if (residual > 1e-8)
    fail(ErrorCode::NoConvergence,
         "stationary residual " + std::to_string(residual) + " too large");
  return rho;
}

PreferenceFrame PreferenceFrame::unchecked(const Matrix& R, const Vector& rho) {
  PreferenceFrame frame;
  frame.K = static_cast<int>(R.rows());
  frame.R = R;
  frame.rho = rho;
  return frame;
}

PreferenceFrame build_preference_frame(const Matrix& R_raw, const FrameOptions& options) {
  const int K = static_cast<int>(R_raw.rows());
  if (K == 0 || R_raw.cols() != K)
    fail(ErrorCode::InvalidSpec, "R must be a nonempty square matrix");
  if (R_raw.minCoeff() < 0.0) fail(ErrorCode::InvalidSpec, "R must be nonnegative");

  PreferenceFrame frame;
  frame.K = K;

  const Vector sums = R_raw.rowwise().sum();
  if (sums.minCoeff() <= 0.0) fail(ErrorCode::NotStochastic, "a row of R sums to zero");
  frame.normalization_shift = (sums.array() - 1.0).abs().maxCoeff();
  if (options.row_normalize) {
    if (frame.normalization_shift > options.tol_stoch_raw)
      fail(ErrorCode::NotStochastic,
           "row sums deviate from 1 by " + std::to_string(frame.normalization_shift));
    frame.R = R_raw.array().colwise() / sums.array();
    if (frame.normalization_shift > options.normalize_warn)
      frame.warnings.push_back("rows renormalized; worst deviation " +
                               std::to_string(frame.normalization_shift));
  } else {
    if (frame.normalization_shift > options.tol_stoch)
      fail(ErrorCode::NotStochastic,
           "row sums deviate from 1 by " + std::to_string(frame.normalization_shift));
    frame.R = R_raw;
  }
  if (frame.R.maxCoeff() > 1.0 + options.tol_stoch)
    fail(ErrorCode::NotStochastic, "R has an entry above 1");

  {
    Eigen::JacobiSVD<Matrix> svd(frame.R);
    if (svd.singularValues()[K - 1] <= options.tol_sing)
      fail(ErrorCode::Singular, "R is numerically singular");
  }

  frame.rho = stationary_distribution(frame.R, options.tol_sing);

  frame.reversibility_residual = 0.0;
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l)
      frame.reversibility_residual = std::max(
          frame.reversibility_residual,
          std::abs(frame.rho[k] * frame.R(k, l) - frame.rho[l] * frame.R(l, k)));
  if (frame.reversibility_residual > options.tol_rev) {
    if (options.reversibility_hard_fail)
      fail(ErrorCode::NotReversible, "detailed balance violated by " +
                                         std::to_string(frame.reversibility_residual));
    frame.reversibility_warned = true;
    frame.warnings.push_back("detailed balance violated by " +
                             std::to_string(frame.reversibility_residual));
  }

  // Reversibility makes B = diag(rho)^{1/2} R diag(rho)^{-1/2} symmetric; the
  // symmetrized form always has eigenvalue 1 with eigenvector sqrt(rho).
  const Vector sq = frame.rho.cwiseSqrt();
  Matrix B(K, K);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) B(k, l) = sq[k] * frame.R(k, l) / sq[l];
  const Matrix Bsym = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(Bsym);
  if (es.info() != Eigen::Success) fail(ErrorCode::EigensolverFailure, "frame eigensolver failed");

  const std::vector<int> order = magnitude_order(es.eigenvalues());
  frame.eigenvalues.resize(K);
  frame.eigenvectors.resize(K, K);
  for (int c = 0; c < K; ++c) {
    frame.eigenvalues[c] = es.eigenvalues()[order[c]];
    Vector u = es.eigenvectors().col(order[c]).cwiseQuotient(sq);
    u /= u.norm();
    int arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u[arg] < 0.0) u = -u;
    frame.eigenvectors.col(c) = u;
  }

  if (std::abs(frame.eigenvalues[0] - 1.0) > std::max(options.tol_eig, 10 * frame.reversibility_residual))
    fail(ErrorCode::EigensolverFailure,
         "leading frame eigenvalue is " + std::to_string(frame.eigenvalues[0]));
  if (K >= 2 && std::abs(1.0 - std::abs(frame.eigenvalues[1])) <= options.tol_sing)
    fail(ErrorCode::DisconnectedFrame, "eigenvalue 1 of R has multiplicity > 1");

  frame.eigen_residual =
      (frame.R * frame.eigenvectors -
       frame.eigenvectors * frame.eigenvalues.asDiagonal())
          .cwiseAbs()
          .maxCoeff();

  return frame;
}

double frame_factor(const PreferenceFrame& frame) {
  const int K = frame.K;
  double best = 0.0;
  for (int k = 0; k < K; ++k) {
    double acc = frame.R(k, k);
    for (int l = 0; l < K; ++l)
      if (l != k) acc += std::sqrt(frame.R(k, l) * frame.R(l, k));
    best = std::max(best, acc);
  }
  return best;
}

nlohmann::json frame_to_json(const PreferenceFrame& frame, bool row_normalize) {
  nlohmann::json doc;
  std::vector<std::vector<double>> rows(frame.K, std::vector<double>(frame.K));
  for (int k = 0; k < frame.K; ++k)
    for (int l = 0; l < frame.K; ++l) rows[k][l] = frame.R(k, l);
  doc["R"] = rows;
  doc["row_normalize"] = row_normalize;
  return doc;
}

PreferenceFrame frame_from_json(const nlohmann::json& doc) {
  if (!doc.contains("R")) fail(ErrorCode::ConfigError, "frame json needs an R matrix");
  const auto& rows = doc.at("R");
  const int K = static_cast<int>(rows.size());
  Matrix R(K, K);
  for (int k = 0; k < K; ++k) {
    if (static_cast<int>(rows[k].size()) != K)
      fail(ErrorCode::ConfigError, "frame R is not square");
    for (int l = 0; l < K; ++l) R(k, l) = rows[k][l].get<double>();
  }
  FrameOptions options;
  options.row_normalize = doc.value("row_normalize", true);
  if (doc.contains("reversibility"))
    options.reversibility_hard_fail = doc.at("reversibility").get<std::string>() != "warn";
  return build_preference_frame(R, options);
}

}  // namespace pfm
