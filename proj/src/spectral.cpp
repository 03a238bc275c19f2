#include "pfm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfm/kernels.hpp"
#include "pfm/rng.hpp"

namespace pfm {

namespace {

Vector degree_or_fail(const Matrix& M) {
  Vector d = kernels::row_sums(M);
  std::string offenders;
  int bad = 0;
  for (int i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      if (bad < 8) offenders += (bad ? "," : "") + std::to_string(i);
      ++bad;
    }
  }
  if (bad) fail(ErrorCode::ZeroDegreeNode, std::to_string(bad) + " zero-degree nodes: " + offenders);
  return d;
}

void fix_sign(Eigen::Ref<Vector> v) {
  int arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

std::pair<Matrix, Vector> normalized_laplacian(const Matrix& M) {
  Vector d = degree_or_fail(M);
  Matrix L;
  kernels::scale_symmetric(L, M, d.cwiseSqrt().cwiseInverse());
  return {std::move(L), std::move(d)};
}

std::pair<Matrix, Vector> normalized_laplacian(const SampledGraph& graph) {
  Vector d = graph.empirical_degrees;
  std::string offenders;
  int bad = 0;
  for (int i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) {
      if (bad < 8) offenders += (bad ? "," : "") + std::to_string(i);
      ++bad;
    }
  if (bad) fail(ErrorCode::ZeroDegreeNode, std::to_string(bad) + " zero-degree nodes: " + offenders);
  Matrix L;
  kernels::scale_symmetric_bytes(L, graph.A, d.cwiseSqrt().cwiseInverse());
  return {std::move(L), std::move(d)};
}

LanczosResult lanczos_topk(const std::function<void(Vector&, const Vector&)>& op, int n,
                           int want_vectors, int want_values, const SpectralOptions& options) {
  const int want = want_vectors + want_values;
  const int m_max = std::min(n, options.lanczos_max_iter);
  Matrix basis(n, m_max);
  Vector alpha(m_max), beta(m_max);

  // Fixed pseudorandom start so runs are reproducible.
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng::uniform01(0x1A2C5051ull, i) - 0.5;
  v /= v.norm();
  basis.col(0) = v;

  Vector w(n);
  int m = 0;
  Eigen::SelfAdjointEigenSolver<Matrix> small;

  auto converged_set = [&](int steps) -> std::pair<bool, std::vector<int>> {
    Matrix T = Matrix::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < steps) {
        T(i, i + 1) = beta[i];
        T(i + 1, i) = beta[i];
      }
    }
    small.compute(T);
    if (small.info() != Eigen::Success) fail(ErrorCode::EigensolverFailure, "tridiagonal solve failed");
    const std::vector<int> order = magnitude_order(small.eigenvalues());
    const int have = std::min(want, steps);
    std::vector<int> picked(order.begin(), order.begin() + have);
    if (steps >= n) return {true, picked};  // spanned the whole space
    if (have < want) return {false, picked};
    const double tail = std::abs(beta[steps - 1]);
    for (int idx = 0; idx < want; ++idx) {
      const double resid = tail * std::abs(small.eigenvectors()(steps - 1, picked[idx]));
      const double tol = idx < want_vectors ? options.lanczos_tol : options.lanczos_value_tol;
      if (resid > tol * std::max(1.0, std::abs(small.eigenvalues()[picked[idx]]))) return {false, picked};
    }
    return {true, picked};
  };

  bool done = false;
  std::vector<int> picked;
  while (m < m_max) {
    op(w, basis.col(m));
    if (m > 0) w -= beta[m - 1] * basis.col(m - 1);
    alpha[m] = w.dot(basis.col(m));
    w -= alpha[m] * basis.col(m);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= m; ++j) w -= w.dot(basis.col(j)) * basis.col(j);
    beta[m] = w.norm();
    ++m;
    if (beta[m - 1] < 1e-13) {
      // Invariant subspace hit; restart with a fresh deterministic direction.
      auto [ok, pick] = converged_set(m);
      picked = std::move(pick);
      if (ok || m >= n) {
        done = ok || m >= n;
        break;
      }
      for (int i = 0; i < n; ++i) w[i] = rng::uniform01(0x7E57ull + m, i) - 0.5;
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < m; ++j) w -= w.dot(basis.col(j)) * basis.col(j);
      beta[m - 1] = 0.0;
      const double norm = w.norm();
      if (norm < 1e-13) break;
      w /= norm;
      if (m < m_max) basis.col(m) = w;
      continue;
    }
    if (m < m_max) basis.col(m) = w / beta[m - 1];
    if (m % 10 == 0 || m == m_max || m == n) {
      auto [ok, pick] = converged_set(m);
      picked = std::move(pick);
      if (ok) {
        done = true;
        break;
      }
    }
  }
  if (picked.empty()) {
    auto [ok, pick] = converged_set(m);
    done = ok;
    picked = std::move(pick);
  }
  if (!done)
    fail(ErrorCode::NoConvergence,
         "Lanczos did not converge in " + std::to_string(m) + " iterations");

  LanczosResult result;
  result.iterations = m;
  result.converged = true;
  const int have = static_cast<int>(picked.size());
  result.values.resize(have);
  for (int i = 0; i < have; ++i) result.values[i] = small.eigenvalues()[picked[i]];
  const int nv = std::min(want_vectors, have);
  result.vectors.resize(n, nv);
  for (int i = 0; i < nv; ++i) {
    result.vectors.col(i) =
        basis.leftCols(m) * small.eigenvectors().col(picked[i]).head(m);
    result.vectors.col(i) /= result.vectors.col(i).norm();
  }
  return result;
}

SpectralEmbedding top_k_eigen(const Matrix& L, int K, const Vector* degrees,
                              const SpectralOptions& options) {
  const int n = static_cast<int>(L.rows());
  if (K < 1 || K > n) fail(ErrorCode::DimensionMismatch, "K must lie in [1, n]");

  SpectralEmbedding emb;
  emb.K = K;

  bool use_full = options.solver == SpectralOptions::Solver::Full ||
                  (options.solver == SpectralOptions::Solver::Auto && n <= options.full_threshold);
  if (options.solver == SpectralOptions::Solver::Lanczos && n <= 4 * (K + 2)) use_full = true;

  if (use_full) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(L);
    if (es.info() != Eigen::Success) fail(ErrorCode::EigensolverFailure, "eigensolver failed");
    const std::vector<int> order = magnitude_order(es.eigenvalues());
    emb.full_spectrum = true;
    emb.eigenvalues.resize(n);
    emb.all_vectors.resize(n, n);
    for (int c = 0; c < n; ++c) {
      emb.eigenvalues[c] = es.eigenvalues()[order[c]];
      emb.all_vectors.col(c) = es.eigenvectors().col(order[c]);
      fix_sign(emb.all_vectors.col(c));
    }
    emb.Y = emb.all_vectors.leftCols(K);
    emb.sigma = K < n ? std::abs(emb.eigenvalues[K - 1]) - std::abs(emb.eigenvalues[K]) : 0.0;
  } else {
    auto op = [&L](Vector& y, const Vector& x) { kernels::sym_matvec(y, L, x); };
    LanczosResult lan = lanczos_topk(op, n, K, 1, options);
    emb.full_spectrum = false;
    emb.eigenvalues = lan.values;
    emb.Y = lan.vectors;
    for (int c = 0; c < K; ++c) fix_sign(emb.Y.col(c));
    emb.sigma = lan.values.size() > K
                    ? std::abs(lan.values[K - 1]) - std::abs(lan.values[K])
                    : 0.0;
  }
  emb.degenerate_gap = emb.sigma <= 1e-12;

  if (degrees) {
    emb.degrees = *degrees;
    emb.V = emb.Y.array().colwise() * degrees->cwiseSqrt().cwiseInverse().array();
  }
  return emb;
}

double piecewise_constant_check(const Matrix& V, const Partition& partition) {
  double worst = 0.0;
  for (int k = 0; k < partition.K; ++k)
    worst = std::max(worst, kernels::max_row_spread(V, partition.members[k]));
  return worst;
}

BlockAnalysis block_analysis(const Matrix& L, const Partition& partition,
                             const PreferenceFrame& frame, double tol, bool strict,
                             int pm_check_limit) {
  const int K = partition.K;
  BlockAnalysis analysis;

  auto gather = [&L, &partition](int k, int l) {
    const auto& rows = partition.members[k];
    const auto& cols = partition.members[l];
    Matrix block(rows.size(), cols.size());
    for (size_t b = 0; b < cols.size(); ++b)
      for (size_t a = 0; a < rows.size(); ++a) block(a, b) = L(rows[a], cols[b]);
    return block;
  };

  for (int k = 0; k < K; ++k) {
    const Matrix block = gather(k, k);
    DiagBlockSummary row{k, 0.0, 0.0, 0.0, false};
    if (block.rows() < 2) {
      row.trivial = true;
      row.lambda_max = block.rows() == 1 ? block(0, 0) : 0.0;
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> es(block);
      if (es.info() != Eigen::Success) fail(ErrorCode::EigensolverFailure, "block eigensolver failed");
      const std::vector<int> order = magnitude_order(es.eigenvalues());
      row.lambda_max = es.eigenvalues()[order[0]];
      row.lambda2 = es.eigenvalues()[order[1]];
      row.ratio = row.lambda_max > 0.0 ? std::abs(row.lambda2) / row.lambda_max : 0.0;
    }
    analysis.max_frame_deviation =
        std::max(analysis.max_frame_deviation, std::abs(row.lambda_max - frame.R(k, k)));
    analysis.diag.push_back(row);
  }

  for (int k = 0; k < K; ++k) {
    for (int l = k + 1; l < K; ++l) {
      const Matrix block = gather(k, l);
      PairBlockSummary row{k, l, 0.0, 0.0, 0.0, false};
      Eigen::JacobiSVD<Matrix> svd(block);
      const Vector& sv = svd.singularValues();
      row.lambda_max = sv.size() > 0 ? sv[0] : 0.0;
      if (std::min(block.rows(), block.cols()) < 2 || row.lambda_max <= tol) {
        row.trivial = true;  // width-1 or absent block, nothing to mix
      } else {
        row.lambda3 = sv[1];
        row.ratio = sv[1] / sv[0];
      }
      analysis.max_frame_deviation =
          std::max(analysis.max_frame_deviation,
                   std::abs(row.lambda_max - std::sqrt(frame.R(k, l) * frame.R(l, k))));

      if (block.rows() + block.cols() <= pm_check_limit) {
        // Assemble M_kl and verify its spectrum is symmetric about zero.
        const int nk = static_cast<int>(block.rows()), nl = static_cast<int>(block.cols());
        Matrix M = Matrix::Zero(nk + nl, nk + nl);
        M.topRightCorner(nk, nl) = block;
        M.bottomLeftCorner(nl, nk) = block.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> es(M);
        const Vector& ev = es.eigenvalues();  // ascending
        for (int i = 0; i < ev.size(); ++i)
          analysis.max_pm_asymmetry =
              std::max(analysis.max_pm_asymmetry, std::abs(ev[i] + ev[ev.size() - 1 - i]));
      }
      analysis.offdiag.push_back(row);
    }
  }

  for (const auto& row : analysis.diag) analysis.c = std::max(analysis.c, row.ratio);
  for (const auto& row : analysis.offdiag) analysis.c = std::max(analysis.c, row.ratio);

  if (strict && analysis.max_frame_deviation > tol)
    fail(ErrorCode::FrameMismatch, "block eigenvalues deviate from the frame by " +
                                       std::to_string(analysis.max_frame_deviation));
  return analysis;
}

SpuriousCertificate spurious_bound_certificate(const BlockAnalysis& analysis,
                                               const PreferenceFrame& frame,
                                               const SpectralEmbedding& spectrum,
                                               double tol, bool throw_on_violation) {
  if (!spectrum.full_spectrum)
    fail(ErrorCode::InvalidSpec, "spurious certificate needs the full spectrum");
  SpuriousCertificate cert;
  cert.c = analysis.c;
  cert.frame_factor_value = frame_factor(frame);
  cert.bound = cert.c * cert.frame_factor_value;
  cert.max_spurious_abs = 0.0;
  for (int j = spectrum.K; j < spectrum.eigenvalues.size(); ++j)
    cert.max_spurious_abs = std::max(cert.max_spurious_abs, std::abs(spectrum.eigenvalues[j]));
  cert.holds = cert.max_spurious_abs <= cert.bound + tol;
  if (!cert.holds && throw_on_violation)
    fail(ErrorCode::CertificateViolation,
         "max spurious |lambda| " + std::to_string(cert.max_spurious_abs) + " exceeds bound " +
             std::to_string(cert.bound));
  return cert;
}

double spurious_orthogonality_check(const SpectralEmbedding& spectrum,
                                    const Partition& partition) {
  if (!spectrum.full_spectrum || spectrum.degrees.size() == 0)
    fail(ErrorCode::InvalidSpec, "orthogonality check needs a full spectrum with degrees");
  const Vector s = spectrum.degrees.cwiseSqrt();
  double worst = 0.0;
  for (int k = 0; k < partition.K; ++k) {
    const auto& members = partition.members[k];
    double norm_sk = 0.0;
    for (int node : members) norm_sk += s[node] * s[node];
    norm_sk = std::sqrt(norm_sk);
    for (int j = spectrum.K; j < spectrum.all_vectors.cols(); ++j) {
      double dot = 0.0;
      for (int node : members) dot += spectrum.all_vectors(node, j) * s[node];
      worst = std::max(worst, std::abs(dot) / norm_sk);
    }
  }
  return worst;
}

double spectral_norm_diff(const Matrix& L1, const Matrix& L2, const SpectralOptions& options) {
  if (L1.rows() != L2.rows() || L1.cols() != L2.cols())
    fail(ErrorCode::DimensionMismatch, "matrices differ in shape");
  const int n = static_cast<int>(L1.rows());
  const bool use_full = options.solver == SpectralOptions::Solver::Full ||
                        (options.solver == SpectralOptions::Solver::Auto &&
                         n <= options.full_threshold);
  if (use_full) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(L1 - L2);
    if (es.info() != Eigen::Success) fail(ErrorCode::EigensolverFailure, "eigensolver failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Vector t1(n), t2(n);
  auto op = [&](Vector& y, const Vector& x) {
    kernels::sym_matvec(t1, L1, x);
    kernels::sym_matvec(t2, L2, x);
    y = t1 - t2;
  };
  SpectralOptions value_only = options;
  value_only.lanczos_tol = 1e-9;
  LanczosResult lan = lanczos_topk(op, n, 0, 1, value_only);
  return std::abs(lan.values[0]);
}

double concentration_rhs(double psi, double gamma, int n) {
  return psi * gamma * gamma / std::sqrt(std::log(static_cast<double>(n)));
}

double subspace_distance(const Matrix& Y, const Matrix& Y_hat) {
  if (Y.rows() != Y_hat.rows() || Y.cols() != Y_hat.cols())
    fail(ErrorCode::DimensionMismatch, "embeddings differ in shape");
  // O is the polar factor of Y^T Y_hat (orthogonal Procrustes).
  Eigen::JacobiSVD<Matrix> svd(Y.transpose() * Y_hat,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix O = svd.matrixU() * svd.matrixV().transpose();
  return (Y_hat - Y * O).norm();
}

}  // namespace pfm
