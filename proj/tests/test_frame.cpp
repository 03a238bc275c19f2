#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace pfm;

namespace {

Matrix sym2x2() {
  Matrix R(2, 2);
  R << 0.8, 0.2, 0.2, 0.8;
  return R;
}

Matrix sec42_raw() {
  Matrix R(5, 5);
  R << .80, .07, .02, .02, .09,
       .04, .52, .24, .12, .08,
       .01, .20, .65, .15, .00,
       .01, .08, .12, .70, .08,
       .13, .21, .02, .32, .33;
  return R;
}

// Second, independent evaluation of the frame factor via the remark's
// a^T b form: a_l = sqrt(r_kl), b_l = sqrt(r_lk).
double frame_factor_by_vectors(const Matrix& R) {
  const int K = static_cast<int>(R.rows());
  double best = 0.0;
  for (int k = 0; k < K; ++k) {
    double dot = 0.0;
    for (int l = 0; l < K; ++l) dot += std::sqrt(R(k, l)) * std::sqrt(R(l, k));
    best = std::max(best, dot);
  }
  return best;
}

}  // namespace

TEST_CASE("symmetric 2x2 frame") {
  const PreferenceFrame frame = build_preference_frame(sym2x2());
  CHECK(frame.rho[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(frame.rho[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(frame.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(frame.eigenvalues[1] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(frame_factor(frame) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity frame is disconnected") {
  try {
    build_preference_frame(Matrix::Identity(3, 3));
    CHECK(false);
  } catch (const PfmError& err) {
    CHECK(err.code() == ErrorCode::DisconnectedFrame);
  }
}

TEST_CASE("stationary distribution by hand-checkable elimination") {
  Matrix R(2, 2);
  R << 0.5, 0.5, 1.0, 0.0;
  const Vector rho = stationary_distribution(R);
  CHECK(rho[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rho[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary distribution rejects the identity") {
  CHECK_THROWS_AS(stationary_distribution(Matrix::Identity(2, 2)), PfmError);
}

TEST_CASE("section 4.2 frame: normalized, rho recomputed, eigenvalues near the target") {
  FrameOptions options;
  options.reversibility_hard_fail = false;
  const PreferenceFrame frame = build_preference_frame(sec42_raw(), options);
  CHECK(frame.rho.sum() == doctest::Approx(1.0).epsilon(1e-12));
  // The printed rho is the L2-normalized eigenvector; ours is the probability
  // vector pointing the same way.
  Vector printed(5);
  printed << .25, .44, .54, .65, .17;
  const Vector scaled = frame.rho / frame.rho.norm();
  CHECK((scaled - printed).cwiseAbs().maxCoeff() < 7e-3);
  CHECK(frame.reversibility_warned);
  Vector target(5);
  target << 1.0, 0.8, 0.6, 0.4, 0.2;
  CHECK((frame.eigenvalues - target).cwiseAbs().maxCoeff() < 0.01);

  // Hard-fail default rejects the printed matrix.
  CHECK_THROWS_AS(build_preference_frame(sec42_raw()), PfmError);
}

TEST_CASE("strict row-sum check without normalization") {
  FrameOptions options;
  options.row_normalize = false;
  CHECK_THROWS_AS(build_preference_frame(sec42_raw(), options), PfmError);
}

TEST_CASE("singular frame rejected") {
  Matrix R(2, 2);
  R << 0.5, 0.5, 0.5, 0.5;
  try {
    build_preference_frame(R);
    CHECK(false);
  } catch (const PfmError& err) {
    CHECK(err.code() == ErrorCode::Singular);
  }
}

TEST_CASE("non-reversible frame rejected, warn mode keeps it") {
  Matrix R(3, 3);
  R << 0.2, 0.7, 0.1,
       0.1, 0.3, 0.6,
       0.6, 0.1, 0.3;
  try {
    build_preference_frame(R);
    CHECK(false);
  } catch (const PfmError& err) {
    CHECK(err.code() == ErrorCode::NotReversible);
  }
  FrameOptions options;
  options.reversibility_hard_fail = false;
  const PreferenceFrame frame = build_preference_frame(R, options);
  CHECK(frame.reversibility_warned);
}

TEST_CASE("validated frames satisfy the spectral identities") {
  rng::Sequence rand(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int K = 2 + static_cast<int>(rand.next_below(5));
    const PreferenceFrame frame = test_helpers::random_frame(K, rand);
    CHECK((frame.rho.transpose() * frame.R - frame.rho.transpose()).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((frame.R.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    // diag(rho)^{1/2} R diag(rho)^{-1/2} symmetric under reversibility.
    const Vector sq = frame.rho.cwiseSqrt();
    Matrix B(K, K);
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < K; ++l) B(k, l) = sq[k] * frame.R(k, l) / sq[l];
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(frame.eigen_residual < 1e-8);
    CHECK(frame.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
    // Magnitude ordering.
    for (int i = 1; i < K; ++i)
      CHECK(std::abs(frame.eigenvalues[i - 1]) >= std::abs(frame.eigenvalues[i]) - 1e-15);
  }
}

TEST_CASE("frame factor: identity bypass, permutation invariance, cross-check") {
  const PreferenceFrame eye = PreferenceFrame::unchecked(Matrix::Identity(2, 2),
                                                         Vector::Constant(2, 0.5));
  CHECK(frame_factor(eye) == doctest::Approx(1.0));

  rng::Sequence rand(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int K = 3 + static_cast<int>(rand.next_below(3));
    const Matrix R = test_helpers::random_reversible(K, rand);
    const PreferenceFrame frame = build_preference_frame(R);
    CHECK(frame_factor(frame) == doctest::Approx(frame_factor_by_vectors(R)).epsilon(1e-12));

    // Simultaneous row/column permutation.
    std::vector<int> perm(K);
    for (int i = 0; i < K; ++i) perm[i] = (i + 1) % K;
    Matrix P = Matrix::Zero(K, K);
    for (int i = 0; i < K; ++i) P(i, perm[i]) = 1.0;
    const Matrix Rp = P * R * P.transpose();
    const PreferenceFrame permuted = build_preference_frame(Rp);
    CHECK(frame_factor(permuted) == doctest::Approx(frame_factor(frame)).epsilon(1e-12));

    // Remark bound after Theorem 6, without the extra 1/2 factor.
    double col_bound = 0.0;
    for (int k = 0; k < K; ++k) col_bound = std::max(col_bound, std::sqrt(R.col(k).sum()));
    CHECK(frame_factor(frame) <= col_bound + 1e-12);
  }

  // Doubly stochastic: every column sums to 1, so the remark bound is 1.
  const PreferenceFrame sym = build_preference_frame(sym2x2());
  CHECK(frame_factor(sym) <= 1.0 + 1e-12);
}

TEST_CASE("frame json round trip recomputes the derived data") {
  const PreferenceFrame frame = build_preference_frame(sym2x2());
  nlohmann::json doc = frame_to_json(frame);
  doc["R"][0][0] = 0.7;
  doc["R"][0][1] = 0.3;  // edits to R take effect; rho is never trusted
  const PreferenceFrame loaded = frame_from_json(doc);
  CHECK(loaded.rho[0] == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(loaded.rho[1] == doctest::Approx(0.6).epsilon(1e-10));
}
