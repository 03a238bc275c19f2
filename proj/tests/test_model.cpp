#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pfm/kernels.hpp"

using namespace pfm;
using test_helpers::random_degree_spec;
using test_helpers::random_frame;
using test_helpers::random_weights;

TEST_CASE("hpfm with one community is a weight outer product") {
  const PreferenceFrame frame =
      PreferenceFrame::unchecked(Matrix::Ones(1, 1), Vector::Ones(1));
  const Partition part = Partition::from_sizes({2});
  NodeWeights weights;
  weights.w.resize(2);
  weights.w << 0.3, 0.5;
  const PfmModel model = hpfm_matrix(frame, part, weights);
  Matrix expected(2, 2);
  expected << 0.09, 0.15, 0.15, 0.25;
  CHECK((model.S - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("hpfm degrees match the Prop-1 formula; block sums follow the weights") {
  rng::Sequence rand(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2 + static_cast<int>(rand.next_below(4));
    const PreferenceFrame frame = random_frame(K, rand);
    std::vector<int> sizes;
    for (int k = 0; k < K; ++k) sizes.push_back(4 + static_cast<int>(rand.next_below(20)));
    const Partition part = Partition::from_sizes(sizes);
    const NodeWeights weights = random_weights(part.n, rand, 0.05, 0.12);
    const PfmModel model = hpfm_matrix(frame, part, weights);

    CHECK(model.is_hpfm);
    CHECK((model.S - model.S.transpose()).cwiseAbs().maxCoeff() == 0.0);

    // d_i = w_i sum_l R_kl w_{C_l} / rho_l, against the independent row sums.
    const Vector wc = weights.cluster_sums(part);
    for (int i = 0; i < part.n; ++i) {
      const int k = part.labels[i];
      double formula = 0.0;
      for (int l = 0; l < K; ++l) formula += frame.R(k, l) * wc[l] / frame.rho[l];
      formula *= weights.w[i];
      CHECK(std::abs(model.expected_degrees[i] - formula) <=
            1e-10 * std::max(1.0, formula));
    }

    // The block sums are uniform per community and equal the analytic
    // weight-dependent frame: row-normalized R_lm w_{C_m} / rho_m.
    const BlockStochasticCheck check = verify_block_stochastic(model.S, part);
    CHECK(check.max_residual < 1e-10);
    CHECK((check.R_hat - test_helpers::effective_hpfm_frame(frame, wc)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("hpfm with rho-proportional cluster weights admits the input frame exactly") {
  rng::Sequence rand(22);
  for (int trial = 0; trial < 10; ++trial) {
    const int K = 2 + static_cast<int>(rand.next_below(4));
    const PreferenceFrame frame = random_frame(K, rand);
    std::vector<int> sizes;
    for (int k = 0; k < K; ++k) sizes.push_back(5 + static_cast<int>(rand.next_below(15)));
    const Partition part = Partition::from_sizes(sizes);
    const NodeWeights weights = test_helpers::canonical_weights(frame, part, rand);
    const PfmModel model = hpfm_matrix(frame, part, weights);
    const BlockStochasticCheck check = verify_block_stochastic(model.S, part);
    CHECK(check.max_residual < 1e-10);
    CHECK((check.R_hat - frame.R).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("hpfm with cluster weights proportional to rho has degrees proportional to weights") {
  rng::Sequence rand(31);
  const int K = 3;
  const PreferenceFrame frame = random_frame(K, rand);
  const Partition part = Partition::from_sizes({30, 40, 50});
  NodeWeights weights = random_weights(part.n, rand, 0.5, 1.0);
  const Vector wc = weights.cluster_sums(part);
  for (int i = 0; i < part.n; ++i) {
    const int k = part.labels[i];
    weights.w[i] *= frame.rho[k] / wc[k];  // force w_{C_l} = rho_l
  }
  const PfmModel model = hpfm_matrix(frame, part, weights);
  const Vector ratio = model.expected_degrees.cwiseQuotient(weights.w);
  CHECK((ratio.array() - ratio[0]).abs().maxCoeff() < 1e-10 * std::abs(ratio[0]));
}

TEST_CASE("hpfm rejects probability overflow with the offending value") {
  const PreferenceFrame frame = build_preference_frame([] {
    Matrix R(2, 2);
    R << 0.8, 0.2, 0.2, 0.8;
    return R;
  }());
  const Partition part = Partition::from_sizes({3, 3});
  NodeWeights weights;
  weights.w = Vector::Ones(6);
  try {
    hpfm_matrix(frame, part, weights);
    CHECK(false);
  } catch (const PfmError& err) {
    CHECK(err.code() == ErrorCode::ProbabilityOverflow);
    CHECK(std::string(err.what()).find("1.6") != std::string::npos);
  }
}

TEST_CASE("pfm_from_degrees: uniform profiles give the flat block model") {
  const PreferenceFrame frame = build_preference_frame([] {
    Matrix R(2, 2);
    R << 0.8, 0.2, 0.2, 0.8;
    return R;
  }());
  const Partition part = Partition::from_sizes({4, 4});
  DegreeSpec spec;
  spec.d_tot = 16.0;
  spec.pi = {Vector::Constant(4, 0.25), Vector::Constant(4, 0.25)};
  const PfmModel model = pfm_from_degrees(frame, part, spec);
  for (int i = 0; i < 8; ++i) CHECK(model.expected_degrees[i] == doctest::Approx(2.0));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK(model.S(i, j) ==
            doctest::Approx(part.labels[i] == part.labels[j] ? 0.4 : 0.1).epsilon(1e-12));
}

TEST_CASE("pfm_from_degrees: row sums, symmetry, stationarity") {
  rng::Sequence rand(55);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2 + static_cast<int>(rand.next_below(3));
    const PreferenceFrame frame = random_frame(K, rand);
    std::vector<int> sizes;
    for (int k = 0; k < K; ++k) sizes.push_back(5 + static_cast<int>(rand.next_below(15)));
    const Partition part = Partition::from_sizes(sizes);
    const DegreeSpec spec = random_degree_spec(part, 0.5 * part.n, rand);
    const PfmModel model = pfm_from_degrees(frame, part, spec);

    CHECK((model.S - model.S.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < part.sizes[k]; ++j) {
        const int node = part.members[k][j];
        const double target = spec.d_tot * frame.rho[k] * spec.pi[k][j];
        CHECK(std::abs(model.expected_degrees[node] - target) <= 1e-12 * spec.d_tot);
      }

    // pi' P = pi' with pi_i = rho_k pi_{C_k, i}.
    Vector pi(part.n);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < part.sizes[k]; ++j)
        pi[part.members[k][j]] = frame.rho[k] * spec.pi[k][j];
    CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const Matrix P = model.expected_degrees.cwiseInverse().asDiagonal() * model.S;
    CHECK((pi.transpose() * P - pi.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pfm_from_degrees rejects oversized volume and bad profiles") {
  rng::Sequence rand(77);
  const PreferenceFrame frame = random_frame(2, rand);
  const Partition part = Partition::from_sizes({4, 4});
  DegreeSpec spec = random_degree_spec(part, 1e6, rand);
  try {
    pfm_from_degrees(frame, part, spec);
    CHECK(false);
  } catch (const PfmError& err) {
    CHECK(err.code() == ErrorCode::ProbabilityOverflow);
  }
  spec.d_tot = 4.0;
  spec.pi[0][0] += 0.5;  // no longer a distribution
  CHECK_THROWS_AS(pfm_from_degrees(frame, part, spec), PfmError);
}

TEST_CASE("sbm closed forms") {
  const Partition part = Partition::from_sizes({10, 10});
  Matrix B(2, 2);
  B << 0.5, 0.1, 0.1, 0.5;
  const PfmModel model = sbm_model(B, part, false);
  // d_i = p (n_l - 1) + q (n - n_l) = 0.5 * 9 + 0.1 * 10.
  for (int i = 0; i < part.n; ++i)
    CHECK(model.expected_degrees[i] == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(model.frame.R(0, 0) == doctest::Approx(4.5 / 5.5).epsilon(1e-12));
  CHECK(model.frame.R(0, 1) == doctest::Approx(1.0 / 5.5).epsilon(1e-12));

  const BlockStochasticCheck check = verify_block_stochastic(model.S, part);
  CHECK(check.max_residual < 1e-10);
  CHECK((check.R_hat - model.frame.R).cwiseAbs().maxCoeff() < 1e-12);

  // Same frame from the closed-form helper.
  const PreferenceFrame frame = sbm_pq_frame(0.5, 0.1, {10, 10}, false);
  CHECK((frame.R - model.frame.R).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sbm p = q with self-loops is a rank-1 frame, flagged singular") {
  try {
    sbm_pq_frame(0.3, 0.3, {10, 10, 10}, true);
    CHECK(false);
  } catch (const PfmError& err) {
    CHECK(err.code() == ErrorCode::Singular);
  }
}

TEST_CASE("verify_block_stochastic flags a perturbed entry") {
  rng::Sequence rand(9);
  const PreferenceFrame frame = random_frame(2, rand);
  const Partition part = Partition::from_sizes({8, 8});
  const NodeWeights weights = random_weights(part.n, rand, 0.05, 0.1);
  PfmModel model = hpfm_matrix(frame, part, weights);
  const double d0 = model.expected_degrees[0];
  model.S(0, 1) += 0.1;
  model.S(1, 0) += 0.1;
  const BlockStochasticCheck check = verify_block_stochastic(model.S, part);
  // The perturbed row's transition mass moved by order 0.1 / d_0.
  CHECK(check.max_residual >= 0.25 * 0.1 / (d0 + 0.1));
}

TEST_CASE("zero rows are rejected by the checker") {
  const Partition part = Partition::from_sizes({2, 2});
  Matrix S = Matrix::Zero(4, 4);
  S(0, 1) = S(1, 0) = 1.0;
  S(2, 3) = S(3, 2) = 0.0;  // rows 2 and 3 are zero
  CHECK_THROWS_AS(verify_block_stochastic(S, part), PfmError);
}

TEST_CASE("block-preserving perturbation keeps degrees and the frame") {
  rng::Sequence rand(100);
  for (int trial = 0; trial < 10; ++trial) {
    const int K = 2 + static_cast<int>(rand.next_below(3));
    const PreferenceFrame frame = random_frame(K, rand);
    std::vector<int> sizes;
    for (int k = 0; k < K; ++k) sizes.push_back(6 + static_cast<int>(rand.next_below(10)));
    const Partition part = Partition::from_sizes(sizes);
    const DegreeSpec spec = random_degree_spec(part, 0.4 * part.n, rand);
    const PfmModel base = pfm_from_degrees(frame, part, spec);
    const PfmModel jittered = block_preserving_perturbation(base, 0.8, rand.next_u64());

    CHECK((jittered.S - jittered.S.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(jittered.S.minCoeff() >= 0.0);
    CHECK(jittered.S.maxCoeff() <= 1.0);
    CHECK((jittered.expected_degrees - base.expected_degrees).cwiseAbs().maxCoeff() <
          1e-10 * base.d_tot);
    CHECK((jittered.S - base.S).cwiseAbs().maxCoeff() > 1e-6);  // actually moved

    const BlockStochasticCheck check = verify_block_stochastic(jittered.S, part);
    CHECK(check.max_residual < 1e-9);
    CHECK((check.R_hat - frame.R).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("empty communities are rejected") {
  CHECK_THROWS_AS(Partition::from_sizes({3, 0, 2}), PfmError);
  CHECK_THROWS_AS(Partition::from_labels({0, 0, 0}, 2), PfmError);
}
