#include <doctest.h>

#include "helpers.hpp"
#include "pfm/kernels.hpp"

using namespace pfm;
using test_helpers::random_reversible;
using ByteMatrix = pfm::kernels::ByteMatrix;

TEST_CASE("counter rng is order-free and uniform-ish") {
  CHECK(rng::at(1, 5) == rng::at(1, 5));
  CHECK(rng::at(1, 5) != rng::at(2, 5));
  CHECK(rng::at(1, 5) != rng::at(1, 6));
  double mean = 0.0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) mean += rng::uniform01(99, i);
  mean /= trials;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(rng::derive(7, 0) != rng::derive(7, 1));
}

TEST_CASE("rejection sampling stays in range") {
  rng::Sequence rand(3);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rand.next_below(13);
    CHECK(v < 13);
  }
}

namespace {

struct Fixture {
  Partition part;
  Vector w;
  Matrix coef;
  Matrix S;
  Fixture() : part(Partition::from_sizes({17, 23, 9})) {
    rng::Sequence rand(42);
    w.resize(part.n);
    for (int i = 0; i < part.n; ++i) w[i] = rand.next_uniform(0.2, 0.4);
    coef = random_reversible(3, rand);
    kernels::fill_weighted_blocks_serial(S, w, part.labels, coef);
  }
};

}  // namespace

TEST_CASE("parallel kernels match serial references bit for bit") {
  Fixture fx;

  Matrix S2;
  kernels::fill_weighted_blocks(S2, fx.w, fx.part.labels, fx.coef);
  CHECK((S2 - fx.S).cwiseAbs().maxCoeff() == 0.0);

  Vector d1 = kernels::row_sums_serial(fx.S);
  Vector d2 = kernels::row_sums(fx.S);
  CHECK((d1 - d2).cwiseAbs().maxCoeff() == 0.0);

  Vector pi = fx.w / fx.w.sum();
  Matrix D1, D2;
  kernels::fill_degree_blocks_serial(D1, d1, pi, fx.part.labels, fx.coef);
  kernels::fill_degree_blocks(D2, d1, pi, fx.part.labels, fx.coef);
  CHECK((D1 - D2).cwiseAbs().maxCoeff() == 0.0);

  ByteMatrix A1, A2;
  kernels::sample_bernoulli_serial(A1, fx.S, 7, true);
  kernels::sample_bernoulli(A2, fx.S, 7, true);
  CHECK((A1.cast<int>() - A2.cast<int>()).cwiseAbs().maxCoeff() == 0);

  Vector db1 = kernels::row_sums_bytes_serial(A1);
  Vector db2 = kernels::row_sums_bytes(A1);
  CHECK((db1 - db2).cwiseAbs().maxCoeff() == 0.0);

  const Vector scale = d1.cwiseSqrt().cwiseInverse();
  Matrix L1, L2;
  kernels::scale_symmetric_serial(L1, fx.S, scale);
  kernels::scale_symmetric(L2, fx.S, scale);
  CHECK((L1 - L2).cwiseAbs().maxCoeff() == 0.0);

  Matrix LB1, LB2;
  kernels::scale_symmetric_bytes_serial(LB1, A1, scale);
  kernels::scale_symmetric_bytes(LB2, A1, scale);
  CHECK((LB1 - LB2).cwiseAbs().maxCoeff() == 0.0);

  Vector x = Vector::LinSpaced(fx.part.n, -1.0, 1.0), y1, y2;
  kernels::sym_matvec_serial(y1, L1, x);
  kernels::sym_matvec(y2, L1, x);
  CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);

  Matrix B1, B2;
  kernels::block_transition_sums_serial(B1, fx.S, d1, fx.part.labels, fx.part.K);
  kernels::block_transition_sums(B2, fx.S, d1, fx.part.labels, fx.part.K);
  CHECK((B1 - B2).cwiseAbs().maxCoeff() == 0.0);

  Matrix points(fx.part.n, 3);
  for (int i = 0; i < fx.part.n; ++i)
    for (int c = 0; c < 3; ++c) points(i, c) = rng::uniform01(5, i * 3 + c);
  Matrix centers = points.topRows(3);
  std::vector<int> lab1, lab2;
  const double o1 = kernels::assign_points_serial(lab1, points, centers);
  const double o2 = kernels::assign_points(lab2, points, centers);
  CHECK(o1 == o2);
  CHECK(lab1 == lab2);

  CHECK(kernels::max_row_spread_serial(points, fx.part.members[1]) ==
        kernels::max_row_spread(points, fx.part.members[1]));

  Vector in1, out1, in2, out2;
  kernels::in_out_degrees_serial(in1, out1, A1, fx.part.labels);
  kernels::in_out_degrees(in2, out2, A1, fx.part.labels);
  CHECK((in1 - in2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((out1 - out2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((in1 + out1 - kernels::row_sums_bytes(A1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pair sampling is symmetric and respects the self-loop flag") {
  Fixture fx;
  ByteMatrix A;
  kernels::sample_bernoulli(A, fx.S, 123, false);
  CHECK((A.cast<int>() - A.cast<int>().transpose()).cwiseAbs().maxCoeff() == 0);
  CHECK(A.diagonal().cast<int>().maxCoeff() == 0);

  // The same seed with self-loops on only adds diagonal entries.
  ByteMatrix B;
  kernels::sample_bernoulli(B, fx.S, 123, true);
  auto off = [](const ByteMatrix& M) {
    ByteMatrix C = M;
    C.diagonal().setZero();
    return C;
  };
  CHECK((off(A).cast<int>() - off(B).cast<int>()).cwiseAbs().maxCoeff() == 0);
}
