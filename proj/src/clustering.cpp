#include "pfm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "pfm/kernels.hpp"
#include "pfm/rng.hpp"

namespace pfm {

namespace {

int count_distinct_rows(const Matrix& points) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](int a, int b) {
    for (int c = 0; c < points.cols(); ++c) {
      if (points(a, c) < points(b, c)) return true;
      if (points(a, c) > points(b, c)) return false;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  int distinct = n ? 1 : 0;
  for (int i = 1; i < n; ++i)
    if (less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

Matrix seed_centers(const Matrix& points, int K, rng::Sequence& rand) {
  const int n = static_cast<int>(points.rows());
  Matrix centers(K, points.cols());
  centers.row(0) = points.row(static_cast<int>(rand.next_below(n)));
  Vector dist2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < K; ++k) {
    const double total = dist2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rand.next_below(n));
    } else {
      // Weighted by squared distance to the nearest chosen center.
      double target = rand.next_uniform() * total;
      pick = n - 1;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += dist2[i];
        if (target < acc) {
          pick = i;
          break;
        }
      }
    }
    centers.row(k) = points.row(pick);
    dist2 = dist2.cwiseMin((points.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }
  return centers;
}

struct LloydRun {
  std::vector<int> labels;
  Matrix centers;
  double objective;
  int iterations;
  std::vector<double> history;
};

LloydRun lloyd(const Matrix& points, int K, std::uint64_t seed, const KmeansOptions& options) {
  const int n = static_cast<int>(points.rows());
  rng::Sequence rand(seed);
  LloydRun run;
  run.centers = seed_centers(points, K, rand);
  run.objective = std::numeric_limits<double>::infinity();
  run.iterations = 0;

  for (int it = 0; it < options.max_iter; ++it) {
    const double obj = kernels::assign_points(run.labels, points, run.centers);
    run.history.push_back(obj);
    run.iterations = it + 1;

    Matrix sums = Matrix::Zero(K, points.cols());
    std::vector<int> counts(K, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += points.row(i);
      ++counts[run.labels[i]];
    }
    for (int k = 0; k < K; ++k) {
      if (counts[k] == 0) {
        // Re-seed an emptied center at the point farthest from its center.
        int far = 0;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
          const double dist = (points.row(i) - run.centers.row(run.labels[i])).squaredNorm();
          if (dist > fard) {
            fard = dist;
            far = i;
          }
        }
        run.centers.row(k) = points.row(far);
      } else {
        run.centers.row(k) = sums.row(k) / counts[k];
      }
    }

    if (obj >= run.objective * (1.0 - options.rel_tol) && it > 0) {
      run.objective = std::min(run.objective, obj);
      break;
    }
    run.objective = obj;
  }
  // Final assignment so labels and objective match the returned centers.
  run.objective = kernels::assign_points(run.labels, points, run.centers);
  run.history.push_back(run.objective);
  return run;
}

}  // namespace

Clustering kmeans(const Matrix& points, int K, const KmeansOptions& options) {
  const int n = static_cast<int>(points.rows());
  if (K < 1 || n < K) fail(ErrorCode::DegenerateInput, "need at least K points");
  if (options.restarts < 1) fail(ErrorCode::InvalidSpec, "restarts must be >= 1");
  if (count_distinct_rows(points) < K)
    fail(ErrorCode::DegenerateInput, "fewer than K distinct points");

  std::vector<LloydRun> runs(options.restarts);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < options.restarts; ++r)
    runs[r] = lloyd(points, K, rng::derive(options.seed, r), options);

  int best = 0;
  for (int r = 1; r < options.restarts; ++r)
    if (runs[r].objective < runs[best].objective) best = r;

  Clustering result;
  result.labels = std::move(runs[best].labels);
  result.centers = std::move(runs[best].centers);
  result.objective = runs[best].objective;
  result.iterations = runs[best].iterations;
  result.best_restart = best;
  result.objective_history = std::move(runs[best].history);
  return result;
}

Eigen::MatrixXi overlap_matrix(const std::vector<int>& found, const std::vector<int>& truth,
                               int K) {
  if (found.size() != truth.size())
    fail(ErrorCode::SizeMismatch, "label vectors differ in length");
  Eigen::MatrixXi overlap = Eigen::MatrixXi::Zero(K, K);
  for (size_t i = 0; i < found.size(); ++i) {
    if (found[i] < 0 || found[i] >= K || truth[i] < 0 || truth[i] >= K)
      fail(ErrorCode::SizeMismatch, "label out of range at node " + std::to_string(i));
    overlap(truth[i], found[i]) += 1;
  }
  return overlap;
}

namespace {

long best_overlap_bruteforce(const Eigen::MatrixXi& overlap) {
  const int K = static_cast<int>(overlap.rows());
  std::vector<int> phi(K);
  std::iota(phi.begin(), phi.end(), 0);
  long best = 0;
  do {
    long total = 0;
    for (int k = 0; k < K; ++k) total += overlap(phi[k], k);
    best = std::max(best, total);
  } while (std::next_permutation(phi.begin(), phi.end()));
  return best;
}

// Hungarian algorithm (Jonker-Volgenant style shortest augmenting paths) on
// the K x K cost matrix; maximizes by negating.
long best_overlap_assignment(const Eigen::MatrixXi& overlap) {
  const int K = static_cast<int>(overlap.rows());
  const long top = overlap.maxCoeff();
  std::vector<std::vector<long>> cost(K, std::vector<long>(K));
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) cost[i][j] = top - overlap(i, j);

  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<long> u(K + 1, 0), v(K + 1, 0);
  std::vector<int> match(K + 1, 0), way(K + 1, 0);
  for (int i = 1; i <= K; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<long> minv(K + 1, inf);
    std::vector<char> used(K + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      long delta = inf;
      int j1 = 0;
      for (int j = 1; j <= K; ++j) {
        if (used[j]) continue;
        const long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= K; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  long total = 0;
  for (int j = 1; j <= K; ++j) total += overlap(match[j] - 1, j - 1);
  return total;
}

}  // namespace

double misclustering_rate(const std::vector<int>& found, const std::vector<int>& truth, int K) {
  const Eigen::MatrixXi overlap = overlap_matrix(found, truth, K);
  const long matched = K <= 8 ? best_overlap_bruteforce(overlap) : best_overlap_assignment(overlap);
  return 1.0 - static_cast<double>(matched) / static_cast<double>(found.size());
}

double misclustering_rate_assignment(const std::vector<int>& found,
                                     const std::vector<int>& truth, int K) {
  const Eigen::MatrixXi overlap = overlap_matrix(found, truth, K);
  return 1.0 - static_cast<double>(best_overlap_assignment(overlap)) /
                   static_cast<double>(found.size());
}

double misclustering_rate(const Clustering& found, const Partition& truth) {
  return misclustering_rate(found.labels, truth.labels, truth.K);
}

SeparationReport separation_gmax(const PreferenceFrame& frame, const PfmModel& model,
                                 const Matrix* V) {
  const int K = frame.K;
  const Vector& rho = frame.rho;
  SeparationReport report;

  Vector c(K), c_stmt(K), ct(K);
  for (int k = 0; k < K; ++k) {
    c[k] = model.cluster_volumes[k] / (model.d_tot * rho[k]);
    c_stmt[k] = model.cluster_volumes[k] / (model.partition.n * rho[k]);
    ct[k] = static_cast<double>(model.partition.sizes[k]) / (model.partition.n * rho[k]);
  }
  report.c_max = c.maxCoeff();
  report.c_min = c.minCoeff();
  report.c_stmt_max = c_stmt.maxCoeff();
  report.c_stmt_min = c_stmt.minCoeff();
  report.ct_max = ct.maxCoeff();
  report.ct_min = ct.minCoeff();

  auto pair_value = [&rho](double cmax, double cmin, int k, int m) {
    return (1.0 / cmax) * (1.0 / rho[k] + 1.0 / rho[m]) -
           (1.0 / std::sqrt(rho[k] * rho[m])) * (1.0 / cmin - 1.0 / cmax);
  };

  report.pair_g = Matrix::Zero(K, K);
  report.g_max = std::numeric_limits<double>::infinity();
  report.g_max_tilde = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < K; ++m) {
      if (m == k) continue;
      report.pair_g(k, m) = pair_value(report.c_max, report.c_min, k, m);
      report.g_max = std::min(report.g_max, report.pair_g(k, m));
      report.g_max_tilde =
          std::min(report.g_max_tilde, pair_value(report.ct_max, report.ct_min, k, m));
    }
  if (K < 2) {
    report.g_max = 0.0;
    report.g_max_tilde = 0.0;
  }

  if (V) {
    double best = std::numeric_limits<double>::infinity();
    // Expected-model rows are constant per community, so one representative
    // per community suffices for the cross-community minimum.
    for (int k = 0; k < K; ++k)
      for (int m = k + 1; m < K; ++m) {
        const int i = model.partition.members[k].front();
        const int j = model.partition.members[m].front();
        best = std::min(best, (V->row(i) - V->row(j)).squaredNorm());
      }
    report.min_center_distance_sq = best;
  }
  return report;
}

}  // namespace pfm
