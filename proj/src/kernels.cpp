#include "pfm/kernels.hpp"

#include <cmath>
#include <limits>

#include "pfm/rng.hpp"

namespace pfm::kernels {

namespace {

// Counter index of pair (i, j), i <= j, in row-major order over the upper
// triangle including the diagonal.
inline std::uint64_t pair_counter(std::uint64_t i, std::uint64_t j, std::uint64_t n) {
  return i * n - i * (i - 1) / 2 + (j - i);
}

}  // namespace

void fill_weighted_blocks_serial(Matrix& S, const Vector& w, const std::vector<int>& labels,
                                 const Matrix& coef) {
  const int n = static_cast<int>(w.size());
  S.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const int li = labels[i];
    for (int j = i; j < n; ++j) {
      const double v = coef(li, labels[j]) * w[i] * w[j];
      S(i, j) = v;
      S(j, i) = v;
    }
  }
}

void fill_weighted_blocks(Matrix& S, const Vector& w, const std::vector<int>& labels,
                          const Matrix& coef) {
  const int n = static_cast<int>(w.size());
  S.resize(n, n);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    const int li = labels[i];
    for (int j = i; j < n; ++j) {
      const double v = coef(li, labels[j]) * w[i] * w[j];
      S(i, j) = v;
      S(j, i) = v;
    }
  }
}

void fill_degree_blocks_serial(Matrix& S, const Vector& d, const Vector& pi,
                               const std::vector<int>& labels, const Matrix& R) {
  const int n = static_cast<int>(d.size());
  S.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const int li = labels[i];
    for (int j = i; j < n; ++j) {
      const double v = d[i] * R(li, labels[j]) * pi[j];
      S(i, j) = v;
      S(j, i) = v;
    }
  }
}

void fill_degree_blocks(Matrix& S, const Vector& d, const Vector& pi,
                        const std::vector<int>& labels, const Matrix& R) {
  const int n = static_cast<int>(d.size());
  S.resize(n, n);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    const int li = labels[i];
    for (int j = i; j < n; ++j) {
      const double v = d[i] * R(li, labels[j]) * pi[j];
      S(i, j) = v;
      S(j, i) = v;
    }
  }
}

void sample_bernoulli_serial(ByteMatrix& A, const Matrix& S, std::uint64_t seed, bool self_loops) {
  const int n = static_cast<int>(S.rows());
  A.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j0 = self_loops ? i : i + 1;
    for (int j = j0; j < n; ++j) {
      const double u = rng::uniform01(seed, pair_counter(i, j, n));
      const std::uint8_t bit = u < S(i, j) ? 1 : 0;
      A(i, j) = bit;
      A(j, i) = bit;
    }
  }
}

void sample_bernoulli(ByteMatrix& A, const Matrix& S, std::uint64_t seed, bool self_loops) {
  const int n = static_cast<int>(S.rows());
  A.setZero(n, n);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    const int j0 = self_loops ? i : i + 1;
    for (int j = j0; j < n; ++j) {
      const double u = rng::uniform01(seed, pair_counter(i, j, n));
      const std::uint8_t bit = u < S(i, j) ? 1 : 0;
      A(i, j) = bit;
      A(j, i) = bit;
    }
  }
}

Vector row_sums_serial(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += M(j, i);  // column i == row i for symmetric M
    d[i] = s;
  }
  return d;
}

Vector row_sums(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  Vector d(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += M(j, i);
    d[i] = s;
  }
  return d;
}

Vector row_sums_bytes_serial(const ByteMatrix& A) {
  const int n = static_cast<int>(A.rows());
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    long s = 0;
    for (int j = 0; j < n; ++j) s += A(j, i);
    d[i] = static_cast<double>(s);
  }
  return d;
}

Vector row_sums_bytes(const ByteMatrix& A) {
  const int n = static_cast<int>(A.rows());
  Vector d(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    long s = 0;
    for (int j = 0; j < n; ++j) s += A(j, i);
    d[i] = static_cast<double>(s);
  }
  return d;
}

void scale_symmetric_serial(Matrix& L, const Matrix& M, const Vector& scale) {
  const int n = static_cast<int>(M.rows());
  L.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) L(i, j) = M(i, j) * scale[i] * scale[j];
}

void scale_symmetric(Matrix& L, const Matrix& M, const Vector& scale) {
  const int n = static_cast<int>(M.rows());
  L.resize(n, n);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) L(i, j) = M(i, j) * scale[i] * scale[j];
}

void scale_symmetric_bytes_serial(Matrix& L, const ByteMatrix& A, const Vector& scale) {
  const int n = static_cast<int>(A.rows());
  L.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) L(i, j) = A(i, j) ? scale[i] * scale[j] : 0.0;
}

void scale_symmetric_bytes(Matrix& L, const ByteMatrix& A, const Vector& scale) {
  const int n = static_cast<int>(A.rows());
  L.resize(n, n);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) L(i, j) = A(i, j) ? scale[i] * scale[j] : 0.0;
}

void sym_matvec_serial(Vector& y, const Matrix& M, const Vector& x) {
  const int n = static_cast<int>(M.rows());
  y.resize(n);
  for (int i = 0; i < n; ++i) y[i] = M.col(i).dot(x);
}

void sym_matvec(Vector& y, const Matrix& M, const Vector& x) {
  const int n = static_cast<int>(M.rows());
  y.resize(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = M.col(i).dot(x);
}

void block_transition_sums_serial(Matrix& out, const Matrix& S, const Vector& d,
                                  const std::vector<int>& labels, int K) {
  const int n = static_cast<int>(S.rows());
  out.setZero(n, K);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, labels[j]) += S(j, i);
    out.row(i) /= d[i];
  }
}

void block_transition_sums(Matrix& out, const Matrix& S, const Vector& d,
                           const std::vector<int>& labels, int K) {
  const int n = static_cast<int>(S.rows());
  out.setZero(n, K);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, labels[j]) += S(j, i);
    out.row(i) /= d[i];
  }
}

double max_row_spread_serial(const Matrix& V, const std::vector<int>& members) {
  const int m = static_cast<int>(members.size());
  double best = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double dist = (V.row(members[a]) - V.row(members[b])).norm();
      best = best < dist ? dist : best;
    }
  return best;
}

double max_row_spread(const Matrix& V, const std::vector<int>& members) {
  const int m = static_cast<int>(members.size());
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double dist = (V.row(members[a]) - V.row(members[b])).norm();
      best = best < dist ? dist : best;
    }
  return best;
}

double assign_points_serial(std::vector<int>& labels, const Matrix& points, const Matrix& centers) {
  const int n = static_cast<int>(points.rows());
  const int K = static_cast<int>(centers.rows());
  labels.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const double dist = (points.row(i) - centers.row(k)).squaredNorm();
      if (dist < bestd) {
        bestd = dist;
        best = k;
      }
    }
    labels[i] = best;
    total += bestd;
  }
  return total;
}

double assign_points(std::vector<int>& labels, const Matrix& points, const Matrix& centers) {
  const int n = static_cast<int>(points.rows());
  const int K = static_cast<int>(centers.rows());
  labels.resize(n);
  // Per-point distances kept so the reduction is an order-free sum of the
  // same addends computed serially; summed in index order afterwards.
  Vector dists(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const double dist = (points.row(i) - centers.row(k)).squaredNorm();
      if (dist < bestd) {
        bestd = dist;
        best = k;
      }
    }
    labels[i] = best;
    dists[i] = bestd;
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += dists[i];
  return total;
}

void in_out_degrees_serial(Vector& in, Vector& out, const ByteMatrix& A,
                           const std::vector<int>& labels) {
  const int n = static_cast<int>(A.rows());
  in.setZero(n);
  out.setZero(n);
  for (int i = 0; i < n; ++i) {
    const int li = labels[i];
    long win = 0, wout = 0;
    for (int j = 0; j < n; ++j) {
      if (!A(j, i)) continue;
      (labels[j] == li ? win : wout) += 1;
    }
    in[i] = static_cast<double>(win);
    out[i] = static_cast<double>(wout);
  }
}

void in_out_degrees(Vector& in, Vector& out, const ByteMatrix& A, const std::vector<int>& labels) {
  const int n = static_cast<int>(A.rows());
  in.setZero(n);
  out.setZero(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int li = labels[i];
    long win = 0, wout = 0;
    for (int j = 0; j < n; ++j) {
      if (!A(j, i)) continue;
      (labels[j] == li ? win : wout) += 1;
    }
    in[i] = static_cast<double>(win);
    out[i] = static_cast<double>(wout);
  }
}

}  // namespace pfm::kernels
