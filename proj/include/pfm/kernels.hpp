#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

// Hot loops, each with an OpenMP variant (the production path) and a serial
// reference used by the tests and the benchmark. Every parallel loop writes
// disjoint elements or reduces with an order-free operation, so the two
// variants agree bit for bit.

namespace pfm::kernels {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ByteMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// S(i,j) = coef(label_i, label_j) * w_i * w_j on the upper triangle, mirrored.
void fill_weighted_blocks(Matrix& S, const Vector& w, const std::vector<int>& labels,
                          const Matrix& coef);
void fill_weighted_blocks_serial(Matrix& S, const Vector& w, const std::vector<int>& labels,
                                 const Matrix& coef);

// S(i,j) = d_i * R(label_i, label_j) * pi_j on the upper triangle, mirrored.
void fill_degree_blocks(Matrix& S, const Vector& d, const Vector& pi,
                        const std::vector<int>& labels, const Matrix& R);
void fill_degree_blocks_serial(Matrix& S, const Vector& d, const Vector& pi,
                               const std::vector<int>& labels, const Matrix& R);

// A(i,j) = Bernoulli(S(i,j)) for i < j via the counter stream, mirrored;
// diagonal sampled only when self_loops.
void sample_bernoulli(ByteMatrix& A, const Matrix& S, std::uint64_t seed, bool self_loops);
void sample_bernoulli_serial(ByteMatrix& A, const Matrix& S, std::uint64_t seed, bool self_loops);

Vector row_sums(const Matrix& M);
Vector row_sums_serial(const Matrix& M);
Vector row_sums_bytes(const ByteMatrix& A);
Vector row_sums_bytes_serial(const ByteMatrix& A);

// L(i,j) = M(i,j) * scale_i * scale_j.
void scale_symmetric(Matrix& L, const Matrix& M, const Vector& scale);
void scale_symmetric_serial(Matrix& L, const Matrix& M, const Vector& scale);
void scale_symmetric_bytes(Matrix& L, const ByteMatrix& A, const Vector& scale);
void scale_symmetric_bytes_serial(Matrix& L, const ByteMatrix& A, const Vector& scale);

// y = M x for symmetric M (column-contiguous dot per row).
void sym_matvec(Vector& y, const Matrix& M, const Vector& x);
void sym_matvec_serial(Vector& y, const Matrix& M, const Vector& x);

// out(i, m) = sum_{j in C_m} S(i,j) / d_i.
void block_transition_sums(Matrix& out, const Matrix& S, const Vector& d,
                           const std::vector<int>& labels, int K);
void block_transition_sums_serial(Matrix& out, const Matrix& S, const Vector& d,
                                  const std::vector<int>& labels, int K);

// Max Euclidean distance between rows of V within one community.
double max_row_spread(const Matrix& V, const std::vector<int>& members);
double max_row_spread_serial(const Matrix& V, const std::vector<int>& members);

// K-means assignment step: nearest center per point; returns summed distance^2.
double assign_points(std::vector<int>& labels, const Matrix& points, const Matrix& centers);
double assign_points_serial(std::vector<int>& labels, const Matrix& points, const Matrix& centers);

// Per-node within/outside community edge counts from A (self-loops count as within).
void in_out_degrees(Vector& in, Vector& out, const ByteMatrix& A, const std::vector<int>& labels);
void in_out_degrees_serial(Vector& in, Vector& out, const ByteMatrix& A, const std::vector<int>& labels);

}  // namespace pfm::kernels
