#include "pfm/io.hpp"

#include <cstring>
#include <sstream>

namespace pfm::io {

void write_matrix_csv(const Eigen::MatrixXd& M, int K, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ConfigError, "cannot write " + path);
  out << M.rows() << ',' << K << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << fmt(M(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path, int* K) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ConfigError, "empty matrix file " + path);
  int n = 0, k = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &n, &k) != 2 || n <= 0)
    fail(ErrorCode::ConfigError, "bad matrix header in " + path);
  if (K) *K = k;
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) fail(ErrorCode::ConfigError, "truncated matrix in " + path);
    std::stringstream ss(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(ss, cell, ',')) fail(ErrorCode::ConfigError, "short row in " + path);
      M(i, j) = std::strtod(cell.c_str(), nullptr);
    }
  }
  return M;
}

namespace {
constexpr char kMagic[8] = {'P', 'F', 'M', 'M', 'A', 'T', '1', '\0'};
}

void write_matrix_binary(const Eigen::MatrixXd& M, int K, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ConfigError, "cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  const std::int64_t dims[3] = {M.rows(), M.cols(), K};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  // Row-major on disk.
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double v = M(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

Eigen::MatrixXd read_matrix_binary(const std::string& path, int* K) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigError, "cannot read " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    fail(ErrorCode::ConfigError, "bad magic in " + path);
  std::int64_t dims[3];
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (K) *K = static_cast<int>(dims[2]);
  Eigen::MatrixXd M(dims[0], dims[1]);
  for (std::int64_t i = 0; i < dims[0]; ++i)
    for (std::int64_t j = 0; j < dims[1]; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      M(i, j) = v;
    }
  if (!in) fail(ErrorCode::ConfigError, "truncated matrix in " + path);
  return M;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pfm::io
