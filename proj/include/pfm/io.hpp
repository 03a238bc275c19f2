#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "pfm/errors.hpp"

namespace pfm::io {

// Fixed-format float printing so identical runs produce identical bytes.
inline std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) fail(ErrorCode::ConfigError, "cannot write " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// Dense matrix as a CSV grid, row-major, first line "n,K" metadata.
void write_matrix_csv(const Eigen::MatrixXd& M, int K, const std::string& path);
Eigen::MatrixXd read_matrix_csv(const std::string& path, int* K = nullptr);

// Dense matrix in a little binary format: magic, rows, cols, K, row-major doubles.
void write_matrix_binary(const Eigen::MatrixXd& M, int K, const std::string& path);
Eigen::MatrixXd read_matrix_binary(const std::string& path, int* K = nullptr);

std::string read_text_file(const std::string& path);

}  // namespace pfm::io
