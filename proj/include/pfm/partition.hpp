#pragma once

#include <vector>

#include "pfm/errors.hpp"

namespace pfm {

// Node partition into K nonempty communities, labels in [0, K).
struct Partition {
  int n = 0;
  int K = 0;
  std::vector<int> labels;              // size n
  std::vector<int> sizes;               // size K
  std::vector<std::vector<int>> members;  // node ids per community

  static Partition from_sizes(const std::vector<int>& sizes);
  static Partition from_labels(std::vector<int> labels, int K);
};

inline Partition Partition::from_sizes(const std::vector<int>& sizes) {
  Partition part;
  part.K = static_cast<int>(sizes.size());
  if (part.K == 0) fail(ErrorCode::EmptyCluster, "partition needs at least one community");
  part.sizes = sizes;
  part.members.resize(part.K);
  for (int k = 0; k < part.K; ++k) {
    if (sizes[k] <= 0) fail(ErrorCode::EmptyCluster, "community " + std::to_string(k) + " is empty");
    for (int j = 0; j < sizes[k]; ++j) {
      part.members[k].push_back(part.n + j);
      part.labels.push_back(k);
    }
    part.n += sizes[k];
  }
  return part;
}

inline Partition Partition::from_labels(std::vector<int> labels, int K) {
  Partition part;
  part.n = static_cast<int>(labels.size());
  part.K = K;
  part.labels = std::move(labels);
  part.sizes.assign(K, 0);
  part.members.resize(K);
  for (int i = 0; i < part.n; ++i) {
    const int k = part.labels[i];
    if (k < 0 || k >= K) fail(ErrorCode::InvalidSpec, "label out of range at node " + std::to_string(i));
    ++part.sizes[k];
    part.members[k].push_back(i);
  }
  for (int k = 0; k < K; ++k)
    if (part.sizes[k] == 0) fail(ErrorCode::EmptyCluster, "community " + std::to_string(k) + " is empty");
  return part;
}

}  // namespace pfm
