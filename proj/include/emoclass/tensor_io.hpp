#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace emoclass {

// Named view over one parameter tensor; the registry order defines the
// on-disk layout and the optimizer slot order.
struct TensorRef {
  std::string name;
  Eigen::MatrixXd* tensor;
};

// Binary tensor pack: magic, version, tensor count, then per tensor the
// name, shape, and little-endian doubles. Readers validate names and shapes
// against the expected registry.
void save_tensors(const std::string& path, const std::vector<TensorRef>& tensors);
void load_tensors(const std::string& path, const std::vector<TensorRef>& tensors);

}  // namespace emoclass
