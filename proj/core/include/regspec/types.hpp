#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace regspec {

using Index = Eigen::Index;
using Vertex = std::int32_t;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Community labels, values in {1, 2}.
using Labels = std::vector<int>;

using IndexPair = std::pair<Index, Index>;
using IndexPairSet = std::vector<IndexPair>;

}  // namespace regspec
