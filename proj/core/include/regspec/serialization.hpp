#pragma once

// JSON encodings of the result types.

#include <string>

#include "regspec/community.hpp"
#include "regspec/core_residual.hpp"
#include "regspec/eigensolver.hpp"
#include "regspec/norms_oracles.hpp"

namespace regspec {

std::string to_json(const SpectralResult& r);
std::string to_json(const ClusterResult& r);
std::string to_json(const DkReport& r);
/// {"R": [[i, j], ...], "C": [[i, j], ...], ...}
std::string to_json(const IndexDecomposition& d);
std::string to_json(const CoreSet& c);
std::string to_json(const GrothendieckCert& c);
std::string to_json(const CutnormReport& r);

/// Inverse of to_json(IndexDecomposition); reads R, C and the origin block.
IndexDecomposition index_decomposition_from_json(const std::string& text);

}  // namespace regspec
