#include "regspec/serialization.hpp"

#include <cmath>

#include <json.hpp>

#include "regspec/error.hpp"

namespace regspec {
namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

json pairs_json(const IndexPairSet& s) {
  json out = json::array();
  for (const auto& [i, j] : s) out.push_back({i, j});
  return out;
}

IndexPairSet pairs_from(const json& j) {
  IndexPairSet out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw InvalidArgument("index pairs look like [i, j]");
    out.emplace_back(p[0].get<Index>(), p[1].get<Index>());
  }
  return out;
}

}  // namespace

std::string to_json(const SpectralResult& r) {
  json cols = json::array();
  for (Index c = 0; c < r.eigenvectors.cols(); ++c) cols.push_back(vector_json(r.eigenvectors.col(c)));
  return json{{"eigenvalues", r.eigenvalues},
              {"residuals", r.residuals},
              {"eigenvectors", cols},
              {"matvecs", r.matvecs},
              {"restarts", r.restarts}}
      .dump();
}

std::string to_json(const ClusterResult& r) {
  json j = {{"labels", r.labels}, {"v", vector_json(r.v)}, {"lambda2", number(r.lambda2)},
            {"tau", number(r.tau)}};
  j["misclassification"] = r.misclassification ? number(*r.misclassification) : json(nullptr);
  return j.dump();
}

std::string to_json(const DkReport& r) {
  return json{{"lambda2", number(r.lambda2)},
              {"lambda2_computed", number(r.lambda2_computed)},
              {"norm_diff", number(r.norm_diff)},
              {"gap", number(r.gap)},
              {"applicable", r.applicable},
              {"dk_bound", number(r.dk_bound)},
              {"projector_diff", number(r.projector_diff)},
              {"vector_dist", number(r.vector_dist)}}
      .dump();
}

std::string to_json(const IndexDecomposition& d) {
  return json{{"R", pairs_json(d.R)},
              {"C", pairs_json(d.C)},
              {"rows", d.rows},
              {"cols", d.cols},
              {"threshold", d.threshold},
              {"max_row_ones", d.max_row_ones},
              {"max_col_ones", d.max_col_ones},
              {"max_row_pairs", d.max_row_pairs},
              {"max_col_pairs", d.max_col_pairs},
              {"lines_over_threshold", d.lines_over_threshold}}
      .dump();
}

IndexDecomposition index_decomposition_from_json(const std::string& text) try {
  const json j = json::parse(text);
  IndexDecomposition d;
  d.R = pairs_from(j.at("R"));
  d.C = pairs_from(j.at("C"));
  if (j.contains("rows")) d.rows = j.at("rows").get<std::vector<Index>>();
  if (j.contains("cols")) d.cols = j.at("cols").get<std::vector<Index>>();
  if (j.contains("threshold")) d.threshold = j.at("threshold").get<Index>();
  if (j.contains("max_row_ones")) d.max_row_ones = j.at("max_row_ones").get<Index>();
  if (j.contains("max_col_ones")) d.max_col_ones = j.at("max_col_ones").get<Index>();
  if (j.contains("max_row_pairs")) d.max_row_pairs = j.at("max_row_pairs").get<Index>();
  if (j.contains("max_col_pairs")) d.max_col_pairs = j.at("max_col_pairs").get<Index>();
  if (j.contains("lines_over_threshold"))
    d.lines_over_threshold = j.at("lines_over_threshold").get<Index>();
  return d;
} catch (const json::exception& e) {
  throw InvalidArgument(std::string("malformed index decomposition: ") + e.what());
}

std::string to_json(const CoreSet& c) {
  return json{{"core", c.core},
              {"removed", c.removed},
              {"removed_deviation", c.removed_deviation},
              {"threshold", number(c.threshold)},
              {"budget", number(c.budget)}}
      .dump();
}

std::string to_json(const GrothendieckCert& c) {
  return json{{"found", c.found},       {"rows", c.rows},   {"cols", c.cols},
              {"opnorm", number(c.opnorm)}, {"bound", number(c.bound)},
              {"delta", c.delta},       {"cut_norm", number(c.cut_norm)}}
      .dump();
}

std::string to_json(const CutnormReport& r) {
  return json{{"exact", r.exact},
              {"bound", number(r.bound)},
              {"tail_probability", number(r.tail_probability)},
              {"values", r.values},
              {"seeds", r.seeds},
              {"exceedances", r.exceedances},
              {"exceed_fraction", r.exceed_fraction}}
      .dump();
}

}  // namespace regspec
