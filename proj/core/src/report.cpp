#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "regspec/error.hpp"
#include "regspec/experiments.hpp"

namespace regspec {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const std::vector<std::string> kFixedColumns = {
    "experiment", "grid_index", "replicate", "seed", "n", "a", "b", "ntau_spec", "tau", "status"};

nlohmann::json quantiles_json(const Quantiles& q) {
  const auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  return {{"median", num(q.median)}, {"p05", num(q.p05)}, {"p95", num(q.p95)}, {"count", q.count}};
}

nlohmann::json point_json(const GridPoint& p) {
  return {{"n", p.n}, {"a", p.a}, {"b", p.b}, {"ntau", p.tau.label()}};
}

}  // namespace

std::string to_csv(const ExperimentResult& result) {
  std::string out;
  for (std::size_t i = 0; i < kFixedColumns.size(); ++i) {
    if (i) out += ',';
    out += kFixedColumns[i];
  }
  for (const auto& m : result.metrics) out += "," + m;
  out += "\r\n";
  const std::string experiment = to_string(result.config.experiment);
  for (const auto& rec : result.records) {
    out += experiment;
    out += ',' + std::to_string(rec.grid_index);
    out += ',' + std::to_string(rec.replicate);
    out += ',' + std::to_string(rec.seed);
    out += ',' + std::to_string(rec.point.n);
    out += ',' + fmt_double(rec.point.a);
    out += ',' + fmt_double(rec.point.b);
    out += ',' + csv_field(rec.point.tau.label());
    out += ',' + fmt_double(rec.tau);
    out += ',' + csv_field(rec.status);
    for (const double v : rec.values) out += ',' + fmt_double(v);
    out += "\r\n";
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        lines.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InvalidArgument("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    lines.push_back(std::move(row));
  }
  if (lines.empty()) throw InvalidArgument("CSV has no header");
  table.header = std::move(lines.front());
  table.rows.assign(std::make_move_iterator(lines.begin() + 1), std::make_move_iterator(lines.end()));
  for (const auto& r : table.rows)
    if (r.size() != table.header.size()) throw InvalidArgument("CSV row width differs from header");
  return table;
}

std::vector<GridSummary> summaries_from_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  const auto col = [&](const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw InvalidArgument("CSV lacks column " + name);
    return static_cast<std::size_t>(it - table.header.begin());
  };
  const std::size_t first_metric = kFixedColumns.size();
  for (std::size_t i = 0; i < first_metric; ++i)
    if (table.header.at(i) != kFixedColumns[i]) throw InvalidArgument("unexpected CSV layout");

  std::map<std::size_t, GridSummary> by_point;
  std::map<std::size_t, std::vector<std::vector<double>>> values;
  const std::size_t metrics = table.header.size() - first_metric;
  for (const auto& row : table.rows) {
    const auto g = static_cast<std::size_t>(parse_u64(row[col("grid_index")]));
    auto& s = by_point[g];
    s.grid_index = g;
    s.point.n = static_cast<Index>(parse_int(row[col("n")]));
    s.point.a = parse_double(row[col("a")]);
    s.point.b = parse_double(row[col("b")]);
    s.point.tau = TauSpec::parse(row[col("ntau_spec")]);
    auto& v = values[g];
    v.resize(metrics);
    if (row[col("status")] != "ok") continue;
    for (std::size_t m = 0; m < metrics; ++m)
      v[m].push_back(std::strtod(row[first_metric + m].c_str(), nullptr));
  }
  std::vector<GridSummary> out;
  for (auto& [g, s] : by_point) {
    for (std::size_t m = 0; m < metrics; ++m)
      s.metrics[table.header[first_metric + m]] = quantiles(values[g][m]);
    out.push_back(std::move(s));
  }
  return out;
}

std::string phase_table(const ExperimentResult& result) {
  if (result.config.experiment != Experiment::Detection)
    throw InvalidArgument("phase table is defined for detection runs");
  std::vector<const GridSummary*> rows;
  for (const auto& s : result.summaries) rows.push_back(&s);
  const auto snr = [](const GridSummary* s) {
    return (s->point.a - s->point.b) * (s->point.a - s->point.b) / (s->point.a + s->point.b);
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const GridSummary* x, const GridSummary* y) { return snr(x) < snr(y); });
  std::string out = "n,a,b,ntau,snr,above_threshold,median_misclassification,median_vector_dist\n";
  for (const auto* s : rows) {
    out += std::to_string(s->point.n) + ',' + fmt_double(s->point.a) + ',' +
           fmt_double(s->point.b) + ',' + s->point.tau.label() + ',' + fmt_double(snr(s)) + ',' +
           (snr(s) > 2.0 ? "1" : "0") + ',' +
           fmt_double(s->metrics.at("misclassification").median) + ',' +
           fmt_double(s->metrics.at("vector_dist").median) + '\n';
  }
  return out;
}

std::string to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["experiment"] = to_string(result.config.experiment);
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& key : result.config.source.keys()) cfg[key] = result.config.source.values(key);
  j["config"] = cfg;
  j["resolved"] = {{"r", result.config.r},
                   {"replicates", result.config.replicates},
                   {"seed", result.config.seed},
                   {"threads", result.config.threads}};
  j["metrics"] = result.metrics;

  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : result.records) {
    nlohmann::json r = {{"grid_index", rec.grid_index}, {"replicate", rec.replicate},
                        {"seed", rec.seed},             {"point", point_json(rec.point)},
                        {"tau", rec.tau},               {"status", rec.status},
                        {"runtime_seconds", rec.runtime_seconds}};
    nlohmann::json values = nlohmann::json::object();
    for (std::size_t m = 0; m < result.metrics.size(); ++m) {
      const double v = rec.values[m];
      values[result.metrics[m]] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    }
    r["values"] = values;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);

  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [name, q] : s.metrics) metrics[name] = quantiles_json(q);
    summaries.push_back({{"grid_index", s.grid_index}, {"point", point_json(s.point)}, {"metrics", metrics}});
  }
  j["summaries"] = std::move(summaries);
  if (result.config.experiment == Experiment::Detection) j["phase_table"] = phase_table(result);
  return j.dump(2) + "\n";
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_svg(const ExperimentResult& result) {
  const std::string metric = primary_metric(result.config.experiment);
  const double width = 720, height = 420, left = 70, right = 20, top = 40, bottom = 110;
  const double pw = width - left - right, ph = height - top - bottom;

  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : result.summaries) {
    const auto& q = s.metrics.at(metric);
    if (q.count == 0) continue;
    lo = std::min(lo, q.p05);
    hi = std::max(hi, q.p95);
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const std::size_t count = result.summaries.size();
  const auto xpos = [&](std::size_t i) {
    return left + (count == 1 ? pw / 2 : pw * static_cast<double>(i) / static_cast<double>(count - 1));
  };
  const auto ypos = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">"
      << xml_escape(to_string(result.config.experiment) + ": " + metric +
                    " (median, 5th-95th percentile)")
      << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
      << top + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    svg << "<text x=\"" << left - 6 << "\" y=\"" << ypos(v) + 4 << "\" text-anchor=\"end\">" << buf
        << "</text>\n";
  }

  std::string path;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = result.summaries[i];
    const auto& q = s.metrics.at(metric);
    const double x = xpos(i);
    std::ostringstream label;
    label << "n=" << s.point.n << " a=" << s.point.a << " b=" << s.point.b
          << " ntau=" << s.point.tau.label();
    svg << "<text transform=\"translate(" << x << "," << top + ph + 12 << ") rotate(40)\">"
        << xml_escape(label.str()) << "</text>\n";
    if (q.count == 0) continue;
    svg << "<line x1=\"" << x << "\" y1=\"" << ypos(q.p05) << "\" x2=\"" << x << "\" y2=\""
        << ypos(q.p95) << "\" stroke=\"#888\"/>\n";
    svg << "<circle cx=\"" << x << "\" cy=\"" << ypos(q.median) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
    path += (path.empty() ? "M" : " L") + fmt_double(x) + "," + fmt_double(ypos(q.median));
  }
  if (!path.empty())
    svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"#1f77b4\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> emit_report(const ExperimentResult& result, const std::string& dir,
                                     bool svg) {
  if (result.records.empty()) throw InvalidArgument("no records to report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());

  const std::string base = (std::filesystem::path(dir) / to_string(result.config.experiment)).string();
  std::vector<std::pair<std::string, std::string>> files = {
      {base + ".csv", to_csv(result)}, {base + ".json", to_json(result)}};
  if (svg) files.emplace_back(base + ".svg", to_svg(result));

  std::vector<std::string> written;
  for (const auto& [path, content] : files) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw Error("cannot write " + path);
    written.push_back(path);
  }
  return written;
}

}  // namespace regspec
