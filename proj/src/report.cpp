#include "regfir/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "regfir/io.hpp"
#include "regfir/simulation.hpp"

namespace regfir {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const std::size_t i = static_cast<std::size_t>(h);
  if (i + 1 >= n) return sorted.back();
  return sorted[i] + (sorted[i + 1] - sorted[i]) * (h - i);
}

/// Finite validation MSEs of completed runs, keyed run -> value.
std::map<int, double> method_values(const std::vector<RunRecord>& records,
                                    const std::string& method) {
  std::map<int, double> values;
  for (const RunRecord& rec : records)
    if (rec.method == method && rec.ok && std::isfinite(rec.mse_val))
      values[rec.run] = rec.mse_val;
  return values;
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string optional_cell(double v) {
  return std::isnan(v) ? std::string() : format_double(v);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty())
    throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats stats;
  stats.count = static_cast<int>(values.size());
  if (values.empty()) {
    stats.mean = stats.min = stats.q1 = stats.median = stats.q3 = kNan;
    stats.max = stats.whisker_lo = stats.whisker_hi = kNan;
    return stats;
  }
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  stats.mean = total / values.size();
  stats.min = values.front();
  stats.max = values.back();
  stats.q1 = quantile_sorted(values, 0.25);
  stats.median = quantile_sorted(values, 0.5);
  stats.q3 = quantile_sorted(values, 0.75);
  const double reach = 1.5 * (stats.q3 - stats.q1);
  stats.whisker_lo = stats.q1;
  stats.whisker_hi = stats.q3;
  for (double v : values) {
    if (v >= stats.q1 - reach) {
      stats.whisker_lo = v;
      break;
    }
  }
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (*it <= stats.q3 + reach) {
      stats.whisker_hi = *it;
      break;
    }
  }
  for (double v : values)
    if (v < stats.q1 - reach || v > stats.q3 + reach)
      stats.outliers.push_back(v);
  return stats;
}

std::vector<WinCount> win_table(const std::vector<RunRecord>& records,
                                const std::vector<std::string>& methods) {
  std::vector<WinCount> table;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string& a = methods[i];
    const auto va = method_values(records, a);
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      const std::string& b = methods[j];
      const auto vb = method_values(records, b);
      WinCount count;
      count.method_a = a;
      count.method_b = b;
      for (const auto& [run, value_a] : va) {
        const auto it = vb.find(run);
        if (it == vb.end()) continue;
        ++count.total;
        if (value_a < it->second)
          ++count.wins_a;
        else if (value_a > it->second)
          ++count.wins_b;
        else
          ++count.ties;
      }
      count.pct_a =
          count.total > 0 ? 100.0 * count.wins_a / count.total : kNan;
      table.push_back(count);
    }
  }
  return table;
}

void write_per_run_csv(const std::string& path,
                       const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(path);
  out << "run,method,mse_val,mse_coef,cv_mse,kind,p,f1,f2,alpha,rho,lambda,"
         "ok,error\n";
  for (const RunRecord& rec : records) {
    out << rec.run << ',' << csv_escape(rec.method) << ','
        << format_double(rec.mse_val) << ',' << format_double(rec.mse_coef)
        << ',' << format_double(rec.cv_mse) << ',' << csv_escape(rec.kind)
        << ',';
    if (rec.p >= 0) out << rec.p;
    out << ',' << optional_cell(rec.f1) << ',' << optional_cell(rec.f2) << ','
        << optional_cell(rec.alpha) << ',' << optional_cell(rec.rho) << ','
        << optional_cell(rec.lambda) << ',' << (rec.ok ? 1 : 0) << ','
        << csv_escape(rec.error) << '\n';
  }
}

void write_boxplot_csv(const std::string& path,
                       const std::vector<RunRecord>& records,
                       const std::vector<std::string>& methods) {
  std::ofstream out = open_out(path);
  out << "method,count,mean,q1,median,q3,whisker_lo,whisker_hi,outliers\n";
  for (const std::string& method : methods) {
    std::vector<double> values;
    for (const auto& [run, v] : method_values(records, method))
      values.push_back(v);
    const BoxStats stats = box_stats(std::move(values));
    out << csv_escape(method) << ',' << stats.count << ','
        << format_double(stats.mean) << ',' << format_double(stats.q1) << ','
        << format_double(stats.median) << ',' << format_double(stats.q3)
        << ',' << format_double(stats.whisker_lo) << ','
        << format_double(stats.whisker_hi) << ',';
    for (std::size_t i = 0; i < stats.outliers.size(); ++i) {
      if (i) out << ';';
      out << format_double(stats.outliers[i]);
    }
    out << '\n';
  }
}

void write_win_table_csv(const std::string& path,
                         const std::vector<RunRecord>& records,
                         const std::vector<std::string>& methods) {
  std::ofstream out = open_out(path);
  out << "method_a,method_b,wins_a,wins_b,ties,total,pct_a\n";
  for (const WinCount& count : win_table(records, methods)) {
    out << csv_escape(count.method_a) << ',' << csv_escape(count.method_b)
        << ',' << count.wins_a << ',' << count.wins_b << ',' << count.ties
        << ',' << count.total << ',' << format_double(count.pct_a) << '\n';
  }
}

void write_summary_json(const std::string& path,
                        const ExperimentConfig& config,
                        const std::vector<RunRecord>& records) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["config"] = Json::parse(config_to_json(config));

  Json methods = Json::object();
  for (const std::string& method : config.methods) {
    int failures = 0;
    for (const RunRecord& rec : records)
      if (rec.method == method && !rec.ok) ++failures;
    std::vector<double> values;
    for (const auto& [run, v] : method_values(records, method))
      values.push_back(v);
    const BoxStats stats = box_stats(std::move(values));
    Json m;
    m["count"] = stats.count;
    m["failures"] = failures;
    m["mean"] = stats.mean;
    m["min"] = stats.min;
    m["q1"] = stats.q1;
    m["median"] = stats.median;
    m["q3"] = stats.q3;
    m["max"] = stats.max;
    m["whisker_lo"] = stats.whisker_lo;
    m["whisker_hi"] = stats.whisker_hi;
    m["outliers"] = stats.outliers;
    methods[method] = m;
  }
  j["methods"] = methods;

  Json wins = Json::array();
  for (const WinCount& count : win_table(records, config.methods)) {
    Json w;
    w["method_a"] = count.method_a;
    w["method_b"] = count.method_b;
    w["wins_a"] = count.wins_a;
    w["wins_b"] = count.wins_b;
    w["ties"] = count.ties;
    w["total"] = count.total;
    wins.push_back(w);
  }
  j["wins"] = wins;

  j["notes"] = Json::array(
      {"quantiles use linear interpolation between order statistics",
       "tc and dc are re-implementations tuned by the same cross-validation "
       "grid as the filter method; tc-ml and dc-ml use marginal-likelihood "
       "tuning instead"});

  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace regfir
