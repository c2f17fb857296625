#pragma once

#include <limits>
#include <string>
#include <vector>

namespace regfir {

struct ExperimentConfig;

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// Result of one method on one Monte Carlo run.  Hyperparameter fields the
/// method does not tune stay NaN (p stays -1, kind empty) and serialise as
/// empty cells.  A failed run keeps ok = false, NaN errors and the message.
struct RunRecord {
  int run = 0;
  std::string method;
  double mse_val = kUnset;
  double mse_coef = kUnset;
  double cv_mse = kUnset;
  std::string kind;
  int p = -1;
  double f1 = kUnset;
  double f2 = kUnset;
  double alpha = kUnset;
  double rho = kUnset;
  double lambda = kUnset;
  bool ok = true;
  std::string error;
};

/// Linear-interpolation quantile of the values (the convention most
/// numerical environments default to); q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Five-number summary with Tukey whiskers: whiskers reach the farthest
/// points within 1.5 IQR of the quartiles, the rest are outliers.
struct BoxStats {
  int count = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

/// Paired comparison on validation MSE over the runs both methods finished.
struct WinCount {
  std::string method_a;
  std::string method_b;
  int wins_a = 0;
  int wins_b = 0;
  int ties = 0;
  int total = 0;
  double pct_a = 0.0;  // 100 * wins_a / total, NaN when total = 0
};

std::vector<WinCount> win_table(const std::vector<RunRecord>& records,
                                const std::vector<std::string>& methods);

/// Writers for the experiment output files.  All numbers use a fixed
/// full-precision format, so identical records give identical bytes.
void write_per_run_csv(const std::string& path,
                       const std::vector<RunRecord>& records);
void write_boxplot_csv(const std::string& path,
                       const std::vector<RunRecord>& records,
                       const std::vector<std::string>& methods);
void write_win_table_csv(const std::string& path,
                         const std::vector<RunRecord>& records,
                         const std::vector<std::string>& methods);
void write_summary_json(const std::string& path,
                        const ExperimentConfig& config,
                        const std::vector<RunRecord>& records);

}  // namespace regfir
