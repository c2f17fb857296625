#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "regfir/report.hpp"
#include "regfir/simulation.hpp"

namespace regfir {

/// Coefficients plus the tuning outcome for one method on one dataset.
/// The record's mse/run fields are left unset; run_benchmark fills them.
struct IdentifyResult {
  Vector theta;
  RunRecord record;
};

/// Methods: ls, tc, dc, filter, tailored, tc-ml, dc-ml.  Uses the config's
/// model order, fold count, grid and tailored edges.
IdentifyResult run_identify(const std::string& method, const Dataset& data,
                            const ExperimentConfig& config);

/// Runs the full Monte Carlo suite.  Within a run index every method sees
/// the same dataset; runs are dispatched across a worker pool and the
/// records come back sorted by (run, method order), so the output does not
/// depend on scheduling.  A method failure becomes a NaN row, not an abort.
std::vector<RunRecord> run_benchmark(const ExperimentConfig& config,
                                     std::ostream* progress = nullptr);

/// Writes per_run.csv, boxplot.csv, win_table.csv and summary.json.
void export_report(const std::string& out_dir, const ExperimentConfig& config,
                   const std::vector<RunRecord>& records);

}  // namespace regfir
