#include "regfir/bench.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace regfir {

namespace {

std::vector<double> tuned_shape_grid() {
  std::vector<double> values;
  for (int i = 0; i < 20; ++i) values.push_back(0.5 + 0.49 * i / 19.0);
  return values;
}

IdentifyResult identify_kernel_cv(KernelFamily family, const Dataset& data,
                                  const ExperimentConfig& config) {
  const auto shapes = tuned_shape_grid();
  const std::vector<double> rhos =
      family == KernelFamily::DC ? shapes : std::vector<double>{};
  const KernelTuningResult tuned =
      tune_kernel_cv(family, shapes, rhos, config.grid.lambdas, data,
                     config.model_order, config.cv_folds);

  KernelSpec reg = tuned.spec;
  reg.c = 1.0;
  reg.sigma2 = tuned.lambda;  // R = lambda * Pbar^{-1}

  IdentifyResult out;
  const Matrix phi = build_regressor(data.u, config.model_order);
  out.theta = regularised_estimate(phi, data.y,
                                   regularisation_matrix(reg, config.model_order));
  out.record.cv_mse = tuned.cv_mse;
  out.record.alpha = tuned.spec.alpha;
  if (family == KernelFamily::DC) out.record.rho = tuned.spec.rho;
  out.record.lambda = tuned.lambda;
  return out;
}

IdentifyResult identify_kernel_ml(KernelFamily family, const Dataset& data,
                                  const ExperimentConfig& config) {
  const EvidenceResult tuned =
      marginal_likelihood_tune(family, data, config.model_order);

  IdentifyResult out;
  const Matrix phi = build_regressor(data.u, config.model_order);
  out.theta = regularised_estimate(
      phi, data.y, regularisation_matrix(tuned.spec, config.model_order));
  out.record.alpha = tuned.spec.alpha;
  if (family == KernelFamily::DC) out.record.rho = tuned.spec.rho;
  out.record.lambda = tuned.spec.sigma2 / tuned.spec.c;
  return out;
}

IdentifyResult identify_filter(const Dataset& data,
                               const ExperimentConfig& config,
                               const std::vector<Hyperparameters>* fixed) {
  TuningResult tuned =
      fixed ? grid_search(*fixed, data, config.model_order, config.cv_folds)
            : grid_search(config.grid, data, config.model_order,
                          config.cv_folds);
  if (config.refine) {
    const TuningResult polished = refine_local(
        tuned.best, data, config.model_order, config.cv_folds);
    if (polished.cv_mse <= tuned.cv_mse) {
      tuned.best = polished.best;
      tuned.cv_mse = polished.cv_mse;
    }
  }

  IdentifyResult out;
  const Matrix phi = build_regressor(data.u, config.model_order);
  const FilterMatrix F = penalty_matrix(tuned.best, config.model_order);
  out.theta =
      regularised_estimate_filter(phi, data.y, F.mat, tuned.best.lambda);
  out.record.cv_mse = tuned.cv_mse;
  out.record.kind = to_string(tuned.best.kind);
  out.record.p = tuned.best.p;
  if (tuned.best.kind != BandKind::MultiBandStop) {
    out.record.f1 = tuned.best.f1;
    out.record.f2 = tuned.best.f2;
  }
  out.record.alpha = tuned.best.alpha;
  out.record.lambda = tuned.best.lambda;
  return out;
}

std::vector<Hyperparameters> tailored_candidates(
    const ExperimentConfig& config) {
  std::vector<Hyperparameters> out;
  for (int p : config.grid.orders)
    for (double alpha : config.grid.alphas)
      for (double lambda : config.grid.lambdas)
        out.push_back({BandKind::MultiBandStop, p, 0.0, 0.5, alpha, lambda,
                       config.tailored_edges});
  return out;
}

}  // namespace

IdentifyResult run_identify(const std::string& method, const Dataset& data,
                            const ExperimentConfig& config) {
  if (method == "ls") {
    IdentifyResult out;
    const Matrix phi = build_regressor(data.u, config.model_order);
    out.theta = least_squares(phi, data.y);
    out.record.method = method;
    return out;
  }
  IdentifyResult out;
  if (method == "tc") {
    out = identify_kernel_cv(KernelFamily::TC, data, config);
  } else if (method == "dc") {
    out = identify_kernel_cv(KernelFamily::DC, data, config);
  } else if (method == "tc-ml") {
    out = identify_kernel_ml(KernelFamily::TC, data, config);
  } else if (method == "dc-ml") {
    out = identify_kernel_ml(KernelFamily::DC, data, config);
  } else if (method == "filter") {
    out = identify_filter(data, config, nullptr);
  } else if (method == "tailored") {
    if (config.tailored_edges.empty())
      throw std::invalid_argument("tailored method needs stop edges");
    const auto candidates = tailored_candidates(config);
    out = identify_filter(data, config, &candidates);
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  out.record.method = method;
  return out;
}

std::vector<RunRecord> run_benchmark(const ExperimentConfig& config,
                                     std::ostream* progress) {
  validate(config);
  const SystemSpec sys = resolve_system(config.system);
  const Vector g_true = impulse_response(sys, 4096);

  std::vector<std::vector<RunRecord>> by_run(config.runs);
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex print_mutex;

  const auto one_run = [&](int run) {
    const Dataset data =
        simulate_dataset(sys, config.n_samples, config.input_sigma,
                         config.noise_sigma, config.base_seed, run);
    std::vector<RunRecord> records;
    for (const std::string& method : config.methods) {
      RunRecord rec;
      try {
        IdentifyResult res = run_identify(method, data, config);
        rec = std::move(res.record);
        rec.mse_val =
            validation_mse(sys, res.theta, config.n_validation,
                           config.input_sigma, config.base_seed, run);
        rec.mse_coef = coefficient_mse(res.theta, g_true, config.input_sigma);
        rec.ok = true;
      } catch (const std::exception& e) {
        rec = RunRecord{};
        rec.method = method;
        rec.ok = false;
        rec.error = e.what();
      }
      rec.run = run;
      records.push_back(std::move(rec));
    }
    by_run[run] = std::move(records);
    if (progress) {
      const std::lock_guard<std::mutex> lock(print_mutex);
      *progress << "run " << run << " done (" << ++done << "/" << config.runs
                << ")\n"
                << std::flush;
    }
  };

  const auto worker = [&]() {
    for (int run; (run = next.fetch_add(1)) < config.runs;) one_run(run);
  };

  unsigned pool = std::thread::hardware_concurrency();
  if (pool == 0) pool = 1;
  pool = std::min(pool, static_cast<unsigned>(config.runs));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(config.runs) *
                  config.methods.size());
  for (auto& run_records : by_run)
    for (auto& rec : run_records) records.push_back(std::move(rec));
  return records;
}

void export_report(const std::string& out_dir, const ExperimentConfig& config,
                   const std::vector<RunRecord>& records) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_per_run_csv((dir / "per_run.csv").string(), records);
  write_boxplot_csv((dir / "boxplot.csv").string(), records, config.methods);
  write_win_table_csv((dir / "win_table.csv").string(), records,
                      config.methods);
  write_summary_json((dir / "summary.json").string(), config, records);
}

}  // namespace regfir
