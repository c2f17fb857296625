#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "regfir/bench.hpp"
#include "regfir/io.hpp"
#include "regfir/kernels.hpp"

namespace {

namespace fs = std::filesystem;
using regfir::ExperimentConfig;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void write_matrix_csv(const fs::path& path, const regfir::Matrix& m) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << regfir::format_double(m(i, j));
    }
    out << '\n';
  }
}

struct CommonOverrides {
  std::string config_path;
  std::string system;
  std::string methods;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int runs = 0;
  std::vector<double> tailored_edges;
  bool seed_set = false;
};

ExperimentConfig resolve_config(const CommonOverrides& common) {
  ExperimentConfig config;
  if (!common.config_path.empty())
    config = regfir::load_config(common.config_path);
  if (!common.system.empty()) config.system = common.system;
  if (common.seed_set) config.base_seed = common.seed;
  if (common.runs > 0) config.runs = common.runs;
  if (!common.methods.empty()) {
    config.methods.clear();
    std::string token;
    std::istringstream in(common.methods);
    while (std::getline(in, token, ','))
      if (!token.empty()) config.methods.push_back(token);
  }
  if (!common.tailored_edges.empty())
    config.tailored_edges = common.tailored_edges;
  validate(config);
  return config;
}

int cmd_simulate(const CommonOverrides& common, int run) {
  const ExperimentConfig config = resolve_config(common);
  const regfir::SystemSpec sys = regfir::resolve_system(config.system);
  const regfir::Dataset data = regfir::simulate_dataset(
      sys, config.n_samples, config.input_sigma, config.noise_sigma,
      config.base_seed, run);

  fs::create_directories(common.out_dir);
  const fs::path dir(common.out_dir);
  regfir::write_dataset_csv((dir / "dataset.csv").string(), data);

  nlohmann::ordered_json sidecar;
  sidecar["system"] = config.system;
  sidecar["n_samples"] = config.n_samples;
  sidecar["input_sigma"] = config.input_sigma;
  sidecar["noise_sigma"] = config.noise_sigma;
  sidecar["base_seed"] = config.base_seed;
  sidecar["run"] = run;
  open_out(dir / "dataset.json") << sidecar.dump(2) << '\n';

  std::cout << "wrote " << (dir / "dataset.csv").string() << " ("
            << data.u.size() << " samples)\n";
  return 0;
}

int cmd_identify(const CommonOverrides& common, const std::string& data_path,
                 const std::string& method) {
  const ExperimentConfig config = resolve_config(common);
  const regfir::Dataset data = regfir::read_dataset_csv(data_path);
  if (data.u.size() <= config.model_order)
    throw std::invalid_argument(
        "dataset shorter than the model order; lower model_order in the "
        "config");

  const regfir::IdentifyResult res =
      regfir::run_identify(method, data, config);

  fs::create_directories(common.out_dir);
  const fs::path dir(common.out_dir);
  regfir::write_vector_csv((dir / "estimate.csv").string(), "g", res.theta);

  std::cout << "method=" << method;
  const regfir::RunRecord& rec = res.record;
  if (!rec.kind.empty()) std::cout << " kind=" << rec.kind;
  if (rec.p >= 0) std::cout << " p=" << rec.p;
  if (std::isfinite(rec.f1)) std::cout << " f1=" << rec.f1;
  if (std::isfinite(rec.f2)) std::cout << " f2=" << rec.f2;
  if (std::isfinite(rec.alpha)) std::cout << " alpha=" << rec.alpha;
  if (std::isfinite(rec.rho)) std::cout << " rho=" << rec.rho;
  if (std::isfinite(rec.lambda)) std::cout << " lambda=" << rec.lambda;
  if (std::isfinite(rec.cv_mse)) std::cout << " cv_mse=" << rec.cv_mse;
  std::cout << "\nwrote " << (dir / "estimate.csv").string() << " ("
            << res.theta.size() << " coefficients)\n";
  return 0;
}

int cmd_benchmark(const CommonOverrides& common) {
  const ExperimentConfig config = resolve_config(common);
  const std::vector<regfir::RunRecord> records =
      regfir::run_benchmark(config, &std::cerr);
  regfir::export_report(common.out_dir, config, records);
  std::cout << "wrote per_run.csv, boxplot.csv, win_table.csv, summary.json "
               "under "
            << common.out_dir << "\n";
  return 0;
}

int cmd_inspect_kernel(const CommonOverrides& common,
                       const std::string& family_name,
                       const regfir::KernelSpec& spec, int n) {
  regfir::KernelSpec full = spec;
  full.family = regfir::kernel_family_from_string(family_name);
  regfir::validate(full);

  const regfir::Matrix P = regfir::covariance_matrix(full, n);
  const regfir::Matrix R = regfir::regularisation_matrix(full, n);
  const regfir::FilterMatrix F = regfir::filter_factor(full, n);

  fs::create_directories(common.out_dir);
  const fs::path dir(common.out_dir);
  write_matrix_csv(dir / "P.csv", P);
  write_matrix_csv(dir / "R.csv", R);
  write_matrix_csv(dir / "F.csv", F.mat);

  std::ofstream out = open_out(dir / "row_response_db.csv");
  out << "row";
  const int n_freq = 51;
  for (int j = 0; j < n_freq; ++j)
    out << ",f" << regfir::format_double(0.5 * j / (n_freq - 1));
  out << '\n';
  for (int i = 0; i < n; ++i) {
    out << i;
    for (int j = 0; j < n_freq; ++j) {
      const double f = 0.5 * j / (n_freq - 1);
      out << ',' << regfir::format_double(regfir::row_response_db(F, i, f));
    }
    out << '\n';
  }
  std::cout << "wrote P.csv, R.csv, F.csv, row_response_db.csv under "
            << common.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularised FIR identification workbench"};
  app.require_subcommand(1);

  CommonOverrides common;
  const auto add_common = [&](CLI::App* cmd, bool with_methods) {
    cmd->add_option("--config", common.config_path,
                    "experiment config JSON file");
    cmd->add_option("--system", common.system,
                    "benchmark system name or system JSON path");
    cmd->add_option("--seed", common.seed, "base seed")
        ->each([&](const std::string&) { common.seed_set = true; });
    cmd->add_option("--out", common.out_dir, "output directory")
        ->capture_default_str();
    if (with_methods) {
      cmd->add_option("--runs", common.runs, "Monte Carlo runs");
      cmd->add_option("--methods", common.methods,
                      "comma-separated methods (ls,tc,dc,filter,tailored,"
                      "tc-ml,dc-ml)");
      cmd->add_option("--tailored-edges", common.tailored_edges,
                      "stop-band edges f1,f2[,f3,f4,...]")
          ->delimiter(',');
    }
  };

  auto* simulate = app.add_subcommand("simulate", "write one dataset as CSV");
  int run_index = 0;
  simulate->add_option("--run", run_index, "run index within the seed")
      ->capture_default_str();
  add_common(simulate, false);

  auto* identify =
      app.add_subcommand("identify", "estimate coefficients from a dataset");
  std::string data_path, method = "filter";
  identify->add_option("--data", data_path, "dataset CSV (u,y)")->required();
  identify->add_option("--method", method, "estimation method")
      ->capture_default_str();
  add_common(identify, true);

  auto* benchmark =
      app.add_subcommand("benchmark", "run the Monte Carlo suite");
  add_common(benchmark, true);

  auto* inspect =
      app.add_subcommand("inspect-kernel", "dump kernel matrices and rows");
  std::string family_name = "tc";
  regfir::KernelSpec spec;
  int n = 20;
  inspect->add_option("--family", family_name,
                      "random-walk, correlation, decay, tc or dc")
      ->capture_default_str();
  inspect->add_option("--alpha", spec.alpha, "decay rate")
      ->capture_default_str();
  inspect->add_option("--rho", spec.rho, "one-lag correlation")
      ->capture_default_str();
  inspect->add_option("--c", spec.c, "prior scale")->capture_default_str();
  inspect->add_option("--sigma2", spec.sigma2, "noise variance in R")
      ->capture_default_str();
  inspect->add_option("--n", n, "matrix size")->capture_default_str();
  add_common(inspect, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(common, run_index);
    if (identify->parsed()) return cmd_identify(common, data_path, method);
    if (benchmark->parsed()) return cmd_benchmark(common);
    if (inspect->parsed())
      return cmd_inspect_kernel(common, family_name, spec, n);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
