#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regfir/estimator.hpp"
#include "regfir/systems.hpp"
#include "regfir/tuning.hpp"

namespace regfir {

/// Full description of one Monte Carlo experiment.
struct ExperimentConfig {
  std::string system = "band2";
  int n_samples = 250;
  double input_sigma = 1.0;
  double noise_sigma = 0.1;
  int model_order = 100;
  int n_validation = 10000;
  int runs = 10;
  std::uint64_t base_seed = 1;
  int cv_folds = 2;
  std::vector<std::string> methods = {"ls", "tc", "dc", "filter"};
  GridSpec grid = GridSpec::desk();
  std::vector<double> tailored_edges;  // stop intervals for "tailored"
  bool refine = true;                  // local polish after the grid scan
};

void validate(const ExperimentConfig& config);

/// Benchmark systems by name: low, band1, band2, band3, high are
/// second-order Chebyshev type I designs (1 dB ripple); res1 is a lightly
/// damped narrow resonance, res2dom and res2eq combine two resonances with
/// dominant (0.2) and equal weights.
SystemSpec make_benchmark_system(const std::string& name);
std::vector<std::string> benchmark_system_names();

/// Accepts a benchmark name or a path to a system description in JSON.
SystemSpec resolve_system(const std::string& name_or_path);

/// Draws the excitation and measurement noise for one run and filters the
/// input through the system.  Streams are independent across runs and across
/// the input/noise/validation roles, and reproducible from (base_seed, run).
Dataset simulate_dataset(const SystemSpec& sys, int n_samples,
                         double input_sigma, double noise_sigma,
                         std::uint64_t base_seed, std::uint64_t run);

/// Mean squared error between the noise-free system output and the FIR
/// prediction sum_k theta_k u(t-k) on a fresh validation input.
double validation_mse(const SystemSpec& sys, const Vector& theta,
                      int n_validation, double input_sigma,
                      std::uint64_t base_seed, std::uint64_t run);

/// sigma_u^2 * sum_k (g_k - theta_k)^2, with coefficients beyond either
/// vector's length treated as zero.  Equals the expected validation MSE
/// under white excitation when g carries the full impulse response.
double coefficient_mse(const Vector& theta, const Vector& g, double sigma_u);

}  // namespace regfir
