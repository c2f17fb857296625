#include "regfir/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "regfir/rng.hpp"

namespace regfir {

void validate(const ExperimentConfig& config) {
  if (config.n_samples <= 0 || config.model_order <= 0 ||
      config.n_validation <= 0 || config.runs <= 0)
    throw std::invalid_argument("experiment sizes must be positive");
  if (config.model_order > config.n_samples)
    throw std::invalid_argument("model order must not exceed the record "
                                "length");
  if (config.input_sigma <= 0.0)
    throw std::invalid_argument("input sigma must be positive");
  if (config.noise_sigma < 0.0)
    throw std::invalid_argument("noise sigma must be nonnegative");
  if (config.cv_folds < 2)
    throw std::invalid_argument("need at least two cross-validation folds");
  resolve_system(config.system);
  for (const std::string& m : config.methods) {
    if (m != "ls" && m != "tc" && m != "dc" && m != "filter" &&
        m != "tailored" && m != "tc-ml" && m != "dc-ml")
      throw std::invalid_argument("unknown method: " + m);
    if (m == "tailored") {
      if (config.tailored_edges.empty())
        throw std::invalid_argument("tailored method needs stop edges");
      validate(BandSpec{BandKind::MultiBandStop, config.tailored_edges});
    }
  }
}

namespace {

SystemSpec resonance(double f1, double f2) {
  return design_cheby1(2, 1.0, {BandKind::BandPass, {f1, f2}});
}

SystemSpec two_resonances(const std::string& name, double first_gain) {
  SystemSpec sys;
  sys.name = name;
  sys.components.push_back({first_gain, resonance(0.145, 0.15)});
  sys.components.push_back({1.0, resonance(0.395, 0.4)});
  return sys;
}

}  // namespace

SystemSpec make_benchmark_system(const std::string& name) {
  SystemSpec sys;
  if (name == "low") {
    sys = design_cheby1(2, 1.0, {BandKind::LowPass, {0.05}});
  } else if (name == "band1") {
    sys = design_cheby1(2, 1.0, {BandKind::BandPass, {0.1, 0.15}});
  } else if (name == "band2") {
    sys = design_cheby1(2, 1.0, {BandKind::BandPass, {0.225, 0.275}});
  } else if (name == "band3") {
    sys = design_cheby1(2, 1.0, {BandKind::BandPass, {0.35, 0.4}});
  } else if (name == "high") {
    sys = design_cheby1(2, 1.0, {BandKind::HighPass, {0.45}});
  } else if (name == "res1") {
    sys = resonance(0.145, 0.15);
  } else if (name == "res2dom") {
    return two_resonances(name, 0.2);
  } else if (name == "res2eq") {
    return two_resonances(name, 1.0);
  } else {
    throw std::invalid_argument("unknown benchmark system: " + name);
  }
  sys.name = name;
  return sys;
}

std::vector<std::string> benchmark_system_names() {
  return {"low", "band1", "band2", "band3", "high",
          "res1", "res2dom", "res2eq"};
}

SystemSpec resolve_system(const std::string& name_or_path) {
  for (const std::string& name : benchmark_system_names())
    if (name == name_or_path) return make_benchmark_system(name);
  std::ifstream in(name_or_path);
  if (!in)
    throw std::invalid_argument("not a benchmark system name or a readable "
                                "file: " +
                                name_or_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return system_from_json(buffer.str());
}

Dataset simulate_dataset(const SystemSpec& sys, int n_samples,
                         double input_sigma, double noise_sigma,
                         std::uint64_t base_seed, std::uint64_t run) {
  if (n_samples <= 0)
    throw std::invalid_argument("record length must be positive");
  Dataset data;
  data.u = GaussianStream(base_seed, run, "input")
               .normal_vector(n_samples, input_sigma);
  data.y = filter_signal(sys, data.u);
  if (noise_sigma > 0.0)
    data.y += GaussianStream(base_seed, run, "noise")
                  .normal_vector(n_samples, noise_sigma);
  return data;
}

double validation_mse(const SystemSpec& sys, const Vector& theta,
                      int n_validation, double input_sigma,
                      std::uint64_t base_seed, std::uint64_t run) {
  if (n_validation <= 0)
    throw std::invalid_argument("validation length must be positive");
  const Vector u = GaussianStream(base_seed, run, "validation")
                       .normal_vector(n_validation, input_sigma);
  const Vector y0 = filter_signal(sys, u);

  const int n = static_cast<int>(theta.size());
  double total = 0.0;
  for (int t = 0; t < n_validation; ++t) {
    double pred = 0.0;
    const int taps = std::min(n, t + 1);
    for (int k = 0; k < taps; ++k) pred += theta(k) * u(t - k);
    const double e = y0(t) - pred;
    total += e * e;
  }
  return total / static_cast<double>(n_validation);
}

double coefficient_mse(const Vector& theta, const Vector& g, double sigma_u) {
  const int m = static_cast<int>(std::min(theta.size(), g.size()));
  double total = (theta.head(m) - g.head(m)).squaredNorm();
  total += theta.tail(theta.size() - m).squaredNorm();
  total += g.tail(g.size() - m).squaredNorm();
  return sigma_u * sigma_u * total;
}

}  // namespace regfir
