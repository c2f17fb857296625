#pragma once

#include <string>

#include "regfir/simulation.hpp"

namespace regfir {

/// Fixed scientific format with enough digits to round-trip a double.
/// NaN prints as "nan"; used everywhere a file stores numbers so identical
/// values give identical bytes.
std::string format_double(double v);

/// Two-column CSV with header "u,y".
void write_dataset_csv(const std::string& path, const Dataset& data);
Dataset read_dataset_csv(const std::string& path);

/// One-column CSV with the given header.
void write_vector_csv(const std::string& path, const std::string& header,
                      const Vector& values);

/// Experiment configuration as JSON.  Absent keys keep their defaults.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

}  // namespace regfir
