#pragma once

#include <complex>
#include <string>
#include <vector>

#include "regfir/filter_design.hpp"
#include "regfir/types.hpp"

namespace regfir {

/// Discrete-time system, either a direct-form rational filter (b, a with
/// a[0] = 1) or a gain-weighted sum of subsystems.  Components take
/// precedence when non-empty.
struct SystemSpec {
  std::string name;
  std::vector<double> b{1.0};
  std::vector<double> a{1.0};
  struct Component;
  std::vector<Component> components;
};

struct SystemSpec::Component {
  double gain = 1.0;
  SystemSpec system;
};

void validate(const SystemSpec& sys);

/// All poles strictly inside the unit circle (every component too).
bool is_stable(const SystemSpec& sys);

/// Chebyshev type-1 design with the given passband ripple in dB.  `order` is
/// the final filter order; BandPass requires an even order (two poles per
/// prototype pole).  Supported kinds: LowPass, HighPass, BandPass.
SystemSpec design_cheby1(int order, double ripple_db, const BandSpec& band);

Vector impulse_response(const SystemSpec& sys, int length);

/// Runs u through the system with zero initial conditions.
Vector filter_signal(const SystemSpec& sys, const Vector& u);

std::complex<double> frequency_response(const SystemSpec& sys, double freq);
double frequency_response_db(const SystemSpec& sys, double freq);

std::string system_to_json(const SystemSpec& sys);
SystemSpec system_from_json(const std::string& text);

}  // namespace regfir
