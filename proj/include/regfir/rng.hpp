#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "regfir/types.hpp"

namespace regfir {

/// Deterministic Gaussian stream.  The state is derived from
/// (base_seed, run, label) only, so any (run, label) pair yields the same
/// variates regardless of platform, thread schedule, or call site.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t base_seed, std::uint64_t run,
                 std::string_view label);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Marsaglia polar method).
  double normal();

  /// Vector of independent N(0, sigma^2) samples.
  Vector normal_vector(int length, double sigma);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// The stream seed derivation, exposed for tests.
std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t run,
                                 std::string_view label);

}  // namespace regfir
