#include "regfir/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace regfir {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t run,
                                 std::string_view label) {
  std::uint64_t s = splitmix64(base_seed);
  s = splitmix64(s ^ splitmix64(run));
  s = splitmix64(s ^ fnv1a(label));
  return s;
}

GaussianStream::GaussianStream(std::uint64_t base_seed, std::uint64_t run,
                               std::string_view label)
    : gen_(derive_stream_seed(base_seed, run, label)) {}

double GaussianStream::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double GaussianStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      spare_ = v * f;
      has_spare_ = true;
      return u * f;
    }
  }
}

Vector GaussianStream::normal_vector(int length, double sigma) {
  if (length < 0) throw std::invalid_argument("length must be nonnegative");
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  Vector out(length);
  for (int i = 0; i < length; ++i) out(i) = sigma * normal();
  return out;
}

}  // namespace regfir
