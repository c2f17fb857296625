#include "regfir/filter_design.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>

namespace regfir {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

// Pass intervals [lo, hi] implied by the band kind, in cycles/sample.
std::vector<std::pair<double, double>> pass_bands(const BandSpec& band) {
  const auto& e = band.edges;
  switch (band.kind) {
    case BandKind::LowPass:
      return {{0.0, e[0]}};
    case BandKind::HighPass:
      return {{e[0], 0.5}};
    case BandKind::BandPass:
      return {{e[0], e[1]}};
    case BandKind::BandStop:
      return {{0.0, e[0]}, {e[1], 0.5}};
    case BandKind::MultiBandStop: {
      std::vector<std::pair<double, double>> out;
      out.emplace_back(0.0, e.front());
      for (std::size_t i = 1; i + 1 < e.size(); i += 2)
        out.emplace_back(e[i], e[i + 1]);
      out.emplace_back(e.back(), 0.5);
      return out;
    }
  }
  throw std::invalid_argument("unknown band kind");
}

}  // namespace

std::string to_string(BandKind k) {
  switch (k) {
    case BandKind::LowPass: return "low-pass";
    case BandKind::HighPass: return "high-pass";
    case BandKind::BandPass: return "band-pass";
    case BandKind::BandStop: return "band-stop";
    case BandKind::MultiBandStop: return "multi-band-stop";
  }
  throw std::invalid_argument("unknown band kind");
}

BandKind band_kind_from_string(const std::string& name) {
  if (name == "low-pass") return BandKind::LowPass;
  if (name == "high-pass") return BandKind::HighPass;
  if (name == "band-pass") return BandKind::BandPass;
  if (name == "band-stop") return BandKind::BandStop;
  if (name == "multi-band-stop") return BandKind::MultiBandStop;
  throw std::invalid_argument("unknown band kind: " + name);
}

void validate(const BandSpec& band) {
  const auto& e = band.edges;
  std::size_t want = 0;
  switch (band.kind) {
    case BandKind::LowPass:
    case BandKind::HighPass: want = 1; break;
    case BandKind::BandPass:
    case BandKind::BandStop: want = 2; break;
    case BandKind::MultiBandStop:
      require(e.size() >= 2 && e.size() % 2 == 0,
              "multi-band-stop needs an even edge count >= 2");
      want = e.size();
      break;
  }
  require(e.size() == want, "wrong number of band edges");
  double prev = 0.0;
  for (double f : e) {
    require(f > 0.0 && f < 0.5, "band edges must lie strictly inside (0, 0.5)");
    require(f > prev, "band edges must be strictly increasing");
    prev = f;
  }
}

FirDesign design_fir_windowed(int order, const BandSpec& band) {
  require(order >= 1, "filter order must be positive");
  validate(band);
  const auto bands = pass_bands(band);
  const bool touches_nyquist = bands.back().second == 0.5;
  require(!(touches_nyquist && order % 2 != 0),
          "a pass band reaching Nyquist needs an even filter order");

  const double m = order / 2.0;
  FirDesign fir;
  fir.order = order;
  fir.band = band;
  fir.taps.assign(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    const double x = k - m;
    double h = 0.0;
    for (const auto& [lo, hi] : bands) {
      h += 2.0 * hi * sinc(2.0 * hi * x) - 2.0 * lo * sinc(2.0 * lo * x);
    }
    const double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * k / order);
    fir.taps[k] = h * w;
  }

  // Unit gain at the reference frequency of the first pass band.
  const auto& [lo0, hi0] = bands.front();
  const double fref = (lo0 == 0.0) ? 0.0 : (hi0 == 0.5 ? 0.5 : 0.5 * (lo0 + hi0));
  double s = 0.0;
  for (int k = 0; k <= order; ++k)
    s += fir.taps[k] * std::cos(2.0 * M_PI * fref * (k - m));
  if (s == 0.0) throw std::runtime_error("degenerate design: zero reference gain");
  for (auto& t : fir.taps) t /= s;
  return fir;
}

double fir_response_db(const FirDesign& fir, double freq) {
  require(freq >= 0.0 && freq <= 0.5, "frequency must lie in [0, 0.5]");
  std::complex<double> h(0.0, 0.0);
  for (std::size_t k = 0; k < fir.taps.size(); ++k) {
    const double phase = -2.0 * M_PI * freq * static_cast<double>(k);
    h += fir.taps[k] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  const double mag = std::abs(h);
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mag);
}

FilterMatrix regularisation_filter(const FirDesign& fir, int n, double alpha) {
  require(n >= 1, "n must be positive");
  require(fir.order < n, "filter order must be smaller than the model order");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  FilterMatrix F;
  F.mat = Matrix::Zero(n, n);
  F.bandwidth = fir.order;
  F.upper = true;
  const double step = 1.0 / std::sqrt(alpha);
  double scale = step;  // alpha^(-i/2) for the 1-based row index i
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= fir.order && i + k < n; ++k) {
      F.mat(i, i + k) = scale * fir.taps[k];
    }
    scale *= step;
  }
  return F;
}

}  // namespace regfir
