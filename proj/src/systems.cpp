#include "regfir/systems.hpp"

#include <cmath>
#include "json.hpp"
#include <stdexcept>

namespace regfir {

namespace {

using Complex = std::complex<double>;
using json = nlohmann::json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Monic polynomial coefficients from its roots, highest power first.
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

std::vector<double> real_coeffs(const std::vector<Complex>& c) {
  std::vector<double> out(c.size());
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i].imag()) > 1e-10 * std::max(scale, 1.0)) {
      throw std::runtime_error("polynomial coefficients are not real");
    }
    out[i] = c[i].real();
  }
  return out;
}

struct Zpk {
  std::vector<Complex> z, p;
  double k = 1.0;
};

// Analog low-pass prototype, passband edge at 1 rad/s.
Zpk cheby1_prototype(int order, double ripple_db) {
  const double eps = std::sqrt(std::pow(10.0, ripple_db / 10.0) - 1.0);
  const double mu = std::asinh(1.0 / eps) / order;
  Zpk zpk;
  Complex prod(1.0, 0.0);
  for (int m = -order + 1; m <= order - 1; m += 2) {
    const double theta = M_PI * m / (2.0 * order);
    const Complex p = -std::sinh(Complex(mu, theta));
    zpk.p.push_back(p);
    prod *= -p;
  }
  zpk.k = prod.real();
  if (order % 2 == 0) zpk.k /= std::sqrt(1.0 + eps * eps);
  return zpk;
}

Zpk lp_to_lp(const Zpk& in, double wo) {
  Zpk out;
  for (const auto& p : in.p) out.p.push_back(p * wo);
  out.k = in.k * std::pow(wo, static_cast<double>(in.p.size() - in.z.size()));
  return out;
}

Zpk lp_to_hp(const Zpk& in, double wo) {
  Zpk out;
  Complex prod_p(1.0, 0.0);
  for (const auto& p : in.p) {
    out.p.push_back(wo / p);
    prod_p *= -p;
  }
  const auto degree = in.p.size() - in.z.size();
  out.z.assign(degree, Complex(0.0, 0.0));
  out.k = in.k * (Complex(1.0, 0.0) / prod_p).real();
  return out;
}

Zpk lp_to_bp(const Zpk& in, double wo, double bw) {
  Zpk out;
  for (const auto& p : in.p) {
    const Complex s = p * (bw / 2.0);
    const Complex d = std::sqrt(s * s - wo * wo);
    out.p.push_back(s + d);
    out.p.push_back(s - d);
  }
  const auto degree = in.p.size() - in.z.size();
  out.z.assign(degree, Complex(0.0, 0.0));
  out.k = in.k * std::pow(bw, static_cast<double>(degree));
  return out;
}

// Bilinear map s -> z with sampling rate fs: z = (2 fs + s) / (2 fs - s).
Zpk bilinear(const Zpk& in, double fs) {
  const double fs2 = 2.0 * fs;
  Zpk out;
  Complex num(1.0, 0.0), den(1.0, 0.0);
  for (const auto& z : in.z) {
    out.z.push_back((fs2 + z) / (fs2 - z));
    num *= (fs2 - z);
  }
  for (const auto& p : in.p) {
    out.p.push_back((fs2 + p) / (fs2 - p));
    den *= (fs2 - p);
  }
  const auto degree = in.p.size() - in.z.size();
  out.z.insert(out.z.end(), degree, Complex(-1.0, 0.0));
  out.k = in.k * (num / den).real();
  return out;
}

std::vector<Complex> poles_of(const std::vector<double>& a) {
  // Companion-matrix eigenvalues of the monic denominator.
  const int deg = static_cast<int>(a.size()) - 1;
  if (deg < 1) return {};
  Matrix C = Matrix::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) C(0, i) = -a[i + 1] / a[0];
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Matrix> eig(C);
  std::vector<Complex> out(deg);
  for (int i = 0; i < deg; ++i) out[i] = eig.eigenvalues()(i);
  return out;
}

Vector filter_direct(const std::vector<double>& b, const std::vector<double>& a,
                     const Vector& u) {
  Vector y = Vector::Zero(u.size());
  for (Eigen::Index t = 0; t < u.size(); ++t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (t >= static_cast<Eigen::Index>(k)) acc += b[k] * u(t - k);
    }
    for (std::size_t k = 1; k < a.size(); ++k) {
      if (t >= static_cast<Eigen::Index>(k)) acc -= a[k] * y(t - k);
    }
    y(t) = acc;
  }
  return y;
}

}  // namespace

void validate(const SystemSpec& sys) {
  if (!sys.components.empty()) {
    for (const auto& c : sys.components) validate(c.system);
    return;
  }
  require(!sys.b.empty() && !sys.a.empty(), "b and a must be nonempty");
  require(sys.a[0] == 1.0, "denominator must be monic (a[0] = 1)");
}

bool is_stable(const SystemSpec& sys) {
  validate(sys);
  if (!sys.components.empty()) {
    for (const auto& c : sys.components)
      if (!is_stable(c.system)) return false;
    return true;
  }
  for (const auto& p : poles_of(sys.a)) {
    if (std::abs(p) >= 1.0) return false;
  }
  return true;
}

SystemSpec design_cheby1(int order, double ripple_db, const BandSpec& band) {
  require(order >= 1, "order must be positive");
  require(ripple_db > 0.0, "ripple must be positive");
  validate(band);

  int proto_order = order;
  if (band.kind == BandKind::BandPass) {
    require(order % 2 == 0, "band-pass needs an even order");
    proto_order = order / 2;
  } else {
    require(band.kind == BandKind::LowPass || band.kind == BandKind::HighPass,
            "supported kinds: low-pass, high-pass, band-pass");
  }

  Zpk proto = cheby1_prototype(proto_order, ripple_db);
  // Bilinear transform at fs = 2 with prewarped edges (Nyquist-normalised
  // cutoff w = 2 f maps to the analog frequency 4 tan(pi f)).
  const double fs = 2.0;
  Zpk analog;
  if (band.kind == BandKind::LowPass) {
    analog = lp_to_lp(proto, 4.0 * std::tan(M_PI * band.edges[0]));
  } else if (band.kind == BandKind::HighPass) {
    analog = lp_to_hp(proto, 4.0 * std::tan(M_PI * band.edges[0]));
  } else {
    const double w1 = 4.0 * std::tan(M_PI * band.edges[0]);
    const double w2 = 4.0 * std::tan(M_PI * band.edges[1]);
    analog = lp_to_bp(proto, std::sqrt(w1 * w2), w2 - w1);
  }
  const Zpk digital = bilinear(analog, fs);

  SystemSpec sys;
  sys.b = real_coeffs(poly_from_roots(digital.z));
  for (auto& v : sys.b) v *= digital.k;
  sys.a = real_coeffs(poly_from_roots(digital.p));
  if (!is_stable(sys)) throw std::runtime_error("designed system is unstable");
  return sys;
}

Vector impulse_response(const SystemSpec& sys, int length) {
  require(length >= 1, "length must be positive");
  Vector delta = Vector::Zero(length);
  delta(0) = 1.0;
  return filter_signal(sys, delta);
}

Vector filter_signal(const SystemSpec& sys, const Vector& u) {
  validate(sys);
  if (!sys.components.empty()) {
    Vector y = Vector::Zero(u.size());
    for (const auto& c : sys.components) {
      y += c.gain * filter_signal(c.system, u);
    }
    return y;
  }
  return filter_direct(sys.b, sys.a, u);
}

std::complex<double> frequency_response(const SystemSpec& sys, double freq) {
  require(freq >= 0.0 && freq <= 0.5, "frequency must lie in [0, 0.5]");
  validate(sys);
  if (!sys.components.empty()) {
    Complex h(0.0, 0.0);
    for (const auto& c : sys.components) {
      h += c.gain * frequency_response(c.system, freq);
    }
    return h;
  }
  Complex num(0.0, 0.0), den(0.0, 0.0);
  for (std::size_t k = 0; k < sys.b.size(); ++k) {
    const double ph = -2.0 * M_PI * freq * static_cast<double>(k);
    num += sys.b[k] * Complex(std::cos(ph), std::sin(ph));
  }
  for (std::size_t k = 0; k < sys.a.size(); ++k) {
    const double ph = -2.0 * M_PI * freq * static_cast<double>(k);
    den += sys.a[k] * Complex(std::cos(ph), std::sin(ph));
  }
  return num / den;
}

double frequency_response_db(const SystemSpec& sys, double freq) {
  const double mag = std::abs(frequency_response(sys, freq));
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mag);
}

namespace {

json system_to_json_obj(const SystemSpec& sys) {
  json j;
  j["name"] = sys.name;
  if (!sys.components.empty()) {
    j["components"] = json::array();
    for (const auto& c : sys.components) {
      j["components"].push_back(
          {{"gain", c.gain}, {"system", system_to_json_obj(c.system)}});
    }
    return j;
  }
  j["b"] = sys.b;
  j["a"] = sys.a;
  return j;
}

SystemSpec system_from_json_obj(const json& j) {
  SystemSpec sys;
  sys.name = j.value("name", "");
  if (j.contains("components")) {
    for (const auto& c : j.at("components")) {
      sys.components.push_back(
          {c.at("gain").get<double>(), system_from_json_obj(c.at("system"))});
    }
  } else {
    sys.b = j.at("b").get<std::vector<double>>();
    sys.a = j.at("a").get<std::vector<double>>();
  }
  validate(sys);
  return sys;
}

}  // namespace

std::string system_to_json(const SystemSpec& sys) {
  return system_to_json_obj(sys).dump(2);
}

SystemSpec system_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("bad system JSON: ") + e.what());
  }
  try {
    return system_from_json_obj(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad system JSON: ") + e.what());
  }
}

}  // namespace regfir
