#include "regfir/kernels.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace regfir {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool uses_rho(KernelFamily f) {
  return f == KernelFamily::Correlation || f == KernelFamily::DC;
}

bool uses_alpha(KernelFamily f) {
  return f == KernelFamily::Decay || f == KernelFamily::TC ||
         f == KernelFamily::DC;
}

// Decay admits alpha = 1 (constant prior variance); TC and DC need the
// stronger bound because their closed forms carry 1/(1 - alpha) factors.
void check_alpha(const KernelSpec& s) {
  if (!uses_alpha(s.family)) return;
  if (s.family == KernelFamily::Decay) {
    require(s.alpha > 0.0 && s.alpha <= 1.0, "alpha must lie in (0, 1]");
  } else {
    require(s.alpha > 0.0 && s.alpha < 1.0, "alpha must lie in (0, 1)");
  }
}

// Lower-triangular L with A = L L^T.  A pivot is rejected when the
// elimination cancels its own diagonal entry down to rounding level; the
// check is per entry because the closed-form matrices have sharply graded
// diagonals, so a single global threshold would reject healthy pivots.
Matrix lower_cholesky(const Matrix& A) {
  const auto n = A.rows();
  Matrix L = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = A(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 1e-12 * std::abs(A(j, j)))) {
      throw std::runtime_error(
          "matrix is singular to the factorisation pivot tolerance");
    }
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = A(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
      L(i, j) = v / L(j, j);
    }
  }
  return L;
}

void check_square_symmetric(const Matrix& R) {
  require(R.rows() == R.cols() && R.rows() >= 1, "matrix must be square");
  const double scale = R.cwiseAbs().maxCoeff();
  const double skew = (R - R.transpose()).cwiseAbs().maxCoeff();
  require(skew <= 1e-12 * std::max(scale, 1.0), "matrix must be symmetric");
}

int detect_bandwidth(const Matrix& F, bool upper) {
  const auto n = F.rows();
  int bw = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (F(i, j) == 0.0) continue;
      const int off = upper ? static_cast<int>(j - i) : static_cast<int>(i - j);
      if (off > bw) bw = off;
    }
  }
  return bw;
}

}  // namespace

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::RandomWalk: return "random-walk";
    case KernelFamily::Correlation: return "correlation";
    case KernelFamily::Decay: return "decay";
    case KernelFamily::TC: return "tc";
    case KernelFamily::DC: return "dc";
  }
  throw std::invalid_argument("unknown kernel family");
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "random-walk") return KernelFamily::RandomWalk;
  if (name == "correlation") return KernelFamily::Correlation;
  if (name == "decay") return KernelFamily::Decay;
  if (name == "tc") return KernelFamily::TC;
  if (name == "dc") return KernelFamily::DC;
  throw std::invalid_argument("unknown kernel family: " + name);
}

void validate(const KernelSpec& spec) {
  require(spec.c > 0.0, "c must be positive");
  require(spec.sigma2 > 0.0, "sigma2 must be positive");
  if (uses_rho(spec.family)) {
    require(std::abs(spec.rho) < 1.0, "rho must satisfy |rho| < 1");
  }
  check_alpha(spec);
}

Matrix covariance_matrix(const KernelSpec& spec, int n) {
  validate(spec);
  require(n >= 1, "n must be positive");
  Matrix P(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      double v = 0.0;
      switch (spec.family) {
        case KernelFamily::RandomWalk:
          v = spec.c * std::min(i, j);
          break;
        case KernelFamily::Correlation:
          v = spec.c * std::pow(spec.rho, std::abs(i - j));
          break;
        case KernelFamily::Decay:
          v = (i == j) ? spec.c * std::pow(spec.alpha, i) : 0.0;
          break;
        case KernelFamily::TC:
          v = spec.c * std::pow(spec.alpha, std::max(i, j));
          break;
        case KernelFamily::DC:
          v = spec.c * std::pow(spec.rho, std::abs(i - j)) *
              std::pow(spec.alpha, 0.5 * (i + j));
          break;
      }
      P(i - 1, j - 1) = v;
    }
  }
  return P;
}

Matrix regularisation_matrix(const KernelSpec& spec, int n) {
  validate(spec);
  require(n >= 1, "n must be positive");
  const double r = spec.sigma2 / spec.c;
  Matrix R = Matrix::Zero(n, n);
  switch (spec.family) {
    case KernelFamily::RandomWalk:
      for (int i = 1; i <= n; ++i) {
        R(i - 1, i - 1) = r * (i == n ? 1.0 : 2.0);
        if (i < n) {
          R(i - 1, i) = -r;
          R(i, i - 1) = -r;
        }
      }
      break;
    case KernelFamily::Correlation: {
      const double den = 1.0 - spec.rho * spec.rho;
      for (int i = 1; i <= n; ++i) {
        const bool boundary = (i == 1 || i == n);
        R(i - 1, i - 1) = r * (boundary ? 1.0 : 1.0 + spec.rho * spec.rho) / den;
        if (i < n) {
          R(i - 1, i) = -r * spec.rho / den;
          R(i, i - 1) = R(i - 1, i);
        }
      }
      if (n == 1) R(0, 0) = r;  // single coefficient: P = c, R = sigma2 / c
      break;
    }
    case KernelFamily::Decay:
      for (int i = 1; i <= n; ++i) {
        R(i - 1, i - 1) = r * std::pow(spec.alpha, -i);
      }
      break;
    case KernelFamily::TC: {
      const double a = spec.alpha;
      for (int i = 1; i <= n; ++i) {
        const bool boundary = (i == 1 || i == n);
        const double num = boundary ? 1.0 : 1.0 + a;
        R(i - 1, i - 1) = r * num / (std::pow(a, i) * (1.0 - a));
        if (i < n) {
          const double off =
              -r * std::sqrt(a) / (std::pow(a, i + 0.5) * (1.0 - a));
          R(i - 1, i) = off;
          R(i, i - 1) = off;
        }
      }
      if (n == 1) R(0, 0) = r / std::pow(a, 1);
      break;
    }
    case KernelFamily::DC: {
      const double a = spec.alpha;
      const double den = 1.0 - spec.rho * spec.rho;
      for (int i = 1; i <= n; ++i) {
        const bool boundary = (i == 1 || i == n);
        const double num = boundary ? 1.0 : 1.0 + spec.rho * spec.rho;
        R(i - 1, i - 1) = r * num / (std::pow(a, i) * den);
        if (i < n) {
          const double off = -r * spec.rho / (std::pow(a, i + 0.5) * den);
          R(i - 1, i) = off;
          R(i, i - 1) = off;
        }
      }
      if (n == 1) R(0, 0) = r / std::pow(a, 1);
      break;
    }
  }
  return R;
}

FilterMatrix filter_factor(const KernelSpec& spec, int n) {
  validate(spec);
  require(n >= 1, "n must be positive");
  FilterMatrix F;
  F.mat = Matrix::Zero(n, n);
  F.upper = true;
  F.bandwidth = (spec.family == KernelFamily::Decay || n == 1) ? 0 : 1;
  const double a = spec.alpha;
  for (int i = 1; i <= n; ++i) {
    const bool last = (i == n);
    double diag = 0.0, super = 0.0;
    switch (spec.family) {
      case KernelFamily::RandomWalk:
        diag = last ? std::sqrt(1.0 / n)
                    : std::sqrt((i + 1.0) / i);
        super = -std::sqrt(i / (i + 1.0));
        break;
      case KernelFamily::Correlation: {
        const double den = 1.0 - spec.rho * spec.rho;
        diag = last ? 1.0 : std::sqrt(1.0 / den);
        super = -spec.rho * std::sqrt(1.0 / den);
        break;
      }
      case KernelFamily::Decay:
        diag = std::pow(a, -0.5 * i);
        break;
      case KernelFamily::TC:
        diag = last ? std::pow(a, -0.5 * n)
                    : std::sqrt(1.0 / (std::pow(a, i) * (1.0 - a)));
        super = -std::sqrt(1.0 / (std::pow(a, i) * (1.0 - a)));
        break;
      case KernelFamily::DC: {
        const double den = 1.0 - spec.rho * spec.rho;
        diag = last ? std::pow(a, -0.5 * n)
                    : std::sqrt(1.0 / (std::pow(a, i) * den));
        super = -spec.rho * std::sqrt(1.0 / (std::pow(a, i + 1) * den));
        break;
      }
    }
    F.mat(i - 1, i - 1) = diag;
    if (!last && spec.family != KernelFamily::Decay) F.mat(i - 1, i) = super;
  }
  return F;
}

FilterMatrix factorize_upper(const Matrix& R) {
  check_square_symmetric(R);
  FilterMatrix F;
  F.mat = lower_cholesky(R).transpose();
  F.upper = true;
  F.bandwidth = detect_bandwidth(F.mat, true);
  return F;
}

FilterMatrix factorize_rotated(const Matrix& R) {
  check_square_symmetric(R);
  const auto n = R.rows();
  Matrix B(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) B(i, j) = R(n - 1 - i, n - 1 - j);
  const Matrix U = lower_cholesky(B).transpose();
  FilterMatrix F;
  F.mat.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) F.mat(i, j) = U(n - 1 - i, n - 1 - j);
  F.upper = false;
  F.bandwidth = detect_bandwidth(F.mat, false);
  return F;
}

double row_response_db(const FilterMatrix& F, int row, double freq) {
  const auto n = F.mat.rows();
  if (row < 0 || row >= n) throw std::invalid_argument("row out of range");
  if (!(freq >= 0.0 && freq <= 0.5))
    throw std::invalid_argument("frequency must lie in [0, 0.5]");
  const Eigen::Index lo = F.upper ? row : std::max<Eigen::Index>(0, row - F.bandwidth);
  const Eigen::Index hi = F.upper ? std::min<Eigen::Index>(n - 1, row + F.bandwidth)
                                  : row;
  bool any = false;
  std::complex<double> h(0.0, 0.0);
  for (Eigen::Index j = lo; j <= hi; ++j) {
    const double tap = F.mat(row, j);
    if (tap != 0.0) any = true;
    const double phase = -2.0 * M_PI * freq * static_cast<double>(j - lo);
    h += tap * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  if (!any) throw std::invalid_argument("row has no nonzero coefficients");
  const double mag = std::abs(h);
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mag);
}

}  // namespace regfir
