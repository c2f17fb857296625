#include "regfir/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace regfir {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_not_all_zero(const Matrix& phi) {
  if (phi.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("input signal is identically zero");
  }
}

// The stacked rows can put wildly different weights on the columns (a
// strong penalty on late coefficients dwarfs the data rows), so the rank
// test runs on a column-equilibrated copy; the minimiser is unchanged.
Vector solve_stacked(const Matrix& A, const Vector& rhs) {
  Vector scale = A.colwise().norm();
  for (Eigen::Index i = 0; i < scale.size(); ++i)
    if (scale(i) == 0.0) scale(i) = 1.0;
  Eigen::ColPivHouseholderQR<Matrix> qr(A * scale.cwiseInverse().asDiagonal());
  if (qr.rank() < A.cols()) {
    const auto deficit = A.cols() - qr.rank();
    throw std::runtime_error("normal system is singular: " +
                             std::to_string(deficit) +
                             " deficient column(s)");
  }
  return scale.cwiseInverse().asDiagonal() * qr.solve(rhs);
}

}  // namespace

Matrix build_regressor(const Vector& u, int n) {
  require(n >= 1, "model order must be positive");
  const auto N = u.size();
  require(N >= 1, "input signal is empty");
  Matrix phi = Matrix::Zero(N, n);
  for (Eigen::Index t = 0; t < N; ++t) {
    const Eigen::Index kmax = std::min<Eigen::Index>(n - 1, t);
    for (Eigen::Index k = 0; k <= kmax; ++k) phi(t, k) = u(t - k);
  }
  return phi;
}

Vector least_squares(const Matrix& phi, const Vector& y) {
  require(phi.rows() == y.size(), "row count of phi must match y");
  require(phi.rows() >= phi.cols(),
          "least squares needs at least as many samples as coefficients");
  check_not_all_zero(phi);
  return solve_stacked(phi, y);
}

Vector regularised_estimate(const Matrix& phi, const Vector& y,
                            const Matrix& R) {
  require(phi.rows() == y.size(), "row count of phi must match y");
  const auto n = phi.cols();
  require(R.rows() == n && R.cols() == n,
          "R must be square with side matching the coefficient count");
  const double scale = std::max(R.cwiseAbs().maxCoeff(), 1.0);
  require((R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "R must be symmetric");
  check_not_all_zero(phi);

  // Factor R = G^T G through its eigendecomposition; tolerates positive
  // semidefinite input, including R = 0.
  Eigen::SelfAdjointEigenSolver<Matrix> eig((R + R.transpose()) / 2.0);
  const Vector ev = eig.eigenvalues();
  const double tol = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  require(ev.minCoeff() >= -tol, "R must be positive semidefinite");
  Matrix G = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = std::max(ev(i), 0.0);
    G.row(i) = std::sqrt(lam) * eig.eigenvectors().col(i).transpose();
  }

  Matrix A(phi.rows() + n, n);
  A.topRows(phi.rows()) = phi;
  A.bottomRows(n) = G;
  Vector rhs = Vector::Zero(phi.rows() + n);
  rhs.head(phi.rows()) = y;
  return solve_stacked(A, rhs);
}

Vector regularised_estimate_filter(const Matrix& phi, const Vector& y,
                                   const Matrix& F, double lambda) {
  require(phi.rows() == y.size(), "row count of phi must match y");
  require(F.cols() == phi.cols(),
          "column count of F must match the coefficient count");
  require(lambda >= 0.0, "lambda must be nonnegative");
  check_not_all_zero(phi);

  Matrix A(phi.rows() + F.rows(), phi.cols());
  A.topRows(phi.rows()) = phi;
  A.bottomRows(F.rows()) = std::sqrt(lambda) * F;
  Vector rhs = Vector::Zero(A.rows());
  rhs.head(phi.rows()) = y;
  return solve_stacked(A, rhs);
}

double penalised_cost(const Matrix& phi, const Vector& y, const Matrix& F,
                      double lambda, const Vector& theta) {
  require(phi.rows() == y.size(), "row count of phi must match y");
  require(phi.cols() == theta.size(), "theta size must match phi columns");
  require(F.cols() == theta.size(), "theta size must match F columns");
  require(lambda >= 0.0, "lambda must be nonnegative");
  const double fit = (y - phi * theta).squaredNorm();
  return fit + lambda * (F * theta).squaredNorm();
}

}  // namespace regfir
