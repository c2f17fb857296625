#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "regfir/estimator.hpp"
#include "regfir/rng.hpp"

using namespace regfir;

namespace {

// Independent oracle: solve A x = b by plain Gaussian elimination with
// partial pivoting, no Eigen decompositions involved.
Vector gauss_solve(Matrix A, Vector b) {
  const int n = static_cast<int>(A.rows());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(pivot, col))) pivot = r;
    if (A(pivot, col) == 0.0) throw std::runtime_error("singular");
    A.row(col).swap(A.row(pivot));
    std::swap(b(col), b(pivot));
    for (int r = col + 1; r < n; ++r) {
      const double f = A(r, col) / A(col, col);
      A.row(r).tail(n - col) -= f * A.row(col).tail(n - col);
      b(r) -= f * b(col);
    }
  }
  Vector x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b(r);
    for (int c = r + 1; c < n; ++c) s -= A(r, c) * x(c);
    x(r) = s / A(r, r);
  }
  return x;
}

Vector normal_equations_oracle(const Matrix& phi, const Vector& y,
                               const Matrix& R) {
  return gauss_solve(phi.transpose() * phi + R, phi.transpose() * y);
}

Matrix difference_penalty(int n) {
  Matrix F = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    F(i, i) = 1.0;
    if (i + 1 < n) F(i, i + 1) = -1.0;
  }
  return F;
}

struct Instance {
  Matrix phi;
  Vector y;
  Vector theta_true;
};

Instance make_instance(int N, int n, double noise_sigma, std::uint64_t seed) {
  GaussianStream input(seed, 0, "input");
  GaussianStream coef(seed, 0, "coefficients");
  GaussianStream noise(seed, 0, "noise");
  Instance inst;
  const Vector u = input.normal_vector(N, 1.0);
  inst.phi = build_regressor(u, n);
  inst.theta_true = coef.normal_vector(n, 1.0);
  inst.y = inst.phi * inst.theta_true + noise.normal_vector(N, noise_sigma);
  return inst;
}

double rel_err(const Vector& a, const Vector& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace

TEST_CASE("regressor layout: row t holds u(t..t-n+1) with zero history") {
  Vector u(3);
  u << 1.0, 2.0, 3.0;
  const Matrix phi = build_regressor(u, 2);
  Matrix want(3, 2);
  want << 1, 0, 2, 1, 3, 2;
  CHECK((phi - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("regressor input checks") {
  Vector u(3);
  u << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(build_regressor(u, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_regressor(Vector(), 2), std::invalid_argument);
}

TEST_CASE("least squares recovers the coefficients of noiseless data") {
  const Instance inst = make_instance(60, 8, 0.0, 7);
  const Vector theta = least_squares(inst.phi, inst.y);
  CHECK(rel_err(theta, inst.theta_true) <= 1e-10);
}

TEST_CASE("least squares matches the normal-equation oracle") {
  const Instance inst = make_instance(40, 6, 0.3, 11);
  const Vector theta = least_squares(inst.phi, inst.y);
  const Vector oracle =
      normal_equations_oracle(inst.phi, inst.y, Matrix::Zero(6, 6));
  CHECK(rel_err(theta, oracle) <= 1e-10);
}

TEST_CASE("least squares rejects bad shapes and degenerate input") {
  const Instance inst = make_instance(40, 6, 0.3, 11);
  CHECK_THROWS_AS(least_squares(inst.phi, Vector::Zero(39)),
                  std::invalid_argument);
  CHECK_THROWS_AS(least_squares(Matrix::Zero(40, 6), Vector::Zero(40)),
                  std::invalid_argument);
  // Fewer samples than coefficients.
  CHECK_THROWS_AS(least_squares(inst.phi.topRows(5), inst.y.head(5)),
                  std::invalid_argument);
  // Duplicated column makes the normal system singular.
  Matrix phi = inst.phi;
  phi.col(1) = phi.col(0);
  CHECK_THROWS_WITH_AS(least_squares(phi, inst.y),
                       "normal system is singular: 1 deficient column(s)",
                       std::runtime_error);
}

TEST_CASE("regularised estimate matches the normal-equation oracle") {
  const Instance inst = make_instance(50, 7, 0.2, 3);
  const Matrix F = difference_penalty(7);
  const double lambda = 2.5;
  const Matrix R = lambda * F.transpose() * F;

  const Vector via_R = regularised_estimate(inst.phi, inst.y, R);
  const Vector oracle = normal_equations_oracle(inst.phi, inst.y, R);
  CHECK(rel_err(via_R, oracle) <= 1e-10);
}

TEST_CASE("filter path and matrix path agree") {
  const Instance inst = make_instance(50, 7, 0.2, 4);
  const Matrix F = difference_penalty(7);
  for (double lambda : {0.0, 1e-3, 1.0, 1e4}) {
    const Matrix R = lambda * F.transpose() * F;
    const Vector via_R = regularised_estimate(inst.phi, inst.y, R);
    const Vector via_F =
        regularised_estimate_filter(inst.phi, inst.y, F, lambda);
    CHECK(rel_err(via_F, via_R) <= 1e-9);
  }
}

TEST_CASE("lambda = 0 and R = 0 reduce to least squares") {
  const Instance inst = make_instance(45, 6, 0.4, 5);
  const Vector ls = least_squares(inst.phi, inst.y);
  const Vector f0 = regularised_estimate_filter(inst.phi, inst.y,
                                                difference_penalty(6), 0.0);
  const Vector r0 =
      regularised_estimate(inst.phi, inst.y, Matrix::Zero(6, 6));
  CHECK(rel_err(f0, ls) <= 1e-9);
  CHECK(rel_err(r0, ls) <= 1e-9);
}

TEST_CASE("estimate minimises the penalised cost") {
  const Instance inst = make_instance(50, 7, 0.3, 9);
  const Matrix F = difference_penalty(7);
  const double lambda = 10.0;
  const Vector theta =
      regularised_estimate_filter(inst.phi, inst.y, F, lambda);
  const double at_min = penalised_cost(inst.phi, inst.y, F, lambda, theta);
  GaussianStream perturb(17, 0, "perturbation");
  for (int trial = 0; trial < 10; ++trial) {
    const Vector other = theta + perturb.normal_vector(7, 0.05);
    CHECK(at_min <= penalised_cost(inst.phi, inst.y, F, lambda, other));
  }
}

TEST_CASE("growing lambda shrinks the identity-penalised solution") {
  const Instance inst = make_instance(50, 7, 0.3, 13);
  const Matrix I = Matrix::Identity(7, 7);
  double previous = least_squares(inst.phi, inst.y).norm();
  for (double lambda : {1.0, 1e2, 1e4, 1e6}) {
    const double now =
        regularised_estimate_filter(inst.phi, inst.y, I, lambda).norm();
    CHECK(now < previous + 1e-12);
    previous = now;
  }
  CHECK(previous <= 1e-3);
}

TEST_CASE("regularised estimate input checks") {
  const Instance inst = make_instance(30, 5, 0.1, 2);
  Matrix bad = Matrix::Identity(5, 5);
  bad(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(regularised_estimate(inst.phi, inst.y, bad),
                  std::invalid_argument);
  Matrix indefinite = Matrix::Identity(5, 5);
  indefinite(4, 4) = -1.0;
  CHECK_THROWS_AS(regularised_estimate(inst.phi, inst.y, indefinite),
                  std::invalid_argument);
  CHECK_THROWS_AS(regularised_estimate(inst.phi, inst.y, Matrix::Zero(4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(regularised_estimate_filter(inst.phi, inst.y,
                                              Matrix::Identity(5, 5), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(regularised_estimate_filter(inst.phi, inst.y,
                                              Matrix::Identity(4, 4), 1.0),
                  std::invalid_argument);
}
