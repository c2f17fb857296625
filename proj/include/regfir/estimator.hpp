#pragma once

#include "regfir/types.hpp"

namespace regfir {

/// One identification record: input u and measured output y, equal length.
struct Dataset {
  Vector u;
  Vector y;
};

/// N x n regressor with zero initial conditions: row t holds
/// u(t), u(t-1), ..., u(t-n+1), with u(tau) = 0 for tau < 1.
Matrix build_regressor(const Vector& u, int n);

/// Unregularised least squares via a rank-revealing orthogonal
/// factorisation.  Requires rows >= cols and full column rank.
Vector least_squares(const Matrix& phi, const Vector& y);

/// Minimiser of |y - phi theta|^2 + theta^T R theta for symmetric positive
/// semidefinite R, solved through the stacked system [phi; G] with G^T G = R.
Vector regularised_estimate(const Matrix& phi, const Vector& y,
                            const Matrix& R);

/// Minimiser of |y - phi theta|^2 + lambda |F theta|^2, solved through the
/// stacked system [phi; sqrt(lambda) F] without forming normal equations.
Vector regularised_estimate_filter(const Matrix& phi, const Vector& y,
                                   const Matrix& F, double lambda);

/// The penalised cost evaluated at theta.
double penalised_cost(const Matrix& phi, const Vector& y, const Matrix& F,
                      double lambda, const Vector& theta);

}  // namespace regfir
