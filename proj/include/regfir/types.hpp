#pragma once

#include <Eigen/Dense>

namespace regfir {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Banded triangular matrix whose rows act as FIR filters on a coefficient
/// vector.  F^T F reconstructs the regularisation matrix it was derived from.
struct FilterMatrix {
  Matrix mat;
  int bandwidth = 0;  // nonzero off-diagonals on the banded side
  bool upper = true;  // band above the diagonal; false: below
};

}  // namespace regfir
