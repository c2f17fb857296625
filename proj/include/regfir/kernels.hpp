#pragma once

#include <string>

#include "regfir/types.hpp"

namespace regfir {

enum class KernelFamily { RandomWalk, Correlation, Decay, TC, DC };

std::string to_string(KernelFamily f);
KernelFamily kernel_family_from_string(const std::string& name);

/// Prior description for one impulse-response coefficient vector.
/// The regularisation matrix is R = sigma2 * P^{-1}, where P is the prior
/// covariance built from the family-specific closed form.
struct KernelSpec {
  KernelFamily family = KernelFamily::TC;
  double c = 1.0;       // prior scale; for RandomWalk the increment variance
  double rho = 0.0;     // one-lag correlation, used by Correlation and DC
  double alpha = 0.9;   // exponential decay rate, used by Decay, TC and DC
  double sigma2 = 1.0;  // output-noise variance entering R
};

/// Rejects out-of-range parameters; the message names the offending field.
/// Fields a family does not use are ignored.
void validate(const KernelSpec& spec);

/// Prior covariance P, n x n, indices 1-based in the closed forms.
Matrix covariance_matrix(const KernelSpec& spec, int n);

/// Closed-form R = sigma2 * P^{-1}.  Banded: tridiagonal for RandomWalk,
/// Correlation, TC and DC; diagonal for Decay.
Matrix regularisation_matrix(const KernelSpec& spec, int n);

/// Closed-form upper factor F with F^T F = R evaluated at c = sigma2 = 1.
/// Bandwidth 1 (0 for Decay).
FilterMatrix filter_factor(const KernelSpec& spec, int n);

/// Upper-triangular F with F^T F = R, computed by a symmetric triangular
/// factorisation running from the first index.  Matches filter_factor on the
/// closed-form regularisation matrices.
FilterMatrix factorize_upper(const Matrix& R);

/// Lower-triangular F with F^T F = R, computed by reversing row/column
/// order, factorising, and reversing back.  For the random-walk matrix this
/// yields the plain first-difference filter rows.
FilterMatrix factorize_rotated(const Matrix& R);

/// Magnitude response in dB of one row of F treated as an FIR filter, at a
/// normalised frequency in [0, 0.5] cycles/sample.  A row whose response
/// vanishes at f returns -infinity; an all-zero row is an error.
double row_response_db(const FilterMatrix& F, int row, double freq);

}  // namespace regfir
