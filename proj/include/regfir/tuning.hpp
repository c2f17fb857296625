#pragma once

#include <utility>
#include <vector>

#include "regfir/estimator.hpp"
#include "regfir/filter_design.hpp"
#include "regfir/kernels.hpp"

namespace regfir {

/// One penalty-filter candidate.  The band kind fixes how (f1, f2) are read:
///   BandStop      stop interval [f1, f2] is left unpenalised
///   HighPass      frequencies below f2 are left unpenalised (f1 = 0)
///   LowPass       frequencies above f1 are left unpenalised (f2 = 0.5)
///   MultiBandStop explicit stop edges in `extra_edges`
struct Hyperparameters {
  BandKind kind = BandKind::BandStop;
  int p = 2;            // FIR penalty order
  double f1 = 0.0;
  double f2 = 0.5;
  double alpha = 0.9;   // row decay weight
  double lambda = 1.0;  // penalty weight
  std::vector<double> extra_edges;
};

/// The pass/stop description the candidate's FIR penalty is designed from.
BandSpec band_of(const Hyperparameters& beta);

/// Penalty matrix for the candidate: windowed FIR design + row decay.
FilterMatrix penalty_matrix(const Hyperparameters& beta, int n);

struct GridSpec {
  std::vector<int> orders;
  std::vector<double> edges;
  std::vector<double> alphas;
  std::vector<double> lambdas;
  std::vector<BandKind> kinds = {BandKind::BandStop, BandKind::HighPass,
                                 BandKind::LowPass};

  /// Moderate grid sized for a single desktop core.
  static GridSpec desk();
};

/// Cartesian candidate list in canonical order.
std::vector<Hyperparameters> enumerate_candidates(const GridSpec& grid);

struct CandidateScore {
  Hyperparameters beta;
  double cv_mse = 0.0;  // NaN when the candidate failed to solve
};

struct TuningResult {
  Hyperparameters best;
  double cv_mse = 0.0;
  std::vector<CandidateScore> trace;
};

/// Contiguous [begin, end) index blocks, sizes differing by at most one.
std::vector<std::pair<int, int>> kfold_split(int N, int k);

/// Mean held-out prediction MSE over k contiguous folds.  Each fold trains
/// on the other blocks (regressors rebuilt per block with zero initial
/// conditions) and scores one-step-ahead predictions on the held-out block.
double cv_score(const Hyperparameters& beta, const Dataset& data, int n,
                int k);

/// Exhaustive scan of the grid.  Ties on the CV score prefer smaller lambda,
/// then smaller p, then a narrower unpenalised band.
TuningResult grid_search(const GridSpec& grid, const Dataset& data, int n,
                         int k);
TuningResult grid_search(const std::vector<Hyperparameters>& candidates,
                         const Dataset& data, int n, int k);

/// Derivative-free local refinement of the continuous coordinates
/// (band edges, alpha, log lambda); p and the band kind stay fixed.
/// Never returns a worse point than the start.
TuningResult refine_local(const Hyperparameters& start, const Dataset& data,
                          int n, int k);

struct KernelCandidateScore {
  KernelSpec spec;
  double lambda = 1.0;
  double cv_mse = 0.0;
};

struct KernelTuningResult {
  KernelSpec spec;      // c = sigma2 = 1; shape parameters tuned
  double lambda = 1.0;  // scale tuned like a penalty weight
  double cv_mse = 0.0;
  std::vector<KernelCandidateScore> trace;
};

/// Tunes a kernel baseline with the same CV pipeline, scanning the family's
/// shape parameters and a scale grid.
KernelTuningResult tune_kernel_cv(KernelFamily family,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& rhos,
                                  const std::vector<double>& lambdas,
                                  const Dataset& data, int n, int k);

struct EvidenceResult {
  KernelSpec spec;
  double objective = 0.0;     // log det Sigma + y^T Sigma^{-1} y
  int skipped_candidates = 0;  // grid points with an unusable prior
};

/// The evidence objective itself, for one fully specified prior.
double evidence_objective(const KernelSpec& spec, const Dataset& data, int n);

/// Empirical-Bayes alternative: minimises the negative log marginal
/// likelihood of y under theta ~ N(0, P) and white noise, by grid search
/// plus local refinement over the family's hyperparameters.
EvidenceResult marginal_likelihood_tune(KernelFamily family,
                                        const Dataset& data, int n);

}  // namespace regfir
