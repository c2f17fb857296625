#include "regfir/tuning.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace regfir {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

/// One fold with the training block pre-reduced by an orthogonal
/// factorisation: |phi theta - y|^2 = |train_r theta - train_c|^2 + const,
/// so every candidate only pays for the small stacked solve.
struct FoldPlan {
  Matrix train_r;  // r x n, upper trapezoidal
  Vector train_c;  // r
  Matrix val_phi;
  Vector val_y;
};

std::vector<FoldPlan> make_fold_plans(const Dataset& data, int n, int k) {
  const auto blocks = kfold_split(static_cast<int>(data.u.size()), k);
  std::vector<Matrix> phis(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto [lo, hi] = blocks[b];
    phis[b] = build_regressor(data.u.segment(lo, hi - lo), n);
  }

  std::vector<FoldPlan> plans(blocks.size());
  for (std::size_t held = 0; held < blocks.size(); ++held) {
    int rows = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (b != held) rows += static_cast<int>(phis[b].rows());
    if (rows < n)
      throw std::invalid_argument(
          "cross-validation fold leaves fewer training samples than "
          "coefficients");

    Matrix phi(rows, n);
    Vector y(rows);
    int at = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (b == held) continue;
      const auto [lo, hi] = blocks[b];
      const int len = hi - lo;
      phi.middleRows(at, len) = phis[b];
      y.segment(at, len) = data.y.segment(lo, len);
      at += len;
    }

    Eigen::HouseholderQR<Matrix> qr(phi);
    FoldPlan& plan = plans[held];
    plan.train_r =
        qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const Vector qy = qr.householderQ().adjoint() * y;
    plan.train_c = qy.head(n);
  }
  // the blocks can only be handed over once no fold trains on them anymore
  for (std::size_t held = 0; held < blocks.size(); ++held) {
    const auto [lo, hi] = blocks[held];
    plans[held].val_phi = std::move(phis[held]);
    plans[held].val_y = data.y.segment(lo, hi - lo);
  }
  return plans;
}

/// Held-out MSE for one penalty matrix and weight, averaged over folds.
/// Returns NaN when a fold fails to produce finite coefficients.
double cv_mse_of(const Matrix& F, double lambda,
                 const std::vector<FoldPlan>& plans, Matrix& stack,
                 Vector& rhs) {
  const int n = static_cast<int>(F.cols());
  const double root = std::sqrt(lambda);
  double total = 0.0;
  for (const FoldPlan& plan : plans) {
    const int r = static_cast<int>(plan.train_r.rows());
    stack.resize(r + n, n);
    stack.topRows(r) = plan.train_r;
    stack.bottomRows(n) = root * F;
    rhs.resize(r + n);
    rhs.head(r) = plan.train_c;
    rhs.tail(n).setZero();
    Vector theta = Eigen::HouseholderQR<Matrix>(stack).solve(rhs);
    if (!theta.allFinite()) return kNan;
    total += (plan.val_y - plan.val_phi * theta).squaredNorm() /
             static_cast<double>(plan.val_y.size());
  }
  return total / static_cast<double>(plans.size());
}

bool same_penalty(const Hyperparameters& a, const Hyperparameters& b) {
  return a.kind == b.kind && a.p == b.p && a.f1 == b.f1 && a.f2 == b.f2 &&
         a.alpha == b.alpha && a.extra_edges == b.extra_edges;
}

double unpenalised_width(const Hyperparameters& beta) {
  switch (beta.kind) {
    case BandKind::BandStop:
      return beta.f2 - beta.f1;
    case BandKind::HighPass:
      return beta.f2;
    case BandKind::LowPass:
      return 0.5 - beta.f1;
    case BandKind::MultiBandStop: {
      double w = 0.0;
      for (std::size_t i = 0; i + 1 < beta.extra_edges.size(); i += 2)
        w += beta.extra_edges[i + 1] - beta.extra_edges[i];
      return w;
    }
    default:
      return 0.5;
  }
}

/// Strict weak order used to resolve CV ties deterministically.
bool candidate_before(const CandidateScore& a, const CandidateScore& b) {
  const double ca = std::isnan(a.cv_mse) ? kInf : a.cv_mse;
  const double cb = std::isnan(b.cv_mse) ? kInf : b.cv_mse;
  if (ca != cb) return ca < cb;
  if (a.beta.lambda != b.beta.lambda) return a.beta.lambda < b.beta.lambda;
  if (a.beta.p != b.beta.p) return a.beta.p < b.beta.p;
  const double wa = unpenalised_width(a.beta);
  const double wb = unpenalised_width(b.beta);
  if (wa != wb) return wa < wb;
  if (a.beta.kind != b.beta.kind) return a.beta.kind < b.beta.kind;
  if (a.beta.f1 != b.beta.f1) return a.beta.f1 < b.beta.f1;
  if (a.beta.f2 != b.beta.f2) return a.beta.f2 < b.beta.f2;
  return a.beta.alpha < b.beta.alpha;
}

TuningResult pick_best(std::vector<CandidateScore> trace) {
  const auto best =
      std::min_element(trace.begin(), trace.end(), candidate_before);
  if (best == trace.end() || std::isnan(best->cv_mse))
    throw std::runtime_error("no tuning candidate produced a finite CV score");
  TuningResult result;
  result.best = best->beta;
  result.cv_mse = best->cv_mse;
  result.trace = std::move(trace);
  return result;
}

/// Nelder-Mead on a box-constrained objective.  Fully deterministic: fixed
/// coefficients, tie-breaks by vertex index, fixed iteration cap.
class SimplexSearch {
 public:
  SimplexSearch(std::vector<double> lo, std::vector<double> hi)
      : lo_(std::move(lo)), hi_(std::move(hi)) {}

  template <typename F>
  std::pair<std::vector<double>, double> minimise(
      F&& objective, const std::vector<double>& start,
      const std::vector<double>& step, int max_iter) const {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> xs(dim + 1, clamp(start));
    for (std::size_t i = 0; i < dim; ++i) {
      xs[i + 1][i] += (xs[i + 1][i] + step[i] <= hi_[i]) ? step[i] : -step[i];
      xs[i + 1] = clamp(xs[i + 1]);
    }
    std::vector<double> fs(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fs[i] = objective(xs[i]);

    std::vector<std::size_t> order(dim + 1);
    for (int iter = 0; iter < max_iter; ++iter) {
      for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return value(fs[a]) < value(fs[b]);
                       });
      reorder(xs, fs, order);
      if (value(fs[dim]) - value(fs[0]) <
          1e-10 * (1.0 + std::abs(value(fs[0]))))
        break;

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += xs[i][d] / dim;

      const auto moved = [&](double coeff) {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d)
          x[d] = centroid[d] + coeff * (centroid[d] - xs[dim][d]);
        return clamp(x);
      };

      std::vector<double> xr = moved(1.0);
      const double fr = objective(xr);
      if (value(fr) < value(fs[0])) {
        std::vector<double> xe = moved(2.0);
        const double fe = objective(xe);
        if (value(fe) < value(fr)) {
          xs[dim] = xe;
          fs[dim] = fe;
        } else {
          xs[dim] = xr;
          fs[dim] = fr;
        }
      } else if (value(fr) < value(fs[dim - 1])) {
        xs[dim] = xr;
        fs[dim] = fr;
      } else {
        std::vector<double> xc = moved(value(fr) < value(fs[dim]) ? 0.5 : -0.5);
        const double fc = objective(xc);
        if (value(fc) < std::min(value(fr), value(fs[dim]))) {
          xs[dim] = xc;
          fs[dim] = fc;
        } else {
          for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d)
              xs[i][d] = xs[0][d] + 0.5 * (xs[i][d] - xs[0][d]);
            fs[i] = objective(xs[i]);
          }
        }
      }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
      if (value(fs[i]) < value(fs[best])) best = i;
    return {xs[best], fs[best]};
  }

 private:
  static double value(double f) { return std::isnan(f) ? kInf : f; }

  std::vector<double> clamp(std::vector<double> x) const {
    for (std::size_t d = 0; d < x.size(); ++d)
      x[d] = std::min(std::max(x[d], lo_[d]), hi_[d]);
    return x;
  }

  static void reorder(std::vector<std::vector<double>>& xs,
                      std::vector<double>& fs,
                      const std::vector<std::size_t>& order) {
    std::vector<std::vector<double>> xs2(xs.size());
    std::vector<double> fs2(fs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      xs2[i] = std::move(xs[order[i]]);
      fs2[i] = fs[order[i]];
    }
    xs = std::move(xs2);
    fs = fs2;
  }

  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace

BandSpec band_of(const Hyperparameters& beta) {
  switch (beta.kind) {
    case BandKind::BandStop:
      return {BandKind::BandStop, {beta.f1, beta.f2}};
    case BandKind::HighPass:
      return {BandKind::HighPass, {beta.f2}};
    case BandKind::LowPass:
      return {BandKind::LowPass, {beta.f1}};
    case BandKind::MultiBandStop:
      return {BandKind::MultiBandStop, beta.extra_edges};
    default:
      throw std::invalid_argument("band kind not usable as a penalty");
  }
}

FilterMatrix penalty_matrix(const Hyperparameters& beta, int n) {
  return regularisation_filter(design_fir_windowed(beta.p, band_of(beta)), n,
                               beta.alpha);
}

GridSpec GridSpec::desk() {
  GridSpec grid;
  grid.orders = {2, 6, 12, 20};
  for (int i = 1; i <= 9; ++i) grid.edges.push_back(0.05 * i);
  grid.alphas = {0.7, 0.8, 0.9};
  for (int e = -2; e <= 4; ++e) grid.lambdas.push_back(std::pow(10.0, e));
  return grid;
}

std::vector<Hyperparameters> enumerate_candidates(const GridSpec& grid) {
  if (grid.orders.empty() || grid.edges.empty() || grid.alphas.empty() ||
      grid.lambdas.empty() || grid.kinds.empty())
    throw std::invalid_argument("tuning grid has an empty axis");

  std::vector<std::pair<double, double>> bands;  // (f1, f2) per kind
  std::vector<Hyperparameters> out;
  for (BandKind kind : grid.kinds) {
    bands.clear();
    switch (kind) {
      case BandKind::BandStop:
        for (std::size_t i = 0; i < grid.edges.size(); ++i)
          for (std::size_t j = i + 1; j < grid.edges.size(); ++j)
            bands.emplace_back(grid.edges[i], grid.edges[j]);
        break;
      case BandKind::HighPass:
        for (double e : grid.edges) bands.emplace_back(0.0, e);
        break;
      case BandKind::LowPass:
        for (double e : grid.edges) bands.emplace_back(e, 0.5);
        break;
      default:
        throw std::invalid_argument(
            "tuning grid kinds must be BandStop, HighPass or LowPass");
    }
    for (const auto& [f1, f2] : bands)
      for (int p : grid.orders)
        for (double alpha : grid.alphas)
          for (double lambda : grid.lambdas)
            out.push_back({kind, p, f1, f2, alpha, lambda, {}});
  }
  return out;
}

std::vector<std::pair<int, int>> kfold_split(int N, int k) {
  if (k < 2) throw std::invalid_argument("need at least two folds");
  if (k > N) throw std::invalid_argument("more folds than samples");
  std::vector<std::pair<int, int>> blocks(k);
  for (int i = 0; i < k; ++i)
    blocks[i] = {(i * N) / k, ((i + 1) * N) / k};
  return blocks;
}

double cv_score(const Hyperparameters& beta, const Dataset& data, int n,
                int k) {
  const auto plans = make_fold_plans(data, n, k);
  Matrix stack;
  Vector rhs;
  return cv_mse_of(penalty_matrix(beta, n).mat, beta.lambda, plans, stack,
                   rhs);
}

TuningResult grid_search(const GridSpec& grid, const Dataset& data, int n,
                         int k) {
  return grid_search(enumerate_candidates(grid), data, n, k);
}

TuningResult grid_search(const std::vector<Hyperparameters>& candidates,
                         const Dataset& data, int n, int k) {
  if (candidates.empty())
    throw std::invalid_argument("empty tuning candidate list");
  const auto plans = make_fold_plans(data, n, k);

  std::vector<CandidateScore> trace;
  trace.reserve(candidates.size());
  Matrix F;
  Matrix stack;
  Vector rhs;
  for (const Hyperparameters& beta : candidates) {
    if (trace.empty() || !same_penalty(trace.back().beta, beta)) {
      try {
        F = penalty_matrix(beta, n).mat;
      } catch (const std::exception&) {
        F.resize(0, 0);
      }
    }
    const double cv =
        F.size() > 0 ? cv_mse_of(F, beta.lambda, plans, stack, rhs) : kNan;
    trace.push_back({beta, cv});
  }
  return pick_best(std::move(trace));
}

TuningResult refine_local(const Hyperparameters& start, const Dataset& data,
                          int n, int k) {
  const auto plans = make_fold_plans(data, n, k);

  // Active coordinates: band edges as applicable, then alpha, then
  // log lambda.  The order p and the band kind stay fixed.
  std::vector<int> coords;  // 0: f1, 1: f2
  if (start.kind == BandKind::BandStop || start.kind == BandKind::LowPass)
    coords.push_back(0);
  if (start.kind == BandKind::BandStop || start.kind == BandKind::HighPass)
    coords.push_back(1);

  std::vector<double> x0, lo, hi, step;
  for (int c : coords) {
    x0.push_back(c == 0 ? start.f1 : start.f2);
    lo.push_back(0.005);
    hi.push_back(0.495);
    step.push_back(0.02);
  }
  x0.push_back(start.alpha);
  lo.push_back(0.5);
  hi.push_back(0.9999);
  step.push_back(0.04);
  x0.push_back(std::log(start.lambda));
  lo.push_back(std::log(1e-6));
  hi.push_back(std::log(1e8));
  step.push_back(std::log(4.0));

  const auto to_beta = [&](const std::vector<double>& x) {
    Hyperparameters beta = start;
    std::size_t at = 0;
    for (int c : coords) {
      (c == 0 ? beta.f1 : beta.f2) = x[at];
      ++at;
    }
    beta.alpha = x[at++];
    beta.lambda = std::exp(x[at]);
    return beta;
  };

  Matrix stack;
  Vector rhs;
  const auto objective = [&](const std::vector<double>& x) {
    const Hyperparameters beta = to_beta(x);
    if (beta.kind == BandKind::BandStop && beta.f1 + 1e-3 > beta.f2)
      return kInf;
    try {
      return cv_mse_of(penalty_matrix(beta, n).mat, beta.lambda, plans, stack,
                       rhs);
    } catch (const std::exception&) {
      return kInf;
    }
  };

  const auto [xbest, fbest] =
      SimplexSearch(lo, hi).minimise(objective, x0, step, 150);

  const double f0 = objective(x0);
  const double f0v = std::isnan(f0) ? kInf : f0;
  TuningResult result;
  if (std::isfinite(fbest) && fbest < f0v) {
    result.best = to_beta(xbest);
    result.cv_mse = fbest;
  } else {
    if (!std::isfinite(f0v))
      throw std::runtime_error("refinement start point is infeasible");
    result.best = start;
    result.cv_mse = f0;
  }
  result.trace.push_back({result.best, result.cv_mse});
  return result;
}

KernelTuningResult tune_kernel_cv(KernelFamily family,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& rhos,
                                  const std::vector<double>& lambdas,
                                  const Dataset& data, int n, int k) {
  const bool uses_alpha = family != KernelFamily::RandomWalk &&
                          family != KernelFamily::Correlation;
  const bool uses_rho =
      family == KernelFamily::Correlation || family == KernelFamily::DC;
  if (lambdas.empty() || (uses_alpha && alphas.empty()) ||
      (uses_rho && rhos.empty()))
    throw std::invalid_argument("kernel tuning grid has an empty axis");

  const std::vector<double> one{0.0};
  const auto& as = uses_alpha ? alphas : one;
  const auto& rs = uses_rho ? rhos : one;

  const auto plans = make_fold_plans(data, n, k);
  std::vector<KernelCandidateScore> trace;
  Matrix stack;
  Vector rhs;
  for (double alpha : as) {
    for (double rho : rs) {
      KernelSpec spec;
      spec.family = family;
      if (uses_alpha) spec.alpha = alpha;
      if (uses_rho) spec.rho = rho;
      Matrix F;
      try {
        F = filter_factor(spec, n).mat;
      } catch (const std::exception&) {
        F.resize(0, 0);
      }
      for (double lambda : lambdas) {
        const double cv =
            F.size() > 0 ? cv_mse_of(F, lambda, plans, stack, rhs) : kNan;
        trace.push_back({spec, lambda, cv});
      }
    }
  }

  const auto best = std::min_element(
      trace.begin(), trace.end(),
      [](const KernelCandidateScore& a, const KernelCandidateScore& b) {
        const double ca = std::isnan(a.cv_mse) ? kInf : a.cv_mse;
        const double cb = std::isnan(b.cv_mse) ? kInf : b.cv_mse;
        if (ca != cb) return ca < cb;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.spec.alpha != b.spec.alpha) return a.spec.alpha < b.spec.alpha;
        return a.spec.rho < b.spec.rho;
      });
  if (best == trace.end() || std::isnan(best->cv_mse))
    throw std::runtime_error("no kernel candidate produced a finite CV score");

  KernelTuningResult result;
  result.spec = best->spec;
  result.lambda = best->lambda;
  result.cv_mse = best->cv_mse;
  result.trace = std::move(trace);
  return result;
}

namespace {

/// Shared pieces of the evidence objective
///   log det Sigma + y^T Sigma^{-1} y,  Sigma = c Phi P Phi^T + sigma2 I.
/// With P = L L^T and K = L^T Phi^T Phi L = V diag(d) V^T the objective is
///   (N - n) log sigma2 + sum_i log(sigma2 + c d_i)
///   + (|y|^2 - sum_i c w_i^2 / (sigma2 + c d_i)) / sigma2,
/// where w = V^T L^T Phi^T y.
struct EvidenceWork {
  Matrix G;
  Vector b;
  double yy = 0.0;
  int N = 0;
  int n = 0;
};

struct ShapeCache {
  Vector d;
  Vector w;
  bool ok = false;
};

ShapeCache shape_cache(const EvidenceWork& work, const KernelSpec& shape) {
  ShapeCache cache;
  KernelSpec unit = shape;
  unit.c = 1.0;
  unit.sigma2 = 1.0;
  Matrix P;
  try {
    validate(unit);
    P = covariance_matrix(unit, work.n);
  } catch (const std::exception&) {
    return cache;
  }
  Eigen::LLT<Matrix> llt(P);
  if (llt.info() != Eigen::Success) return cache;
  const Matrix L = llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(L.transpose() * work.G * L);
  if (eig.info() != Eigen::Success) return cache;
  cache.d = eig.eigenvalues().cwiseMax(0.0);
  cache.w = eig.eigenvectors().transpose() * (L.transpose() * work.b);
  cache.ok = true;
  return cache;
}

double evidence_value(const EvidenceWork& work, const ShapeCache& cache,
                      double c, double sigma2) {
  if (!cache.ok || c <= 0.0 || sigma2 <= 0.0) return kInf;
  double logdet = (work.N - work.n) * std::log(sigma2);
  double quad = work.yy;
  for (int i = 0; i < cache.d.size(); ++i) {
    const double m = sigma2 + c * cache.d(i);
    logdet += std::log(m);
    quad -= c * cache.w(i) * cache.w(i) / m;
  }
  const double value = logdet + quad / sigma2;
  return std::isfinite(value) ? value : kInf;
}

EvidenceWork make_evidence_work(const Dataset& data, int n) {
  const Matrix phi = build_regressor(data.u, n);
  EvidenceWork work;
  work.G = phi.transpose() * phi;
  work.b = phi.transpose() * data.y;
  work.yy = data.y.squaredNorm();
  work.N = static_cast<int>(data.y.size());
  work.n = n;
  return work;
}

}  // namespace

double evidence_objective(const KernelSpec& spec, const Dataset& data,
                          int n) {
  validate(spec);
  const EvidenceWork work = make_evidence_work(data, n);
  return evidence_value(work, shape_cache(work, spec), spec.c, spec.sigma2);
}

EvidenceResult marginal_likelihood_tune(KernelFamily family,
                                        const Dataset& data, int n) {
  const EvidenceWork work = make_evidence_work(data, n);

  const bool uses_alpha = family != KernelFamily::RandomWalk &&
                          family != KernelFamily::Correlation;
  const bool uses_rho =
      family == KernelFamily::Correlation || family == KernelFamily::DC;

  std::vector<double> alphas{0.0};
  if (uses_alpha) {
    alphas.clear();
    for (int i = 0; i < 10; ++i) alphas.push_back(0.5 + 0.49 * i / 9.0);
  }
  std::vector<double> rhos{0.0};
  if (uses_rho) {
    rhos.clear();
    for (int i = 0; i < 7; ++i) rhos.push_back(-0.9 + 0.3 * i);
  }

  const double var_y = work.yy / work.N;
  std::vector<double> cs, s2s;
  for (int e = -4; e <= 3; ++e) cs.push_back(var_y * std::pow(10.0, e));
  for (int e = -6; e <= 0; ++e) s2s.push_back(var_y * std::pow(10.0, e));

  KernelSpec best;
  best.family = family;
  double best_value = kInf;
  int skipped = 0;
  for (double alpha : alphas) {
    for (double rho : rhos) {
      KernelSpec shape;
      shape.family = family;
      if (uses_alpha) shape.alpha = alpha;
      if (uses_rho) shape.rho = rho;
      const ShapeCache cache = shape_cache(work, shape);
      if (!cache.ok) {
        ++skipped;
        continue;
      }
      for (double c : cs) {
        for (double s2 : s2s) {
          const double value = evidence_value(work, cache, c, s2);
          if (value < best_value) {
            best_value = value;
            best = shape;
            best.c = c;
            best.sigma2 = s2;
          }
        }
      }
    }
  }
  if (!std::isfinite(best_value))
    throw std::runtime_error("evidence objective is infinite on the grid");

  // Local polish over (shape, log c, log sigma2).
  std::vector<double> x0, lo, hi, step;
  if (uses_alpha) {
    x0.push_back(best.alpha);
    lo.push_back(0.02);
    hi.push_back(0.9999);
    step.push_back(0.04);
  }
  if (uses_rho) {
    x0.push_back(best.rho);
    lo.push_back(-0.999);
    hi.push_back(0.999);
    step.push_back(0.05);
  }
  x0.push_back(std::log(best.c));
  lo.push_back(std::log(var_y) - 25.0);
  hi.push_back(std::log(var_y) + 12.0);
  step.push_back(0.7);
  x0.push_back(std::log(best.sigma2));
  lo.push_back(std::log(var_y) - 30.0);
  hi.push_back(std::log(var_y) + 4.0);
  step.push_back(0.7);

  const auto to_spec = [&](const std::vector<double>& x) {
    KernelSpec spec;
    spec.family = family;
    std::size_t at = 0;
    if (uses_alpha) spec.alpha = x[at++];
    if (uses_rho) spec.rho = x[at++];
    spec.c = std::exp(x[at++]);
    spec.sigma2 = std::exp(x[at]);
    return spec;
  };
  const auto objective = [&](const std::vector<double>& x) {
    const KernelSpec spec = to_spec(x);
    KernelSpec shape = spec;
    return evidence_value(work, shape_cache(work, shape), spec.c, spec.sigma2);
  };

  const auto [xbest, fbest] =
      SimplexSearch(lo, hi).minimise(objective, x0, step, 200);

  EvidenceResult result;
  result.skipped_candidates = skipped;
  if (std::isfinite(fbest) && fbest < best_value) {
    result.spec = to_spec(xbest);
    result.objective = fbest;
  } else {
    result.spec = best;
    result.objective = best_value;
  }
  return result;
}

}  // namespace regfir
