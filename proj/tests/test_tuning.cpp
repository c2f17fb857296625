#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "regfir/estimator.hpp"
#include "regfir/kernels.hpp"
#include "regfir/rng.hpp"
#include "regfir/tuning.hpp"

using namespace regfir;

namespace {

Dataset make_dataset(int N, int n, double noise_sigma, std::uint64_t seed) {
  GaussianStream input(seed, 0, "input");
  GaussianStream noise(seed, 0, "noise");
  GaussianStream coeff(seed, 0, "coeff");
  Dataset d;
  d.u = input.normal_vector(N, 1.0);
  Vector theta = coeff.normal_vector(n, 1.0);
  for (int i = 0; i < n; ++i) theta(i) *= std::pow(0.85, 0.5 * i);
  d.y = build_regressor(d.u, n) * theta + noise.normal_vector(N, noise_sigma);
  return d;
}

GridSpec small_grid() {
  GridSpec grid;
  grid.orders = {2, 4};
  grid.edges = {0.1, 0.2, 0.3};
  grid.alphas = {0.8};
  grid.lambdas = {1e-2, 1.0, 1e2};
  return grid;
}

bool same_beta(const Hyperparameters& a, const Hyperparameters& b) {
  return a.kind == b.kind && a.p == b.p && a.f1 == b.f1 && a.f2 == b.f2 &&
         a.alpha == b.alpha && a.lambda == b.lambda &&
         a.extra_edges == b.extra_edges;
}

KernelSpec make_spec(KernelFamily family, double c, double rho, double alpha,
                     double sigma2) {
  KernelSpec spec;
  spec.family = family;
  spec.c = c;
  spec.rho = rho;
  spec.alpha = alpha;
  spec.sigma2 = sigma2;
  return spec;
}

}  // namespace

TEST_CASE("fold boundaries are contiguous and balanced") {
  const auto even = kfold_split(10, 2);
  REQUIRE(even.size() == 2);
  CHECK(even[0] == std::pair<int, int>{0, 5});
  CHECK(even[1] == std::pair<int, int>{5, 10});

  const auto uneven = kfold_split(7, 3);
  REQUIRE(uneven.size() == 3);
  CHECK(uneven[0] == std::pair<int, int>{0, 2});
  CHECK(uneven[1] == std::pair<int, int>{2, 4});
  CHECK(uneven[2] == std::pair<int, int>{4, 7});

  for (int N : {5, 23, 100, 997}) {
    for (int k = 2; k <= std::min(N, 9); ++k) {
      const auto folds = kfold_split(N, k);
      REQUIRE(folds.size() == static_cast<std::size_t>(k));
      CHECK(folds.front().first == 0);
      CHECK(folds.back().second == N);
      int lo = N, hi = 0;
      for (std::size_t i = 0; i < folds.size(); ++i) {
        if (i > 0) CHECK(folds[i].first == folds[i - 1].second);
        const int len = folds[i].second - folds[i].first;
        lo = std::min(lo, len);
        hi = std::max(hi, len);
      }
      CHECK(hi - lo <= 1);
    }
  }

  CHECK_THROWS_AS(kfold_split(10, 1), std::invalid_argument);
  CHECK_THROWS_AS(kfold_split(3, 4), std::invalid_argument);
}

TEST_CASE("candidates map to their pass/stop description") {
  Hyperparameters beta;
  beta.kind = BandKind::BandStop;
  beta.f1 = 0.2;
  beta.f2 = 0.3;
  BandSpec band = band_of(beta);
  CHECK(band.kind == BandKind::BandStop);
  CHECK(band.edges == std::vector<double>{0.2, 0.3});

  beta.kind = BandKind::HighPass;
  beta.f1 = 0.0;
  beta.f2 = 0.25;
  band = band_of(beta);
  CHECK(band.kind == BandKind::HighPass);
  CHECK(band.edges == std::vector<double>{0.25});

  beta.kind = BandKind::LowPass;
  beta.f1 = 0.3;
  beta.f2 = 0.5;
  band = band_of(beta);
  CHECK(band.kind == BandKind::LowPass);
  CHECK(band.edges == std::vector<double>{0.3});

  beta.kind = BandKind::MultiBandStop;
  beta.extra_edges = {0.1, 0.2, 0.35, 0.45};
  band = band_of(beta);
  CHECK(band.kind == BandKind::MultiBandStop);
  CHECK(band.edges == beta.extra_edges);

  CHECK_THROWS_AS(band_of(Hyperparameters{BandKind::BandPass}),
                  std::invalid_argument);
}

TEST_CASE("penalty matrix composes the FIR design with the row decay") {
  Hyperparameters beta;
  beta.kind = BandKind::BandStop;
  beta.p = 4;
  beta.f1 = 0.15;
  beta.f2 = 0.3;
  beta.alpha = 0.81;
  const int n = 10;
  const FilterMatrix F = penalty_matrix(beta, n);
  const FilterMatrix want =
      regularisation_filter(design_fir_windowed(4, band_of(beta)), n, 0.81);
  CHECK(F.bandwidth == want.bandwidth);
  CHECK(F.upper == want.upper);
  CHECK((F.mat - want.mat).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK_THROWS_AS(penalty_matrix(beta, 4), std::invalid_argument);
}

TEST_CASE("grid enumeration walks kinds, bands, order, alpha, lambda") {
  const GridSpec grid = small_grid();
  const auto cands = enumerate_candidates(grid);
  // 3 stop pairs + 3 high-pass + 3 low-pass bands, times 2 orders x 3 lambdas
  CHECK(cands.size() == 9u * 2u * 3u);
  for (const auto& c : cands) {
    CHECK(c.alpha == 0.8);
    if (c.kind == BandKind::HighPass) CHECK(c.f1 == 0.0);
    if (c.kind == BandKind::LowPass) CHECK(c.f2 == 0.5);
    if (c.kind == BandKind::BandStop) CHECK(c.f1 < c.f2);
  }
  // lambda is the innermost axis
  CHECK(same_beta(cands[0], cands[1]) == false);
  CHECK(cands[0].lambda == 1e-2);
  CHECK(cands[1].lambda == 1.0);
  CHECK(cands[2].lambda == 1e2);
  CHECK(cands[0].f1 == cands[2].f1);

  GridSpec empty = grid;
  empty.lambdas.clear();
  CHECK_THROWS_AS(enumerate_candidates(empty), std::invalid_argument);
}

TEST_CASE("cross-validation score against a directly assembled oracle") {
  const int N = 24, n = 4, k = 2;
  const Dataset data = make_dataset(N, n, 0.2, 31);

  Hyperparameters beta;
  beta.kind = BandKind::BandStop;
  beta.p = 2;
  beta.f1 = 0.15;
  beta.f2 = 0.3;
  beta.alpha = 0.9;
  beta.lambda = 3.0;
  const FilterMatrix F = penalty_matrix(beta, n);

  double acc = 0.0;
  const auto folds = kfold_split(N, k);
  for (int v = 0; v < k; ++v) {
    const auto [vb, ve] = folds[v];
    const auto [tb, te] = folds[1 - v];
    const Matrix phi_tr = build_regressor(data.u.segment(tb, te - tb), n);
    const Matrix phi_val = build_regressor(data.u.segment(vb, ve - vb), n);
    const Vector theta = regularised_estimate_filter(
        phi_tr, data.y.segment(tb, te - tb), F.mat, beta.lambda);
    acc += (phi_val * theta - data.y.segment(vb, ve - vb)).squaredNorm() /
           (ve - vb);
  }
  const double want = acc / k;
  CHECK(cv_score(beta, data, n, k) == doctest::Approx(want).epsilon(1e-10));

  // with the penalty off, every fold reduces to plain least squares
  Hyperparameters flat = beta;
  flat.lambda = 0.0;
  double ls_acc = 0.0;
  for (int v = 0; v < k; ++v) {
    const auto [vb, ve] = folds[v];
    const auto [tb, te] = folds[1 - v];
    const Matrix phi_tr = build_regressor(data.u.segment(tb, te - tb), n);
    const Matrix phi_val = build_regressor(data.u.segment(vb, ve - vb), n);
    const Vector theta = least_squares(phi_tr, data.y.segment(tb, te - tb));
    ls_acc += (phi_val * theta - data.y.segment(vb, ve - vb)).squaredNorm() /
              (ve - vb);
  }
  CHECK(cv_score(flat, data, n, k) ==
        doctest::Approx(ls_acc / k).epsilon(1e-10));
}

TEST_CASE("cv score needs enough rows per training fold") {
  const Dataset data = make_dataset(8, 6, 0.1, 5);
  Hyperparameters beta;
  beta.kind = BandKind::LowPass;
  beta.f1 = 0.2;
  beta.f2 = 0.5;
  CHECK_THROWS_AS(cv_score(beta, data, 6, 2), std::invalid_argument);
}

TEST_CASE("noise-free realisable data gives a vanishing cv score") {
  // realisable under the fold convention itself: each contiguous block is
  // generated with zero initial conditions, like the fold regressors
  const int N = 60, n = 6;
  GaussianStream input(77, 0, "input");
  GaussianStream coeff(77, 0, "coeff");
  Dataset data;
  data.u = input.normal_vector(N, 1.0);
  const Vector theta = coeff.normal_vector(n, 1.0);
  data.y.resize(N);
  for (const auto& [lo, hi] : kfold_split(N, 2))
    data.y.segment(lo, hi - lo) =
        build_regressor(data.u.segment(lo, hi - lo), n) * theta;

  Hyperparameters beta;
  beta.kind = BandKind::BandStop;
  beta.f1 = 0.1;
  beta.f2 = 0.2;
  beta.lambda = 0.0;
  CHECK(cv_score(beta, data, n, 2) <= 1e-12);
}

TEST_CASE("grid search returns the argmin with a complete trace") {
  const Dataset data = make_dataset(120, 20, 0.3, 13);
  const GridSpec grid = small_grid();
  const TuningResult result = grid_search(grid, data, 20, 2);
  const auto cands = enumerate_candidates(grid);
  REQUIRE(result.trace.size() == cands.size());

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(same_beta(result.trace[i].beta, cands[i]));
    CHECK(std::isfinite(result.trace[i].cv_mse));
    best = std::min(best, result.trace[i].cv_mse);
  }
  CHECK(result.cv_mse == best);
  CHECK(cv_score(result.best, data, 20, 2) ==
        doctest::Approx(result.cv_mse).epsilon(1e-12));

  // repeat runs are bit-identical
  const TuningResult again = grid_search(grid, data, 20, 2);
  CHECK(same_beta(again.best, result.best));
  for (std::size_t i = 0; i < cands.size(); ++i)
    CHECK(again.trace[i].cv_mse == result.trace[i].cv_mse);

  // explicit candidate lists run through the same scorer
  const std::vector<Hyperparameters> few(cands.begin(), cands.begin() + 3);
  const TuningResult short_run = grid_search(few, data, 20, 2);
  CHECK(short_run.trace.size() == 3);
  CHECK_THROWS_AS(grid_search(std::vector<Hyperparameters>{}, data, 20, 2),
                  std::invalid_argument);
}

TEST_CASE("rescaling the output rescales every score, not the winner") {
  const Dataset data = make_dataset(120, 20, 0.3, 29);
  Dataset scaled = data;
  scaled.y *= 3.0;
  const GridSpec grid = small_grid();
  const TuningResult base = grid_search(grid, data, 20, 2);
  const TuningResult big = grid_search(grid, scaled, 20, 2);
  CHECK(same_beta(base.best, big.best));
  for (std::size_t i = 0; i < base.trace.size(); ++i)
    CHECK(big.trace[i].cv_mse ==
          doctest::Approx(9.0 * base.trace[i].cv_mse).epsilon(1e-9));
}

TEST_CASE("local refinement only improves and keeps the discrete choices") {
  const Dataset data = make_dataset(150, 25, 0.2, 41);
  Hyperparameters start;
  start.kind = BandKind::BandStop;
  start.p = 4;
  start.f1 = 0.12;
  start.f2 = 0.34;
  start.alpha = 0.85;
  start.lambda = 5.0;
  const double f0 = cv_score(start, data, 25, 2);
  const TuningResult refined = refine_local(start, data, 25, 2);
  CHECK(refined.cv_mse <= f0 * (1.0 + 1e-12));
  CHECK(refined.best.p == start.p);
  CHECK(refined.best.kind == start.kind);
  CHECK(refined.best.f1 >= 0.005);
  CHECK(refined.best.f2 <= 0.495);
  CHECK(refined.best.f1 < refined.best.f2);
  CHECK(refined.best.alpha >= 0.5);
  CHECK(refined.best.alpha <= 0.9999);
  CHECK(cv_score(refined.best, data, 25, 2) ==
        doctest::Approx(refined.cv_mse).epsilon(1e-12));

  const TuningResult again = refine_local(start, data, 25, 2);
  CHECK(same_beta(again.best, refined.best));
}

TEST_CASE("kernel baselines tune shape and scale on the same folds") {
  const Dataset data = make_dataset(120, 20, 0.2, 53);
  const std::vector<double> alphas = {0.6, 0.8};
  const std::vector<double> rhos = {-0.5, 0.5};
  const std::vector<double> lambdas = {1e-2, 1.0, 1e2};

  const KernelTuningResult tc =
      tune_kernel_cv(KernelFamily::TC, alphas, rhos, lambdas, data, 20, 2);
  CHECK(tc.trace.size() == alphas.size() * lambdas.size());
  CHECK(tc.spec.c == 1.0);
  CHECK(tc.spec.sigma2 == 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : tc.trace) best = std::min(best, t.cv_mse);
  CHECK(tc.cv_mse == best);

  const KernelTuningResult dc =
      tune_kernel_cv(KernelFamily::DC, alphas, rhos, lambdas, data, 20, 2);
  CHECK(dc.trace.size() == alphas.size() * rhos.size() * lambdas.size());
  CHECK(std::isfinite(dc.cv_mse));
  double dc_best = std::numeric_limits<double>::infinity();
  for (const auto& t : dc.trace) dc_best = std::min(dc_best, t.cv_mse);
  CHECK(dc.cv_mse == dc_best);

  CHECK_THROWS_AS(
      tune_kernel_cv(KernelFamily::DC, alphas, {}, lambdas, data, 20, 2),
      std::invalid_argument);
}

TEST_CASE("evidence objective equals the dense Gaussian computation") {
  const int N = 80, n = 10;
  const Dataset data = make_dataset(N, n, 0.3, 67);
  const Matrix phi = build_regressor(data.u, n);

  for (const KernelSpec& spec :
       {make_spec(KernelFamily::TC, 2.0, 0.0, 0.8, 0.05),
        make_spec(KernelFamily::DC, 0.7, -0.4, 0.85, 0.2),
        make_spec(KernelFamily::Correlation, 1.3, 0.6, 0.9, 0.8)}) {
    const Matrix sigma =
        spec.sigma2 * Matrix::Identity(N, N) +
        phi * covariance_matrix(spec, n) * phi.transpose();
    const Eigen::LLT<Matrix> llt(sigma);
    REQUIRE(llt.info() == Eigen::Success);
    const double logdet =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double quad = data.y.dot(llt.solve(data.y));
    CHECK(evidence_objective(spec, data, n) ==
          doctest::Approx(logdet + quad).epsilon(1e-8));
  }
}

TEST_CASE("evidence prefers the generating scale over a misscaled prior") {
  const int N = 300, n = 20;
  GaussianStream input(3, 0, "input");
  GaussianStream noise(3, 0, "noise");
  GaussianStream coeff(3, 0, "coeff");
  Dataset data;
  data.u = input.normal_vector(N, 1.0);
  const KernelSpec truth = make_spec(KernelFamily::TC, 1.0, 0.0, 0.8, 0.01);
  const Matrix P = covariance_matrix(truth, n);
  const Vector theta =
      Eigen::LLT<Matrix>(P).matrixL() * coeff.normal_vector(n, 1.0);
  data.y = build_regressor(data.u, n) * theta + noise.normal_vector(N, 0.1);

  KernelSpec off = truth;
  off.c = 100.0;
  CHECK(evidence_objective(truth, data, n) <
        evidence_objective(off, data, n));
  off.c = 0.01;
  CHECK(evidence_objective(truth, data, n) <
        evidence_objective(off, data, n));
}

TEST_CASE("marginal likelihood recovers the decay rate it was drawn from") {
  const int N = 500, n = 30;
  int hits = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    GaussianStream input(100 + seed, 0, "input");
    GaussianStream noise(100 + seed, 0, "noise");
    GaussianStream coeff(100 + seed, 0, "coeff");
    Dataset data;
    data.u = input.normal_vector(N, 1.0);
    const KernelSpec truth = make_spec(KernelFamily::TC, 1.0, 0.0, 0.8, 1.0);
    const Vector theta =
        Eigen::LLT<Matrix>(covariance_matrix(truth, n)).matrixL() *
        coeff.normal_vector(n, 1.0);
    data.y = build_regressor(data.u, n) * theta + noise.normal_vector(N, 0.1);

    const EvidenceResult fit = marginal_likelihood_tune(KernelFamily::TC,
                                                        data, n);
    CHECK(std::isfinite(fit.objective));
    CHECK(fit.spec.c > 0.0);
    CHECK(fit.spec.sigma2 > 0.0);
    if (fit.spec.alpha >= 0.7 && fit.spec.alpha <= 0.9) ++hits;
  }
  CHECK(hits >= 16);
}

TEST_CASE("noise-free realisable data drives the noise estimate down") {
  const int N = 300, n = 20;
  const Dataset data = make_dataset(N, n, 0.0, 7);
  const double var_y = data.y.squaredNorm() / N;
  const EvidenceResult fit = marginal_likelihood_tune(KernelFamily::TC,
                                                      data, n);
  CHECK(fit.spec.sigma2 <= 1e-4 * var_y);
}
