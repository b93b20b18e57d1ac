#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tomolab/measurement.hpp"
#include "tomolab/regression.hpp"
#include "tomolab/rng.hpp"

namespace tomolab {

// ---------------------------------------------------------------------------
// Markov kernels between the two experiments
// ---------------------------------------------------------------------------

/// Counts after uniform perturbation; values sum to m exactly.
struct PerturbedCounts {
  std::vector<double> values;
  std::int64_t m = 0;
  std::vector<std::int64_t> source_counts;
};

/// Cells whose probability lies strictly inside (tol, 1 - tol).
std::vector<std::size_t> active_cells(std::span<const double> theta, double tol = kDegenerateTol);

/// Uniform(-1/2, 1/2) draw on a 2^-32 grid. Adding it to an integer below
/// 2^19 is exact in double precision, so round-off recovers the integer.
double uniform_perturbation(Rng& rng);

/// Adds independent uniform perturbations to all but the last active cell and
/// closes the sum on the last active cell. Records whose law has at most one
/// active cell (or r <= 1) are returned unperturbed. Active cells come from
/// record.cell_probabilities when present, otherwise every cell is active.
PerturbedCounts kernel_K0(const CountRecord& record, Rng& rng);
PerturbedCounts kernel_K0(const CountRecord& record, std::uint64_t seed);

/// Rounds all but the last coordinate half away from zero and sets the last to
/// m minus the rest. Throws NegativeResult if any resulting count is negative.
std::vector<std::int64_t> kernel_K1(std::span<const double> values, std::int64_t m);

/// y*_k = K0(U_k)/m for every record; record k uses substream (seed, k).
FineRegressionDataset translate_qst_to_regression(const TomographyDataset& data, std::uint64_t seed);

struct RegressionToQstResult {
  TomographyDataset data;
  std::size_t dropped = 0;                 // samples whose round-off went negative
  std::vector<std::size_t> dropped_indices;
};

/// counts = K1(m y); samples that round to a negative count are dropped and reported.
RegressionToQstResult translate_regression_to_qst(const FineRegressionDataset& fine,
                                                  std::span<const std::vector<double>> eigenvalues_by_index);

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

double multinomial_log_pmf(std::int64_t m, std::span<const double> theta, std::span<const std::int64_t> counts);

/// Joint density of the first r-1 perturbed coordinates: the multinomial pmf at
/// the rounded point (last cell m minus the rest); 0 outside the support.
double perturbed_density(std::int64_t m, std::span<const double> theta, std::span<const double> x);

/// Same density through the chain of conditional binomials
/// U_1 ~ Bin(m, b_1), U_a | U_<a ~ Bin(m - U_1 - ... - U_{a-1}, b_a), b_a = theta_a / (theta_a + ... + theta_r).
double perturbed_density_conditional(std::int64_t m, std::span<const double> theta, std::span<const double> x);

/// Normal density with the multinomial mean and covariance of the first r-1 cells.
class MatchedGaussian {
 public:
  MatchedGaussian(std::int64_t m, std::span<const double> theta);
  double log_density(std::span<const double> x) const;
  double density(std::span<const double> x) const;
  const RealVector& mean() const noexcept { return mean_; }
  const RealMatrix& covariance() const noexcept { return cov_; }
  /// Mahalanobis norm of x - mean.
  double mahalanobis(std::span<const double> x) const;

 private:
  RealVector mean_;
  RealMatrix cov_;
  RealMatrix chol_;  // lower factor L with cov = L L'
  double log_norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

enum class DistanceKind { hellinger, tv };
enum class DistanceMethod { quadrature, monte_carlo };

struct DistanceEstimate {
  double value = 0.0;
  DistanceKind kind = DistanceKind::hellinger;
  DistanceMethod method = DistanceMethod::quadrature;
  double error_bar = 0.0;
  std::int64_t m = 0;
  std::vector<double> theta;
};

struct QuadratureSpec {
  int order = 5;            // Gauss-Legendre nodes per axis per unit cell
  int reference_order = 3;  // error_bar = |H(order) - H(reference_order)| + tail term
  double window_sigmas = 8.0;
};

/// Gauss-Legendre nodes and weights on [-1/2, 1/2].
void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// H(P*, Q) between the uniformly perturbed multinomial and the matched normal,
/// with H^2 = int (sqrt f - sqrt g)^2 (no 1/2 factor, range [0, sqrt 2]).
/// Degenerate cells are dropped; at most one active cell gives exactly 0.
DistanceEstimate hellinger_perturbed_vs_gaussian(std::int64_t m, std::span<const double> theta,
                                                 const QuadratureSpec& spec = {});

struct HellingerTerm {
  double h_square = 0.0;
  int active_cells = 2;  // terms with at most one active cell contribute 0
};

/// sqrt(sum_k h_k^2) for independent products.
double product_hellinger_bound(std::span<const double> h_squares);
double product_hellinger_bound(std::span<const HellingerTerm> terms);

using PointSampler = std::function<std::vector<double>(Rng&)>;
using PointDensity = std::function<double(std::span<const double>)>;

/// TV(P, Q) = E_P[max(0, 1 - q/p)] with a 95% CLT half-width. Sample i uses
/// substream (seed, i); throws ZeroDensity if p vanishes at a draw.
DistanceEstimate tv_monte_carlo(const PointSampler& sampler_p, const PointDensity& density_p,
                                const PointDensity& density_q, std::size_t n_samples, std::uint64_t seed);

/// tv_monte_carlo specialised to P* (perturbed multinomial) against the matched normal.
DistanceEstimate tv_perturbed_vs_gaussian(std::int64_t m, std::span<const double> theta, std::size_t n_samples,
                                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Two-stage total variation bound
// ---------------------------------------------------------------------------

struct WeightedTv {
  double weight = 0.0;
  double tv = 0.0;
};

/// marginal_gap + sum_x weight_x tv_x.
double conditional_tv_bound(double marginal_gap, std::span<const WeightedTv> conditional_tvs);

/// Discrete law of (U1, U2) given as P(U1 = x) and P(U2 = y | U1 = x).
struct TwoStageLaw {
  std::vector<double> marginal;
  std::vector<std::vector<double>> conditional;
};

double exact_tv(const TwoStageLaw& f, const TwoStageLaw& g);
/// max_x |1 - F1(x) / G1(x)|; throws ZeroWeight if G1 vanishes where F1 does not.
double marginal_ratio_gap(const TwoStageLaw& f, const TwoStageLaw& g);
/// Right-hand side of the two-stage bound assembled from f and g.
double two_stage_tv_bound(const TwoStageLaw& f, const TwoStageLaw& g);

// ---------------------------------------------------------------------------
// Scaling studies
// ---------------------------------------------------------------------------

struct ScalingReport {
  std::vector<double> theta;
  std::vector<std::int64_t> m_grid;
  std::vector<double> h_values;
  std::vector<double> error_bars;
  double slope = 0.0;
  double intercept = 0.0;
  double band_low = -0.70;
  double band_high = -0.35;
  bool pass = false;
};

/// Least-squares slope of log y against log x.
double fit_log_log_slope(std::span<const double> x, std::span<const double> y, double* intercept = nullptr);

/// Builds the report from precomputed H values (e.g. a synthetic series).
ScalingReport scaling_from_values(std::span<const std::int64_t> m_grid, std::span<const double> h_values,
                                  std::span<const double> error_bars = {});

ScalingReport scaling_study(std::span<const double> theta, std::span<const std::int64_t> m_grid,
                            const QuadratureSpec& spec = {});

void write_scaling_csv(std::ostream& out, const ScalingReport& report);
std::string scaling_summary_json(const ScalingReport& report);
std::string distance_fixture_json(const DistanceEstimate& estimate);

}  // namespace tomolab
