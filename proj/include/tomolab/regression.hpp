#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tomolab/bases.hpp"
#include "tomolab/rng.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

struct RegressionSample {
  std::size_t design_index = 0;
  double y = 0.0;
};

/// Per-eigenprojection observations y_a = tr(Q_a rho) + z_a.
struct FineRegressionSample {
  std::size_t design_index = 0;
  std::vector<double> y;
  std::size_t eigen_count() const noexcept { return y.size(); }
};

struct FineRegressionDataset {
  SamplingDesign design;
  std::int64_t m = 0;
  std::vector<FineRegressionSample> samples;
  /// tr(Q_a rho) per sample; used to tell degenerate laws apart downstream.
  std::vector<std::vector<double>> cell_probabilities;
};

/// tr(B^2 rho) - tr(B rho)^2, clamped at 0. Division by m is left to the caller.
double noise_variance_coarse(const DensityMatrix& rho, const ComplexMatrix& observable);

/// diag(theta) - theta theta' with theta_a = tr(Q_a rho). Division by m is left to the caller.
RealMatrix noise_covariance_fine(std::span<const double> theta);
RealMatrix noise_covariance_fine(const DensityMatrix& rho, const SpectralDecomposition& observable);

/// Cells with theta_a outside (tol, 1 - tol) are treated as deterministic.
inline constexpr double kDegenerateTol = 1e-12;

/// One draw of y ~ N(theta, covariance / m) restricted to the sum-one plane.
/// Deterministic cells are emitted exactly; the last active coordinate closes
/// the sum constraint.
std::vector<double> draw_fine_observation(std::span<const double> theta, std::int64_t m, Rng& rng);

std::vector<FineRegressionSample> simulate_fine(const DensityMatrix& rho, const ObservableBasis& basis,
                                                const SamplingDesign& design, std::size_t n, std::int64_t m,
                                                std::uint64_t seed);
FineRegressionDataset simulate_fine_dataset(const DensityMatrix& rho, const ObservableBasis& basis,
                                            const SamplingDesign& design, std::size_t n, std::int64_t m,
                                            std::uint64_t seed);

std::vector<RegressionSample> simulate_coarse(const DensityMatrix& rho, const ObservableBasis& basis,
                                              const SamplingDesign& design, std::size_t n, std::int64_t m,
                                              std::uint64_t seed);

/// Y = sum_a lambda_a y_a.
RegressionSample aggregate_fine(const FineRegressionSample& sample, std::span<const double> eigenvalues);

// CSV: coarse "k,j,Y"; fine "k,j,y" with pipe-separated y.
void write_coarse_csv(std::ostream& out, const std::vector<RegressionSample>& samples);
void write_fine_csv(std::ostream& out, const std::vector<FineRegressionSample>& samples);

}  // namespace tomolab
