#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tomolab/bases.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

/// Risks of the coefficient estimators alpha_j = <rho, B_j> / <B_j, B_j> at one m.
struct TransferPoint {
  std::int64_t m = 0;
  double risk_tomography = 0.0;  // mean over replications of sum_j (ahat_j - alpha_j)^2
  double risk_regression = 0.0;
  double gap = 0.0;              // |risk_tomography - risk_regression|
  double gap_error = 0.0;        // 95% half-width of the paired difference
  std::vector<double> mean_alpha_tomography;
  std::vector<double> mean_alpha_regression;
  std::vector<double> sq_error_tomography;  // per j, averaged over replications
  std::vector<double> sq_error_regression;
};

struct TransferReport {
  std::vector<double> alpha;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::vector<TransferPoint> points;
  /// gap(m_{i+1}) <= gap(m_i) + gap_error(m_i) + gap_error(m_{i+1}) for every step.
  bool monotone = false;
};

/// ahat_j averages N_k (tomography) or Y_k (regression) over records with
/// observable j and divides by <B_j, B_j>. Uses the fixed design when n = p and
/// the uniform random design otherwise; replication i of both experiments shares
/// root seed substream (seed, i).
TransferReport estimator_transfer(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t n,
                                  std::span<const std::int64_t> m_grid, std::size_t replications,
                                  std::uint64_t seed);

}  // namespace tomolab
