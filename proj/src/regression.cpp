#include "tomolab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "tomolab/measurement.hpp"
#include "tomolab/parallel.hpp"
#include "tomolab/rng.hpp"

namespace tomolab {

double noise_variance_coarse(const DensityMatrix& rho, const ComplexMatrix& observable) {
  const double mean = trace_product_real(observable, rho.matrix());
  const double second = trace_product_real(observable * observable, rho.matrix());
  return std::max(0.0, second - mean * mean);
}

RealMatrix noise_covariance_fine(std::span<const double> theta) {
  const auto r = static_cast<Eigen::Index>(theta.size());
  RealMatrix cov(r, r);
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < r; ++b) {
      const double ta = theta[static_cast<std::size_t>(a)], tb = theta[static_cast<std::size_t>(b)];
      cov(a, b) = a == b ? ta * (1.0 - ta) : -ta * tb;
    }
  return cov;
}

RealMatrix noise_covariance_fine(const DensityMatrix& rho, const SpectralDecomposition& observable) {
  return noise_covariance_fine(cell_probabilities(rho, observable));
}

std::vector<double> draw_fine_observation(std::span<const double> theta, std::int64_t m, Rng& rng) {
  std::vector<double> y(theta.size());
  std::vector<std::size_t> active;
  double fixed_mass = 0.0;
  for (std::size_t a = 0; a < theta.size(); ++a) {
    if (theta[a] > kDegenerateTol && theta[a] < 1.0 - kDegenerateTol) {
      active.push_back(a);
    } else {
      y[a] = theta[a] >= 0.5 ? 1.0 : 0.0;
      fixed_mass += y[a];
    }
  }
  if (active.empty()) return y;
  if (active.size() == 1) {
    y[active.front()] = 1.0 - fixed_mass;
    return y;
  }
  const auto q = static_cast<Eigen::Index>(active.size() - 1);
  RealMatrix cov(q, q);
  for (Eigen::Index a = 0; a < q; ++a)
    for (Eigen::Index b = 0; b < q; ++b) {
      const double ta = theta[active[static_cast<std::size_t>(a)]], tb = theta[active[static_cast<std::size_t>(b)]];
      cov(a, b) = (a == b ? ta * (1.0 - ta) : -ta * tb) / static_cast<double>(m);
    }
  Eigen::LLT<RealMatrix> llt(cov);
  if (llt.info() != Eigen::Success) llt.compute(cov + 1e-12 * RealMatrix::Identity(q, q));
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector z(q);
  for (Eigen::Index a = 0; a < q; ++a) z[a] = normal(rng);
  const RealVector noise = llt.matrixL() * z;
  double partial = fixed_mass;
  for (Eigen::Index a = 0; a < q; ++a) {
    const std::size_t idx = active[static_cast<std::size_t>(a)];
    y[idx] = theta[idx] + noise[a];
    partial += y[idx];
  }
  y[active.back()] = 1.0 - partial;
  return y;
}

FineRegressionDataset simulate_fine_dataset(const DensityMatrix& rho, const ObservableBasis& basis,
                                            const SamplingDesign& design, std::size_t n, std::int64_t m,
                                            std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
  check_design(design, basis.size(), n);
  FineRegressionDataset data;
  data.design = design;
  data.m = m;
  data.samples.resize(n);
  data.cell_probabilities.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const std::size_t j = draw_design_index(design, true, k, seed);
    auto theta = cell_probabilities(rho, basis, j);
    Rng rng = make_substream(seed, k, stream_tag::gaussian);
    data.samples[k] = FineRegressionSample{j, draw_fine_observation(theta, m, rng)};
    data.cell_probabilities[k] = std::move(theta);
  });
  return data;
}

std::vector<FineRegressionSample> simulate_fine(const DensityMatrix& rho, const ObservableBasis& basis,
                                                const SamplingDesign& design, std::size_t n, std::int64_t m,
                                                std::uint64_t seed) {
  return simulate_fine_dataset(rho, basis, design, n, m, seed).samples;
}

std::vector<RegressionSample> simulate_coarse(const DensityMatrix& rho, const ObservableBasis& basis,
                                              const SamplingDesign& design, std::size_t n, std::int64_t m,
                                              std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
  check_design(design, basis.size(), n);
  std::vector<RegressionSample> out(n);
  parallel_for(n, [&](std::size_t k) {
    const std::size_t j = draw_design_index(design, true, k, seed);
    const ComplexMatrix& b = basis.matrices[j];
    if (!basis.measurable(j)) throw Error(ErrorCode::NonMeasurableObservable, "coarse regression needs Hermitian X_k");
    const double mean = trace_product_real(b, rho.matrix());
    const double sd = std::sqrt(noise_variance_coarse(rho, b) / static_cast<double>(m));
    Rng rng = make_substream(seed, k, stream_tag::gaussian);
    std::normal_distribution<double> normal(0.0, 1.0);
    out[k] = RegressionSample{j, sd > 0.0 ? mean + sd * normal(rng) : mean};
  });
  return out;
}

RegressionSample aggregate_fine(const FineRegressionSample& sample, std::span<const double> eigenvalues) {
  if (sample.y.size() != eigenvalues.size())
    throw Error(ErrorCode::LengthMismatch, "fine sample and eigenvalue list differ in length");
  double y = 0.0;
  for (std::size_t a = 0; a < eigenvalues.size(); ++a) y += eigenvalues[a] * sample.y[a];
  return RegressionSample{sample.design_index, y};
}

void write_coarse_csv(std::ostream& out, const std::vector<RegressionSample>& samples) {
  out << "k,j,Y\n";
  for (std::size_t k = 0; k < samples.size(); ++k)
    out << k << ',' << samples[k].design_index << ',' << format_double(samples[k].y) << '\n';
}

void write_fine_csv(std::ostream& out, const std::vector<FineRegressionSample>& samples) {
  out << "k,j,y\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    out << k << ',' << samples[k].design_index << ',';
    for (std::size_t a = 0; a < samples[k].y.size(); ++a) out << (a ? "|" : "") << format_double(samples[k].y[a]);
    out << '\n';
  }
}

}  // namespace tomolab
