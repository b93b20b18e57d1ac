#include "tomolab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

#include "tomolab/parallel.hpp"

namespace tomolab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> cell_probabilities(const DensityMatrix& rho, const SpectralDecomposition& observable) {
  if (observable.dim() != rho.dim())
    throw Error(ErrorCode::DimensionMismatch, "observable and state dimensions differ");
  std::vector<double> theta(observable.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < theta.size(); ++a) {
    const double raw = trace_product_real(observable.projections[a], rho.matrix());
    if (raw < -1e-9 || raw > 1.0 + 1e-9)
      throw Error(ErrorCode::InvalidArgument, "cell probability " + std::to_string(raw) + " outside [0,1]");
    theta[a] = std::clamp(raw, 0.0, 1.0);
    sum += theta[a];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "cell probabilities sum to " + std::to_string(sum));
  return theta;
}

std::vector<double> cell_probabilities(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t j) {
  return cell_probabilities(rho, basis.decomposition(j));
}

std::vector<std::int64_t> multinomial_draw(std::int64_t m, std::span<const double> theta, Rng& rng) {
  std::vector<std::int64_t> counts(theta.size(), 0);
  if (theta.empty()) return counts;
  double mass = 0.0;
  for (double t : theta) mass += t;
  std::int64_t left = m;
  for (std::size_t a = 0; a + 1 < theta.size() && left > 0; ++a) {
    const double p = mass > 0.0 ? std::clamp(theta[a] / mass, 0.0, 1.0) : 0.0;
    if (p >= 1.0) {
      counts[a] = left;
    } else if (p > 0.0) {
      std::binomial_distribution<std::int64_t> bin(left, p);
      counts[a] = bin(rng);
    }
    left -= counts[a];
    mass -= theta[a];
  }
  counts.back() += left;
  return counts;
}

namespace {

CountRecord draw_record(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t j, std::int64_t m,
                        Rng& rng) {
  const auto& dec = basis.decomposition(j);
  CountRecord record;
  record.observable_index = j;
  record.m = m;
  record.eigenvalues = dec.eigenvalues;
  record.cell_probabilities = cell_probabilities(rho, dec);
  record.counts = multinomial_draw(m, record.cell_probabilities, rng);
  return record;
}

}  // namespace

CountRecord measure_counts(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t j,
                           std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
  Rng rng = make_substream(seed, 0, stream_tag::counts);
  return draw_record(rho, basis, j, m, rng);
}

double summarize(const CountRecord& record) {
  if (record.counts.size() != record.eigenvalues.size())
    throw Error(ErrorCode::LengthMismatch, "counts and eigenvalues differ in length");
  double total = 0.0;
  for (std::size_t a = 0; a < record.counts.size(); ++a)
    total += record.eigenvalues[a] * static_cast<double>(record.counts[a]);
  return total / static_cast<double>(record.m);
}

std::vector<double> expand_outcomes(const CountRecord& record, Rng& rng) {
  std::vector<double> outcomes;
  outcomes.reserve(static_cast<std::size_t>(record.m));
  for (std::size_t a = 0; a < record.counts.size(); ++a)
    outcomes.insert(outcomes.end(), static_cast<std::size_t>(record.counts[a]), record.eigenvalues[a]);
  std::shuffle(outcomes.begin(), outcomes.end(), rng);
  return outcomes;
}

void check_design(const SamplingDesign& design, std::size_t p, std::size_t n) {
  if (design.mode == DesignMode::fixed) {
    if (n != p && n != 0)
      throw Error(ErrorCode::DesignMismatch,
                  "fixed design needs n = p (n = " + std::to_string(n) + ", p = " + std::to_string(p) + ")");
  } else {
    design.validate(p);
  }
}

std::size_t draw_design_index(const SamplingDesign& design, bool regression, std::size_t k, std::uint64_t seed) {
  if (design.mode == DesignMode::fixed) return k;
  const auto& w = regression ? design.weights_regression : design.weights_tomography;
  Rng rng = make_substream(seed, k, stream_tag::design);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return pick(rng);
}

TomographyDataset run_tomography(const DensityMatrix& rho, const ObservableBasis& basis,
                                 const SamplingDesign& design, std::size_t n, std::int64_t m,
                                 std::uint64_t seed, Detail detail) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
  check_design(design, basis.size(), n);
  TomographyDataset data;
  data.design = design;
  data.n = n;
  data.m = m;
  data.records.resize(n);
  if (detail != Detail::counts) data.summaries.resize(n);
  if (detail == Detail::individual) data.individuals.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const std::size_t j = draw_design_index(design, false, k, seed);
    Rng rng = make_substream(seed, k, stream_tag::counts);
    data.records[k] = draw_record(rho, basis, j, m, rng);
    if (detail != Detail::counts) data.summaries[k] = summarize(data.records[k]);
    if (detail == Detail::individual) {
      Rng shuffle_rng = make_substream(seed, k, stream_tag::shuffle);
      data.individuals[k] = expand_outcomes(data.records[k], shuffle_rng);
    }
  });
  return data;
}

void write_dataset_csv(std::ostream& out, const TomographyDataset& data) {
  out << "k,j,m,U,N\n";
  for (std::size_t k = 0; k < data.records.size(); ++k) {
    const auto& rec = data.records[k];
    out << k << ',' << rec.observable_index << ',' << rec.m << ',';
    for (std::size_t a = 0; a < rec.counts.size(); ++a) out << (a ? "|" : "") << rec.counts[a];
    out << ',';
    if (!data.summaries.empty()) out << format_double(data.summaries[k]);
    out << '\n';
  }
}

void write_individuals_csv(std::ostream& out, const TomographyDataset& data) {
  out << "k";
  for (std::int64_t l = 0; l < data.m; ++l) out << ",R" << (l + 1);
  out << '\n';
  for (std::size_t k = 0; k < data.individuals.size(); ++k) {
    out << k;
    for (double r : data.individuals[k]) out << ',' << format_double(r);
    out << '\n';
  }
}

}  // namespace tomolab
