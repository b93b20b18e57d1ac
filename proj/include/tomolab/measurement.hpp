#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tomolab/bases.hpp"
#include "tomolab/rng.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

/// Multinomial counts U_1..U_r from m repeated measurements of one observable.
struct CountRecord {
  std::size_t observable_index = 0;
  std::vector<std::int64_t> counts;
  std::vector<double> eigenvalues;
  std::int64_t m = 0;
  /// Cell probabilities the counts were drawn from; empty for imported data.
  std::vector<double> cell_probabilities;
};

enum class Detail { counts, summary, individual };

struct TomographyDataset {
  SamplingDesign design;
  std::size_t n = 0;
  std::int64_t m = 0;
  std::vector<CountRecord> records;
  /// N_k per record; empty unless detail >= summary.
  std::vector<double> summaries;
  /// R_k1..R_km per record; empty unless detail == individual.
  std::vector<std::vector<double>> individuals;
};

/// tr(Q_a rho) for every distinct eigenvalue of the observable, clamped to [0,1].
std::vector<double> cell_probabilities(const DensityMatrix& rho, const SpectralDecomposition& observable);
std::vector<double> cell_probabilities(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t j);

/// Sequential conditional-binomial multinomial draw.
std::vector<std::int64_t> multinomial_draw(std::int64_t m, std::span<const double> theta, Rng& rng);

CountRecord measure_counts(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t j,
                           std::int64_t m, std::uint64_t seed);

/// N = sum_a lambda_a U_a / m.
double summarize(const CountRecord& record);

/// Outcome sequence with the record's tallies, in uniformly shuffled order.
std::vector<double> expand_outcomes(const CountRecord& record, Rng& rng);

/// Fixed design requires n = p and visits observables in index order; random
/// design draws each observable from the tomography weights. Record k uses
/// substreams (seed, k), so results do not depend on the thread count.
TomographyDataset run_tomography(const DensityMatrix& rho, const ObservableBasis& basis,
                                 const SamplingDesign& design, std::size_t n, std::int64_t m,
                                 std::uint64_t seed, Detail detail = Detail::counts);

/// Draws the observable index of record k for either experiment's law.
std::size_t draw_design_index(const SamplingDesign& design, bool regression, std::size_t k,
                              std::uint64_t seed);
/// Throws DesignMismatch when a fixed design is asked for n != p.
void check_design(const SamplingDesign& design, std::size_t p, std::size_t n);

// CSV: k,j,m,U (pipe separated),N. Individuals: one row per record, k then outcomes.
void write_dataset_csv(std::ostream& out, const TomographyDataset& data);
void write_individuals_csv(std::ostream& out, const TomographyDataset& data);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

}  // namespace tomolab
