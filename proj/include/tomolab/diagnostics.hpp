#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tomolab/bases.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

inline constexpr double kActiveTol = 1e-9;

/// Per observable: eigenvalue indices a with tol < tr(Q_{ja} rho) < 1 - tol.
struct ActiveIndexReport {
  std::vector<std::vector<std::size_t>> active;
  std::vector<std::vector<double>> traces;  // tr(Q_{ja} rho), empty for non-measurable members
  std::vector<std::size_t> cardinality;
  std::vector<bool> nondegenerate;          // |I_j| >= 2
  int max_rj = 0;

  std::size_t nondegenerate_count() const;
};

ActiveIndexReport active_index_set(const DensityMatrix& rho, const ObservableBasis& basis, double tol = kActiveTol);

enum class WeightSource { uniform, regression, tomography, custom };
std::string_view to_string(WeightSource w);

struct C3Check {
  double c0 = 0.0;
  double c1 = 1.0;
  double min_active_trace = 1.0;
  double max_active_trace = 0.0;
  bool within = true;  // every active trace in [c0, c1]
};

struct ZetaOptions {
  std::vector<double> weights;  // empty means uniform 1/p
  WeightSource source = WeightSource::uniform;
  std::vector<std::string> names;
  double tol = kActiveTol;
  double c0 = 0.0;
  double c1 = 1.0;
};

/// zeta is the maximum over the supplied witnesses, i.e. a lower bound of the
/// supremum over any class containing them.
struct ZetaReport {
  double zeta = 0.0;
  std::vector<double> fractions;
  std::vector<std::size_t> counts;
  std::vector<double> weights;
  WeightSource source = WeightSource::uniform;
  std::vector<std::string> witnesses;
  C3Check c3;
  int max_rj = 0;
};

ZetaReport zeta_fraction(std::span<const DensityMatrix> states, const ObservableBasis& basis,
                         const ZetaOptions& options = {});

/// max_j |1 - Pi(j)/Xi(j)| + |1 - Xi(j)/Pi(j)|; ZeroWeight if any weight is not positive.
double gamma_p(std::span<const double> pi, std::span<const double> xi);

enum class BoundVariant { random, uniform, fixed };
std::string_view to_string(BoundVariant v);
BoundVariant parse_bound_variant(std::string_view text);

struct DeficiencyBoundReport {
  std::int64_t n = 0, m = 0, p = 0;
  int kappa = 0;
  double gamma_p = 0.0;
  double zeta = 0.0;
  double C = 1.0;
  BoundVariant variant = BoundVariant::random;
  double bound_random = 0.0;   // n gamma_p + C sqrt(n zeta / m)
  double bound_uniform = 0.0;  // C sqrt(n zeta / m); also the fixed-design bound
  double bound() const noexcept { return variant == BoundVariant::random ? bound_random : bound_uniform; }
};

DeficiencyBoundReport deficiency_bound(std::int64_t n, std::int64_t m, std::int64_t p, int kappa, double gamma,
                                       double zeta, double C, BoundVariant variant);

struct IdentifiabilityReport {
  std::int64_t n = 0, m = 0;
  int d = 0, r = 0;
  std::int64_t free_parameters = 0;  // d^2 - 1
  bool individual_n = false;         // n (r - 1) >= d^2 - 1
  bool individual_m = false;         // m >= r - 1
  bool summarized_n = false;         // n >= d^2 - 1
  bool product = false;              // m n >= d^2 - 1
};

IdentifiabilityReport identifiability_check(std::int64_t n, std::int64_t m, int d, int r);

/// Diagonal entries with modulus above tol.
int diagonal_support(const DensityMatrix& rho, double tol = kActiveTol);

// ---------------------------------------------------------------------------
// Corollary verification on witness states and class samples
// ---------------------------------------------------------------------------

struct CorollaryCheck {
  std::string anchor;  // e.g. cor2_pauli_line
  std::string description;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct CorollaryReport {
  int d = 0;
  std::vector<CorollaryCheck> checks;
  bool pass() const;
};

/// Entry-sparse class samples on the Hermitian basis: count <= d s_d for each state.
CorollaryCheck check_entry_sparse_count(int d, int s, std::size_t samples, std::uint64_t seed);
/// Pauli line witness: traces and zeta = (p-1)/p for each beta.
CorollaryCheck check_pauli_line(int d, std::span<const double> betas, std::size_t j_star = 1);
/// Tilted product witness: single-qubit expectations, trace floors and zeta = (p-1)/p.
CorollaryCheck check_tilted_product(int d);
/// Sparse-representation low-rank samples on the g-vector basis: count <= 8 r gamma^2 + 2 r gamma.
CorollaryCheck check_low_rank_sparse_count(int d, int r, int gamma, std::size_t samples, std::uint64_t seed);

/// Runs every check above at dimension d (the tilted and Pauli checks need d = 2^b).
CorollaryReport corollary_suite(int d, std::size_t samples, std::uint64_t seed);

}  // namespace tomolab
