#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomolab/error.hpp"
#include "tomolab/hermitian.hpp"

namespace tomolab {

inline constexpr double kDensityTol = 1e-9;

struct DensityCheck {
  bool hermitian = false;
  bool psd = false;
  bool unit_trace = false;
  double min_eigenvalue = 0.0;  // of the Hermitian part
  double trace = 0.0;

  bool valid() const noexcept { return hermitian && psd && unit_trace; }
  /// Names of the failed conditions: NotHermitian, NotPSD, TraceNotOne.
  std::vector<std::string> violations() const;
};

class DensityError : public Error {
 public:
  explicit DensityError(DensityCheck check);
  const DensityCheck& check() const noexcept { return check_; }

 private:
  DensityCheck check_;
};

/// A validated quantum state: Hermitian, PSD and unit trace within tolerance.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  friend DensityMatrix validate_density(const ComplexMatrix& m, double tol);

  ComplexMatrix matrix_;
};

DensityCheck check_density(const ComplexMatrix& m, double tol = kDensityTol);
/// Throws DensityError listing every failed condition.
DensityMatrix validate_density(const ComplexMatrix& m, double tol = kDensityTol);

DensityMatrix maximally_mixed(int d);

/// I/d + (beta/d) B_{j_star} for the Pauli family; j_star is the zero-based
/// Pauli index and must not be the identity.
DensityMatrix pauli_line_state(int d, std::size_t j_star, double beta);

/// e = (sqrt(6/7), sqrt(1/14) + i sqrt(1/14)).
ComplexVector tilted_qubit_vector();
/// U U^dagger with U = e (x) ... (x) e (b factors).
DensityMatrix tilted_product_state(int b);

/// Rank-one and rank-two states built from the two leading Haar vectors.
DensityMatrix haar_rank1_state(int d);
DensityMatrix haar_rank2_state(int d);

/// Named constructions: cor2_line, cor3_tilted, remark8_haar_rank1,
/// remark8_haar_rank2. cor2_line uses j_star = 1 and beta = 0.5.
DensityMatrix named_witness(std::string_view name, int d);
std::vector<std::string> witness_names();

/// alpha_j = tr(rho B_j) / d, so that rho = sum_j alpha_j B_j.
std::vector<double> pauli_coefficients(const ComplexMatrix& rho);

enum class StateClass { entry_sparse, pauli_sparse, low_rank, low_rank_sparse_vec };

std::string_view to_string(StateClass c);
StateClass parse_state_class(std::string_view text);

struct StateClassSpec {
  StateClass state_class = StateClass::low_rank;
  int d = 2;
  int s = 0;      // entry_sparse, pauli_sparse
  int r = 0;      // low_rank, low_rank_sparse_vec
  int gamma = 0;  // low_rank_sparse_vec
  /// Rows are g_1..g_d; defaults to haar_vectors(d) when absent.
  std::optional<RealMatrix> gvectors;
  /// When set, sample_class returns this named construction.
  std::optional<std::string> witness_id;

  void validate() const;  // InfeasibleSpec
  RealMatrix frame() const;
};

DensityMatrix sample_class(const StateClassSpec& spec, std::uint64_t seed);

struct MembershipReport {
  bool member = false;
  /// False when only a necessary condition could be checked.
  bool exact = true;
  int observed = 0;  // nonzero entries, Pauli coefficients, rank or g-support
  int limit = 0;
  std::string detail;
};

MembershipReport class_membership(const DensityMatrix& rho, const StateClassSpec& spec,
                                  double tol = kDensityTol);

/// Number of eigenvalues above tol.
int numerical_rank(const ComplexMatrix& rho, double tol = kDensityTol);

}  // namespace tomolab
