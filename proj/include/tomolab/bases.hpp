#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomolab/hermitian.hpp"

namespace tomolab {

enum class BasisKind { canonical, hermitian, pauli, gvector, custom };

std::string_view to_string(BasisKind kind);
BasisKind parse_basis_kind(std::string_view text);

/// A finite observable family {B_0, ..., B_{p-1}} with eagerly cached
/// spectral decompositions. Indices are zero-based; for the Pauli family
/// index 0 is the identity.
struct ObservableBasis {
  BasisKind kind = BasisKind::custom;
  int dim = 0;
  std::vector<ComplexMatrix> matrices;
  /// Empty for members that are not Hermitian (off-diagonal canonical members).
  std::vector<std::optional<SpectralDecomposition>> decompositions;
  /// Pauli: (l_1, ..., l_b) in {0..3}; canonical/hermitian/gvector: (l_1, l_2) zero-based.
  std::vector<std::vector<int>> labels;
  /// Largest number of distinct eigenvalues over measurable members.
  int kappa = 0;

  std::size_t size() const noexcept { return matrices.size(); }
  bool measurable(std::size_t j) const { return decompositions.at(j).has_value(); }
  /// Throws NonMeasurableObservable for non-Hermitian members.
  const SpectralDecomposition& decomposition(std::size_t j) const;
};

/// Builds one of the d^2-member families. `gvectors` (rows are g_1..g_d) is
/// required for BasisKind::gvector and ignored otherwise.
ObservableBasis build_basis(BasisKind kind, int d, const std::optional<RealMatrix>& gvectors = std::nullopt);

/// Wraps arbitrary matrices as a custom basis.
ObservableBasis make_custom_basis(std::vector<ComplexMatrix> matrices);

/// Orthonormal real basis of R^d from the Haar wavelet construction (d = 2^b).
/// Row 0 is the constant vector, row 1 is (1,..,1,-1,..,-1)/sqrt(d).
RealMatrix haar_vectors(int d);

// Pauli indexing: labels (l_1..l_b) map to j = sum_i l_i 4^(b-i), so the
// identity is j = 0.
int log2_dim(int d);  // b for d = 2^b, throws BadDimension otherwise
std::size_t pauli_index(const std::vector<int>& labels);
std::vector<int> pauli_labels(std::size_t j, int b);
ComplexMatrix pauli_matrix(const std::vector<int>& labels);

struct OrthogonalityReport {
  double max_offdiagonal = 0.0;  // max |<B_j, B_j'>| over j != j'
  double min_norm_sq = 0.0;      // min <B_j, B_j>
  double max_norm_sq = 0.0;
  bool pass = false;             // max_offdiagonal <= 1e-9
};

OrthogonalityReport verify_orthogonal(const ObservableBasis& basis);

/// tr(Q_{j+}), tr(Q_{j-}), tr(B_j Q_{j+/-}) and the cross-traces
/// tr(B_{j'} Q_{j+/-}) for a Pauli basis. Row j of cross_plus holds
/// tr(B_{j'} Q_{j+}) for every j'. Row 0 (identity) has no minus projection
/// and is left as zeros in the minus tables.
struct PauliTraceTable {
  int dim = 0;
  std::vector<double> trace_plus, trace_minus;
  std::vector<double> self_plus, self_minus;
  RealMatrix cross_plus, cross_minus;

  /// Largest deviation from tr(Q)=d/2, tr(BQ)=+/-d/2 and zero cross-traces
  /// over all non-identity pairs.
  double max_deviation() const;
};

PauliTraceTable pauli_projection_traces(const ObservableBasis& basis);

enum class DesignMode { fixed, random };

/// Observable-selection law for the two experiments: Pi for regression, Xi
/// for tomography. Only used in random mode.
struct SamplingDesign {
  DesignMode mode = DesignMode::fixed;
  std::vector<double> weights_regression;
  std::vector<double> weights_tomography;

  static SamplingDesign fixed();
  static SamplingDesign uniform(std::size_t p);
  static SamplingDesign random(std::vector<double> pi, std::vector<double> xi);

  /// Nonnegative weights of length p summing to 1 within 1e-12.
  void validate(std::size_t p) const;
};

// Export: one header line "kind d p", then p matrices in the matrix text format.
void write_basis(std::ostream& out, const ObservableBasis& basis);
ObservableBasis read_basis(std::istream& in);
/// Whitespace-separated d x d real matrix; row l is g_l.
RealMatrix read_gvectors_file(const std::string& path);

}  // namespace tomolab
