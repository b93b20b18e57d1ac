#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tomolab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kClusterTol = 1e-9;
inline constexpr std::size_t kMaxDim = 1024;

/// Distinct-eigenvalue form M = sum_a lambda_a Q_a, eigenvalues descending.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<ComplexMatrix> projections;
  std::vector<int> multiplicities;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  Eigen::Index dim() const noexcept { return projections.empty() ? 0 : projections.front().rows(); }
  ComplexMatrix reconstruct() const;
};

/// Entrywise check |M - M^dagger| <= tol * max(1, max|M_ab|).
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// Eigenvalues that lie within cluster_tol * ||M||_2 of their neighbour are
/// merged; the merged projection is the sum of the rank-one projectors.
SpectralDecomposition spectral_decompose(const ComplexMatrix& m, double cluster_tol = kClusterTol);

/// Kronecker product, row-major block layout: (A (x) B)[iB + k, jB + l] = A[i,j] B[k,l].
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             std::size_t max_dim = kMaxDim);

/// <<A1, A2>> = tr(A2^dagger A1).
Complex hs_inner(const ComplexMatrix& a1, const ComplexMatrix& a2);

/// Re tr(A B) without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

/// sigma_0 .. sigma_3.
ComplexMatrix pauli_sigma(int index);

// Matrix text format: a line holding d, then d rows of d entries "a+bi".
std::string format_complex(Complex z);
Complex parse_complex(std::string_view token);
void write_matrix(std::ostream& out, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const ComplexMatrix& m);

}  // namespace tomolab
