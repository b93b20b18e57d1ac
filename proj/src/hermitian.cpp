#include "tomolab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tomolab/error.hpp"

namespace tomolab {

ComplexMatrix SpectralDecomposition::reconstruct() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t a = 0; a < size(); ++a) out += eigenvalues[a] * projections[a];
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& m, double cluster_tol) {
  if (!(cluster_tol > 0)) throw Error(ErrorCode::InvalidArgument, "cluster_tol must be positive");
  if (m.rows() == 0 || !is_hermitian(m))
    throw Error(ErrorCode::NonHermitianInput, "spectral_decompose needs a square Hermitian matrix");

  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::EigensolveFailure, "self-adjoint eigensolver did not converge");

  const RealVector& values = solver.eigenvalues();  // ascending
  const ComplexMatrix& vectors = solver.eigenvectors();
  const Eigen::Index d = m.rows();
  const double norm = values.cwiseAbs().maxCoeff();
  const double threshold = cluster_tol * norm;

  SpectralDecomposition out;
  Eigen::Index end = d;  // walk from the largest eigenvalue down
  while (end > 0) {
    Eigen::Index begin = end - 1;
    while (begin > 0 && values[begin] - values[begin - 1] <= threshold) --begin;
    const Eigen::Index count = end - begin;
    const auto block = vectors.middleCols(begin, count);
    out.eigenvalues.push_back(values.segment(begin, count).mean());
    out.projections.emplace_back(block * block.adjoint());
    out.multiplicities.push_back(static_cast<int>(count));
    end = begin;
  }
  return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_dim) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  if (rows > max_dim || cols > max_dim)
    throw Error(ErrorCode::DimensionOverflow,
                "tensor product dimension " + std::to_string(rows) + " exceeds " + std::to_string(max_dim));
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Complex hs_inner(const ComplexMatrix& a1, const ComplexMatrix& a2) {
  if (a1.rows() != a2.rows() || a1.cols() != a2.cols())
    throw Error(ErrorCode::DimensionMismatch, "hs_inner needs equal shapes");
  // tr(A2^dagger A1) = sum_ab conj(A2_ab) A1_ab
  return (a2.conjugate().cwiseProduct(a1)).sum();
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "trace of product needs compatible shapes");
  return a.cwiseProduct(b.transpose()).sum().real();
}

ComplexMatrix pauli_sigma(int index) {
  using namespace std::complex_literals;
  ComplexMatrix s(2, 2);
  switch (index) {
    case 0: s << 1.0, 0.0, 0.0, 1.0; break;
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -1.0i, 1.0i, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw Error(ErrorCode::InvalidArgument, "Pauli index must be 0..3");
  }
  return s;
}

std::string format_complex(Complex z) {
  char buf[80];
  const double im = z.imag();
  std::snprintf(buf, sizeof buf, "%.17g%c%.17gi", z.real(), std::signbit(im) ? '-' : '+', std::fabs(im));
  return buf;
}

Complex parse_complex(std::string_view token) {
  const std::string text(token);
  const char* begin = text.c_str();
  char* end = nullptr;
  const double re = std::strtod(begin, &end);
  if (end == begin) throw Error(ErrorCode::ParseError, "bad complex entry '" + text + "'");
  if (*end == '\0') return {re, 0.0};
  if (*end != '+' && *end != '-') throw Error(ErrorCode::ParseError, "bad complex entry '" + text + "'");
  const char* im_begin = end;
  const double im = std::strtod(im_begin, &end);
  if (end == im_begin || *end != 'i' || end[1] != '\0')
    throw Error(ErrorCode::ParseError, "bad complex entry '" + text + "'");
  return {re, im};
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_complex(m(i, j));
    }
    out << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& in) {
  long d = 0;
  if (!(in >> d) || d <= 0 || static_cast<std::size_t>(d) > kMaxDim)
    throw Error(ErrorCode::ParseError, "matrix header must be a positive dimension");
  ComplexMatrix m(d, d);
  std::string token;
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      if (!(in >> token)) throw Error(ErrorCode::ParseError, "matrix body truncated");
      m(i, j) = parse_complex(token);
    }
  return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_matrix(out, m);
}

}  // namespace tomolab
