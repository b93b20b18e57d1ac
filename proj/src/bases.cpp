#include "tomolab/bases.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "tomolab/error.hpp"

namespace tomolab {

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::canonical: return "canonical";
    case BasisKind::hermitian: return "hermitian";
    case BasisKind::pauli: return "pauli";
    case BasisKind::gvector: return "gvector";
    case BasisKind::custom: return "custom";
  }
  return "custom";
}

BasisKind parse_basis_kind(std::string_view text) {
  for (auto kind : {BasisKind::canonical, BasisKind::hermitian, BasisKind::pauli, BasisKind::gvector,
                    BasisKind::custom})
    if (text == to_string(kind)) return kind;
  throw Error(ErrorCode::ParseError, "unknown basis kind '" + std::string(text) + "'");
}

const SpectralDecomposition& ObservableBasis::decomposition(std::size_t j) const {
  const auto& dec = decompositions.at(j);
  if (!dec)
    throw Error(ErrorCode::NonMeasurableObservable,
                "basis member " + std::to_string(j) + " is not Hermitian");
  return *dec;
}

int log2_dim(int d) {
  if (d < 2 || (d & (d - 1)) != 0)
    throw Error(ErrorCode::BadDimension, "Pauli family needs d = 2^b, got " + std::to_string(d));
  int b = 0;
  while ((1 << b) < d) ++b;
  return b;
}

std::size_t pauli_index(const std::vector<int>& labels) {
  std::size_t j = 0;
  for (int l : labels) {
    if (l < 0 || l > 3) throw Error(ErrorCode::InvalidArgument, "Pauli label must be 0..3");
    j = 4 * j + static_cast<std::size_t>(l);
  }
  return j;
}

std::vector<int> pauli_labels(std::size_t j, int b) {
  std::vector<int> labels(static_cast<std::size_t>(b));
  for (int i = b - 1; i >= 0; --i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>(j % 4);
    j /= 4;
  }
  if (j != 0) throw Error(ErrorCode::InvalidArgument, "Pauli index out of range");
  return labels;
}

ComplexMatrix pauli_matrix(const std::vector<int>& labels) {
  if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "empty Pauli label");
  ComplexMatrix out = pauli_sigma(labels.front());
  for (std::size_t i = 1; i < labels.size(); ++i) out = tensor_product(out, pauli_sigma(labels[i]));
  return out;
}

RealMatrix haar_vectors(int d) {
  const int b = log2_dim(d);
  RealMatrix g = RealMatrix::Zero(d, d);
  g.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(d)));
  int row = 1;
  for (int level = 0; level < b; ++level) {
    const int blocks = 1 << level;
    const int width = d / blocks;
    const double value = 1.0 / std::sqrt(static_cast<double>(width));
    for (int k = 0; k < blocks; ++k, ++row) {
      g.row(row).segment(k * width, width / 2).setConstant(value);
      g.row(row).segment(k * width + width / 2, width / 2).setConstant(-value);
    }
  }
  return g;
}

namespace {

void finish_basis(ObservableBasis& basis) {
  basis.decompositions.clear();
  basis.kappa = 0;
  for (const auto& m : basis.matrices) {
    if (is_hermitian(m)) {
      auto dec = spectral_decompose(m);
      basis.kappa = std::max(basis.kappa, static_cast<int>(dec.size()));
      basis.decompositions.emplace_back(std::move(dec));
    } else {
      basis.decompositions.emplace_back(std::nullopt);
    }
  }
}

// Pair family on an orthonormal real frame: rows of `frame` play e_l or g_l.
// j = l1 * d + l2; diagonal g g', l1 < l2 symmetric, l1 > l2 antisymmetric imaginary.
void fill_pair_family(ObservableBasis& basis, const RealMatrix& frame) {
  using namespace std::complex_literals;
  const int d = basis.dim;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int l1 = 0; l1 < d; ++l1) {
    for (int l2 = 0; l2 < d; ++l2) {
      const ComplexVector g1 = frame.row(l1).transpose().cast<Complex>();
      const ComplexVector g2 = frame.row(l2).transpose().cast<Complex>();
      ComplexMatrix m;
      if (l1 == l2) {
        m = g1 * g1.transpose();
      } else if (l1 < l2) {
        m = inv_sqrt2 * (g1 * g2.transpose() + g2 * g1.transpose());
      } else {
        m = (1.0i * inv_sqrt2) * (g1 * g2.transpose() - g2 * g1.transpose());
      }
      basis.matrices.push_back(std::move(m));
      basis.labels.push_back({l1, l2});
    }
  }
}

}  // namespace

ObservableBasis build_basis(BasisKind kind, int d, const std::optional<RealMatrix>& gvectors) {
  if (d < 2) throw Error(ErrorCode::BadDimension, "basis dimension must be at least 2");
  if (static_cast<std::size_t>(d) > kMaxDim) throw Error(ErrorCode::DimensionOverflow, "basis dimension too large");
  ObservableBasis basis;
  basis.kind = kind;
  basis.dim = d;
  switch (kind) {
    case BasisKind::canonical:
      for (int l1 = 0; l1 < d; ++l1)
        for (int l2 = 0; l2 < d; ++l2) {
          ComplexMatrix m = ComplexMatrix::Zero(d, d);
          m(l1, l2) = 1.0;
          basis.matrices.push_back(std::move(m));
          basis.labels.push_back({l1, l2});
        }
      break;
    case BasisKind::hermitian:
      fill_pair_family(basis, RealMatrix::Identity(d, d));
      break;
    case BasisKind::gvector: {
      if (!gvectors) throw Error(ErrorCode::InvalidArgument, "gvector basis needs g-vectors");
      const RealMatrix& g = *gvectors;
      if (g.rows() != d || g.cols() != d)
        throw Error(ErrorCode::DimensionMismatch, "g-vector matrix must be d x d");
      const double gram_error = (g * g.transpose() - RealMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
      if (!(gram_error <= 1e-9))
        throw Error(ErrorCode::NonOrthonormalVectors,
                    "g-vectors fail the Gram check (max error " + std::to_string(gram_error) + ")");
      fill_pair_family(basis, g);
      break;
    }
    case BasisKind::pauli: {
      const int b = log2_dim(d);
      const std::size_t p = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
      for (std::size_t j = 0; j < p; ++j) {
        auto labels = pauli_labels(j, b);
        basis.matrices.push_back(pauli_matrix(labels));
        basis.labels.push_back(std::move(labels));
      }
      break;
    }
    case BasisKind::custom:
      throw Error(ErrorCode::InvalidArgument, "use make_custom_basis for custom families");
  }
  finish_basis(basis);
  return basis;
}

ObservableBasis make_custom_basis(std::vector<ComplexMatrix> matrices) {
  if (matrices.empty()) throw Error(ErrorCode::InvalidArgument, "custom basis needs at least one matrix");
  ObservableBasis basis;
  basis.kind = BasisKind::custom;
  basis.dim = static_cast<int>(matrices.front().rows());
  for (const auto& m : matrices)
    if (m.rows() != basis.dim || m.cols() != basis.dim)
      throw Error(ErrorCode::DimensionMismatch, "custom basis members must share one square shape");
  basis.matrices = std::move(matrices);
  basis.labels.resize(basis.matrices.size());
  for (std::size_t j = 0; j < basis.labels.size(); ++j) basis.labels[j] = {static_cast<int>(j)};
  finish_basis(basis);
  return basis;
}

OrthogonalityReport verify_orthogonal(const ObservableBasis& basis) {
  OrthogonalityReport report;
  report.min_norm_sq = std::numeric_limits<double>::infinity();
  report.max_norm_sq = 0.0;
  const std::size_t p = basis.size();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      const double value = std::abs(hs_inner(basis.matrices[j], basis.matrices[k]));
      if (j == k) {
        report.min_norm_sq = std::min(report.min_norm_sq, value);
        report.max_norm_sq = std::max(report.max_norm_sq, value);
      } else {
        report.max_offdiagonal = std::max(report.max_offdiagonal, value);
      }
    }
  }
  report.pass = report.max_offdiagonal <= 1e-9;
  return report;
}

double PauliTraceTable::max_deviation() const {
  const double half = dim / 2.0;
  double dev = 0.0;
  const std::size_t p = trace_plus.size();
  for (std::size_t j = 1; j < p; ++j) {
    dev = std::max({dev, std::abs(trace_plus[j] - half), std::abs(trace_minus[j] - half),
                    std::abs(self_plus[j] - half), std::abs(self_minus[j] + half)});
    for (std::size_t k = 1; k < p; ++k) {
      if (k == j) continue;
      dev = std::max({dev, std::abs(cross_plus(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))),
                      std::abs(cross_minus(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)))});
    }
  }
  return dev;
}

PauliTraceTable pauli_projection_traces(const ObservableBasis& basis) {
  if (basis.kind != BasisKind::pauli)
    throw Error(ErrorCode::WrongBasisKind, "projection trace table needs the Pauli basis");
  const std::size_t p = basis.size();
  const auto pe = static_cast<Eigen::Index>(p);
  PauliTraceTable table;
  table.dim = basis.dim;
  table.trace_plus.assign(p, 0.0);
  table.trace_minus.assign(p, 0.0);
  table.self_plus.assign(p, 0.0);
  table.self_minus.assign(p, 0.0);
  table.cross_plus = RealMatrix::Zero(pe, pe);
  table.cross_minus = RealMatrix::Zero(pe, pe);
  for (std::size_t j = 0; j < p; ++j) {
    const auto& dec = basis.decomposition(j);
    const ComplexMatrix& q_plus = dec.projections.front();
    table.trace_plus[j] = q_plus.trace().real();
    table.self_plus[j] = trace_product_real(basis.matrices[j], q_plus);
    const bool has_minus = dec.size() == 2;
    if (has_minus) {
      const ComplexMatrix& q_minus = dec.projections.back();
      table.trace_minus[j] = q_minus.trace().real();
      table.self_minus[j] = trace_product_real(basis.matrices[j], q_minus);
    }
    for (std::size_t k = 0; k < p; ++k) {
      const auto je = static_cast<Eigen::Index>(j), ke = static_cast<Eigen::Index>(k);
      table.cross_plus(je, ke) = trace_product_real(basis.matrices[k], q_plus);
      if (has_minus) table.cross_minus(je, ke) = trace_product_real(basis.matrices[k], dec.projections.back());
    }
  }
  return table;
}

SamplingDesign SamplingDesign::fixed() { return SamplingDesign{}; }

SamplingDesign SamplingDesign::uniform(std::size_t p) {
  std::vector<double> w(p, 1.0 / static_cast<double>(p));
  return random(w, w);
}

SamplingDesign SamplingDesign::random(std::vector<double> pi, std::vector<double> xi) {
  SamplingDesign design;
  design.mode = DesignMode::random;
  design.weights_regression = std::move(pi);
  design.weights_tomography = std::move(xi);
  return design;
}

void SamplingDesign::validate(std::size_t p) const {
  if (mode == DesignMode::fixed) return;
  for (const auto* w : {&weights_regression, &weights_tomography}) {
    if (w->size() != p) throw Error(ErrorCode::DesignMismatch, "design weights must have length p");
    double sum = 0.0;
    for (double x : *w) {
      if (!(x >= 0.0)) throw Error(ErrorCode::DesignMismatch, "design weights must be nonnegative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::DesignMismatch, "design weights must sum to 1");
  }
}

void write_basis(std::ostream& out, const ObservableBasis& basis) {
  out << to_string(basis.kind) << ' ' << basis.dim << ' ' << basis.size() << '\n';
  for (const auto& m : basis.matrices) write_matrix(out, m);
}

ObservableBasis read_basis(std::istream& in) {
  std::string kind_text;
  long d = 0, p = 0;
  if (!(in >> kind_text >> d >> p) || d <= 0 || p <= 0)
    throw Error(ErrorCode::ParseError, "basis header must be 'kind d p'");
  const BasisKind kind = parse_basis_kind(kind_text);
  std::vector<ComplexMatrix> matrices;
  for (long j = 0; j < p; ++j) {
    matrices.push_back(read_matrix(in));
    if (matrices.back().rows() != d) throw Error(ErrorCode::DimensionMismatch, "basis member has wrong dimension");
  }
  ObservableBasis basis = make_custom_basis(std::move(matrices));
  basis.kind = kind;
  if (kind == BasisKind::pauli && static_cast<std::size_t>(p) == static_cast<std::size_t>(d * d)) {
    const int b = log2_dim(static_cast<int>(d));
    for (std::size_t j = 0; j < basis.size(); ++j) basis.labels[j] = pauli_labels(j, b);
  } else if (kind != BasisKind::custom && p == d * d) {
    for (std::size_t j = 0; j < basis.size(); ++j)
      basis.labels[j] = {static_cast<int>(j / static_cast<std::size_t>(d)), static_cast<int>(j % static_cast<std::size_t>(d))};
  }
  return basis;
}

RealMatrix read_gvectors_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<double> values;
  double x = 0.0;
  while (in >> x) values.push_back(x);
  if (!in.eof()) throw Error(ErrorCode::ParseError, "non-numeric entry in " + path);
  const auto d = static_cast<long>(std::lround(std::sqrt(static_cast<double>(values.size()))));
  if (d <= 0 || static_cast<std::size_t>(d * d) != values.size())
    throw Error(ErrorCode::ParseError, "g-vector file must hold a square matrix");
  RealMatrix g(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) g(i, j) = values[static_cast<std::size_t>(i * d + j)];
  return g;
}

}  // namespace tomolab
