#include "tomolab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "tomolab/bases.hpp"
#include "tomolab/rng.hpp"

namespace tomolab {

std::vector<std::string> DensityCheck::violations() const {
  std::vector<std::string> out;
  if (!hermitian) out.emplace_back("NotHermitian");
  if (!psd) out.emplace_back("NotPSD");
  if (!unit_trace) out.emplace_back("TraceNotOne");
  return out;
}

namespace {

std::string describe(const DensityCheck& check) {
  std::string text;
  for (const auto& v : check.violations()) text += (text.empty() ? "" : ", ") + v;
  text += " (min eigenvalue " + std::to_string(check.min_eigenvalue) + ", trace " +
          std::to_string(check.trace) + ")";
  return text;
}

}  // namespace

DensityError::DensityError(DensityCheck check)
    : Error(ErrorCode::InvalidDensity, describe(check)), check_(check) {}

DensityCheck check_density(const ComplexMatrix& m, double tol) {
  DensityCheck check;
  if (m.rows() == 0 || m.rows() != m.cols()) return check;
  check.hermitian = is_hermitian(m, tol);
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  check.min_eigenvalue = solver.eigenvalues().minCoeff();
  check.psd = check.min_eigenvalue >= -tol;
  check.trace = m.trace().real();
  check.unit_trace = std::abs(m.trace() - Complex(1.0, 0.0)) <= tol;
  return check;
}

DensityMatrix validate_density(const ComplexMatrix& m, double tol) {
  const DensityCheck check = check_density(m, tol);
  if (!check.valid()) throw DensityError(check);
  return DensityMatrix(m);
}

DensityMatrix maximally_mixed(int d) {
  return validate_density(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix pauli_line_state(int d, std::size_t j_star, double beta) {
  const int b = log2_dim(d);
  if (j_star == 0) throw Error(ErrorCode::IdentityIndex, "j_star must be a non-identity Pauli index");
  if (!(std::abs(beta) < 1.0)) throw Error(ErrorCode::BetaOutOfRange, "|beta| must be below 1");
  const ComplexMatrix b_star = pauli_matrix(pauli_labels(j_star, b));
  const double dd = static_cast<double>(d);
  return validate_density(ComplexMatrix::Identity(d, d) / dd + (beta / dd) * b_star);
}

ComplexVector tilted_qubit_vector() {
  ComplexVector e(2);
  e << Complex(std::sqrt(6.0 / 7.0), 0.0), Complex(std::sqrt(1.0 / 14.0), std::sqrt(1.0 / 14.0));
  return e;
}

DensityMatrix tilted_product_state(int b) {
  if (b < 1) throw Error(ErrorCode::InvalidArgument, "tilted product state needs b >= 1");
  if (b > 10) throw Error(ErrorCode::DimensionOverflow, "2^b exceeds the dimension limit");
  const ComplexVector e = tilted_qubit_vector();
  ComplexMatrix u = e;
  for (int i = 1; i < b; ++i) u = tensor_product(u, e);
  return validate_density(u * u.adjoint());
}

DensityMatrix haar_rank1_state(int d) {
  const RealVector ones = RealVector::Ones(d);
  return validate_density((ones * ones.transpose()).cast<Complex>() / static_cast<double>(d));
}

DensityMatrix haar_rank2_state(int d) {
  log2_dim(d);
  const RealVector ones = RealVector::Ones(d);
  RealVector h = RealVector::Ones(d);
  h.tail(d / 2).setConstant(-1.0);
  const double dd = static_cast<double>(d);
  const RealMatrix rho = 3.0 * ones * ones.transpose() / (4.0 * dd) + h * h.transpose() / (4.0 * dd);
  return validate_density(rho.cast<Complex>());
}

std::vector<std::string> witness_names() {
  return {"cor2_line", "cor3_tilted", "remark8_haar_rank1", "remark8_haar_rank2"};
}

DensityMatrix named_witness(std::string_view name, int d) {
  if (name == "cor2_line") return pauli_line_state(d, 1, 0.5);
  if (name == "cor3_tilted") return tilted_product_state(log2_dim(d));
  if (name == "remark8_haar_rank1") return haar_rank1_state(d);
  if (name == "remark8_haar_rank2") return haar_rank2_state(d);
  throw Error(ErrorCode::InvalidArgument, "unknown witness '" + std::string(name) + "'");
}

std::vector<double> pauli_coefficients(const ComplexMatrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const int b = log2_dim(d);
  const std::size_t p = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  std::vector<double> alpha(p);
  for (std::size_t j = 0; j < p; ++j)
    alpha[j] = trace_product_real(rho, pauli_matrix(pauli_labels(j, b))) / d;
  return alpha;
}

std::string_view to_string(StateClass c) {
  switch (c) {
    case StateClass::entry_sparse: return "entry_sparse";
    case StateClass::pauli_sparse: return "pauli_sparse";
    case StateClass::low_rank: return "low_rank";
    case StateClass::low_rank_sparse_vec: return "low_rank_sparse_vec";
  }
  return "low_rank";
}

StateClass parse_state_class(std::string_view text) {
  for (auto c : {StateClass::entry_sparse, StateClass::pauli_sparse, StateClass::low_rank,
                 StateClass::low_rank_sparse_vec})
    if (text == to_string(c)) return c;
  throw Error(ErrorCode::ParseError, "unknown state class '" + std::string(text) + "'");
}

void StateClassSpec::validate() const {
  if (d < 2 || static_cast<std::size_t>(d) > kMaxDim) throw Error(ErrorCode::InfeasibleSpec, "dimension out of range");
  const int p = d * d;
  switch (state_class) {
    case StateClass::entry_sparse:
      if (s < 1 || s > p) throw Error(ErrorCode::InfeasibleSpec, "entry_sparse needs 1 <= s <= d^2");
      break;
    case StateClass::pauli_sparse:
      log2_dim(d);
      if (s < 1 || s > p) throw Error(ErrorCode::InfeasibleSpec, "pauli_sparse needs 1 <= s <= d^2");
      break;
    case StateClass::low_rank:
      if (r < 1 || r > d) throw Error(ErrorCode::InfeasibleSpec, "low_rank needs 1 <= r <= d");
      break;
    case StateClass::low_rank_sparse_vec:
      if (r < 1 || r > d) throw Error(ErrorCode::InfeasibleSpec, "low_rank_sparse_vec needs 1 <= r <= d");
      if (gamma < 1 || gamma > d) throw Error(ErrorCode::InfeasibleSpec, "low_rank_sparse_vec needs 1 <= gamma <= d");
      if (gvectors && (gvectors->rows() != d || gvectors->cols() != d))
        throw Error(ErrorCode::InfeasibleSpec, "g-vectors must be d x d");
      break;
  }
}

RealMatrix StateClassSpec::frame() const { return gvectors ? *gvectors : haar_vectors(d); }

namespace {

std::vector<double> dirichlet_ones(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& x : w) sum += (x = expo(rng));
  for (auto& x : w) x /= sum;
  return w;
}

std::vector<int> random_subset(int n, int k, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

// Support of k diagonal entries plus random Hermitian pairs among them;
// off-diagonal magnitudes keep the matrix diagonally dominant, hence PSD.
ComplexMatrix sample_entry_sparse(const StateClassSpec& spec, Rng& rng) {
  const int d = spec.d;
  std::uniform_int_distribution<int> pick_k(1, std::min(spec.s, d));
  const int k = pick_k(rng);
  const auto diag = random_subset(d, k, rng);

  std::vector<double> w = dirichlet_ones(static_cast<std::size_t>(k), rng);
  double floor_sum = 0.0;
  for (auto& x : w) floor_sum += (x += 0.05);
  for (auto& x : w) x /= floor_sum;

  std::vector<std::pair<int, int>> all_pairs;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) all_pairs.emplace_back(a, b);
  const int max_pairs = std::min<int>((spec.s - k) / 2, static_cast<int>(all_pairs.size()));
  int n_pairs = 0;
  if (max_pairs > 0) n_pairs = std::uniform_int_distribution<int>(0, max_pairs)(rng);
  std::vector<std::pair<int, int>> pairs;
  for (int idx : random_subset(static_cast<int>(all_pairs.size()), n_pairs, rng))
    pairs.push_back(all_pairs[static_cast<std::size_t>(idx)]);

  std::vector<int> degree(static_cast<std::size_t>(k), 0);
  for (auto [a, b] : pairs) ++degree[static_cast<std::size_t>(a)], ++degree[static_cast<std::size_t>(b)];

  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < k; ++a) rho(diag[static_cast<std::size_t>(a)], diag[static_cast<std::size_t>(a)]) = w[static_cast<std::size_t>(a)];
  std::uniform_real_distribution<double> scale(0.1, 0.9), phase(0.0, 2.0 * std::numbers::pi);
  for (auto [a, b] : pairs) {
    const double limit = std::min(w[static_cast<std::size_t>(a)] / degree[static_cast<std::size_t>(a)],
                                  w[static_cast<std::size_t>(b)] / degree[static_cast<std::size_t>(b)]);
    const Complex value = std::polar(scale(rng) * limit, phase(rng));
    rho(diag[static_cast<std::size_t>(a)], diag[static_cast<std::size_t>(b)]) = value;
    rho(diag[static_cast<std::size_t>(b)], diag[static_cast<std::size_t>(a)]) = std::conj(value);
  }
  return rho;
}

ComplexMatrix sample_pauli_sparse(const StateClassSpec& spec, Rng& rng) {
  const int d = spec.d;
  const int b = log2_dim(d);
  const ComplexMatrix identity = ComplexMatrix::Identity(d, d);
  if (spec.s == 1) return identity / static_cast<double>(d);
  const int p = d * d;
  const auto chosen = random_subset(p - 1, spec.s - 1, rng);
  std::uniform_real_distribution<double> coef(0.2, 1.0);
  std::bernoulli_distribution sign(0.5);
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (int idx : chosen) {
    const double c = sign(rng) ? coef(rng) : -coef(rng);
    a += c * pauli_matrix(pauli_labels(static_cast<std::size_t>(idx + 1), b));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues().minCoeff();  // traceless, so negative
  const double t = std::uniform_real_distribution<double>(0.1, 0.9)(rng) / std::abs(lowest);
  return (identity + t * a) / static_cast<double>(d);
}

ComplexMatrix haar_columns(int d, int r, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(d, r);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, r);
  // Fix phases with diag(R) so the columns are Haar distributed.
  const ComplexMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (int j = 0; j < r; ++j) {
    const Complex rjj = rr(j, j);
    if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

ComplexMatrix sample_low_rank(const StateClassSpec& spec, Rng& rng) {
  const ComplexMatrix u = haar_columns(spec.d, spec.r, rng);
  const auto xi = dirichlet_ones(static_cast<std::size_t>(spec.r), rng);
  ComplexMatrix rho = ComplexMatrix::Zero(spec.d, spec.d);
  for (int j = 0; j < spec.r; ++j) rho += xi[static_cast<std::size_t>(j)] * u.col(j) * u.col(j).adjoint();
  return rho;
}

ComplexMatrix sample_low_rank_sparse_vec(const StateClassSpec& spec, Rng& rng) {
  const int d = spec.d;
  const RealMatrix g = spec.frame();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> real_count(1, spec.gamma), imag_count(0, spec.gamma);
  const auto xi = dirichlet_ones(static_cast<std::size_t>(spec.r), rng);
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < spec.r; ++j) {
    RealVector re = RealVector::Zero(d), im = RealVector::Zero(d);
    for (int l : random_subset(d, real_count(rng), rng)) re += normal(rng) * g.row(l).transpose();
    for (int l : random_subset(d, imag_count(rng), rng)) im += normal(rng) * g.row(l).transpose();
    ComplexVector u(d);
    for (int i = 0; i < d; ++i) u[i] = Complex(re[i], im[i]);
    u /= u.norm();
    rho += xi[static_cast<std::size_t>(j)] * u * u.adjoint();
  }
  return rho;
}

}  // namespace

DensityMatrix sample_class(const StateClassSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.witness_id) return named_witness(*spec.witness_id, spec.d);
  Rng rng = make_substream(seed, 0, stream_tag::sampler);
  ComplexMatrix rho;
  switch (spec.state_class) {
    case StateClass::entry_sparse: rho = sample_entry_sparse(spec, rng); break;
    case StateClass::pauli_sparse: rho = sample_pauli_sparse(spec, rng); break;
    case StateClass::low_rank: rho = sample_low_rank(spec, rng); break;
    case StateClass::low_rank_sparse_vec: rho = sample_low_rank_sparse_vec(spec, rng); break;
  }
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return validate_density(rho);
}

int numerical_rank(const ComplexMatrix& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return static_cast<int>((solver.eigenvalues().array() > tol).count());
}

namespace {

int count_nonzero(const std::vector<double>& values, double tol) {
  return static_cast<int>(std::count_if(values.begin(), values.end(), [tol](double x) { return std::abs(x) > tol; }));
}

// For a pure state U U^dagger: is there a global phase for which the real and
// imaginary parts of U each use at most gamma of the g-vectors? The optimal
// phase zeroes the real or imaginary part of some coefficient, or is 0.
bool pure_state_sparse_in_frame(const ComplexVector& u, const RealMatrix& g, int gamma, double tol,
                                int& best_support) {
  const ComplexVector c = g.cast<Complex>() * u;  // coefficients <g_l, U>
  std::vector<double> phases{0.0};
  for (Eigen::Index l = 0; l < c.size(); ++l) {
    if (std::abs(c[l]) <= tol) continue;
    const double arg = std::arg(c[l]);
    for (int q = 0; q < 4; ++q) phases.push_back(-arg + q * std::numbers::pi / 2);
  }
  best_support = static_cast<int>(2 * c.size());
  bool ok = false;
  for (double phi : phases) {
    const ComplexVector rotated = c * std::polar(1.0, phi);
    int re = 0, im = 0;
    for (Eigen::Index l = 0; l < rotated.size(); ++l) {
      re += std::abs(rotated[l].real()) > tol;
      im += std::abs(rotated[l].imag()) > tol;
    }
    best_support = std::min(best_support, re + im);
    ok = ok || (re <= gamma && im <= gamma);
  }
  return ok;
}

}  // namespace

MembershipReport class_membership(const DensityMatrix& rho, const StateClassSpec& spec, double tol) {
  MembershipReport report;
  const ComplexMatrix& m = rho.matrix();
  if (m.rows() != spec.d) {
    report.detail = "dimension mismatch";
    return report;
  }
  switch (spec.state_class) {
    case StateClass::entry_sparse: {
      report.observed = static_cast<int>((m.array().abs() > tol).count());
      report.limit = spec.s;
      report.member = report.observed <= report.limit;
      report.detail = "nonzero entries";
      break;
    }
    case StateClass::pauli_sparse: {
      report.observed = count_nonzero(pauli_coefficients(m), tol);
      report.limit = spec.s;
      report.member = report.observed <= report.limit;
      report.detail = "nonzero Pauli coefficients";
      break;
    }
    case StateClass::low_rank: {
      report.observed = numerical_rank(m, tol);
      report.limit = spec.r;
      report.member = report.observed <= report.limit;
      report.detail = "numerical rank";
      break;
    }
    case StateClass::low_rank_sparse_vec: {
      const int rank = numerical_rank(m, tol);
      const RealMatrix g = spec.frame();
      if (rank > spec.r) {
        report.observed = rank;
        report.limit = spec.r;
        report.detail = "numerical rank exceeds r";
        break;
      }
      if (rank == 1) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()));
        const ComplexVector u = solver.eigenvectors().col(m.rows() - 1);
        int support = 0;
        report.member = pure_state_sparse_in_frame(u, g, spec.gamma, 1e-7, support);
        report.observed = support;
        report.limit = 2 * spec.gamma;
        report.detail = "real/imaginary g-support of the eigenvector";
        break;
      }
      // Necessary condition: the range touches at most 2 r gamma g-vectors.
      const ComplexMatrix in_frame = g.cast<Complex>() * m * g.transpose().cast<Complex>();
      int touched = 0;
      for (Eigen::Index l = 0; l < in_frame.rows(); ++l) touched += in_frame(l, l).real() > tol;
      report.exact = false;
      report.observed = touched;
      report.limit = 2 * spec.r * spec.gamma;
      report.member = touched <= report.limit;
      report.detail = "g-vectors touched by the range (necessary condition)";
      break;
    }
  }
  return report;
}

}  // namespace tomolab
