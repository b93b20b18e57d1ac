#include "tomolab/equivalence.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "tomolab/error.hpp"
#include "tomolab/parallel.hpp"

namespace tomolab {

namespace {

constexpr double kTwoPow32 = 4294967296.0;

std::vector<double> active_theta(std::span<const double> theta, const std::vector<std::size_t>& active) {
  std::vector<double> out;
  out.reserve(active.size());
  double total = 0.0;
  for (auto a : active) total += theta[a];
  for (auto a : active) out.push_back(theta[a] / total);
  return out;
}

void check_theta(std::span<const double> theta) {
  if (theta.empty()) throw Error(ErrorCode::InvalidArgument, "empty cell probabilities");
  double total = 0.0;
  for (double t : theta) {
    if (!(t >= -1e-12) || t > 1.0 + 1e-12) throw Error(ErrorCode::InvalidArgument, "cell probability outside [0,1]");
    total += t;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "cell probabilities do not sum to 1");
}

}  // namespace

std::vector<std::size_t> active_cells(std::span<const double> theta, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < theta.size(); ++a)
    if (theta[a] > tol && theta[a] < 1.0 - tol) out.push_back(a);
  return out;
}

double uniform_perturbation(Rng& rng) {
  const auto i = static_cast<double>(rng() >> 32);
  return (i + 0.5) / kTwoPow32 - 0.5;
}

PerturbedCounts kernel_K0(const CountRecord& record, Rng& rng) {
  PerturbedCounts out;
  out.m = record.m;
  out.source_counts = record.counts;
  out.values.assign(record.counts.begin(), record.counts.end());
  const std::size_t r = record.counts.size();
  if (r <= 1) return out;

  std::vector<std::size_t> active;
  if (!record.cell_probabilities.empty()) {
    if (record.cell_probabilities.size() != r)
      throw Error(ErrorCode::LengthMismatch, "cell probabilities and counts differ in length");
    active = active_cells(record.cell_probabilities);
  } else {
    active.resize(r);
    std::iota(active.begin(), active.end(), std::size_t{0});
  }
  if (active.size() <= 1) return out;

  for (std::size_t i = 0; i + 1 < active.size(); ++i) out.values[active[i]] += uniform_perturbation(rng);
  double rest = 0.0;
  for (std::size_t a = 0; a < r; ++a)
    if (a != active.back()) rest += out.values[a];
  out.values[active.back()] = static_cast<double>(record.m) - rest;
  return out;
}

PerturbedCounts kernel_K0(const CountRecord& record, std::uint64_t seed) {
  Rng rng = make_substream(seed, 0, stream_tag::perturb);
  return kernel_K0(record, rng);
}

std::vector<std::int64_t> kernel_K1(std::span<const double> values, std::int64_t m) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "empty value vector");
  std::vector<std::int64_t> out(values.size());
  std::int64_t partial = 0;
  for (std::size_t a = 0; a + 1 < values.size(); ++a) {
    if (!std::isfinite(values[a])) throw Error(ErrorCode::InvalidArgument, "non-finite value");
    out[a] = static_cast<std::int64_t>(std::round(values[a]));
    partial += out[a];
  }
  out.back() = m - partial;
  for (auto c : out)
    if (c < 0) throw Error(ErrorCode::NegativeResult, "round-off produced a negative count");
  return out;
}

FineRegressionDataset translate_qst_to_regression(const TomographyDataset& data, std::uint64_t seed) {
  FineRegressionDataset out;
  out.design = data.design;
  out.m = data.m;
  const std::size_t n = data.records.size();
  out.samples.resize(n);
  out.cell_probabilities.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const auto& rec = data.records[k];
    if (rec.m <= 0) throw Error(ErrorCode::InvalidArgument, "record with m <= 0");
    Rng rng = make_substream(seed, k, stream_tag::perturb);
    auto pert = kernel_K0(rec, rng);
    auto& s = out.samples[k];
    s.design_index = rec.observable_index;
    s.y.resize(pert.values.size());
    const double m = static_cast<double>(rec.m);
    for (std::size_t a = 0; a < pert.values.size(); ++a) s.y[a] = pert.values[a] / m;
    out.cell_probabilities[k] = rec.cell_probabilities;
  });
  return out;
}

RegressionToQstResult translate_regression_to_qst(const FineRegressionDataset& fine,
                                                  std::span<const std::vector<double>> eigenvalues_by_index) {
  RegressionToQstResult out;
  out.data.design = fine.design;
  out.data.m = fine.m;
  const double m = static_cast<double>(fine.m);
  for (std::size_t k = 0; k < fine.samples.size(); ++k) {
    const auto& s = fine.samples[k];
    std::vector<double> scaled(s.y.size());
    for (std::size_t a = 0; a < s.y.size(); ++a) scaled[a] = m * s.y[a];
    CountRecord rec;
    try {
      rec.counts = kernel_K1(scaled, fine.m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NegativeResult) throw;
      ++out.dropped;
      out.dropped_indices.push_back(k);
      continue;
    }
    rec.observable_index = s.design_index;
    rec.m = fine.m;
    if (s.design_index < eigenvalues_by_index.size()) {
      rec.eigenvalues = eigenvalues_by_index[s.design_index];
      if (rec.eigenvalues.size() != rec.counts.size())
        throw Error(ErrorCode::LengthMismatch, "eigenvalue list does not match the sample length");
    }
    if (k < fine.cell_probabilities.size()) rec.cell_probabilities = fine.cell_probabilities[k];
    out.data.records.push_back(std::move(rec));
  }
  out.data.n = out.data.records.size();
  return out;
}

// ---------------------------------------------------------------------------

double multinomial_log_pmf(std::int64_t m, std::span<const double> theta, std::span<const std::int64_t> counts) {
  if (theta.size() != counts.size()) throw Error(ErrorCode::LengthMismatch, "theta and counts differ in length");
  std::int64_t total = 0;
  double lp = std::lgamma(static_cast<double>(m) + 1.0);
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] < 0) return -std::numeric_limits<double>::infinity();
    total += counts[a];
    if (counts[a] == 0) continue;
    if (theta[a] <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += static_cast<double>(counts[a]) * std::log(theta[a]) - std::lgamma(static_cast<double>(counts[a]) + 1.0);
  }
  if (total != m) return -std::numeric_limits<double>::infinity();
  return lp;
}

namespace {

bool rounded_counts(std::int64_t m, std::span<const double> x, std::size_t r, std::vector<std::int64_t>& counts) {
  if (x.size() + 1 != r) throw Error(ErrorCode::LengthMismatch, "point must have r - 1 coordinates");
  counts.assign(r, 0);
  std::int64_t partial = 0;
  for (std::size_t a = 0; a + 1 < r; ++a) {
    const double c = std::round(x[a]);
    if (c < 0.0 || c > static_cast<double>(m)) return false;
    counts[a] = static_cast<std::int64_t>(c);
    partial += counts[a];
  }
  counts.back() = m - partial;
  return counts.back() >= 0;
}

double binomial_log_pmf(std::int64_t n, double p, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  double lp = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
              std::lgamma(static_cast<double>(n - k) + 1.0);
  if (k > 0) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += static_cast<double>(k) * std::log(p);
  }
  if (n - k > 0) {
    if (p >= 1.0) return -std::numeric_limits<double>::infinity();
    lp += static_cast<double>(n - k) * std::log1p(-p);
  }
  return lp;
}

}  // namespace

double perturbed_density(std::int64_t m, std::span<const double> theta, std::span<const double> x) {
  std::vector<std::int64_t> counts;
  if (!rounded_counts(m, x, theta.size(), counts)) return 0.0;
  return std::exp(multinomial_log_pmf(m, theta, counts));
}

double perturbed_density_conditional(std::int64_t m, std::span<const double> theta, std::span<const double> x) {
  std::vector<std::int64_t> counts;
  if (!rounded_counts(m, x, theta.size(), counts)) return 0.0;
  double tail = std::accumulate(theta.begin(), theta.end(), 0.0);
  std::int64_t remaining = m;
  double lp = 0.0;
  for (std::size_t a = 0; a + 1 < theta.size(); ++a) {
    const double b = tail > 0.0 ? std::clamp(theta[a] / tail, 0.0, 1.0) : 0.0;
    lp += binomial_log_pmf(remaining, b, counts[a]);
    remaining -= counts[a];
    tail -= theta[a];
  }
  // last cell is determined; it has probability 1 only if the remaining tail mass is positive or nothing remains
  if (remaining > 0 && theta.back() <= 0.0) return 0.0;
  return std::exp(lp);
}

MatchedGaussian::MatchedGaussian(std::int64_t m, std::span<const double> theta) {
  if (theta.size() < 2) throw Error(ErrorCode::UnsupportedArity, "need at least two cells");
  const auto q = static_cast<Eigen::Index>(theta.size() - 1);
  const double md = static_cast<double>(m);
  mean_.resize(q);
  cov_.resize(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    mean_(i) = md * theta[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < q; ++j) {
      const double ti = theta[static_cast<std::size_t>(i)], tj = theta[static_cast<std::size_t>(j)];
      cov_(i, j) = md * ((i == j ? ti : 0.0) - ti * tj);
    }
  }
  Eigen::LLT<RealMatrix> llt(cov_);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "singular normal covariance");
  chol_ = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) log_det += 2.0 * std::log(chol_(i, i));
  log_norm_ = -0.5 * (static_cast<double>(q) * std::log(2.0 * std::numbers::pi) + log_det);
}

double MatchedGaussian::mahalanobis(std::span<const double> x) const {
  const auto q = mean_.size();
  if (static_cast<Eigen::Index>(x.size()) != q) throw Error(ErrorCode::LengthMismatch, "point dimension mismatch");
  RealVector d(q);
  for (Eigen::Index i = 0; i < q; ++i) d(i) = x[static_cast<std::size_t>(i)] - mean_(i);
  return chol_.triangularView<Eigen::Lower>().solve(d).norm();
}

double MatchedGaussian::log_density(std::span<const double> x) const {
  const double r = mahalanobis(x);
  return log_norm_ - 0.5 * r * r;
}

double MatchedGaussian::density(std::span<const double> x) const { return std::exp(log_density(x)); }

// ---------------------------------------------------------------------------

void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
  RealMatrix jac = RealMatrix::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(jac);
  nodes.resize(static_cast<std::size_t>(order));
  weights.resize(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    nodes[static_cast<std::size_t>(k)] = 0.5 * es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    weights[static_cast<std::size_t>(k)] = v * v;  // sums to 1 on the unit interval
  }
}

namespace {

struct CellSums {
  double h2_hi = 0.0;
  double h2_lo = 0.0;
  double f_mass = 0.0;
  double g_mass = 0.0;
};

struct Rule {
  std::vector<double> nodes, weights;
};

// Tensor-product quadrature of sqrt(g) and g over one unit cell.
void integrate_cell(const MatchedGaussian& gauss, const std::vector<double>& centre, const Rule& rule,
                    std::vector<double>& x, double& int_sqrt_g, double& int_g) {
  const std::size_t q = centre.size();
  const std::size_t n = rule.nodes.size();
  std::vector<std::size_t> idx(q, 0);
  int_sqrt_g = 0.0;
  int_g = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < q; ++i) {
      x[i] = centre[i] + rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    const double lg = gauss.log_density(x);
    int_sqrt_g += w * std::exp(0.5 * lg);
    int_g += w * std::exp(lg);
    std::size_t i = 0;
    while (i < q && ++idx[i] == n) idx[i++] = 0;
    if (i == q) break;
  }
}

}  // namespace

DistanceEstimate hellinger_perturbed_vs_gaussian(std::int64_t m, std::span<const double> theta,
                                                 const QuadratureSpec& spec) {
  check_theta(theta);
  if (m <= 0) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (theta.size() > 4) throw Error(ErrorCode::UnsupportedArity, "quadrature supports r <= 4");
  if (spec.order < 1 || spec.reference_order < 1 || !(spec.window_sigmas > 0.0))
    throw Error(ErrorCode::InvalidArgument, "invalid quadrature settings");

  DistanceEstimate est;
  est.kind = DistanceKind::hellinger;
  est.method = DistanceMethod::quadrature;
  est.m = m;
  est.theta.assign(theta.begin(), theta.end());

  const auto active = active_cells(theta);
  if (active.size() <= 1) return est;

  const auto th = active_theta(theta, active);
  const std::size_t q = th.size() - 1;
  const MatchedGaussian gauss(m, th);

  Rule hi, lo;
  gauss_legendre_unit(spec.order, hi.nodes, hi.weights);
  gauss_legendre_unit(spec.reference_order, lo.nodes, lo.weights);

  // lattice box covering the window, with an ellipsoid cut slightly wider than it
  std::vector<std::int64_t> lo_idx(q), hi_idx(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double sd = std::sqrt(gauss.covariance()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    const double mu = gauss.mean()(static_cast<Eigen::Index>(i));
    lo_idx[i] = static_cast<std::int64_t>(std::floor(mu - spec.window_sigmas * sd));
    hi_idx[i] = static_cast<std::int64_t>(std::ceil(mu + spec.window_sigmas * sd));
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> cov_es(gauss.covariance(), Eigen::EigenvaluesOnly);
  const double lambda_min = cov_es.eigenvalues()(0);
  const double cut = spec.window_sigmas + 0.5 * std::sqrt(static_cast<double>(q)) / std::sqrt(lambda_min);

  const auto slices = static_cast<std::size_t>(hi_idx[0] - lo_idx[0] + 1);
  std::vector<CellSums> partial(slices);
  parallel_for(slices, [&](std::size_t s) {
    CellSums acc;
    std::vector<double> centre(q), x(q);
    std::vector<std::int64_t> cell(q), counts(th.size());
    cell[0] = lo_idx[0] + static_cast<std::int64_t>(s);
    for (std::size_t i = 1; i < q; ++i) cell[i] = lo_idx[i];
    while (true) {
      for (std::size_t i = 0; i < q; ++i) centre[i] = static_cast<double>(cell[i]);
      if (gauss.mahalanobis(centre) <= cut) {
        double f = 0.0;
        std::int64_t partial_sum = 0;
        bool inside = true;
        for (std::size_t i = 0; i < q; ++i) {
          if (cell[i] < 0) inside = false;
          counts[i] = cell[i];
          partial_sum += cell[i];
        }
        counts[q] = m - partial_sum;
        if (inside && counts[q] >= 0) f = std::exp(multinomial_log_pmf(m, th, counts));
        const double sf = std::sqrt(f);
        double sg_hi, g_hi, sg_lo, g_lo;
        integrate_cell(gauss, centre, hi, x, sg_hi, g_hi);
        integrate_cell(gauss, centre, lo, x, sg_lo, g_lo);
        // int (sqrt f - sqrt g)^2 over a unit cell where f is constant
        acc.h2_hi += f - 2.0 * sf * sg_hi + g_hi;
        acc.h2_lo += f - 2.0 * sf * sg_lo + g_lo;
        acc.f_mass += f;
        acc.g_mass += g_hi;
      }
      std::size_t i = 1;
      while (i < q && ++cell[i] > hi_idx[i]) {
        cell[i] = lo_idx[i];
        ++i;
      }
      if (i >= q) break;
    }
    partial[s] = acc;
  });

  CellSums total;
  for (const auto& p : partial) {
    total.h2_hi += p.h2_hi;
    total.h2_lo += p.h2_lo;
    total.f_mass += p.f_mass;
    total.g_mass += p.g_mass;
  }
  const double h_hi = std::sqrt(std::max(0.0, total.h2_hi));
  const double h_lo = std::sqrt(std::max(0.0, total.h2_lo));
  // outside the window (sqrt f - sqrt g)^2 <= f + g
  const double tail = std::max(0.0, 1.0 - total.f_mass) + std::max(0.0, 1.0 - total.g_mass);
  est.value = h_hi;
  est.error_bar = std::abs(h_hi - h_lo) + (std::sqrt(total.h2_hi + tail) - h_hi);
  return est;
}

double product_hellinger_bound(std::span<const double> h_squares) {
  double s = 0.0;
  for (double h2 : h_squares) {
    if (h2 < 0.0) throw Error(ErrorCode::InvalidArgument, "negative squared distance");
    s += h2;
  }
  return std::sqrt(s);
}

double product_hellinger_bound(std::span<const HellingerTerm> terms) {
  double s = 0.0;
  for (const auto& t : terms) {
    if (t.active_cells <= 1) continue;
    if (t.h_square < 0.0) throw Error(ErrorCode::InvalidArgument, "negative squared distance");
    s += t.h_square;
  }
  return std::sqrt(s);
}

DistanceEstimate tv_monte_carlo(const PointSampler& sampler_p, const PointDensity& density_p,
                                const PointDensity& density_q, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  std::vector<double> terms(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng = make_substream(seed, i, stream_tag::sampler);
    const auto x = sampler_p(rng);
    const double p = density_p(x);
    if (!(p > 0.0)) throw Error(ErrorCode::ZeroDensity, "sampling density vanishes at a draw");
    const double q = density_q(x);
    terms[i] = std::max(0.0, 1.0 - q / p);
  });
  double mean = 0.0;
  for (double t : terms) mean += t;
  mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (double t : terms) var += (t - mean) * (t - mean);
  var /= static_cast<double>(n_samples - 1);
  DistanceEstimate est;
  est.kind = DistanceKind::tv;
  est.method = DistanceMethod::monte_carlo;
  est.value = mean;
  est.error_bar = 1.96 * std::sqrt(var / static_cast<double>(n_samples));
  return est;
}

DistanceEstimate tv_perturbed_vs_gaussian(std::int64_t m, std::span<const double> theta, std::size_t n_samples,
                                          std::uint64_t seed) {
  check_theta(theta);
  const auto active = active_cells(theta);
  DistanceEstimate est;
  if (active.size() <= 1) {
    est.kind = DistanceKind::tv;
    est.method = DistanceMethod::monte_carlo;
  } else {
    const auto th = active_theta(theta, active);
    const MatchedGaussian gauss(m, th);
    const std::size_t q = th.size() - 1;
    auto sampler = [&](Rng& rng) {
      const auto u = multinomial_draw(m, th, rng);
      std::vector<double> x(q);
      for (std::size_t a = 0; a < q; ++a) x[a] = static_cast<double>(u[a]) + uniform_perturbation(rng);
      return x;
    };
    auto dp = [&](std::span<const double> x) { return perturbed_density(m, th, x); };
    auto dq = [&](std::span<const double> x) { return gauss.density(x); };
    est = tv_monte_carlo(sampler, dp, dq, n_samples, seed);
  }
  est.m = m;
  est.theta.assign(theta.begin(), theta.end());
  return est;
}

// ---------------------------------------------------------------------------

double conditional_tv_bound(double marginal_gap, std::span<const WeightedTv> conditional_tvs) {
  double s = marginal_gap;
  for (const auto& c : conditional_tvs) s += c.weight * c.tv;
  return s;
}

namespace {

void check_law_shapes(const TwoStageLaw& f, const TwoStageLaw& g) {
  if (f.marginal.size() != g.marginal.size() || f.conditional.size() != f.marginal.size() ||
      g.conditional.size() != g.marginal.size())
    throw Error(ErrorCode::LengthMismatch, "two-stage laws have different shapes");
  for (std::size_t x = 0; x < f.marginal.size(); ++x)
    if (f.conditional[x].size() != g.conditional[x].size())
      throw Error(ErrorCode::LengthMismatch, "conditional supports differ");
}

}  // namespace

double exact_tv(const TwoStageLaw& f, const TwoStageLaw& g) {
  check_law_shapes(f, g);
  double s = 0.0;
  for (std::size_t x = 0; x < f.marginal.size(); ++x)
    for (std::size_t y = 0; y < f.conditional[x].size(); ++y)
      s += std::abs(f.marginal[x] * f.conditional[x][y] - g.marginal[x] * g.conditional[x][y]);
  return 0.5 * s;
}

double marginal_ratio_gap(const TwoStageLaw& f, const TwoStageLaw& g) {
  check_law_shapes(f, g);
  double gap = 0.0;
  for (std::size_t x = 0; x < f.marginal.size(); ++x) {
    if (g.marginal[x] <= 0.0) {
      if (f.marginal[x] > 0.0) throw Error(ErrorCode::ZeroWeight, "reference marginal vanishes");
      continue;
    }
    gap = std::max(gap, std::abs(1.0 - f.marginal[x] / g.marginal[x]));
  }
  return gap;
}

double two_stage_tv_bound(const TwoStageLaw& f, const TwoStageLaw& g) {
  const double gap = marginal_ratio_gap(f, g);
  std::vector<WeightedTv> terms;
  for (std::size_t x = 0; x < f.marginal.size(); ++x) {
    double d = 0.0;
    for (std::size_t y = 0; y < f.conditional[x].size(); ++y) d += std::abs(f.conditional[x][y] - g.conditional[x][y]);
    terms.push_back({f.marginal[x], 0.5 * d});
  }
  return conditional_tv_bound(gap, terms);
}

// ---------------------------------------------------------------------------

double fit_log_log_slope(std::span<const double> x, std::span<const double> y, double* intercept) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "x and y differ in length");
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log-log fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

ScalingReport scaling_from_values(std::span<const std::int64_t> m_grid, std::span<const double> h_values,
                                  std::span<const double> error_bars) {
  if (m_grid.size() < 4) throw Error(ErrorCode::InvalidArgument, "scaling study needs at least four m values");
  if (h_values.size() != m_grid.size() || (!error_bars.empty() && error_bars.size() != m_grid.size()))
    throw Error(ErrorCode::LengthMismatch, "grid and values differ in length");
  ScalingReport rep;
  rep.m_grid.assign(m_grid.begin(), m_grid.end());
  rep.h_values.assign(h_values.begin(), h_values.end());
  if (error_bars.empty())
    rep.error_bars.assign(m_grid.size(), 0.0);
  else
    rep.error_bars.assign(error_bars.begin(), error_bars.end());
  std::vector<double> xs(m_grid.begin(), m_grid.end());
  rep.slope = fit_log_log_slope(xs, rep.h_values, &rep.intercept);
  rep.pass = rep.slope >= rep.band_low && rep.slope <= rep.band_high;
  return rep;
}

ScalingReport scaling_study(std::span<const double> theta, std::span<const std::int64_t> m_grid,
                            const QuadratureSpec& spec) {
  if (m_grid.size() < 4) throw Error(ErrorCode::InvalidArgument, "scaling study needs at least four m values");
  std::vector<double> h, err;
  for (auto m : m_grid) {
    const auto est = hellinger_perturbed_vs_gaussian(m, theta, spec);
    h.push_back(est.value);
    err.push_back(est.error_bar);
  }
  auto rep = scaling_from_values(m_grid, h, err);
  rep.theta.assign(theta.begin(), theta.end());
  return rep;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  out << "m,H,error_bar\n";
  for (std::size_t i = 0; i < report.m_grid.size(); ++i)
    out << report.m_grid[i] << ',' << format_double(report.h_values[i]) << ','
        << format_double(report.error_bars[i]) << '\n';
}

std::string scaling_summary_json(const ScalingReport& report) {
  nlohmann::json j;
  j["theta"] = report.theta;
  j["m_grid"] = report.m_grid;
  j["H"] = report.h_values;
  j["error_bar"] = report.error_bars;
  j["slope"] = report.slope;
  j["intercept"] = report.intercept;
  j["band"] = {report.band_low, report.band_high};
  j["pass"] = report.pass;
  return j.dump(2);
}

std::string distance_fixture_json(const DistanceEstimate& estimate) {
  nlohmann::json j;
  j["value"] = estimate.value;
  j["kind"] = estimate.kind == DistanceKind::hellinger ? "hellinger" : "tv";
  j["method"] = estimate.method == DistanceMethod::quadrature ? "quadrature" : "monte_carlo";
  j["error_bar"] = estimate.error_bar;
  j["m"] = estimate.m;
  j["theta"] = estimate.theta;
  return j.dump(2);
}

}  // namespace tomolab
