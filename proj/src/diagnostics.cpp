#include "tomolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tomolab/error.hpp"
#include "tomolab/parallel.hpp"
#include "tomolab/rng.hpp"

namespace tomolab {

std::size_t ActiveIndexReport::nondegenerate_count() const {
  return static_cast<std::size_t>(std::count(nondegenerate.begin(), nondegenerate.end(), true));
}

ActiveIndexReport active_index_set(const DensityMatrix& rho, const ObservableBasis& basis, double tol) {
  if (!(tol > 0.0 && tol < 0.1)) throw Error(ErrorCode::InvalidArgument, "tolerance must lie in (0, 0.1)");
  if (rho.dim() != basis.dim) throw Error(ErrorCode::DimensionMismatch, "state and basis dimensions differ");
  const std::size_t p = basis.size();
  ActiveIndexReport rep;
  rep.active.resize(p);
  rep.traces.resize(p);
  rep.cardinality.assign(p, 0);
  rep.nondegenerate.assign(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    if (!basis.measurable(j)) continue;
    const auto& dec = basis.decomposition(j);
    rep.max_rj = std::max(rep.max_rj, static_cast<int>(dec.size()));
    for (std::size_t a = 0; a < dec.size(); ++a) {
      const double t = trace_product_real(dec.projections[a], rho.matrix());
      rep.traces[j].push_back(t);
      if (t > tol && t < 1.0 - tol) rep.active[j].push_back(a);
    }
    rep.cardinality[j] = rep.active[j].size();
    rep.nondegenerate[j] = rep.cardinality[j] >= 2;
  }
  return rep;
}

std::string_view to_string(WeightSource w) {
  switch (w) {
    case WeightSource::uniform: return "uniform";
    case WeightSource::regression: return "regression";
    case WeightSource::tomography: return "tomography";
    case WeightSource::custom: return "custom";
  }
  return "custom";
}

ZetaReport zeta_fraction(std::span<const DensityMatrix> states, const ObservableBasis& basis,
                         const ZetaOptions& options) {
  const std::size_t p = basis.size();
  ZetaReport rep;
  rep.source = options.weights.empty() ? WeightSource::uniform : options.source;
  if (options.weights.empty()) {
    rep.weights.assign(p, 1.0 / static_cast<double>(p));
  } else {
    if (options.weights.size() != p) throw Error(ErrorCode::LengthMismatch, "weights must have length p");
    double s = 0.0;
    for (double w : options.weights) {
      if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "negative weight");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "weights must sum to 1");
    rep.weights = options.weights;
  }
  rep.c3.c0 = options.c0;
  rep.c3.c1 = options.c1;

  std::vector<ActiveIndexReport> reports(states.size());
  parallel_for(states.size(), [&](std::size_t i) { reports[i] = active_index_set(states[i], basis, options.tol); });

  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& ar = reports[i];
    const std::size_t count = ar.nondegenerate_count();
    double fraction = 0.0;
    if (options.weights.empty()) {
      fraction = static_cast<double>(count) / static_cast<double>(p);
    } else {
      for (std::size_t j = 0; j < p; ++j)
        if (ar.nondegenerate[j]) fraction += rep.weights[j];
    }
    rep.counts.push_back(count);
    rep.fractions.push_back(fraction);
    rep.zeta = std::max(rep.zeta, fraction);
    rep.max_rj = std::max(rep.max_rj, ar.max_rj);
    for (std::size_t j = 0; j < p; ++j)
      for (auto a : ar.active[j]) {
        const double t = ar.traces[j][a];
        rep.c3.min_active_trace = std::min(rep.c3.min_active_trace, t);
        rep.c3.max_active_trace = std::max(rep.c3.max_active_trace, t);
        if (t < options.c0 || t > options.c1) rep.c3.within = false;
      }
    rep.witnesses.push_back(i < options.names.size() ? options.names[i] : "state" + std::to_string(i));
  }
  rep.zeta = std::min(rep.zeta, 1.0);
  return rep;
}

double gamma_p(std::span<const double> pi, std::span<const double> xi) {
  if (pi.size() != xi.size()) throw Error(ErrorCode::LengthMismatch, "design weights differ in length");
  if (pi.empty()) throw Error(ErrorCode::InvalidArgument, "empty design weights");
  double g = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(pi[j] > 0.0) || !(xi[j] > 0.0)) throw Error(ErrorCode::ZeroWeight, "design weights must be positive");
    g = std::max(g, std::abs(1.0 - pi[j] / xi[j]) + std::abs(1.0 - xi[j] / pi[j]));
  }
  return g;
}

std::string_view to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::random: return "random";
    case BoundVariant::uniform: return "uniform";
    case BoundVariant::fixed: return "fixed";
  }
  return "random";
}

BoundVariant parse_bound_variant(std::string_view text) {
  if (text == "random") return BoundVariant::random;
  if (text == "uniform") return BoundVariant::uniform;
  if (text == "fixed") return BoundVariant::fixed;
  throw Error(ErrorCode::InvalidArgument, "unknown bound variant '" + std::string(text) + "'");
}

DeficiencyBoundReport deficiency_bound(std::int64_t n, std::int64_t m, std::int64_t p, int kappa, double gamma,
                                       double zeta, double C, BoundVariant variant) {
  if (n < 0 || p < 0 || kappa < 0 || gamma < 0.0 || zeta < 0.0) throw Error(ErrorCode::InvalidArgument, "negative input");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be positive");
  DeficiencyBoundReport rep;
  rep.n = n;
  rep.m = m;
  rep.p = p;
  rep.kappa = kappa;
  rep.gamma_p = gamma;
  rep.zeta = zeta;
  rep.C = C;
  rep.variant = variant;
  rep.bound_uniform = C * std::sqrt(static_cast<double>(n) * zeta / static_cast<double>(m));
  rep.bound_random = static_cast<double>(n) * gamma + rep.bound_uniform;
  return rep;
}

IdentifiabilityReport identifiability_check(std::int64_t n, std::int64_t m, int d, int r) {
  if (n < 1 || m < 1 || d < 1 || r < 1) throw Error(ErrorCode::InvalidArgument, "inputs must be positive");
  IdentifiabilityReport rep;
  rep.n = n;
  rep.m = m;
  rep.d = d;
  rep.r = r;
  rep.free_parameters = static_cast<std::int64_t>(d) * d - 1;
  rep.individual_n = n * (r - 1) >= rep.free_parameters;
  rep.individual_m = m >= r - 1;
  rep.summarized_n = n >= rep.free_parameters;
  rep.product = m * n >= rep.free_parameters;
  return rep;
}

int diagonal_support(const DensityMatrix& rho, double tol) {
  int s = 0;
  for (int i = 0; i < rho.dim(); ++i)
    if (std::abs(rho.matrix()(i, i)) > tol) ++s;
  return s;
}

// ---------------------------------------------------------------------------

bool CorollaryReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CorollaryCheck& c) { return c.pass; });
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

constexpr std::uint64_t kCor1Tag = 0x636f7231;
constexpr std::uint64_t kCor4Tag = 0x636f7234;

}  // namespace

CorollaryCheck check_entry_sparse_count(int d, int s, std::size_t samples, std::uint64_t seed) {
  CorollaryCheck chk;
  chk.anchor = "cor1_entry_sparse";
  chk.description = "nondegenerate count <= d * s_d on the Hermitian basis, s = " + std::to_string(s) +
                    ", d = " + std::to_string(d);
  const auto basis = build_basis(BasisKind::hermitian, d);
  StateClassSpec spec;
  spec.state_class = StateClass::entry_sparse;
  spec.d = d;
  spec.s = s;
  const std::uint64_t root = substream_seed(seed, static_cast<std::uint64_t>(d) * 1000 + s, kCor1Tag);
  std::vector<long> counts(samples), bounds(samples);
  parallel_for(samples, [&](std::size_t i) {
    const auto rho = sample_class(spec, substream_seed(root, i, stream_tag::sampler));
    counts[i] = static_cast<long>(active_index_set(rho, basis).nondegenerate_count());
    bounds[i] = static_cast<long>(d) * diagonal_support(rho);
  });
  std::size_t violations = 0, worst = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    if (counts[i] > bounds[i]) ++violations;
    if (counts[i] - bounds[i] > counts[worst] - bounds[worst]) worst = i;
  }
  chk.pass = violations == 0;
  if (samples > 0) {
    chk.observed = static_cast<double>(counts[worst]);
    chk.bound = static_cast<double>(bounds[worst]);
  }
  chk.detail = std::to_string(violations) + "/" + std::to_string(samples) + " states exceed the bound";
  return chk;
}

CorollaryCheck check_pauli_line(int d, std::span<const double> betas, std::size_t j_star) {
  CorollaryCheck chk;
  chk.anchor = "cor2_pauli_line";
  chk.description = "Pauli line witness traces and zeta = (p-1)/p, d = " + std::to_string(d);
  const auto basis = build_basis(BasisKind::pauli, d);
  const std::size_t p = basis.size();
  const double tol = 1e-9;
  double worst = 0.0;
  bool zeta_ok = true;
  double zeta_seen = 1.0;
  for (double beta : betas) {
    const auto rho = pauli_line_state(d, j_star, beta);
    const auto ar = active_index_set(rho, basis);
    for (std::size_t j = 0; j < p; ++j) {
      const auto& t = ar.traces[j];
      if (j == 0) {
        worst = std::max(worst, std::abs(t.at(0) - 1.0));
      } else if (j == j_star) {
        worst = std::max(worst, std::abs(t.at(0) - (1.0 + beta) / 2.0));
        worst = std::max(worst, std::abs(t.at(1) - (1.0 - beta) / 2.0));
      } else {
        worst = std::max(worst, std::abs(t.at(0) - 0.5));
        worst = std::max(worst, std::abs(t.at(1) - 0.5));
      }
    }
    const std::vector<DensityMatrix> one{rho};
    const auto z = zeta_fraction(one, basis);
    const double expect = static_cast<double>(p - 1) / static_cast<double>(p);
    if (z.zeta != expect) zeta_ok = false;
    zeta_seen = std::min(zeta_seen, z.zeta);
  }
  chk.observed = worst;
  chk.bound = tol;
  chk.pass = worst <= tol && zeta_ok;
  chk.detail = fmt("max trace deviation %.3g, min zeta %.17g, expected %.17g", worst, zeta_seen,
                   static_cast<double>(p - 1) / static_cast<double>(p));
  return chk;
}

CorollaryCheck check_tilted_product(int d) {
  CorollaryCheck chk;
  chk.anchor = "cor3_tilted";
  chk.description = "tilted product witness expectations, trace floors and zeta = (p-1)/p, d = " + std::to_string(d);
  const auto e = tilted_qubit_vector();
  const ComplexMatrix ee = e * e.adjoint();
  const double s3 = 2.0 * std::sqrt(3.0) / 7.0;
  const double expect[4] = {1.0, s3, s3, 5.0 / 7.0};
  double varpi_dev = 0.0;
  for (int l = 0; l < 4; ++l) varpi_dev = std::max(varpi_dev, std::abs(trace_product_real(ee, pauli_sigma(l)) - expect[l]));

  const int b = log2_dim(d);
  const auto basis = build_basis(BasisKind::pauli, d);
  const auto rho = tilted_product_state(b);
  const auto ar = active_index_set(rho, basis);
  double min_plus = 1.0, min_minus = 1.0;
  for (std::size_t j = 1; j < basis.size(); ++j) {
    min_plus = std::min(min_plus, ar.traces[j].at(0));
    min_minus = std::min(min_minus, ar.traces[j].at(1));
  }
  const std::vector<DensityMatrix> one{rho};
  const auto z = zeta_fraction(one, basis);
  const std::size_t p = basis.size();
  const bool zeta_ok = z.zeta == static_cast<double>(p - 1) / static_cast<double>(p);
  chk.pass = varpi_dev <= 1e-12 && min_plus >= 0.5 - 1e-9 && min_minus >= 1.0 / 7.0 - 1e-9 && zeta_ok;
  chk.observed = min_minus;
  chk.bound = 1.0 / 7.0;
  chk.detail = fmt("expectation deviation %.3g, min tr(rho Q+) %.17g, min tr(rho Q-) %.17g", varpi_dev, min_plus,
                   min_minus) +
               (zeta_ok ? ", zeta ok" : ", zeta mismatch");
  return chk;
}

CorollaryCheck check_low_rank_sparse_count(int d, int r, int gamma, std::size_t samples, std::uint64_t seed) {
  CorollaryCheck chk;
  chk.anchor = "cor4_low_rank_sparse";
  chk.description = "nondegenerate count <= 8 r gamma^2 + 2 r gamma on the g-vector basis, r = " + std::to_string(r) +
                    ", gamma = " + std::to_string(gamma) + ", d = " + std::to_string(d);
  StateClassSpec spec;
  spec.state_class = StateClass::low_rank_sparse_vec;
  spec.d = d;
  spec.r = r;
  spec.gamma = gamma;
  const auto basis = build_basis(BasisKind::gvector, d, spec.frame());
  const long bound = 8L * r * gamma * gamma + 2L * r * gamma;
  const std::uint64_t root = substream_seed(seed, (static_cast<std::uint64_t>(d) * 1000 + r) * 1000 + gamma, kCor4Tag);

  std::vector<DensityMatrix> witnesses;
  if (r >= 1 && gamma >= 1) witnesses.push_back(haar_rank1_state(d));
  if (r >= 2 && gamma >= 1) witnesses.push_back(haar_rank2_state(d));
  const std::size_t total = samples + witnesses.size();
  std::vector<long> counts(total);
  parallel_for(total, [&](std::size_t i) {
    if (i < samples) {
      const auto rho = sample_class(spec, substream_seed(root, i, stream_tag::sampler));
      counts[i] = static_cast<long>(active_index_set(rho, basis).nondegenerate_count());
    } else {
      counts[i] = static_cast<long>(active_index_set(witnesses[i - samples], basis).nondegenerate_count());
    }
  });
  std::size_t violations = 0;
  long worst = 0;
  for (auto c : counts) {
    if (c > bound) ++violations;
    worst = std::max(worst, c);
  }
  chk.pass = violations == 0;
  chk.observed = static_cast<double>(worst);
  chk.bound = static_cast<double>(bound);
  chk.detail = std::to_string(violations) + "/" + std::to_string(total) + " states exceed the bound";
  return chk;
}

CorollaryReport corollary_suite(int d, std::size_t samples, std::uint64_t seed) {
  CorollaryReport rep;
  rep.d = d;
  for (int s : {1, 2, 4})
    if (s <= d * d) rep.checks.push_back(check_entry_sparse_count(d, s, samples, seed));
  const std::vector<double> betas{0.1, 0.5, 0.9};
  rep.checks.push_back(check_pauli_line(d, betas));
  rep.checks.push_back(check_tilted_product(d));
  for (auto [r, g] : {std::pair{1, 1}, std::pair{2, 2}})
    if (r <= d && g <= d) rep.checks.push_back(check_low_rank_sparse_count(d, r, g, samples, seed));
  return rep;
}

}  // namespace tomolab
