#include "tomolab/transfer.hpp"

#include <cmath>

#include "tomolab/error.hpp"
#include "tomolab/measurement.hpp"
#include "tomolab/regression.hpp"
#include "tomolab/rng.hpp"

namespace tomolab {

namespace {

constexpr std::uint64_t kTransferTag = 0x7472616e;

std::vector<double> average_by_index(std::size_t p, const std::vector<std::size_t>& idx, const std::vector<double>& v,
                                     const std::vector<double>& norms) {
  std::vector<double> sum(p, 0.0);
  std::vector<std::size_t> cnt(p, 0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    sum[idx[k]] += v[k];
    ++cnt[idx[k]];
  }
  for (std::size_t j = 0; j < p; ++j) sum[j] = cnt[j] ? sum[j] / static_cast<double>(cnt[j]) / norms[j] : 0.0;
  return sum;
}

}  // namespace

TransferReport estimator_transfer(const DensityMatrix& rho, const ObservableBasis& basis, std::size_t n,
                                  std::span<const std::int64_t> m_grid, std::size_t replications,
                                  std::uint64_t seed) {
  if (basis.kind == BasisKind::canonical || basis.kind == BasisKind::custom)
    throw Error(ErrorCode::WrongBasisKind, "estimator transfer needs an orthogonal Hermitian basis");
  if (rho.dim() != basis.dim) throw Error(ErrorCode::DimensionMismatch, "state and basis dimensions differ");
  if (replications < 2) throw Error(ErrorCode::InvalidArgument, "need at least two replications");
  const std::size_t p = basis.size();
  const auto design = n == p ? SamplingDesign::fixed() : SamplingDesign::uniform(p);

  TransferReport rep;
  rep.n = n;
  rep.replications = replications;
  std::vector<double> norms(p);
  rep.alpha.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    norms[j] = hs_inner(basis.matrices[j], basis.matrices[j]).real();
    rep.alpha[j] = trace_product_real(rho.matrix(), basis.matrices[j]) / norms[j];
  }

  for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
    const std::int64_t m = m_grid[gi];
    TransferPoint pt;
    pt.m = m;
    pt.mean_alpha_tomography.assign(p, 0.0);
    pt.mean_alpha_regression.assign(p, 0.0);
    pt.sq_error_tomography.assign(p, 0.0);
    pt.sq_error_regression.assign(p, 0.0);
    std::vector<double> diffs(replications);
    for (std::size_t i = 0; i < replications; ++i) {
      const std::uint64_t rs = substream_seed(seed, i, kTransferTag + gi);
      const auto tomo = run_tomography(rho, basis, design, n, m, rs, Detail::summary);
      const auto regr = simulate_coarse(rho, basis, design, n, m, rs);
      std::vector<std::size_t> ti(n), ri(n);
      std::vector<double> ry(n);
      for (std::size_t k = 0; k < n; ++k) {
        ti[k] = tomo.records[k].observable_index;
        ri[k] = regr[k].design_index;
        ry[k] = regr[k].y;
      }
      const auto at = average_by_index(p, ti, tomo.summaries, norms);
      const auto ar = average_by_index(p, ri, ry, norms);
      double lt = 0.0, lr = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double et = (at[j] - rep.alpha[j]) * (at[j] - rep.alpha[j]);
        const double er = (ar[j] - rep.alpha[j]) * (ar[j] - rep.alpha[j]);
        lt += et;
        lr += er;
        pt.mean_alpha_tomography[j] += at[j];
        pt.mean_alpha_regression[j] += ar[j];
        pt.sq_error_tomography[j] += et;
        pt.sq_error_regression[j] += er;
      }
      pt.risk_tomography += lt;
      pt.risk_regression += lr;
      diffs[i] = lt - lr;
    }
    const double R = static_cast<double>(replications);
    for (std::size_t j = 0; j < p; ++j) {
      pt.mean_alpha_tomography[j] /= R;
      pt.mean_alpha_regression[j] /= R;
      pt.sq_error_tomography[j] /= R;
      pt.sq_error_regression[j] /= R;
    }
    pt.risk_tomography /= R;
    pt.risk_regression /= R;
    const double mean = pt.risk_tomography - pt.risk_regression;
    double var = 0.0;
    for (double x : diffs) var += (x - mean) * (x - mean);
    var /= R - 1.0;
    pt.gap = std::abs(mean);
    pt.gap_error = 1.96 * std::sqrt(var / R);
    rep.points.push_back(std::move(pt));
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.points.size(); ++i) {
    const auto& a = rep.points[i - 1];
    const auto& b = rep.points[i];
    if (b.gap > a.gap + a.gap_error + b.gap_error) rep.monotone = false;
  }
  return rep;
}

}  // namespace tomolab
