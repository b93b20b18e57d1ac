#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "tomolab/error.hpp"
#include "tomolab/measurement.hpp"
#include "tomolab/regression.hpp"

using namespace tomolab;
using Catch::Approx;

namespace {

DensityMatrix ket0() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return validate_density(m);
}

struct Moments {
  double mean = 0.0, var = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments mo;
  for (double v : x) mo.mean += v;
  mo.mean /= static_cast<double>(x.size());
  for (double v : x) mo.var += (v - mo.mean) * (v - mo.mean);
  mo.var /= static_cast<double>(x.size() - 1);
  return mo;
}

}  // namespace

TEST_CASE("coarse noise variance", "[regression]") {
  StateClassSpec spec{StateClass::low_rank, 4, 0, 2, 0, std::nullopt, std::nullopt};
  const auto rho = sample_class(spec, 1);
  CHECK(noise_variance_coarse(rho, ComplexMatrix::Identity(4, 4)) == Approx(0.0).margin(1e-12));
  const auto b = build_basis(BasisKind::pauli, 4);
  for (std::size_t j = 1; j < 16; ++j) CHECK(noise_variance_coarse(maximally_mixed(4), b.matrices[j]) == Approx(1.0));
  CHECK(noise_variance_coarse(ket0(), pauli_sigma(3)) == 0.0);
}

TEST_CASE("fine noise covariance", "[regression]") {
  CHECK(noise_covariance_fine(std::vector<double>{1.0, 0.0}).cwiseAbs().maxCoeff() == 0.0);
  const RealMatrix half = noise_covariance_fine(std::vector<double>{0.5, 0.5});
  CHECK(half(0, 0) == 0.25);
  CHECK(half(0, 1) == -0.25);
  CHECK(half(1, 0) == -0.25);
  CHECK(half(1, 1) == 0.25);
  const std::vector<double> th{0.1, 0.2, 0.3, 0.4};
  const RealMatrix c = noise_covariance_fine(th);
  CHECK(c.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(c);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("fine draws respect the sum constraint and degenerate cells", "[regression]") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto y = draw_fine_observation(std::vector<double>{0.2, 0.0, 0.5, 0.3}, 16, rng);
    double s = 0.0;
    for (double v : y) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-12);
    CHECK(y[1] == 0.0);
  }
  CHECK(draw_fine_observation(std::vector<double>{1.0, 0.0}, 8, rng) == std::vector<double>{1.0, 0.0});
  const auto b = build_basis(BasisKind::pauli, 2);
  const auto s = simulate_fine(ket0(), b, SamplingDesign::fixed(), 4, 10, 3);
  CHECK(s[3].y == std::vector<double>{1.0, 0.0});
  CHECK(s[0].y == std::vector<double>{1.0});
}

TEST_CASE("fine draws match multinomial moments", "[regression]") {
  const std::vector<double> th{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const std::int64_t m = 50;
  const std::size_t reps = 20000;
  std::vector<double> y1(reps), y2(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    Rng rng = make_substream(11, i);
    const auto y = draw_fine_observation(th, m, rng);
    y1[i] = y[0];
    y2[i] = y[1];
  }
  const auto m1 = moments(y1), m2 = moments(y2);
  double cov = 0.0;
  for (std::size_t i = 0; i < reps; ++i) cov += (y1[i] - m1.mean) * (y2[i] - m2.mean);
  cov /= static_cast<double>(reps - 1);
  const double v = th[0] * (1 - th[0]) / m;
  CHECK(std::abs(m1.mean - th[0]) < 4.0 * std::sqrt(v / reps));
  CHECK(m1.var == Approx(v).epsilon(0.05));
  CHECK(cov / std::sqrt(m1.var * m2.var) == Approx(-0.5).margin(0.03));
}

TEST_CASE("coarse simulation", "[regression]") {
  const auto b = build_basis(BasisKind::pauli, 4);
  const double beta = 0.6;
  const auto rho = pauli_line_state(4, 9, beta);
  const auto fixed = simulate_coarse(rho, b, SamplingDesign::fixed(), 16, 20, 8);
  CHECK(fixed[0].y == 1.0);
  std::vector<double> pt(16, 0.0);
  pt[9] = 1.0;
  const auto design = SamplingDesign::random(pt, pt);
  const std::int64_t m = 20;
  const auto s = simulate_coarse(rho, b, design, 10000, m, 9);
  std::vector<double> y;
  for (const auto& r : s) {
    REQUIRE(r.design_index == 9);
    y.push_back(r.y);
  }
  const auto mo = moments(y);
  const double var = (1 - beta * beta) / m;
  CHECK(std::abs(mo.mean - beta) < 4.0 * std::sqrt(var / 10000));
  CHECK(mo.var == Approx(var).epsilon(0.05));
  CHECK_THROWS_AS(simulate_coarse(rho, b, SamplingDesign::fixed(), 15, m, 1), Error);
}

TEST_CASE("aggregation", "[regression]") {
  CHECK(aggregate_fine({0, {1.0, 0.0}}, std::vector<double>{1.0, -1.0}).y == 1.0);
  CHECK(aggregate_fine({0, {0.6, 0.4}}, std::vector<double>{1.0, -1.0}).y == Approx(0.2));
  try {
    aggregate_fine({0, {0.6, 0.4}}, std::vector<double>{1.0, 0.0, -1.0});
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("aggregated fine law matches the coarse law", "[regression][property]") {
  const auto b = build_basis(BasisKind::hermitian, 3);
  StateClassSpec spec{StateClass::low_rank, 3, 0, 2, 0, std::nullopt, std::nullopt};
  const auto rho = sample_class(spec, 12);
  const std::int64_t m = 30;
  const std::size_t n = 100000;
  for (std::size_t j : {std::size_t{1}, std::size_t{5}}) {
    std::vector<double> pt(9, 0.0);
    pt[j] = 1.0;
    const auto design = SamplingDesign::random(pt, pt);
    const auto fine = simulate_fine(rho, b, design, n, m, 31);
    const auto coarse = simulate_coarse(rho, b, design, n, m, 32);
    std::vector<double> ya, yc;
    for (std::size_t k = 0; k < n; ++k) {
      ya.push_back(aggregate_fine(fine[k], b.decomposition(j).eigenvalues).y);
      yc.push_back(coarse[k].y);
    }
    const auto ma = moments(ya), mc = moments(yc);
    const double var = noise_variance_coarse(rho, b.matrices[j]) / m;
    const double mean = trace_product_real(rho.matrix(), b.matrices[j]);
    CHECK(std::abs(ma.mean - mean) < 5.0 * std::sqrt(var / n));
    CHECK(std::abs(mc.mean - mean) < 5.0 * std::sqrt(var / n));
    // sample variance has relative sd about sqrt(2/n)
    CHECK(std::abs(ma.var / var - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(mc.var / var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  }
}

TEST_CASE("regression CSV layout", "[regression][io]") {
  std::ostringstream fine, coarse;
  write_fine_csv(fine, {{2, {0.25, 0.75}}});
  write_coarse_csv(coarse, {{1, 0.5}});
  CHECK(fine.str() == "k,j,y\n0,2,0.25|0.75\n");
  CHECK(coarse.str() == "k,j,Y\n0,1,0.5\n");
}
