#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tomolab/equivalence.hpp"
#include "tomolab/error.hpp"

using namespace tomolab;
using Catch::Approx;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

CountRecord record(std::vector<std::int64_t> counts) {
  CountRecord r;
  r.m = 0;
  for (auto c : counts) r.m += c;
  r.counts = std::move(counts);
  return r;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("round-off kernel", "[equivalence]") {
  CHECK(kernel_K1(std::vector<double>{2.4, 1.6}, 4) == std::vector<std::int64_t>{2, 2});
  CHECK(code_of([] { kernel_K1(std::vector<double>{4.9, 0.0}, 4); }) == ErrorCode::NegativeResult);
  CHECK(kernel_K1(std::vector<double>{2.5, 1.5}, 4) == std::vector<std::int64_t>{3, 1});
  CHECK(code_of([] { kernel_K1(std::vector<double>{-0.6, 4.6}, 4); }) == ErrorCode::NegativeResult);
}

TEST_CASE("perturbation kernel", "[equivalence]") {
  const auto one = record({7});
  const auto p1 = kernel_K0(one, 3);
  CHECK(p1.values == std::vector<double>{7.0});

  const auto r = record({3, 1, 0});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = kernel_K0(r, seed);
    CHECK(sum(p.values) == 4.0);
    for (std::size_t a = 0; a + 1 < 3; ++a) CHECK(std::abs(p.values[a] - static_cast<double>(r.counts[a])) < 0.5);
    CHECK(kernel_K1(p.values, 4) == r.counts);
  }

  auto degenerate = record({5, 0});
  degenerate.cell_probabilities = {1.0, 0.0};
  CHECK(kernel_K0(degenerate, 1).values == std::vector<double>{5.0, 0.0});

  auto masked = record({2, 3, 0});
  masked.cell_probabilities = {0.4, 0.6, 0.0};
  const auto pm = kernel_K0(masked, 9);
  CHECK(pm.values[2] == 0.0);
  CHECK(pm.values[0] + pm.values[1] == 5.0);
  CHECK(kernel_K1(pm.values, 5) == masked.counts);
}

TEST_CASE("perturbations are uniform on (-1/2, 1/2)", "[equivalence]") {
  const std::size_t n = 100000;
  std::vector<double> u(n);
  const auto r = record({10, 20});
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_substream(42, i, stream_tag::perturb);
    u[i] = kernel_K0(r, rng).values[0] - 10.0;
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = u[i] + 0.5;
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
  CHECK(u.front() > -0.5);
  CHECK(u.back() < 0.5);
}

TEST_CASE("round trip on random records", "[equivalence][property]") {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 20000; ++t) {
    const std::size_t r = 2 + gen() % 3;
    const std::int64_t m = 1 + static_cast<std::int64_t>(gen() % 64);
    std::vector<std::int64_t> c(r, 0);
    for (std::int64_t i = 0; i < m; ++i) ++c[gen() % r];
    const auto rec = record(c);
    CHECK(kernel_K1(kernel_K0(rec, gen()).values, m) == c);
  }
}

TEST_CASE("translation between the experiments", "[equivalence]") {
  const auto b = build_basis(BasisKind::pauli, 2);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  const auto rho = validate_density(k0);
  const auto data = run_tomography(rho, b, SamplingDesign::fixed(), 4, 16, 3);
  const auto fine = translate_qst_to_regression(data, 5);
  REQUIRE(fine.samples.size() == 4);
  CHECK(fine.samples[3].y == std::vector<double>{1.0, 0.0});
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(fine.samples[k].design_index == k);
    CHECK(std::abs(sum(fine.samples[k].y) - 1.0) <= 1e-12);
  }
  std::vector<std::vector<double>> eig(4);
  for (std::size_t j = 0; j < 4; ++j) eig[j] = b.decomposition(j).eigenvalues;
  const auto back = translate_regression_to_qst(fine, eig);
  CHECK(back.dropped == 0);
  for (std::size_t k = 0; k < 4; ++k) CHECK(back.data.records[k].counts == data.records[k].counts);

  FineRegressionDataset f;
  f.m = 4;
  f.samples = {{1, {0.74, 0.26}}};
  CHECK(translate_regression_to_qst(f, eig).data.records.at(0).counts == std::vector<std::int64_t>{3, 1});
}

TEST_CASE("translated observations are unbiased", "[equivalence]") {
  const auto b = build_basis(BasisKind::pauli, 4);
  const auto rho = tilted_product_state(2);
  std::vector<double> pt(16, 0.0);
  pt[6] = 1.0;
  const std::int64_t m = 8;
  const std::size_t n = 40000;
  const auto data = run_tomography(rho, b, SamplingDesign::random(pt, pt), n, m, 4);
  const auto fine = translate_qst_to_regression(data, 6);
  const auto th = cell_probabilities(rho, b, 6);
  double mean = 0.0;
  for (const auto& s : fine.samples) mean += s.y[0];
  mean /= n;
  // variance of y*_1 is theta(1-theta)/m + 1/(12 m^2)
  const double var = th[0] * (1 - th[0]) / m + 1.0 / (12.0 * m * m);
  CHECK(std::abs(mean - th[0]) < 4.0 * std::sqrt(var / n));
}

TEST_CASE("Gaussian tail drops are rare", "[equivalence]") {
  const auto b = build_basis(BasisKind::pauli, 2);
  std::vector<double> pt{0.0, 0.0, 0.0, 1.0};
  const auto rho = maximally_mixed(2);
  const std::size_t n = 100000;
  const auto fine = simulate_fine_dataset(rho, b, SamplingDesign::random(pt, pt), n, 64, 12);
  std::vector<std::vector<double>> eig(4);
  for (std::size_t j = 0; j < 4; ++j) eig[j] = b.decomposition(j).eigenvalues;
  const auto back = translate_regression_to_qst(fine, eig);
  CHECK(back.dropped + back.data.records.size() == n);
  CHECK(static_cast<double>(back.dropped) / n < 0.01);
}

TEST_CASE("perturbed density", "[equivalence]") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(perturbed_density(1, half, std::vector<double>{0.2}) == Approx(0.5));
  CHECK(perturbed_density(1, half, std::vector<double>{10.0}) == 0.0);
  CHECK(perturbed_density(1, half, std::vector<double>{-0.7}) == 0.0);

  const std::vector<double> th{0.2, 0.3, 0.5};
  const std::int64_t m = 12;
  double total = 0.0;
  for (int u1 = -2; u1 <= m + 2; ++u1)
    for (int u2 = -2; u2 <= m + 2; ++u2) {
      const std::vector<double> x{u1 + 0.1, u2 - 0.2};
      const double f = perturbed_density(m, th, x);
      total += f;
      CHECK(perturbed_density_conditional(m, th, x) == Approx(f).epsilon(1e-12).margin(1e-300));
    }
  CHECK(total == Approx(1.0).margin(1e-9));
  // binomial oracle: C(12,3) 0.2^3 0.8^9 for the first margin with r = 2
  CHECK(perturbed_density(12, std::vector<double>{0.2, 0.8}, std::vector<double>{3.3}) ==
        Approx(220.0 * std::pow(0.2, 3) * std::pow(0.8, 9)).epsilon(1e-12));
}

TEST_CASE("Hellinger quadrature", "[equivalence]") {
  const std::vector<double> half{0.5, 0.5};
  const auto h16 = hellinger_perturbed_vs_gaussian(16, half);
  const auto h256 = hellinger_perturbed_vs_gaussian(256, half);
  CHECK(h256.value < h16.value);
  for (const auto& h : {h16, h256}) {
    CHECK(h.value >= 0.0);
    CHECK(h.value <= std::sqrt(2.0));
    CHECK(h.kind == DistanceKind::hellinger);
    CHECK(h.method == DistanceMethod::quadrature);
    CHECK(h.error_bar < 1e-6);
  }
  // independent high-order tensor Gauss-Legendre oracle (12 nodes per axis, 9 sigma window)
  const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(hellinger_perturbed_vs_gaussian(64, third).value == Approx(0.072824483246).margin(1e-6));
  CHECK(h16.value == Approx(0.073567607482).margin(1e-6));
  CHECK(hellinger_perturbed_vs_gaussian(256, std::vector<double>{0.2, 0.8}).value ==
        Approx(0.029748936604).margin(1e-6));

  // relabeling among the free cells leaves H unchanged
  const double h532 = hellinger_perturbed_vs_gaussian(64, std::vector<double>{0.5, 0.3, 0.2}).value;
  CHECK(hellinger_perturbed_vs_gaussian(64, std::vector<double>{0.3, 0.5, 0.2}).value == Approx(h532).margin(1e-9));
  CHECK(h532 == Approx(0.086018996905).margin(1e-6));
  // moving a different cell into the closing slot changes the perturbed law
  CHECK(hellinger_perturbed_vs_gaussian(64, std::vector<double>{0.2, 0.5, 0.3}).value ==
        Approx(0.082782463834).margin(1e-6));
  CHECK(hellinger_perturbed_vs_gaussian(64, std::vector<double>{1.0, 0.0}).value == 0.0);
  CHECK(hellinger_perturbed_vs_gaussian(64, std::vector<double>{0.0, 1.0, 0.0}).value == 0.0);
  CHECK(hellinger_perturbed_vs_gaussian(64, std::vector<double>{0.5, 0.0, 0.5}).value ==
        Approx(hellinger_perturbed_vs_gaussian(64, half).value).margin(1e-12));
  CHECK(code_of([] { hellinger_perturbed_vs_gaussian(8, std::vector<double>(5, 0.2)); }) ==
        ErrorCode::UnsupportedArity);
}

TEST_CASE("Hellinger quadrature agrees with a Monte Carlo estimate", "[equivalence]") {
  // H^2 = 2 - 2 E_P[sqrt(g/f)]
  const std::vector<double> th{0.3, 0.7};
  const std::int64_t m = 40;
  const MatchedGaussian g(m, th);
  const std::size_t n = 200000;
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_substream(3, i);
    const auto u = multinomial_draw(m, th, rng);
    const std::vector<double> x{static_cast<double>(u[0]) + uniform_perturbation(rng)};
    const double r = std::sqrt(g.density(x) / perturbed_density(m, th, x));
    s += r;
    s2 += r * r;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  const double h2 = hellinger_perturbed_vs_gaussian(m, th).value;
  CHECK(std::abs((2.0 - 2.0 * mean) - h2 * h2) < 5.0 * 2.0 * se);
}

TEST_CASE("product Hellinger bound", "[equivalence]") {
  CHECK(product_hellinger_bound(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  CHECK(product_hellinger_bound(std::vector<double>{0.04}) == Approx(0.2));
  const std::size_t n = 50;
  const double c = 0.3, m = 64.0;
  CHECK(product_hellinger_bound(std::vector<double>(n, c / m)) == Approx(std::sqrt(n * c / m)));
  const std::vector<HellingerTerm> terms{{0.04, 2}, {5.0, 1}, {0.05, 3}};
  CHECK(product_hellinger_bound(terms) == Approx(0.3));
  CHECK_THROWS_AS(product_hellinger_bound(std::vector<double>{-0.1}), Error);
}

TEST_CASE("Monte Carlo total variation", "[equivalence]") {
  auto unif = [](Rng& rng) { return std::vector<double>{std::uniform_real_distribution<double>(0.0, 1.0)(rng)}; };
  auto p = [](std::span<const double> x) { return x[0] >= 0.0 && x[0] < 1.0 ? 1.0 : 0.0; };
  auto q = [](std::span<const double> x) { return x[0] >= 0.5 && x[0] < 1.5 ? 1.0 : 0.0; };
  const auto same = tv_monte_carlo(unif, p, p, 10000, 1);
  CHECK(same.value <= same.error_bar + 1e-15);
  const auto shift = tv_monte_carlo(unif, p, q, 100000, 2);
  CHECK(std::abs(shift.value - 0.5) <= shift.error_bar);
  CHECK(shift.kind == DistanceKind::tv);
  auto zero = [](std::span<const double>) { return 0.0; };
  CHECK(code_of([&] { tv_monte_carlo(unif, zero, q, 100, 3); }) == ErrorCode::ZeroDensity);

  const std::vector<double> th{0.2, 0.3, 0.5};
  const auto tv = tv_perturbed_vs_gaussian(64, th, 20000, 4);
  const auto h = hellinger_perturbed_vs_gaussian(64, th);
  CHECK(tv.value <= h.value + h.error_bar + tv.error_bar);
}

TEST_CASE("two-stage total variation bound", "[equivalence]") {
  CHECK(conditional_tv_bound(0.0, std::vector<WeightedTv>{{0.5, 0.0}, {0.5, 0.0}}) == 0.0);
  CHECK(conditional_tv_bound(0.1, std::vector<WeightedTv>{{0.3, 0.0}, {0.7, 0.0}}) == Approx(0.1));
  TwoStageLaw f{{0.5, 0.5}, {{0.2, 0.8}, {0.6, 0.4}}};
  CHECK(exact_tv(f, f) == 0.0);
  CHECK(two_stage_tv_bound(f, f) == 0.0);

  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  auto simplex = [&](std::size_t k) {
    std::vector<double> v(k);
    double s = 0.0;
    for (auto& x : v) s += (x = u(gen));
    for (auto& x : v) x /= s;
    return v;
  };
  for (int t = 0; t < 100; ++t) {
    const std::size_t nx = 1 + gen() % 4, ny = 1 + gen() % 5;
    TwoStageLaw a, b;
    a.marginal = simplex(nx);
    b.marginal = simplex(nx);
    for (std::size_t x = 0; x < nx; ++x) {
      a.conditional.push_back(simplex(ny));
      b.conditional.push_back(simplex(ny));
    }
    CHECK(two_stage_tv_bound(a, b) >= exact_tv(a, b) - 1e-15);
  }
  TwoStageLaw z{{0.5, 0.5}, {{1.0}, {1.0}}}, zg{{1.0, 0.0}, {{1.0}, {1.0}}};
  CHECK(code_of([&] { marginal_ratio_gap(z, zg); }) == ErrorCode::ZeroWeight);
}

TEST_CASE("scaling studies", "[equivalence]") {
  const std::vector<std::int64_t> grid{16, 64, 256, 1024, 4096};
  std::vector<double> h;
  for (auto m : grid) h.push_back(0.7 / std::sqrt(static_cast<double>(m)));
  const auto syn = scaling_from_values(grid, h);
  CHECK(syn.slope == Approx(-0.5).margin(1e-12));
  CHECK(syn.pass);
  CHECK(syn.error_bars.size() == grid.size());

  const auto rep = scaling_study(std::vector<double>{0.5, 0.5}, grid);
  CHECK(rep.pass);
  CHECK(rep.slope >= -0.70);
  CHECK(rep.slope <= -0.35);
  std::ostringstream csv;
  write_scaling_csv(csv, rep);
  std::istringstream is(csv.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "m,H,error_bar");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
  CHECK(scaling_summary_json(rep).find("\"pass\": true") != std::string::npos);
  CHECK_THROWS_AS(scaling_study(std::vector<double>{0.5, 0.5}, std::vector<std::int64_t>{16, 64, 256}), Error);
}
