#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "tomolab/bases.hpp"
#include "tomolab/error.hpp"
#include "tomolab/states.hpp"

using namespace tomolab;
using Catch::Approx;

namespace {

std::vector<double> eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

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

}  // namespace

TEST_CASE("validate_density accepts states and lists every violation", "[states]") {
  CHECK(maximally_mixed(4).dim() == 4);
  ComplexMatrix pure = ComplexMatrix::Zero(3, 3);
  pure(0, 0) = 1.0;
  const auto s = validate_density(pure);
  CHECK(numerical_rank(s.matrix()) == 1);

  try {
    validate_density(pauli_sigma(3));
    FAIL("expected DensityError");
  } catch (const DensityError& e) {
    CHECK(e.code() == ErrorCode::InvalidDensity);
    const auto v = e.check().violations();
    CHECK(std::find(v.begin(), v.end(), "TraceNotOne") != v.end());
    CHECK(std::find(v.begin(), v.end(), "NotPSD") != v.end());
    CHECK(std::find(v.begin(), v.end(), "NotHermitian") == v.end());
    CHECK(e.check().min_eigenvalue == Approx(-1.0));
    CHECK(e.check().trace == Approx(0.0).margin(1e-15));
  }
  ComplexMatrix nh = ComplexMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.3;
  const auto c = check_density(nh);
  CHECK_FALSE(c.hermitian);
  CHECK(c.violations().front() == "NotHermitian");
}

TEST_CASE("Pauli line state", "[states]") {
  CHECK((pauli_line_state(4, 5, 0.0).matrix() - ComplexMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  const auto ev = eigenvalues(pauli_line_state(4, 3, 0.5).matrix());
  CHECK(ev[0] == Approx(0.125));
  CHECK(ev[1] == Approx(0.125));
  CHECK(ev[2] == Approx(0.375));
  CHECK(ev[3] == Approx(0.375));
  for (int d : {2, 4, 8}) {
    const std::size_t p = static_cast<std::size_t>(d * d);
    for (std::size_t js : {std::size_t{1}, p - 1}) {
      const auto alpha = pauli_coefficients(pauli_line_state(d, js, -0.3).matrix());
      for (std::size_t j = 0; j < p; ++j) {
        const double expect = j == 0 ? 1.0 / d : (j == js ? -0.3 / d : 0.0);
        CHECK(alpha[j] == Approx(expect).margin(1e-12));
      }
    }
  }
  CHECK(code_of([] { pauli_line_state(4, 0, 0.5); }) == ErrorCode::IdentityIndex);
  CHECK(code_of([] { pauli_line_state(4, 2, 1.0); }) == ErrorCode::BetaOutOfRange);
  CHECK(code_of([] { pauli_line_state(6, 2, 0.1); }) == ErrorCode::BadDimension);
}

TEST_CASE("Pauli coefficients reconstruct the state", "[states][property]") {
  StateClassSpec spec;
  spec.state_class = StateClass::low_rank;
  spec.d = 8;
  spec.r = 3;
  const auto rho = sample_class(spec, 17);
  const auto alpha = pauli_coefficients(rho.matrix());
  ComplexMatrix back = ComplexMatrix::Zero(8, 8);
  for (std::size_t j = 0; j < alpha.size(); ++j) back += alpha[j] * pauli_matrix(pauli_labels(j, 3));
  CHECK((back - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tilted product state", "[states]") {
  const double s = 2.0 * std::sqrt(3.0) / 7.0;
  const double varpi[4] = {1.0, s, s, 5.0 / 7.0};
  const auto r1 = tilted_product_state(1);
  CHECK(trace_product_real(r1.matrix(), pauli_sigma(3)) == Approx(5.0 / 7.0).epsilon(1e-12));
  const auto r2 = tilted_product_state(2);
  CHECK(trace_product_real(r2.matrix(), pauli_matrix({1, 3})) == Approx(s * 5.0 / 7.0).epsilon(1e-12));
  for (int b : {1, 2, 3, 4}) {
    const auto rho = tilted_product_state(b);
    CHECK(std::abs(rho.matrix().trace() - Complex(1.0)) < 1e-12);
    CHECK(numerical_rank(rho.matrix()) == 1);
    const std::size_t p = std::size_t{1} << (2 * b);
    for (std::size_t j = 0; j < p; ++j) {
      const auto lab = pauli_labels(j, b);
      double prod = 1.0;
      for (int l : lab) prod *= varpi[l];
      CHECK(std::abs(trace_product_real(rho.matrix(), pauli_matrix(lab)) - prod) < 1e-9);
    }
  }
  CHECK(code_of([] { tilted_product_state(11); }) == ErrorCode::DimensionOverflow);
}

TEST_CASE("named witnesses", "[states]") {
  CHECK(witness_names().size() == 4);
  const auto r = named_witness("remark8_haar_rank1", 8);
  CHECK((r.matrix() - ComplexMatrix::Constant(8, 8, 1.0 / 8.0)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(numerical_rank(named_witness("remark8_haar_rank2", 8).matrix()) == 2);
  CHECK(code_of([] { named_witness("nope", 4); }) == ErrorCode::InvalidArgument);

  StateClassSpec spec;
  spec.state_class = StateClass::low_rank_sparse_vec;
  spec.d = 8;
  spec.r = 1;
  spec.gamma = 1;
  spec.witness_id = "remark8_haar_rank1";
  const auto w = sample_class(spec, 3);
  CHECK((w.matrix() - r.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(class_membership(w, spec).member);
}

TEST_CASE("class samplers return valid members", "[states][property]") {
  std::vector<StateClassSpec> specs;
  for (int d : {2, 4, 8}) {
    for (int s : {1, 2, 4, 7}) {
      if (s > d * d) continue;
      StateClassSpec e;
      e.state_class = StateClass::entry_sparse;
      e.d = d;
      e.s = s;
      specs.push_back(e);
      StateClassSpec ps = e;
      ps.state_class = StateClass::pauli_sparse;
      specs.push_back(ps);
    }
    for (int r = 1; r <= std::min(d, 3); ++r) {
      StateClassSpec lr;
      lr.state_class = StateClass::low_rank;
      lr.d = d;
      lr.r = r;
      specs.push_back(lr);
      for (int g = 1; g <= std::min(d, 2); ++g) {
        StateClassSpec lv = lr;
        lv.state_class = StateClass::low_rank_sparse_vec;
        lv.gamma = g;
        specs.push_back(lv);
      }
    }
  }
  for (const auto& spec : specs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto rho = sample_class(spec, seed);
      CHECK(check_density(rho.matrix()).valid());
      const auto rep = class_membership(rho, spec);
      INFO(to_string(spec.state_class) << " d=" << spec.d << " s=" << spec.s << " r=" << spec.r
                                       << " gamma=" << spec.gamma << ": " << rep.detail);
      CHECK(rep.member);
    }
  }
}

TEST_CASE("sampler edge cases", "[states]") {
  StateClassSpec e;
  e.state_class = StateClass::entry_sparse;
  e.d = 4;
  e.s = 1;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sample = sample_class(e, seed);
    const auto& m = sample.matrix();
    int ones = 0, nonzero = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        nonzero += std::abs(m(i, j)) > 1e-12;
        ones += i == j && std::abs(m(i, j) - Complex(1.0)) < 1e-12;
      }
    CHECK(nonzero == 1);
    CHECK(ones == 1);
  }
  StateClassSpec lr;
  lr.state_class = StateClass::low_rank;
  lr.d = 8;
  lr.r = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(eigenvalues(sample_class(lr, seed).matrix())[5] < 1e-9);

  e.s = 0;
  CHECK(code_of([&] { sample_class(e, 1); }) == ErrorCode::InfeasibleSpec);
  lr.r = 9;
  CHECK(code_of([&] { sample_class(lr, 1); }) == ErrorCode::InfeasibleSpec);
  CHECK(sample_class(StateClassSpec{StateClass::low_rank, 4, 0, 2, 0, std::nullopt, std::nullopt}, 8).matrix() ==
        sample_class(StateClassSpec{StateClass::low_rank, 4, 0, 2, 0, std::nullopt, std::nullopt}, 8).matrix());
}

TEST_CASE("membership examples", "[states]") {
  StateClassSpec full{StateClass::low_rank, 4, 0, 4, 0, std::nullopt, std::nullopt};
  CHECK(class_membership(maximally_mixed(4), full).member);
  StateClassSpec ps{StateClass::pauli_sparse, 4, 2, 0, 0, std::nullopt, std::nullopt};
  const auto rep = class_membership(pauli_line_state(4, 6, 0.5), ps);
  CHECK(rep.member);
  CHECK(rep.observed == 2);
  StateClassSpec es{StateClass::entry_sparse, 4, 1, 0, 0, std::nullopt, std::nullopt};
  CHECK_FALSE(class_membership(tilted_product_state(2), es).member);
  StateClassSpec lr1{StateClass::low_rank, 4, 0, 1, 0, std::nullopt, std::nullopt};
  CHECK_FALSE(class_membership(maximally_mixed(4), lr1).member);
}
