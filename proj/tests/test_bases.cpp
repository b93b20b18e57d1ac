#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "tomolab/bases.hpp"
#include "tomolab/error.hpp"

using namespace tomolab;
using Catch::Approx;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

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

TEST_CASE("Pauli family for d = 2 is sigma0..sigma3", "[bases]") {
  const auto b = build_basis(BasisKind::pauli, 2);
  REQUIRE(b.size() == 4);
  for (int l = 0; l < 4; ++l) CHECK(max_abs(b.matrices[static_cast<std::size_t>(l)] - pauli_sigma(l)) == 0.0);
}

TEST_CASE("every built kind has p = d^2 members", "[bases]") {
  for (int d : {2, 4, 8}) {
    for (auto k : {BasisKind::canonical, BasisKind::hermitian, BasisKind::pauli, BasisKind::gvector}) {
      const auto b = k == BasisKind::gvector ? build_basis(k, d, haar_vectors(d)) : build_basis(k, d);
      CHECK(b.size() == static_cast<std::size_t>(d * d));
    }
  }
  CHECK(build_basis(BasisKind::hermitian, 3).size() == 9);
}

TEST_CASE("Pauli indexing puts the identity at index 0", "[bases]") {
  CHECK(pauli_index({0, 0}) == 0);
  CHECK(pauli_index({1, 2}) == 6);
  CHECK(pauli_labels(6, 2) == std::vector<int>{1, 2});
  const auto b = build_basis(BasisKind::pauli, 4);
  CHECK(max_abs(b.matrices[0] - ComplexMatrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(b.matrices[6] - tensor_product(pauli_sigma(1), pauli_sigma(2))) == 0.0);
  CHECK(code_of([] { build_basis(BasisKind::pauli, 6); }) == ErrorCode::BadDimension);
}

TEST_CASE("g-vector basis with the standard frame equals the Hermitian basis", "[bases]") {
  for (int d : {2, 3, 4}) {
    const auto h = build_basis(BasisKind::hermitian, d);
    const auto g = build_basis(BasisKind::gvector, d, RealMatrix::Identity(d, d));
    for (std::size_t j = 0; j < h.size(); ++j) CHECK(max_abs(h.matrices[j] - g.matrices[j]) < 1e-15);
  }
}

TEST_CASE("g-vector input must be orthonormal", "[bases]") {
  RealMatrix g = RealMatrix::Identity(3, 3);
  g(0, 1) = 0.1;
  CHECK(code_of([&] { build_basis(BasisKind::gvector, 3, g); }) == ErrorCode::NonOrthonormalVectors);
  CHECK(code_of([] { build_basis(BasisKind::gvector, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Haar frame is orthonormal with constant and split leading rows", "[bases]") {
  for (int d : {2, 4, 8, 16}) {
    const auto h = haar_vectors(d);
    CHECK((h * h.transpose() - RealMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < d; ++i) {
      CHECK(h(0, i) == Approx(1.0 / std::sqrt(d)));
      CHECK(h(1, i) == Approx((i < d / 2 ? 1.0 : -1.0) / std::sqrt(d)));
    }
  }
}

TEST_CASE("orthogonality report", "[bases]") {
  CHECK(verify_orthogonal(build_basis(BasisKind::hermitian, 3)).pass);
  const auto rep = verify_orthogonal(build_basis(BasisKind::pauli, 4));
  CHECK(rep.pass);
  CHECK(rep.min_norm_sq == Approx(4.0));
  CHECK(rep.max_norm_sq == Approx(4.0));
  const auto dup = verify_orthogonal(make_custom_basis({pauli_sigma(1), pauli_sigma(1)}));
  CHECK_FALSE(dup.pass);
  CHECK(dup.max_offdiagonal == Approx(2.0));
  CHECK(verify_orthogonal(build_basis(BasisKind::gvector, 8, haar_vectors(8))).pass);
}

TEST_CASE("Pauli projection trace identities", "[bases]") {
  for (int d : {2, 4, 8}) {
    const auto t = pauli_projection_traces(build_basis(BasisKind::pauli, d));
    CHECK(t.max_deviation() < 1e-9);
    for (std::size_t j = 1; j < t.trace_plus.size(); ++j) {
      CHECK(t.trace_plus[j] == Approx(d / 2.0));
      CHECK(t.trace_minus[j] == Approx(d / 2.0));
      CHECK(t.self_plus[j] == Approx(d / 2.0));
      CHECK(t.self_minus[j] == Approx(-d / 2.0));
    }
  }
  const auto t4 = pauli_projection_traces(build_basis(BasisKind::pauli, 4));
  CHECK(std::abs(t4.cross_plus(3, 7)) < 1e-12);
  CHECK(std::abs(t4.cross_minus(7, 3)) < 1e-12);
  CHECK(code_of([] { pauli_projection_traces(build_basis(BasisKind::hermitian, 2)); }) == ErrorCode::WrongBasisKind);
}

TEST_CASE("eigen-structure of basis members", "[bases][property]") {
  for (int d : {2, 4, 8}) {
    const auto pb = build_basis(BasisKind::pauli, d);
    for (std::size_t j = 1; j < pb.size(); ++j) {
      const auto& dec = pb.decomposition(j);
      REQUIRE(dec.size() == 2);
      CHECK(dec.eigenvalues[0] == Approx(1.0));
      CHECK(dec.eigenvalues[1] == Approx(-1.0));
      CHECK(max_abs(pb.matrices[j] * pb.matrices[j] - ComplexMatrix::Identity(d, d)) < 1e-9);
    }
    CHECK(pb.decomposition(0).size() == 1);
    CHECK(pb.kappa == 2);
  }
  // 1/sqrt(2) normalisation gives off-diagonal eigenvalues +-1/sqrt(2)
  const double h = 1.0 / std::sqrt(2.0);
  for (int d : {2, 3, 4}) {
    for (auto k : {BasisKind::hermitian, BasisKind::gvector}) {
      const RealMatrix frame = d == 3 ? RealMatrix(RealMatrix::Identity(3, 3)) : haar_vectors(d);
      const auto b = k == BasisKind::gvector ? build_basis(k, d, frame) : build_basis(k, d);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const auto& lab = b.labels[j];
        const auto& ev = b.decomposition(j).eigenvalues;
        if (lab[0] == lab[1]) {
          REQUIRE(ev.size() == 2);
          CHECK(ev[0] == Approx(1.0));
          CHECK(ev[1] == Approx(0.0).margin(1e-12));
        } else {
          REQUIRE(ev.size() == (d == 2 ? 2u : 3u));
          CHECK(ev.front() == Approx(h));
          CHECK(ev.back() == Approx(-h));
          CHECK(b.decomposition(j).multiplicities.front() == 1);
        }
      }
      CHECK(b.kappa == (d == 2 ? 2 : 3));
    }
  }
}

TEST_CASE("canonical off-diagonal members are not measurable", "[bases]") {
  const auto b = build_basis(BasisKind::canonical, 3);
  std::size_t measurable = 0;
  for (std::size_t j = 0; j < b.size(); ++j) measurable += b.measurable(j);
  CHECK(measurable == 3);
  CHECK(code_of([&] { b.decomposition(1); }) == ErrorCode::NonMeasurableObservable);
}

TEST_CASE("sampling designs validate their weights", "[bases]") {
  CHECK_NOTHROW(SamplingDesign::uniform(16).validate(16));
  CHECK_NOTHROW(SamplingDesign::fixed().validate(16));
  CHECK(code_of([] { SamplingDesign::random({0.5, 0.6}, {0.5, 0.5}).validate(2); }) == ErrorCode::DesignMismatch);
  CHECK(code_of([] { SamplingDesign::uniform(3).validate(4); }) == ErrorCode::DesignMismatch);
}

TEST_CASE("basis export round-trips", "[bases][io]") {
  const auto b = build_basis(BasisKind::pauli, 4);
  std::stringstream ss;
  write_basis(ss, b);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "pauli 4 16");
  ss.seekg(0);
  const auto back = read_basis(ss);
  REQUIRE(back.size() == b.size());
  for (std::size_t j = 0; j < b.size(); ++j) CHECK(back.matrices[j] == b.matrices[j]);
}
