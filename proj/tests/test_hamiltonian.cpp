#include <doctest.h>

#include <random>

#include "altspin/eigensolver.hpp"
#include "altspin/error.hpp"
#include "altspin/hamiltonian.hpp"
#include "reference.hpp"

using namespace altspin;

TEST_CASE("full-space Hamiltonian matches the Kronecker construction") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(-2.5, 1.0), del(-1.5, 3.0), fld(0.0, 3.0);
  for (int n : {2, 4, 6, 8}) {
    for (int draw = 0; draw < 4; ++draw) {
      const double l = lam(rng), d = del(rng), b = fld(rng);
      const auto h = build_hamiltonian({n, l, d, b});
      CHECK(h.is_real());
      CHECK(h.is_hermitian());
      CHECK(ref::max_abs(h.to_dense() - ref::hamiltonian(n, l, d, b)) < 1e-13);
    }
  }
}

TEST_CASE("sector blocks are the full matrix restricted to the sector") {
  const int n = 8;
  const Eigen::MatrixXcd full = ref::hamiltonian(n, -0.7, 1.3, 0.4);
  for (int mz : magnetizations(n)) {
    const auto basis = SectorBasis::sector(n, mz);
    const Eigen::MatrixXcd block = build_hamiltonian({n, -0.7, 1.3, 0.4}, basis).to_dense();
    for (std::size_t i = 0; i < basis->size(); ++i)
      for (std::size_t j = 0; j < basis->size(); ++j)
        CHECK(std::abs(block(i, j) - full(basis->state(i), basis->state(j))) < 1e-14);
  }
}

TEST_CASE("two-site ring doubles the bond") {
  // Both bonds join sites 1 and 2: H = (1 + lambda) S1.S2 at Delta = 1.
  const auto r = dense_spectrum(build_hamiltonian({2, 0.0, 1.0, 0.0}));
  REQUIRE(r.size() == 4);
  CHECK(r.values[0] == doctest::Approx(-0.75).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(r.values[i] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("uniform four-site Heisenberg ring") {
  const auto r = dense_spectrum(build_hamiltonian({4, 1.0, 1.0, 0.0}));
  CHECK(r.values[0] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("field shifts a sector by -B mz") {
  const int n = 6;
  for (int mz : magnetizations(n)) {
    const auto basis = SectorBasis::sector(n, mz);
    const Eigen::MatrixXd h0 = build_hamiltonian({n, 0.3, 0.8, 0.0}, basis).to_dense_real();
    const Eigen::MatrixXd hb = build_hamiltonian({n, 0.3, 0.8, 1.7}, basis).to_dense_real();
    const Eigen::MatrixXd expect = h0 - 1.7 * mz * Eigen::MatrixXd::Identity(h0.rows(), h0.cols());
    CHECK((hb - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("matvec agrees with the dense product") {
  const auto basis = SectorBasis::sector(10, 0);
  const auto h = build_hamiltonian({10, -1.2, 0.6, 0.5}, basis);
  const Eigen::VectorXcd x = ref::random_state(static_cast<int>(h.dim()), 5);
  Eigen::VectorXcd y(x.size());
  h.multiply(std::span<const cplx>(x.data(), x.size()), std::span<cplx>(y.data(), y.size()));
  CHECK((y - h.to_dense() * x).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Sz total is diagonal with the sector magnetization") {
  const auto basis = SectorBasis::sector(8, -2);
  const Eigen::MatrixXd s = build_sz_total(8, basis).to_dense_real();
  CHECK((s + 2.0 * Eigen::MatrixXd::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("commutator identity at isotropic coupling") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lam(-2.5, 1.0), fld(0.0, 3.0);
  for (int n : {4, 6, 8}) {
    for (int draw = 0; draw < 10; ++draw) {
      const double l0 = lam(rng), l1 = lam(rng), b0 = fld(rng), b1 = fld(rng);
      const Eigen::MatrixXcd h0 = build_hamiltonian({n, l0, 1.0, b0}).to_dense();
      const Eigen::MatrixXcd h1 = build_hamiltonian({n, l1, 1.0, b1}).to_dense();
      const Eigen::MatrixXcd rhs = build_commutator_rhs(l0, l1, n).to_dense();
      CHECK(ref::max_abs(h1 * h0 - h0 * h1 - rhs) < 1e-12);
      if (n <= 6) CHECK(ref::max_abs(rhs - ref::commutator_rhs(n, l0, l1)) < 1e-13);
    }
  }
}

TEST_CASE("commutator right-hand side is nonzero away from Delta = 1") {
  // The triple-product form only captures isotropic bonds.
  const int n = 6;
  const Eigen::MatrixXcd h0 = ref::hamiltonian(n, -0.5, 0.5, 0.0);
  const Eigen::MatrixXcd h1 = ref::hamiltonian(n, 0.5, 0.5, 0.0);
  CHECK(ref::max_abs(h1 * h0 - h0 * h1 - build_commutator_rhs(-0.5, 0.5, n).to_dense()) > 1e-3);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_hamiltonian({5, 0.0, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(build_hamiltonian({6, std::nan(""), 1.0, 0.0}), Error);
  CHECK_THROWS_AS(build_hamiltonian({6, 0.0, 1.0, 0.0}, SectorBasis::sector(8, 0)), Error);
}
