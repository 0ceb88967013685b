#include <doctest.h>

#include <random>

#include "altspin/eigensolver.hpp"
#include "altspin/error.hpp"
#include "altspin/hamiltonian.hpp"
#include "altspin/symmetry.hpp"

using namespace altspin;

TEST_CASE("Lanczos lowest levels match dense diagonalization in every sector") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(-2.5, 1.0), del(-1.5, 3.0), fld(0.0, 3.0);
  for (int n : {4, 6, 8}) {
    for (int draw = 0; draw < 20; ++draw) {
      const HamiltonianParams p{n, lam(rng), del(rng), fld(rng)};
      for (int mz : magnetizations(n)) {
        const auto h = build_hamiltonian(p, SectorBasis::sector(n, mz));
        const auto dense = dense_spectrum(h);
        const int k = static_cast<int>(std::min<std::size_t>(3, h.dim()));
        const auto lz = lanczos(h, k, 1e-12, 1);
        REQUIRE(lz.size() == static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) CHECK(std::abs(lz.values[i] - dense.values[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("Lanczos resolves degenerate multiplets") {
  // Uniform six-site ring on the full space: the first excited level is a triplet.
  const auto h = build_hamiltonian({6, 1.0, 1.0, 0.0});
  const auto dense = dense_spectrum(h);
  const auto lz = lanczos(h, 4, 1e-12, 3);
  for (int i = 0; i < 4; ++i) CHECK(lz.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-10));
  CHECK(degenerate(lz.values[1], lz.values[3]));
}

TEST_CASE("eigenvectors have small residuals and are orthonormal") {
  const auto h = build_hamiltonian({12, -0.5, 1.0, 0.25}, SectorBasis::sector(12, 0));
  const auto lz = lanczos(h, 3, 1e-12, 1);
  for (std::size_t i = 0; i < lz.size(); ++i) CHECK(lz.residuals[i] < 1e-8);
  const Eigen::MatrixXd gram = lz.vectors.transpose() * lz.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

  const auto dense = dense_spectrum(h);
  const Eigen::MatrixXd g2 = dense.vectors.transpose() * dense.vectors;
  CHECK((g2 - Eigen::MatrixXd::Identity(g2.rows(), g2.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Lanczos is deterministic for a seed") {
  const auto h = build_hamiltonian({10, 0.2, 0.7, 0.0}, SectorBasis::sector(10, 0));
  const auto a = lanczos(h, 2, 1e-12, 42);
  const auto b = lanczos(h, 2, 1e-12, 42);
  CHECK(a.values == b.values);
}

TEST_CASE("spin inversion pairs sector spectra at zero field") {
  const int n = 8;
  for (int mz = 1; mz <= n / 2; ++mz) {
    const auto up = dense_spectrum(build_hamiltonian({n, -1.1, 0.4, 0.0}, SectorBasis::sector(n, mz)));
    const auto dn = dense_spectrum(build_hamiltonian({n, -1.1, 0.4, 0.0}, SectorBasis::sector(n, -mz)));
    for (std::size_t i = 0; i < up.size(); ++i) CHECK(std::abs(up.values[i] - dn.values[i]) < 1e-10);
  }
}

TEST_CASE("zero-field spectra reproduce field-dependent levels") {
  const int n = 8;
  const auto zf = zero_field_spectra(n, -0.5, 1.0, {.levels = 2});
  for (double b : {0.0, 0.25, 1.3}) {
    for (int mz : magnetizations(n)) {
      const auto direct = dense_spectrum(build_hamiltonian({n, -0.5, 1.0, b}, SectorBasis::sector(n, mz)));
      CHECK(std::abs(zf.energy(mz, 0, b) - direct.values[0]) < 1e-10);
    }
  }
}

TEST_CASE("paramagnetic point is the polarized state") {
  // All up: sum over bonds of J/4 minus B N/2.
  const int n = 8;
  const auto gm = ground_manifold(HamiltonianParams{n, 0.5, 1.0, 3.0});
  CHECK(gm.unique());
  CHECK(gm.e0 == doctest::Approx((4 * 1.0 + 4 * 0.5) / 4.0 - 3.0 * 4).epsilon(1e-12));
  CHECK(gm.state_mz.front() == n / 2);
  const auto labels = label_ground_manifold(gm);
  CHECK(labels.mz_display == n);
  CHECK(labels.z == 0);
}

TEST_CASE("singlet ground state carries zero-sector labels") {
  const int n = 8;
  const auto gm = ground_manifold(HamiltonianParams{n, 1.0, 1.0, 0.0});
  REQUIRE(gm.unique());
  CHECK(gm.state_mz.front() == 0);
  const auto labels = label_ground_manifold(gm);
  CHECK(labels.mz_display == n / 2);
  REQUIRE(labels.k.has_value());
  CHECK(*labels.k >= 0);
  CHECK(*labels.k <= n / 4);
  CHECK(std::abs(labels.z) == 1);
  REQUIRE(labels.p.has_value());
  CHECK(std::abs(*labels.p) == 1);
}

TEST_CASE("ground energy gap and degeneracy") {
  // Decoupled dimers (lambda = 0): N/2 singlets, gap 1 to the first triplet.
  const auto gm = ground_manifold(HamiltonianParams{8, 0.0, 1.0, 0.0});
  CHECK(gm.e0 == doctest::Approx(-0.75 * 4).epsilon(1e-12));
  CHECK(gm.gap == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gm.unique());
}

TEST_CASE("dense solver refuses oversized blocks") {
  CHECK_THROWS_AS(dense_spectrum(build_hamiltonian({16, 0.0, 1.0, 0.0}, SectorBasis::sector(16, 0))), Error);
}
