#include <doctest.h>

#include <cmath>

#include "altspin/eigensolver.hpp"
#include "altspin/error.hpp"
#include "altspin/hamiltonian.hpp"
#include "altspin/states.hpp"
#include "reference.hpp"

using namespace altspin;

namespace {

DensityMatrix two_qubit(const Eigen::Matrix4cd& m) { return {m, {1, 2}}; }

Eigen::Matrix4cd singlet_projector() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

StateVector full_state(int n, const Eigen::VectorXcd& amps) { return StateVector(SectorBasis::full(n), amps); }

}  // namespace

TEST_CASE("log negativity of Werner states") {
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
    const Eigen::Matrix4cd rho = p * singlet_projector() + (1 - p) / 4.0 * Eigen::Matrix4cd::Identity();
    // Trace norm of the partial transpose is (1 + 3p)/2 above p = 1/3.
    const double expect = p > 1.0 / 3.0 ? std::log2((1 + 3 * p) / 2) : 0.0;
    CHECK(log_negativity(two_qubit(rho)) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(log_negativity(two_qubit(0.5 * singlet_projector() + 0.125 * Eigen::Matrix4cd::Identity())) ==
        doctest::Approx(std::log2(1.25)).epsilon(1e-12));
}

TEST_CASE("zz correlator and entropy of simple two-qubit states") {
  CHECK(classical_correlator_zz(two_qubit(singlet_projector())) == doctest::Approx(-1.0));
  Eigen::Matrix4cd up = Eigen::Matrix4cd::Zero();
  up(3, 3) = 1.0;
  CHECK(classical_correlator_zz(two_qubit(up)) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(two_qubit(up)) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(two_qubit(Eigen::Matrix4cd::Identity() / 4.0)) == doctest::Approx(2.0));

  DensityMatrix q{Eigen::MatrixXcd::Zero(2, 2), {1}};
  q.matrix(0, 0) = 0.25;
  q.matrix(1, 1) = 0.75;
  CHECK(von_neumann_entropy(q) == doctest::Approx(0.811278124459).epsilon(1e-10));
}

TEST_CASE("partial trace matches explicit index sums") {
  const int n = 6;
  const Eigen::VectorXcd amps = ref::random_state(1 << n, 9);
  const StateVector psi = full_state(n, amps);
  for (const std::vector<int>& keep : {std::vector<int>{1}, {2, 3}, {5, 1}, {1, 3, 6}, {2, 4, 5, 6}}) {
    const auto rho = partial_trace(psi, keep);
    CHECK(ref::max_abs(rho.matrix - ref::reduce(amps, n, keep)) < 1e-13);
    CHECK_NOTHROW(rho.validate());
  }
}

TEST_CASE("partial trace on a sector agrees with the full-space vector") {
  const int n = 8;
  const auto gm = ground_manifold(HamiltonianParams{n, -0.5, 1.0, 0.25});
  const StateVector& psi = gm.states.front();
  const StateVector full = psi.to_full();
  for (const std::vector<int>& keep : {std::vector<int>{1, 2}, {2, 3}, {4, 7}}) {
    CHECK(ref::max_abs(partial_trace(psi, keep).matrix - partial_trace(full, keep).matrix) < 1e-13);
  }
  // Tracing in two steps equals tracing at once.
  const auto big = partial_trace(psi, std::vector<int>{1, 2, 3});
  const auto small = partial_trace(big, std::vector<int>{1, 3});
  CHECK(ref::max_abs(small.matrix - partial_trace(psi, std::vector<int>{1, 3}).matrix) < 1e-13);
}

TEST_CASE("GGM of reference states") {
  const int n = 4;
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(16);
  ghz(0) = ghz(15) = 1.0 / std::sqrt(2.0);
  CHECK(ggm(full_state(n, ghz), GgmMode::Restricted).value == doctest::Approx(0.5));
  CHECK(ggm(full_state(n, ghz), GgmMode::Full).value == doctest::Approx(0.5));

  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(16);
  for (int s = 0; s < 4; ++s) w(1 << s) = 0.5;
  CHECK(ggm(full_state(n, w)).value == doctest::Approx(0.25));

  CHECK(ggm(neel_state(8)).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("full GGM never exceeds restricted GGM") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const StateVector psi = full_state(8, ref::random_state(256, seed));
    const double r = ggm(psi, GgmMode::Restricted).value;
    const double f = ggm(psi, GgmMode::Full).value;
    CHECK(f <= r + 1e-12);
    CHECK(r <= 0.5 + 1e-12);
  }
  CHECK_THROWS_AS(ggm(neel_state(12), GgmMode::Full), Error);
}

TEST_CASE("Schmidt coefficients match a singular value decomposition") {
  const int n = 6;
  const Eigen::VectorXcd amps = ref::random_state(64, 4);
  // Sites {1,2,3} are the low bits, so the amplitude reshapes column-major.
  Eigen::MatrixXcd m = Eigen::Map<const Eigen::MatrixXcd>(amps.data(), 8, 8);
  const double sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
  CHECK(schmidt_max(full_state(n, amps), std::vector<int>{1, 2, 3}) == doctest::Approx(sv * sv).epsilon(1e-12));
}

TEST_CASE("ground-state GGM at the Haldane reference point") {
  const auto gm = ground_manifold(HamiltonianParams{12, -0.5, 1.0, 0.25});
  REQUIRE(gm.unique());
  CHECK(ggm(gm.states.front()).value == doctest::Approx(0.0189).epsilon(0.005 / 0.0189));
}

TEST_CASE("thermal state limits") {
  const HamiltonianParams p{8, -0.5, 1.0, 0.25};
  const auto cold = thermal_state(p, kZeroTemperatureBeta);
  const auto gm = ground_manifold(p);
  REQUIRE(gm.unique());
  const std::vector<int> keep{1, 2};
  CHECK(ref::max_abs(cold.reduced(keep).matrix - partial_trace(gm.states.front(), keep).matrix) < 1e-10);

  const auto hot = thermal_state(p, 1e-8);
  CHECK(ref::max_abs(hot.reduced(keep).matrix - Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-7);

  double total = 0.0;
  const auto warm = thermal_state(p, 1.3);
  for (int mz : magnetizations(8))
    for (std::size_t l = 0; l < warm.spectra().sector(mz).size(); ++l) total += warm.weight(mz, l);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal reduced state matches a dense Gibbs matrix") {
  const int n = 6;
  const double beta = 0.9;
  const Eigen::MatrixXcd h = ref::hamiltonian(n, -1.0, 0.5, 0.4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd w = (-beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp();
  const Eigen::MatrixXcd rho = es.eigenvectors() * (w / w.sum()).asDiagonal() * es.eigenvectors().adjoint();
  // Reduce the full Gibbs matrix onto sites {2, 3} by hand.
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(4, 4);
  for (int x = 0; x < 64; ++x)
    for (int y = 0; y < 64; ++y) {
      if ((x & ~0b110) != (y & ~0b110)) continue;
      r((x >> 1) & 3, (y >> 1) & 3) += rho(x, y);
    }
  const auto g = thermal_state(HamiltonianParams{n, -1.0, 0.5, 0.4}, beta);
  CHECK(ref::max_abs(g.reduced(std::vector<int>{2, 3}).matrix - r) < 1e-12);

  auto spectra = std::make_shared<const ZeroFieldSpectra>(zero_field_spectra(n, -1.0, 0.5, {.full = true}));
  const ThermalReducedTable table(spectra, {2, 3});
  CHECK(ref::max_abs(table.at(0.4, beta).matrix - r) < 1e-12);
}

TEST_CASE("low-temperature ensemble agrees with the complete one") {
  const HamiltonianParams p{10, -0.5, 1.0, 0.25};
  const std::vector<int> keep{1, 2};
  for (double beta : {50.0, 1e4}) {
    const auto a = thermal_state(p, beta).reduced(keep);
    const auto b = low_temperature_state(p, beta).reduced(keep);
    CHECK(ref::max_abs(a.matrix - b.matrix) < 1e-10);
  }
}

TEST_CASE("density matrix validation") {
  DensityMatrix bad{Eigen::MatrixXcd::Identity(2, 2), {1}};
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(classical_correlator_zz(bad), Error);
}
