#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "altspin/altspin.h"

TEST_CASE("version and status names") {
  CHECK(std::string(altspin_version()) == "0.1.0");
  CHECK(std::string(altspin_status_name(ALTSPIN_ERR_CONFIG)) == "config error");
}

TEST_CASE("operator handle") {
  const altspin_params p{4, 1.0, 1.0, 0.0};
  altspin_operator* op = nullptr;
  REQUIRE(altspin_hamiltonian(&p, 0, 1, &op) == ALTSPIN_OK);
  size_t dim = 0;
  REQUIRE(altspin_operator_dim(op, &dim) == ALTSPIN_OK);
  CHECK(dim == 16);
  double e[2];
  REQUIRE(altspin_operator_lowest(op, 2, 1e-12, 1, e) == ALTSPIN_OK);
  CHECK(e[0] == doctest::Approx(-2.0));

  // All-up state is an eigenvector with energy 4 * 1/4.
  std::vector<double> in(2 * dim, 0.0), out(2 * dim, 0.0);
  in[2 * 15] = 1.0;
  REQUIRE(altspin_operator_apply(op, in.data(), out.data(), dim) == ALTSPIN_OK);
  CHECK(out[2 * 15] == doctest::Approx(1.0));
  CHECK(altspin_operator_apply(op, in.data(), out.data(), dim - 1) == ALTSPIN_ERR_DIMENSION);
  CHECK(std::string(altspin_last_error()).size() > 0);
  altspin_operator_free(op);
}

TEST_CASE("parameter errors are reported, not thrown") {
  const altspin_params bad{5, 0.0, 1.0, 0.0};
  altspin_operator* op = nullptr;
  CHECK(altspin_hamiltonian(&bad, 0, 0, &op) == ALTSPIN_ERR_PARAMETER);
  CHECK(op == nullptr);
  CHECK(altspin_hamiltonian(nullptr, 0, 0, &op) == ALTSPIN_ERR_PARAMETER);
}

TEST_CASE("ground state, reduction and quench") {
  const altspin_params p0{8, -0.5, 1.0, 0.25};
  altspin_state* psi = nullptr;
  double e0 = 0.0, gap = 0.0;
  int deg = 0;
  REQUIRE(altspin_ground_state(&p0, &psi, &e0, &gap, &deg) == ALTSPIN_OK);
  CHECK(deg == 1);
  CHECK(gap > 0.0);
  int mz = 99;
  REQUIRE(altspin_state_mz(psi, &mz) == ALTSPIN_OK);
  CHECK(mz == 0);

  double g = -1.0;
  REQUIRE(altspin_state_ggm(psi, 0, &g) == ALTSPIN_OK);
  CHECK(g >= 0.0);
  CHECK(g <= 0.5);
  double gf = -1.0;
  REQUIRE(altspin_state_ggm(psi, 1, &gf) == ALTSPIN_OK);
  CHECK(gf <= g + 1e-12);

  const int sites[2] = {1, 2};
  altspin_density* rho = nullptr;
  REQUIRE(altspin_state_reduce(psi, sites, 2, &rho) == ALTSPIN_OK);
  size_t d = 0;
  REQUIRE(altspin_density_dim(rho, &d) == ALTSPIN_OK);
  CHECK(d == 4);
  std::vector<double> m(2 * d * d);
  REQUIRE(altspin_density_matrix(rho, m.data(), d) == ALTSPIN_OK);
  double tr = 0.0;
  for (size_t i = 0; i < d; ++i) tr += m[2 * (i * d + i)];
  CHECK(tr == doctest::Approx(1.0));
  double s = -1.0, ln = -1.0, czz = 9.0;
  CHECK(altspin_density_entropy(rho, &s) == ALTSPIN_OK);
  CHECK(altspin_density_log_negativity(rho, &ln) == ALTSPIN_OK);
  CHECK(altspin_density_czz(rho, &czz) == ALTSPIN_OK);
  CHECK(s >= 0.0);
  CHECK(ln >= 0.0);
  CHECK(std::abs(czz) <= 1.0);
  altspin_density_free(rho);

  const altspin_params p1{8, 0.9, 1.0, 0.25};
  altspin_quench* q = nullptr;
  REQUIRE(altspin_quench_create(psi, &p1, &q) == ALTSPIN_OK);
  double echo = 0.0;
  REQUIRE(altspin_quench_echo(q, 0.0, &echo) == ALTSPIN_OK);
  CHECK(echo == doctest::Approx(1.0));
  altspin_state* later = nullptr;
  REQUIRE(altspin_quench_state(q, 3.0, &later) == ALTSPIN_OK);
  size_t n = 0;
  REQUIRE(altspin_state_dim(later, &n) == ALTSPIN_OK);
  std::vector<double> a(2 * n);
  REQUIRE(altspin_state_amplitudes(later, a.data(), n) == ALTSPIN_OK);
  double norm = 0.0;
  for (double x : a) norm += x * x;
  CHECK(norm == doctest::Approx(1.0));
  altspin_state_free(later);
  altspin_quench_free(q);
  altspin_state_free(psi);
}

TEST_CASE("thermal reduced state at the paramagnetic point") {
  const altspin_params p{8, 0.5, 1.0, 3.0};
  const int sites[2] = {1, 2};
  altspin_density* rho = nullptr;
  REQUIRE(altspin_thermal_reduced(&p, 1e4, sites, 2, &rho) == ALTSPIN_OK);
  double czz = 0.0, ln = 1.0;
  altspin_density_czz(rho, &czz);
  altspin_density_log_negativity(rho, &ln);
  CHECK(czz == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(ln) < 1e-10);
  altspin_density_free(rho);
  CHECK(altspin_thermal_reduced(&p, -1.0, sites, 2, &rho) == ALTSPIN_ERR_PARAMETER);
}

TEST_CASE("neel state and oracle entry point") {
  altspin_state* s = nullptr;
  REQUIRE(altspin_neel_state(6, &s) == ALTSPIN_OK);
  double g = 1.0;
  altspin_state_ggm(s, 0, &g);
  CHECK(g == doctest::Approx(0.0));
  altspin_state_free(s);

  int failures = -1;
  std::vector<std::string> lines;
  auto collect = [](const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); };
  REQUIRE(altspin_oracle(4, 1, collect, &lines, &failures) == ALTSPIN_OK);
  CHECK(failures == 0);
  CHECK(lines.size() > 10);
  CHECK(altspin_validate("/nonexistent/file.csv", collect, &lines, &failures) != ALTSPIN_OK);
}
