#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "altspin/eigensolver.hpp"
#include "altspin/states.hpp"

namespace altspin {

enum class InitialKind { GroundState, Neel };

// Sudden quench: the initial state (ground state of `initial`, or the Neel
// state) evolves under H(final_params) on the time grid.
struct QuenchSpec {
  HamiltonianParams initial;
  HamiltonianParams final_params;
  std::vector<double> times;
  InitialKind initial_kind = InitialKind::GroundState;

  void validate() const;
};

// 0, dt, 2 dt, ..., t_max (t_max included when it lands on the grid).
std::vector<double> uniform_times(double t_max, double dt);

// Unique ground state of the initial Hamiltonian (degenerate manifolds are
// rejected) or the Neel state.
StateVector prepare_initial_state(const QuenchSpec& spec, const SpectraOptions& opt = {});

// Exact evolution inside the initial state's sector from one dense
// decomposition of the final Hamiltonian block.
class QuenchEvolution {
 public:
  QuenchEvolution(StateVector psi0, const HamiltonianParams& final_params);

  const StateVector& initial() const noexcept { return psi0_; }
  StateVector state_at(double t) const;
  // Columns are the evolved amplitudes at each time.
  Eigen::MatrixXcd states_at(std::span<const double> times) const;
  // L(t) = |<psi0|psi_t>|^2 = |sum_k |c_k|^2 exp(-i E_k t)|^2.
  double echo_at(double t) const;
  // <psi0|H_final|psi0>, conserved along the evolution.
  double energy() const;
  std::span<const double> overlaps() const noexcept { return weights_; }

 private:
  StateVector psi0_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd modes_;
  Eigen::VectorXcd coeffs_;
  std::vector<double> weights_;
};

// Streams (t, psi_t) in time order.
void evolve(const QuenchSpec& spec, const std::function<void(double, const StateVector&)>& sink,
            const SpectraOptions& opt = {});

// exp(-i H t) psi by a Chebyshev expansion; accurate to ~tol in norm.
StateVector chebyshev_propagate(const SparseOperator& h, const StateVector& psi, double t, double tol = 1e-14);

// Bessel functions J_0..J_kmax(x) by Miller's backward recurrence.
std::vector<double> bessel_j_sequence(double x, int kmax);

// Finite-size rate functions from an echo value.
double rate_std(double echo, int n);    // -(1/N) ln L, non-negative
double rate_paper(double echo, int n);  // +(1/N) ln L, non-positive

// Centres of maximal runs with echo < threshold on a uniform grid.
std::vector<double> detect_critical_times(std::span<const double> times, std::span<const double> echo,
                                          double threshold = 1e-2);

struct KinkOptions {
  double kappa = 20.0;             // multiple of the median |second difference|
  double min_slope_change = 0.05;  // absolute slope jump per unit time
};

std::vector<double> detect_ggm_kinks(std::span<const double> g, double dt, const KinkOptions& opt = {},
                                     double t0 = 0.0);

struct QuenchTrace {
  std::vector<double> times;
  std::vector<double> ggm;
  std::vector<double> echo;
  std::vector<double> rate_std;
  std::vector<double> rate_paper;
  std::vector<double> half_entropy;
  std::vector<double> critical_times;
  std::vector<double> kink_times;
};

struct TraceOptions {
  bool ggm = true;
  bool half_entropy = false;
  GgmMode ggm_mode = GgmMode::Restricted;
  double echo_threshold = 1e-2;
  KinkOptions kinks;
  std::size_t chunk = 256;  // times evolved per batch
};

QuenchTrace run_quench(const StateVector& psi0, const HamiltonianParams& final_params, std::span<const double> times,
                       const TraceOptions& opt = {});
QuenchTrace run_quench(const QuenchSpec& spec, const TraceOptions& opt = {});

// S(sites 1..N/2) of the evolved Neel state.
std::vector<double> half_block_entropy_trace(const QuenchSpec& spec);

}  // namespace altspin
