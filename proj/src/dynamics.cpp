#include "altspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "altspin/error.hpp"

namespace altspin {

namespace {

double grid_step(std::span<const double> times) {
  if (times.size() < 2) throw_parameter("time grid needs at least two points");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw_parameter("time grid must be strictly increasing");
  for (std::size_t i = 2; i < times.size(); ++i) {
    const double expected = times[0] + static_cast<double>(i) * dt;
    if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw_parameter("time grid must be uniform");
    }
  }
  return dt;
}

}  // namespace

void QuenchSpec::validate() const {
  initial.validate();
  final_params.validate();
  if (initial.n != final_params.n) throw_parameter("initial and final Hamiltonians have different chain lengths");
  if (times.empty()) throw_parameter("time grid is empty");
  if (times.front() != 0.0) throw_parameter("time grid must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw_parameter("time grid must be strictly increasing");
  }
}

std::vector<double> uniform_times(double t_max, double dt) {
  if (!(dt > 0.0) || t_max < 0.0) throw_parameter("uniform time grid needs dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

StateVector prepare_initial_state(const QuenchSpec& spec, const SpectraOptions& opt) {
  if (spec.initial_kind == InitialKind::Neel) return neel_state(spec.initial.n);
  const GroundManifold gm = ground_manifold(spec.initial, opt);
  if (!gm.unique()) {
    throw_parameter("initial ground state is " + std::to_string(gm.degeneracy) + "-fold degenerate");
  }
  return gm.states.front();
}

QuenchEvolution::QuenchEvolution(StateVector psi0, const HamiltonianParams& final_params) : psi0_(std::move(psi0)) {
  if (psi0_.basis().is_full() && psi0_.n() > 12) throw_capability("full-space evolution limited to N <= 12");
  if (final_params.n != psi0_.n()) throw_parameter("initial state and final Hamiltonian differ in chain length");
  require_normalized(psi0_);
  const EigenResult eig = dense_spectrum(build_hamiltonian(final_params, psi0_.basis_ptr()));
  energies_ = Eigen::Map<const Eigen::VectorXd>(eig.values.data(), static_cast<Eigen::Index>(eig.values.size()));
  modes_ = eig.vectors;
  coeffs_ = modes_.transpose() * psi0_.amplitudes();
  weights_.resize(static_cast<std::size_t>(coeffs_.size()));
  for (Eigen::Index k = 0; k < coeffs_.size(); ++k) weights_[static_cast<std::size_t>(k)] = std::norm(coeffs_(k));
}

Eigen::MatrixXcd QuenchEvolution::states_at(std::span<const double> times) const {
  const auto d = coeffs_.size();
  const auto count = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd re(d, count);
  Eigen::MatrixXd im(d, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const double t = times[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < d; ++k) {
      const cplx c = coeffs_(k) * std::polar(1.0, -energies_(k) * t);
      re(k, j) = c.real();
      im(k, j) = c.imag();
    }
  }
  Eigen::MatrixXcd out(d, count);
  out.real() = modes_ * re;
  out.imag() = modes_ * im;
  return out;
}

StateVector QuenchEvolution::state_at(double t) const {
  const double times[1] = {t};
  return StateVector(psi0_.basis_ptr(), states_at(times).col(0));
}

double QuenchEvolution::echo_at(double t) const {
  cplx amp{};
  for (Eigen::Index k = 0; k < energies_.size(); ++k) {
    amp += weights_[static_cast<std::size_t>(k)] * std::polar(1.0, -energies_(k) * t);
  }
  return std::min(1.0, std::norm(amp));
}

double QuenchEvolution::energy() const {
  double e = 0.0;
  for (Eigen::Index k = 0; k < energies_.size(); ++k) e += weights_[static_cast<std::size_t>(k)] * energies_(k);
  return e;
}

void evolve(const QuenchSpec& spec, const std::function<void(double, const StateVector&)>& sink,
            const SpectraOptions& opt) {
  spec.validate();
  const QuenchEvolution ev(prepare_initial_state(spec, opt), spec.final_params);
  constexpr std::size_t kChunk = 256;
  for (std::size_t first = 0; first < spec.times.size(); first += kChunk) {
    const auto count = std::min(kChunk, spec.times.size() - first);
    const auto block = ev.states_at(std::span<const double>(spec.times).subspan(first, count));
    for (std::size_t j = 0; j < count; ++j) {
      sink(spec.times[first + j], StateVector(ev.initial().basis_ptr(), block.col(static_cast<Eigen::Index>(j))));
    }
  }
}

std::vector<double> bessel_j_sequence(double x, int kmax) {
  if (kmax < 0) throw_parameter("negative Bessel order");
  std::vector<double> j(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double ax = std::abs(x);
  const int top = std::max(kmax, static_cast<int>(ax));
  int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
  start += start % 2;
  std::vector<double> seq(static_cast<std::size_t>(start) + 2, 0.0);
  seq[static_cast<std::size_t>(start) + 1] = 0.0;
  seq[static_cast<std::size_t>(start)] = 1e-300;
  constexpr double kBig = 1e250;
  for (int k = start; k > 0; --k) {
    seq[static_cast<std::size_t>(k) - 1] =
        2.0 * k / ax * seq[static_cast<std::size_t>(k)] - seq[static_cast<std::size_t>(k) + 1];
    if (std::abs(seq[static_cast<std::size_t>(k) - 1]) > kBig) {
      for (int m = k - 1; m <= start; ++m) seq[static_cast<std::size_t>(m)] /= kBig;
    }
  }
  // J_0 + 2 sum_k J_2k = 1 fixes the scale.
  double norm = seq[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * seq[static_cast<std::size_t>(k)];
  for (int k = 0; k <= kmax; ++k) {
    double v = seq[static_cast<std::size_t>(k)] / norm;
    if (x < 0.0 && (k % 2 == 1)) v = -v;
    j[static_cast<std::size_t>(k)] = v;
  }
  return j;
}

StateVector chebyshev_propagate(const SparseOperator& h, const StateVector& psi, double t, double tol) {
  if (!h.basis().same_space(psi.basis())) throw_dimension("propagator and state live on different spaces");
  if (t == 0.0) return psi;
  const auto [lo, hi] = h.spectral_bounds();
  const double half_width = 0.5 * (hi - lo) * (1.0 + 1e-9) + 1e-12;
  const double centre = 0.5 * (hi + lo);
  const double x = half_width * t;
  const int kmax = static_cast<int>(std::abs(x) + 12.0 * std::cbrt(std::abs(x)) + 40.0);
  const auto coeff = bessel_j_sequence(x, kmax);

  const auto d = psi.dim();
  Eigen::VectorXcd prev = psi.amplitudes();
  Eigen::VectorXcd curr(static_cast<Eigen::Index>(d));
  Eigen::VectorXcd next(static_cast<Eigen::Index>(d));
  auto scaled_apply = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    h.multiply(std::span<const cplx>(in.data(), d), std::span<cplx>(out.data(), d));
    out = (out - centre * in) / half_width;
  };

  Eigen::VectorXcd acc = coeff[0] * prev;
  scaled_apply(prev, curr);
  cplx phase(0.0, -1.0);
  acc += 2.0 * phase * coeff[1] * curr;
  for (int k = 2; k <= kmax; ++k) {
    scaled_apply(curr, next);
    next = 2.0 * next - prev;
    phase *= cplx(0.0, -1.0);
    acc += 2.0 * phase * coeff[static_cast<std::size_t>(k)] * next;
    std::swap(prev, curr);
    std::swap(curr, next);
    if (k > std::abs(x) && std::abs(coeff[static_cast<std::size_t>(k)]) < 1e-3 * tol) break;
  }
  acc *= std::polar(1.0, -centre * t);
  return StateVector(psi.basis_ptr(), std::move(acc));
}

double rate_std(double echo, int n) { return -std::log(std::max(echo, 1e-300)) / n; }
double rate_paper(double echo, int n) { return std::log(std::max(echo, 1e-300)) / n; }

std::vector<double> detect_critical_times(std::span<const double> times, std::span<const double> echo, double threshold) {
  if (times.size() != echo.size()) throw_dimension("times and echo series differ in length");
  std::vector<double> out;
  if (times.size() < 2) return out;
  grid_step(times);
  std::size_t i = 0;
  while (i < echo.size()) {
    if (echo[i] >= threshold) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < echo.size() && echo[j + 1] < threshold) ++j;
    out.push_back(0.5 * (times[i] + times[j]));
    i = j + 1;
  }
  return out;
}

std::vector<double> detect_ggm_kinks(std::span<const double> g, double dt, const KinkOptions& opt, double t0) {
  if (g.size() < 5) throw_parameter("kink detection needs at least five samples");
  if (!(dt > 0.0)) throw_parameter("kink detection needs dt > 0");
  std::vector<double> curvature(g.size(), 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) curvature[i] = std::abs(g[i + 1] - 2.0 * g[i] + g[i - 1]) / (dt * dt);
  std::vector<double> interior(curvature.begin() + 1, curvature.end() - 1);
  std::nth_element(interior.begin(), interior.begin() + static_cast<std::ptrdiff_t>(interior.size() / 2), interior.end());
  const double median = interior[interior.size() / 2];

  auto flagged = [&](std::size_t i) {
    return curvature[i] > opt.kappa * median && curvature[i] * dt > opt.min_slope_change;
  };
  // A kink between two samples lights up neighbouring second differences;
  // each run of flagged points reports its sharpest sample.
  std::vector<double> out;
  std::size_t i = 1;
  while (i + 1 < g.size()) {
    if (!flagged(i)) {
      ++i;
      continue;
    }
    std::size_t best = i;
    std::size_t j = i;
    while (j + 2 < g.size() && flagged(j + 1)) {
      ++j;
      if (curvature[j] > curvature[best]) best = j;
    }
    out.push_back(t0 + static_cast<double>(best) * dt);
    i = j + 1;
  }
  return out;
}

QuenchTrace run_quench(const StateVector& psi0, const HamiltonianParams& final_params, std::span<const double> times,
                       const TraceOptions& opt) {
  const QuenchEvolution ev(psi0, final_params);
  const int n = psi0.n();
  QuenchTrace trace;
  trace.times.assign(times.begin(), times.end());

  std::optional<GgmEvaluator> ggm_eval;
  if (opt.ggm) ggm_eval.emplace(psi0.basis_ptr(), opt.ggm_mode);
  std::optional<PartialTracePlan> half;
  if (opt.half_entropy) {
    std::vector<int> left(static_cast<std::size_t>(n / 2));
    std::iota(left.begin(), left.end(), 1);
    half.emplace(psi0.basis_ptr(), std::move(left));
  }

  for (std::size_t first = 0; first < times.size(); first += opt.chunk) {
    const auto count = std::min(opt.chunk, times.size() - first);
    Eigen::MatrixXcd block;
    if (opt.ggm || opt.half_entropy) block = ev.states_at(times.subspan(first, count));
    for (std::size_t j = 0; j < count; ++j) {
      const double t = times[first + j];
      const double l = ev.echo_at(t);
      trace.echo.push_back(l);
      trace.rate_std.push_back(rate_std(l, n));
      trace.rate_paper.push_back(rate_paper(l, n));
      const cplx* amps = opt.ggm || opt.half_entropy ? block.col(static_cast<Eigen::Index>(j)).data() : nullptr;
      if (ggm_eval) trace.ggm.push_back(ggm_eval->evaluate(amps).value);
      if (half) {
        const DensityMatrix rho{half->reduce(amps), half->keep()};
        trace.half_entropy.push_back(von_neumann_entropy(rho));
      }
    }
  }

  if (times.size() >= 2) trace.critical_times = detect_critical_times(times, trace.echo, opt.echo_threshold);
  if (opt.ggm && times.size() >= 5) {
    const double dt = grid_step(times);
    trace.kink_times = detect_ggm_kinks(trace.ggm, dt, opt.kinks, times.front());
  }
  return trace;
}

QuenchTrace run_quench(const QuenchSpec& spec, const TraceOptions& opt) {
  spec.validate();
  return run_quench(prepare_initial_state(spec), spec.final_params, spec.times, opt);
}

std::vector<double> half_block_entropy_trace(const QuenchSpec& spec) {
  TraceOptions opt;
  opt.ggm = false;
  opt.half_entropy = true;
  return run_quench(spec, opt).half_entropy;
}

}  // namespace altspin
