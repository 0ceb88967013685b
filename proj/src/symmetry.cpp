#include "altspin/symmetry.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "altspin/error.hpp"

namespace altspin {

namespace {

BasisState permute(BasisState s, Symmetry op) {
  switch (op) {
    case Symmetry::Translation: return apply_translation(s);
    case Symmetry::Parity: return apply_parity(s);
    case Symmetry::SpinInversion: return apply_spin_inversion(s);
  }
  return s;
}

// Restricts a full-space vector to the single sector carrying its weight.
StateVector to_sector(const StateVector& v, double tol) {
  if (!v.basis().is_full()) return v;
  const int n = v.n();
  std::vector<double> weight(static_cast<std::size_t>(n + 1), 0.0);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    weight[static_cast<std::size_t>(std::popcount(v.basis().state(i)))] += std::norm(v.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  int best = 0;
  for (int u = 1; u <= n; ++u) {
    if (weight[static_cast<std::size_t>(u)] > weight[static_cast<std::size_t>(best)]) best = u;
  }
  if (1.0 - weight[static_cast<std::size_t>(best)] > tol) {
    throw_parameter("state is not an eigenvector of total S^z");
  }
  auto sector = SectorBasis::sector(n, best - n / 2);
  Eigen::VectorXcd a(static_cast<Eigen::Index>(sector->size()));
  for (std::size_t i = 0; i < sector->size(); ++i) a(static_cast<Eigen::Index>(i)) = v.amplitudes()(sector->state(i));
  return StateVector(std::move(sector), std::move(a));
}

}  // namespace

StateVector apply_symmetry(const StateVector& v, Symmetry op) {
  const auto& basis = v.basis();
  BasisPtr target = v.basis_ptr();
  if (op == Symmetry::SpinInversion && !basis.is_full()) target = SectorBasis::sector(basis.n(), -*basis.mz());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisState image = permute({basis.state(i), basis.n()}, op);
    out(static_cast<Eigen::Index>(*target->index_of(image.bits))) = v.amplitudes()(static_cast<Eigen::Index>(i));
  }
  return StateVector(std::move(target), std::move(out));
}

SymmetryMeasurement measure_symmetry(const StateVector& v, Symmetry op) {
  const StateVector image = apply_symmetry(v, op);
  if (!image.basis().same_space(v.basis())) {
    // Z only maps a sector onto itself at m^z = 0.
    return {cplx{}, image.norm()};
  }
  const cplx expectation = v.inner(image);
  const double residual = (image.amplitudes() - expectation * v.amplitudes()).norm();
  return {expectation, residual};
}

SymmetryLabels label_eigenstate(const StateVector& input, double tol) {
  require_normalized(input);
  const StateVector v = to_sector(input, tol);
  const int n = v.n();
  const int mz = *v.basis().mz();

  SymmetryLabels labels;
  labels.mz_display = mz + n / 2;

  const auto t = measure_symmetry(v, Symmetry::Translation);
  if (t.residual < tol && std::abs(std::abs(t.expectation) - 1.0) < tol) {
    const int period = std::max(1, n / 2);
    const double phase = std::arg(t.expectation);
    int k = static_cast<int>(std::lround(phase * period / (2.0 * std::numbers::pi)));
    k = ((k % period) + period) % period;
    labels.k = std::min(k, period - k);
  }

  const auto p = measure_symmetry(v, Symmetry::Parity);
  if (p.residual < tol && std::abs(std::abs(p.expectation.real()) - 1.0) < tol) {
    labels.p = p.expectation.real() > 0 ? 1 : -1;
  }

  if (mz == 0) {
    const auto z = measure_symmetry(v, Symmetry::SpinInversion);
    if (z.residual < tol && std::abs(std::abs(z.expectation.real()) - 1.0) < tol) {
      labels.z = z.expectation.real() > 0 ? 1 : -1;
    }
  }
  return labels;
}

}  // namespace altspin
