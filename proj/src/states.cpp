#include "altspin/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "altspin/error.hpp"

namespace altspin {

namespace {

void check_sites(int n, const std::vector<int>& sites) {
  if (sites.empty()) throw_parameter("site subset must be nonempty");
  std::set<int> seen;
  for (int s : sites) {
    if (s < 1 || s > n) throw_parameter("site " + std::to_string(s) + " outside 1.." + std::to_string(n));
    if (!seen.insert(s).second) throw_parameter("duplicate site " + std::to_string(s));
  }
}

std::uint32_t gather(Bits config, const std::vector<int>& sites) {
  std::uint32_t local = 0;
  for (std::size_t q = 0; q < sites.size(); ++q) {
    if ((config >> (sites[q] - 1)) & 1u) local |= 1u << q;
  }
  return local;
}

std::vector<int> complement(int n, std::span<const int> part) {
  std::vector<int> rest;
  for (int s = 1; s <= n; ++s) {
    if (std::find(part.begin(), part.end(), s) == part.end()) rest.push_back(s);
  }
  return rest;
}

}  // namespace

void DensityMatrix::validate(double tol) const {
  const auto dim = Eigen::Index{1} << sites.size();
  if (matrix.rows() != dim || matrix.cols() != dim) throw_dimension("density matrix size does not match its sites");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol) throw_parameter("density matrix is not Hermitian");
  if (std::abs(matrix.trace() - cplx(1.0, 0.0)) > tol) throw_parameter("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw_parameter("density matrix has a negative eigenvalue");
}

PartialTracePlan::PartialTracePlan(BasisPtr basis, std::vector<int> keep) : basis_(std::move(basis)), keep_(std::move(keep)) {
  check_sites(basis_->n(), keep_);
  Bits keep_mask = 0;
  for (int s : keep_) keep_mask |= Bits{1} << (s - 1);
  struct Item {
    Bits rest;
    std::uint32_t local;
    std::uint32_t index;
  };
  std::vector<Item> items(basis_->size());
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    const Bits s = basis_->state(i);
    items[i] = {s & ~keep_mask, gather(s, keep_), static_cast<std::uint32_t>(i)};
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.rest != b.rest ? a.rest < b.rest : a.local < b.local;
  });
  local_.reserve(items.size());
  index_.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i == 0 || items[i].rest != items[i - 1].rest) group_start_.push_back(i);
    local_.push_back(items[i].local);
    index_.push_back(items[i].index);
  }
  group_start_.push_back(items.size());
}

Eigen::MatrixXcd PartialTracePlan::reduce(const cplx* amps) const {
  const auto dim = Eigen::Index{1} << keep_.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t g = 0; g + 1 < group_start_.size(); ++g) {
    for (std::size_t u = group_start_[g]; u < group_start_[g + 1]; ++u) {
      const cplx au = amps[index_[u]];
      if (au == cplx{}) continue;
      for (std::size_t v = group_start_[g]; v < group_start_[g + 1]; ++v) {
        rho(local_[u], local_[v]) += au * std::conj(amps[index_[v]]);
      }
    }
  }
  return rho;
}

void PartialTracePlan::accumulate(const double* vec, double weight, Eigen::MatrixXcd& rho) const {
  for (std::size_t g = 0; g + 1 < group_start_.size(); ++g) {
    for (std::size_t u = group_start_[g]; u < group_start_[g + 1]; ++u) {
      const double au = weight * vec[index_[u]];
      if (au == 0.0) continue;
      for (std::size_t v = group_start_[g]; v < group_start_[g + 1]; ++v) {
        rho(local_[u], local_[v]) += au * vec[index_[v]];
      }
    }
  }
}

DensityMatrix PartialTracePlan::apply(const StateVector& psi) const {
  if (!psi.basis().same_space(*basis_)) throw_dimension("state basis does not match the partial-trace plan");
  return {reduce(psi.amplitudes().data()), keep_};
}

DensityMatrix partial_trace(const StateVector& psi, std::span<const int> keep) {
  return PartialTracePlan(psi.basis_ptr(), std::vector<int>(keep.begin(), keep.end())).apply(psi);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  std::vector<int> kept(keep.begin(), keep.end());
  if (kept.empty()) throw_parameter("site subset must be nonempty");
  std::vector<int> position;
  for (int s : kept) {
    const auto it = std::find(rho.sites.begin(), rho.sites.end(), s);
    if (it == rho.sites.end()) throw_parameter("site " + std::to_string(s) + " is not part of the density matrix");
    if (std::find(position.begin(), position.end(), it - rho.sites.begin()) != position.end()) {
      throw_parameter("duplicate site " + std::to_string(s));
    }
    position.push_back(static_cast<int>(it - rho.sites.begin()));
  }
  const auto dim = Eigen::Index{1} << kept.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  std::uint32_t keep_mask = 0;
  for (int q : position) keep_mask |= 1u << q;
  auto local = [&](std::uint32_t global) {
    std::uint32_t a = 0;
    for (std::size_t q = 0; q < position.size(); ++q) {
      if ((global >> position[q]) & 1u) a |= 1u << q;
    }
    return a;
  };
  const auto full = static_cast<std::uint32_t>(rho.matrix.rows());
  for (std::uint32_t r = 0; r < full; ++r) {
    for (std::uint32_t c = 0; c < full; ++c) {
      if ((r & ~keep_mask) != (c & ~keep_mask)) continue;
      out(local(r), local(c)) += rho.matrix(r, c);
    }
  }
  return {std::move(out), std::move(kept)};
}

double max_eigenvalue(const Eigen::MatrixXcd& h) {
  if (h.rows() == 1) return h(0, 0).real();
  if (h.rows() == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    return 0.5 * (a + d + std::sqrt((a - d) * (a - d) + 4.0 * std::norm(h(0, 1))));
  }
  if (h.rows() == 4) {
    const Eigen::Matrix4cd m = h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(3);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

double log_negativity(const DensityMatrix& rho) {
  if (rho.matrix.rows() != 4 || rho.matrix.cols() != 4) throw_dimension("log negativity expects a 4x4 two-qubit state");
  Eigen::Matrix4cd pt;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      // Swap the first-site bit (bit 0) between row and column.
      const int r2 = (r & ~1) | (c & 1);
      const int c2 = (c & ~1) | (r & 1);
      pt(r, c) = rho.matrix(r2, c2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
  double negative = 0.0;
  for (int i = 0; i < 4; ++i) negative += std::min(0.0, es.eigenvalues()(i));
  if (negative == 0.0) return 0.0;
  const double trace = pt.trace().real();
  return std::log2(trace - 2.0 * negative);
}

double classical_correlator_zz(const DensityMatrix& rho) {
  if (rho.matrix.rows() != 4 || rho.matrix.cols() != 4) throw_dimension("zz correlator expects a 4x4 two-qubit state");
  double c = 0.0;
  for (int a = 0; a < 4; ++a) {
    const bool equal = ((a & 1) != 0) == ((a & 2) != 0);
    c += (equal ? 1.0 : -1.0) * rho.matrix(a, a).real();
  }
  return c;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

double schmidt_max(const StateVector& psi, std::span<const int> part) {
  const int n = psi.n();
  std::vector<int> kept(part.begin(), part.end());
  check_sites(n, kept);
  if (static_cast<int>(kept.size()) >= n) throw_parameter("Schmidt decomposition needs a proper subset");
  if (static_cast<int>(kept.size()) > n / 2) kept = complement(n, part);
  return max_eigenvalue(partial_trace(psi, kept).matrix);
}

GgmEvaluator::GgmEvaluator(BasisPtr basis, GgmMode mode) : basis_(std::move(basis)), mode_(mode) {
  const int n = basis_->n();
  if (mode_ == GgmMode::Restricted) {
    for (int i = 1; i <= n; ++i) plans_.emplace_back(basis_, std::vector<int>{i});
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) plans_.emplace_back(basis_, std::vector<int>{i, j});
    }
    return;
  }
  if (n > kFullGgmMaxSites) {
    throw_capability("full GGM enumerates 2^(N-1)-1 bipartitions and is limited to N <= " +
                     std::to_string(kFullGgmMaxSites));
  }
  // Each bipartition once: the smaller block, or the half containing site 1.
  for (Bits mask = 1; mask < (Bits{1} << n) - 1; ++mask) {
    const int size = std::popcount(mask);
    if (size > n / 2 || (2 * size == n && !(mask & 1u))) continue;
    std::vector<int> part;
    for (int s = 1; s <= n; ++s) {
      if ((mask >> (s - 1)) & 1u) part.push_back(s);
    }
    plans_.emplace_back(basis_, std::move(part));
  }
}

GgmResult GgmEvaluator::evaluate(const cplx* amps) const {
  GgmResult out;
  out.mode = mode_;
  double best = -1.0;
  const PartialTracePlan* arg = nullptr;
  for (const auto& plan : plans_) {
    const double top = max_eigenvalue(plan.reduce(amps));
    if (top > best) {
      best = top;
      arg = &plan;
    }
  }
  out.value = std::max(0.0, 1.0 - best);
  if (arg) out.argmax_partition = arg->keep();
  return out;
}

GgmResult GgmEvaluator::evaluate(const StateVector& psi) const {
  if (!psi.basis().same_space(*basis_)) throw_dimension("state basis does not match the GGM evaluator");
  require_normalized(psi);
  return evaluate(psi.amplitudes().data());
}

GgmResult ggm(const StateVector& psi, GgmMode mode) { return GgmEvaluator(psi.basis_ptr(), mode).evaluate(psi); }

GibbsState::GibbsState(std::shared_ptr<const ZeroFieldSpectra> spectra, double b, double beta)
    : spectra_(std::move(spectra)), b_(b), beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw_parameter("inverse temperature must be positive and finite");
  const int n = spectra_->n;
  e0_ = std::numeric_limits<double>::infinity();
  for (int mz = -n / 2; mz <= n / 2; ++mz) {
    for (std::size_t i = 0; i < spectra_->sector(mz).size(); ++i) e0_ = std::min(e0_, spectra_->energy(mz, i, b));
  }
  double z = 0.0;
  weights_.resize(static_cast<std::size_t>(n + 1));
  for (int mz = -n / 2; mz <= n / 2; ++mz) {
    auto& w = weights_[static_cast<std::size_t>(mz + n / 2)];
    const auto& s = spectra_->sector(mz);
    w.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      // Shifting by the ground energy keeps exp() finite at beta = 1e4.
      w[i] = std::exp(-beta * (spectra_->energy(mz, i, b) - e0_));
      z += w[i];
    }
  }
  for (auto& w : weights_) {
    for (auto& x : w) x /= z;
  }
  log_z_ = std::log(z) - beta * e0_;
}

double GibbsState::weight(int mz, std::size_t level) const {
  return weights_.at(static_cast<std::size_t>(mz + n() / 2)).at(level);
}

namespace {

// Weights below this fraction of the total are skipped when assembling.
constexpr double kNegligibleWeight = 1e-20;

}  // namespace

DensityMatrix GibbsState::reduced(std::span<const int> keep) const {
  std::vector<int> kept(keep.begin(), keep.end());
  check_sites(n(), kept);
  const auto dim = Eigen::Index{1} << kept.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int mz = -n() / 2; mz <= n() / 2; ++mz) {
    const auto& s = spectra_->sector(mz);
    const auto& w = weights_[static_cast<std::size_t>(mz + n() / 2)];
    if (std::none_of(w.begin(), w.end(), [](double x) { return x > kNegligibleWeight; })) continue;
    const PartialTracePlan plan(s.basis, kept);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (w[i] > kNegligibleWeight) plan.accumulate(s.vectors.col(static_cast<Eigen::Index>(i)).data(), w[i], rho);
    }
  }
  return {std::move(rho), std::move(kept)};
}

DensityMatrix GibbsState::to_dense() const {
  if (n() > 10) throw_capability("dense global density matrix limited to N <= 10");
  const auto dim = Eigen::Index{1} << n();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int mz = -n() / 2; mz <= n() / 2; ++mz) {
    const auto& s = spectra_->sector(mz);
    const auto& w = weights_[static_cast<std::size_t>(mz + n() / 2)];
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto v = s.vectors.col(static_cast<Eigen::Index>(i));
      for (std::size_t r = 0; r < s.basis->size(); ++r) {
        for (std::size_t c = 0; c < s.basis->size(); ++c) {
          rho(s.basis->state(r), s.basis->state(c)) += w[i] * v(static_cast<Eigen::Index>(r)) * v(static_cast<Eigen::Index>(c));
        }
      }
    }
  }
  std::vector<int> sites(static_cast<std::size_t>(n()));
  std::iota(sites.begin(), sites.end(), 1);
  return {std::move(rho), std::move(sites)};
}

GibbsState thermal_state(std::shared_ptr<const ZeroFieldSpectra> full_spectra, double b, double beta) {
  if (!full_spectra->full) throw_parameter("thermal_state needs complete sector spectra");
  return GibbsState(std::move(full_spectra), b, beta);
}

GibbsState thermal_state(const HamiltonianParams& p, double beta) {
  p.validate();
  if (p.n > kThermalMaxSites) {
    throw_capability("thermal states use complete spectra and are limited to N <= " + std::to_string(kThermalMaxSites));
  }
  if (!(beta > 0.0)) throw_parameter("inverse temperature must be positive");
  SpectraOptions opt;
  opt.full = true;
  auto spectra = std::make_shared<const ZeroFieldSpectra>(zero_field_spectra(p.n, p.lambda, p.delta, opt));
  return GibbsState(std::move(spectra), p.b, beta);
}

GibbsState low_temperature_state(const HamiltonianParams& p, double beta, double cutoff, const SpectraOptions& base) {
  p.validate();
  if (!(beta > 0.0)) throw_parameter("inverse temperature must be positive");
  constexpr int kMaxLevels = 24;
  SpectraOptions opt = base;
  opt.full = false;
  ZeroFieldSpectra spectra = zero_field_spectra(p.n, p.lambda, p.delta, opt);
  for (;;) {
    double e0 = std::numeric_limits<double>::infinity();
    for (int mz = -p.n / 2; mz <= p.n / 2; ++mz) {
      for (std::size_t i = 0; i < spectra.sector(mz).size(); ++i) e0 = std::min(e0, spectra.energy(mz, i, p.b));
    }
    bool grew = false;
    for (int mz = 0; mz <= p.n / 2; ++mz) {
      for (int sign : {1, -1}) {
        const auto& s = spectra.sector(sign * mz);
        if (s.size() >= s.basis->size()) continue;
        // Every discarded level lies above the highest kept one.
        const double gap = spectra.energy(sign * mz, s.size() - 1, p.b) - e0;
        const double bound = static_cast<double>(s.basis->size() - s.size()) * std::exp(-beta * gap);
        if (bound < cutoff) continue;
        if (static_cast<int>(s.size()) >= kMaxLevels) {
          throw_capability("low-temperature truncation not certified with " + std::to_string(kMaxLevels) +
                           " levels in sector mz=" + std::to_string(sign * mz));
        }
        extend_levels(spectra, mz, std::min(static_cast<int>(s.size()) * 2, kMaxLevels), opt);
        grew = true;
        break;
      }
    }
    if (!grew) break;
  }
  return GibbsState(std::make_shared<const ZeroFieldSpectra>(std::move(spectra)), p.b, beta);
}

ThermalReducedTable::ThermalReducedTable(std::shared_ptr<const ZeroFieldSpectra> spectra, std::vector<int> keep)
    : spectra_(std::move(spectra)), keep_(std::move(keep)) {
  check_sites(spectra_->n, keep_);
  const auto dim = Eigen::Index{1} << keep_.size();
  const int n = spectra_->n;
  for (int mz = -n / 2; mz <= n / 2; ++mz) {
    const auto& s = spectra_->sector(mz);
    const PartialTracePlan plan(s.basis, keep_);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(dim, dim);
      plan.accumulate(s.vectors.col(static_cast<Eigen::Index>(i)).data(), 1.0, block);
      mz_.push_back(mz);
      energy_.push_back(s.values[i]);
      blocks_.push_back(std::move(block));
    }
  }
}

DensityMatrix ThermalReducedTable::at(double b, double beta) const {
  if (!(beta > 0.0)) throw_parameter("inverse temperature must be positive");
  double e0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < energy_.size(); ++i) e0 = std::min(e0, energy_[i] - b * mz_[i]);
  const auto dim = blocks_.front().rows();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  double z = 0.0;
  for (std::size_t i = 0; i < energy_.size(); ++i) {
    const double w = std::exp(-beta * (energy_[i] - b * mz_[i] - e0));
    if (w < kNegligibleWeight) continue;
    z += w;
    rho += w * blocks_[i];
  }
  rho /= z;
  return {std::move(rho), keep_};
}

}  // namespace altspin
