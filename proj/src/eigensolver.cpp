#include "altspin/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "altspin/error.hpp"

namespace altspin {

StateVector EigenResult::state(std::size_t i) const {
  return StateVector(basis, vectors.col(static_cast<Eigen::Index>(i)).cast<cplx>());
}

bool degenerate(double e0, double e1) noexcept {
  return std::abs(e0 - e1) < 1e-8 * std::max(1.0, std::abs(e0));
}

namespace {

void require_real_symmetric(const SparseOperator& op) {
  if (!op.is_real()) throw_capability("eigensolvers handle real symmetric operators only");
  if (!op.is_hermitian(1e-12)) throw_parameter("operator is not symmetric");
}

struct Tridiagonal {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Tridiagonal solve_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t m) {
  const auto size = static_cast<Eigen::Index>(m);
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), size);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(std::max<Eigen::Index>(size - 1, 0));
  for (std::size_t i = 0; i + 1 < m; ++i) off(static_cast<Eigen::Index>(i)) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (m == 1) {
    return {diag, Eigen::MatrixXd::Identity(1, 1)};
  }
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("tridiagonal eigensolver failed", std::numeric_limits<double>::infinity());
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

void project_out(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index cols) {
  if (cols == 0) return;
  const auto block = basis.leftCols(cols);
  for (int pass = 0; pass < 2; ++pass) w.noalias() -= block * (block.transpose() * w);
}

}  // namespace

EigenResult lanczos(const SparseOperator& op, int k, double tol, std::uint64_t seed, const LanczosOptions& opt) {
  require_real_symmetric(op);
  if (k < 1) throw_parameter("lanczos needs k >= 1");
  if (!(tol > 0.0)) throw_parameter("lanczos tolerance must be positive");
  const auto dim = static_cast<Eigen::Index>(op.dim());
  const Eigen::Index wanted = std::min<Eigen::Index>(k, dim);

  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    op.multiply(std::span<const double>(x.data(), x.size()), std::span<double>(y.data(), y.size()));
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
    return v;
  };

  Eigen::MatrixXd locked(dim, wanted);
  std::vector<double> values;
  std::vector<double> residuals;
  Eigen::VectorXd w(dim);
  Eigen::VectorXd hy(dim);

  for (Eigen::Index target = 0; target < wanted; ++target) {
    const Eigen::Index free_dim = dim - target;
    const Eigen::Index m_max = std::min<Eigen::Index>(opt.max_krylov, free_dim);
    Eigen::VectorXd start = random_vector();
    double best = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int cycle = 0; cycle < opt.max_cycles && !converged; ++cycle) {
      project_out(start, locked, target);
      double nrm = start.norm();
      if (nrm < 1e-8) {
        start = random_vector();
        project_out(start, locked, target);
        nrm = start.norm();
      }
      Eigen::MatrixXd q(dim, m_max);
      q.col(0) = start / nrm;
      std::vector<double> alpha;
      std::vector<double> beta;
      double scale = 1.0;
      std::size_t m = 0;
      Tridiagonal ritz;

      for (Eigen::Index j = 0; j < m_max; ++j) {
        apply(q.col(j), w);
        const double a = q.col(j).dot(w);
        alpha.push_back(a);
        scale = std::max(scale, std::abs(a));
        w -= a * q.col(j);
        if (j > 0) w -= beta.back() * q.col(j - 1);
        project_out(w, q, j + 1);
        project_out(w, locked, target);
        const double b = w.norm();
        beta.push_back(b);
        m = static_cast<std::size_t>(j + 1);

        const bool exhausted = b < 1e-13 * scale || j + 1 == m_max;
        if (exhausted || (j + 1) % opt.check_every == 0) {
          ritz = solve_tridiagonal(alpha, beta, m);
          const double estimate = b * std::abs(ritz.vectors(static_cast<Eigen::Index>(m) - 1, 0));
          if (exhausted || estimate < 0.1 * tol) break;
        }
        q.col(j + 1) = w / b;
      }

      Eigen::VectorXd y = q.leftCols(static_cast<Eigen::Index>(m)) * ritz.vectors.col(0);
      project_out(y, locked, target);
      y.normalize();
      apply(y, hy);
      const double theta = y.dot(hy);
      const double residual = (hy - theta * y).norm();
      best = std::min(best, residual);
      if (residual < tol) {
        locked.col(target) = y;
        values.push_back(theta);
        residuals.push_back(residual);
        converged = true;
      } else {
        start = y;
      }
    }
    if (!converged) {
      throw ConvergenceError("lanczos did not reach residual " + std::to_string(tol) + " for eigenpair " +
                                 std::to_string(target) + " (best " + std::to_string(best) + ")",
                             best);
    }
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  EigenResult out;
  out.basis = op.basis_ptr();
  out.vectors.resize(dim, wanted);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values.push_back(values[order[i]]);
    out.residuals.push_back(residuals[order[i]]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = locked.col(static_cast<Eigen::Index>(order[i]));
  }
  return out;
}

EigenResult dense_spectrum(const SparseOperator& op) {
  if (op.dim() > kDenseLimit) {
    throw_capability("dense diagonalization limited to dimension " + std::to_string(kDenseLimit) + ", got " +
                     std::to_string(op.dim()));
  }
  require_real_symmetric(op);
  const auto n = static_cast<Eigen::Index>(op.dim());
  EigenResult out;
  out.basis = op.basis_ptr();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense_real());
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
  const Eigen::VectorXd& w = es.eigenvalues();
  out.vectors = es.eigenvectors();
  out.values.assign(w.data(), w.data() + n);
  out.residuals.assign(static_cast<std::size_t>(n), 0.0);
  Eigen::VectorXd hy(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd y = out.vectors.col(i);
    op.multiply(std::span<const double>(y.data(), y.size()), std::span<double>(hy.data(), hy.size()));
    out.residuals[static_cast<std::size_t>(i)] = (hy - w(i) * y).norm();
  }
  return out;
}

namespace {

EigenResult spin_inverted(const EigenResult& src, int n) {
  EigenResult out;
  const auto& basis = *src.basis;
  out.basis = SectorBasis::sector(n, -*basis.mz());
  out.values = src.values;
  out.residuals = src.residuals;
  out.vectors.resize(src.vectors.rows(), src.vectors.cols());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto target = *out.basis->index_of(apply_spin_inversion({basis.state(i), n}).bits);
    out.vectors.row(static_cast<Eigen::Index>(target)) = src.vectors.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

EigenResult solve_sector(const HamiltonianParams& p, int mz, int levels, const SpectraOptions& opt) {
  const auto op = build_hamiltonian(p, SectorBasis::sector(p.n, mz));
  if (opt.full || op.dim() <= opt.dense_threshold) {
    EigenResult all = dense_spectrum(op);
    if (opt.full) return all;
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(levels), all.size());
    all.values.resize(keep);
    all.residuals.resize(keep);
    all.vectors = all.vectors.leftCols(static_cast<Eigen::Index>(keep)).eval();
    return all;
  }
  // Seed depends on the sector only, keeping scans reproducible across workers.
  return lanczos(op, levels, opt.tol, opt.seed * 1000003ULL + static_cast<std::uint64_t>(mz + p.n));
}

}  // namespace

ZeroFieldSpectra zero_field_spectra(int n, double lambda, double delta, const SpectraOptions& opt) {
  const HamiltonianParams p{n, lambda, delta, 0.0};
  p.validate();
  if (opt.full && binomial(n, n / 2) > kDenseLimit) {
    throw_capability("complete spectra need sector dimension <= " + std::to_string(kDenseLimit));
  }
  ZeroFieldSpectra out;
  out.n = n;
  out.lambda = lambda;
  out.delta = delta;
  out.full = opt.full;
  out.sectors.resize(static_cast<std::size_t>(n + 1));
  for (int mz = 0; mz <= n / 2; ++mz) {
    out.sectors[static_cast<std::size_t>(mz + n / 2)] = solve_sector(p, mz, opt.levels, opt);
    if (mz > 0) {
      out.sectors[static_cast<std::size_t>(-mz + n / 2)] = spin_inverted(out.sector(mz), n);
    }
  }
  return out;
}

void extend_levels(ZeroFieldSpectra& spectra, int mz, int levels, const SpectraOptions& opt) {
  const HamiltonianParams p{spectra.n, spectra.lambda, spectra.delta, 0.0};
  const int am = std::abs(mz);
  spectra.sectors[static_cast<std::size_t>(am + spectra.n / 2)] = solve_sector(p, am, levels, opt);
  if (am > 0) spectra.sectors[static_cast<std::size_t>(-am + spectra.n / 2)] = spin_inverted(spectra.sector(am), spectra.n);
}

GroundManifold ground_manifold(const ZeroFieldSpectra& spectra, double b) {
  struct Level {
    double e;
    int mz;
    std::size_t idx;
  };
  std::vector<Level> levels;
  for (int mz = -spectra.n / 2; mz <= spectra.n / 2; ++mz) {
    const auto& s = spectra.sector(mz);
    for (std::size_t i = 0; i < s.size(); ++i) levels.push_back({spectra.energy(mz, i, b), mz, i});
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& c) { return a.e < c.e; });

  GroundManifold gm;
  gm.e0 = levels.front().e;
  gm.e1 = levels.size() > 1 ? levels[1].e : levels.front().e;
  gm.gap = std::max(0.0, gm.e1 - gm.e0);
  gm.degeneracy = 0;
  for (const auto& l : levels) {
    if (!degenerate(gm.e0, l.e)) break;
    ++gm.degeneracy;
    gm.states.push_back(spectra.sector(l.mz).state(l.idx));
    gm.state_mz.push_back(l.mz);
  }
  for (int mz = -spectra.n / 2; mz <= spectra.n / 2 && !spectra.full; ++mz) {
    const auto& s = spectra.sector(mz);
    if (s.size() < s.basis->size() && degenerate(gm.e0, spectra.energy(mz, s.size() - 1, b))) gm.saturated = true;
  }
  return gm;
}

GroundManifold ground_manifold(ZeroFieldSpectra& spectra, double b, const SpectraOptions& opt) {
  constexpr int kMaxLevels = 4;
  GroundManifold gm = ground_manifold(spectra, b);
  while (gm.saturated) {
    bool grew = false;
    for (int mz = 0; mz <= spectra.n / 2; ++mz) {
      const auto& s = spectra.sector(mz);
      const bool full_sector = s.size() >= s.basis->size();
      const bool hit = degenerate(gm.e0, spectra.energy(mz, s.size() - 1, b)) ||
                       degenerate(gm.e0, spectra.energy(-mz, s.size() - 1, b));
      if (hit && !full_sector && static_cast<int>(s.size()) < kMaxLevels) {
        extend_levels(spectra, mz, static_cast<int>(s.size()) + 1, opt);
        grew = true;
      }
    }
    if (!grew) break;
    gm = ground_manifold(spectra, b);
  }
  return gm;
}

GroundManifold ground_manifold(const HamiltonianParams& p, const SpectraOptions& opt) {
  p.validate();
  ZeroFieldSpectra spectra = zero_field_spectra(p.n, p.lambda, p.delta, opt);
  return ground_manifold(spectra, p.b, opt);
}

SymmetryLabels label_ground_manifold(const GroundManifold& gm, double tol) {
  std::vector<SymmetryLabels> each;
  for (const auto& s : gm.states) each.push_back(label_eigenstate(s, tol));
  SymmetryLabels out = each.front();
  if (gm.degeneracy == 1) return out;

  const bool same_mz = std::all_of(gm.state_mz.begin(), gm.state_mz.end(), [&](int m) { return m == gm.state_mz[0]; });
  if (gm.degeneracy > 2) out.mz_display = -2;
  else if (!same_mz) out.mz_display = -1;
  // k, p, z survive only when every member of the manifold carries the same value.
  for (const auto& l : each) {
    if (l.k != out.k) out.k.reset();
    if (l.p != out.p) out.p.reset();
    if (l.z != out.z) out.z = 0;
  }
  if (!same_mz) {
    out.k.reset();
    out.p.reset();
    out.z = 0;
  }
  return out;
}

}  // namespace altspin
