#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "altspin/hamiltonian.hpp"
#include "altspin/symmetry.hpp"

namespace altspin {

// Ascending eigenpairs of a real symmetric operator; vectors are columns.
struct EigenResult {
  BasisPtr basis;
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;

  std::size_t size() const noexcept { return values.size(); }
  StateVector state(std::size_t i) const;
};

struct LanczosOptions {
  int max_krylov = 250;  // Krylov basis size per cycle
  int max_cycles = 12;   // restarts from the current Ritz vector
  int check_every = 5;
};

// k lowest eigenpairs by Lanczos with full reorthogonalization. Converged
// vectors are locked and deflated, so degenerate levels are returned with
// their multiplicity. Deterministic for a given seed.
EigenResult lanczos(const SparseOperator& op, int k, double tol, std::uint64_t seed, const LanczosOptions& opt = {});

inline constexpr std::size_t kDenseLimit = 4096;

// Complete spectrum, dense. Throws a capability error above kDenseLimit.
EigenResult dense_spectrum(const SparseOperator& op);

// Two levels are degenerate when |E0 - E1| < 1e-8 max(1, |E0|).
bool degenerate(double e0, double e1) noexcept;

struct SpectraOptions {
  int levels = 2;    // lowest levels per sector (ignored when full)
  bool full = false; // complete spectra of every sector
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::size_t dense_threshold = 300;  // sectors up to this size use the dense solver
};

// Per-sector eigenpairs of H(lambda, delta, B = 0). The field only shifts a
// sector's levels by -B m^z, so one instance serves every B. Negative m^z
// sectors are the spin-inverted images of the positive ones.
struct ZeroFieldSpectra {
  int n = 0;
  double lambda = 0.0;
  double delta = 1.0;
  bool full = false;
  std::vector<EigenResult> sectors;  // index m^z + n/2

  const EigenResult& sector(int mz) const { return sectors.at(static_cast<std::size_t>(mz + n / 2)); }
  double energy(int mz, std::size_t level, double b) const { return sector(mz).values[level] - b * mz; }
};

ZeroFieldSpectra zero_field_spectra(int n, double lambda, double delta, const SpectraOptions& opt = {});

// Recomputes sector +-mz with at least `levels` eigenpairs.
void extend_levels(ZeroFieldSpectra& spectra, int mz, int levels, const SpectraOptions& opt = {});

struct GroundManifold {
  double e0 = 0.0;
  double e1 = 0.0;
  double gap = 0.0;
  int degeneracy = 1;
  std::vector<StateVector> states;
  std::vector<int> state_mz;
  // Set when a sector's highest computed level is still degenerate with e0,
  // meaning the multiplicity may be undercounted.
  bool saturated = false;

  bool unique() const noexcept { return degeneracy == 1; }
};

GroundManifold ground_manifold(const ZeroFieldSpectra& spectra, double b);

// Scans every sector, growing the per-sector level count (up to 4) until the
// degenerate manifold is resolved.
GroundManifold ground_manifold(const HamiltonianParams& p, const SpectraOptions& opt = {});
GroundManifold ground_manifold(ZeroFieldSpectra& spectra, double b, const SpectraOptions& opt);

SymmetryLabels label_ground_manifold(const GroundManifold& gm, double tol = 1e-8);

}  // namespace altspin
