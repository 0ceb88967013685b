#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "altspin/eigensolver.hpp"
#include "altspin/state_vector.hpp"

namespace altspin {

// Reduced or global mixed state. Local index bit q corresponds to sites[q].
struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  std::vector<int> sites;

  int qubits() const noexcept { return static_cast<int>(sites.size()); }
  // Throws a parameter error unless Hermitian, unit trace and positive within tol.
  void validate(double tol = 1e-10) const;
};

// Precomputed index bookkeeping for tracing a fixed basis down to `keep`.
// Reusable for every state on that basis.
class PartialTracePlan {
 public:
  PartialTracePlan(BasisPtr basis, std::vector<int> keep);

  const std::vector<int>& keep() const noexcept { return keep_; }
  const SectorBasis& basis() const noexcept { return *basis_; }

  DensityMatrix apply(const StateVector& psi) const;
  Eigen::MatrixXcd reduce(const cplx* amps) const;
  // rho += weight * Tr_rest |v><v| for a real vector v.
  void accumulate(const double* v, double weight, Eigen::MatrixXcd& rho) const;

 private:
  BasisPtr basis_;
  std::vector<int> keep_;
  std::vector<std::size_t> group_start_;
  std::vector<std::uint32_t> local_;
  std::vector<std::uint32_t> index_;
};

DensityMatrix partial_trace(const StateVector& psi, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

// log2 || rho^{T_A} ||_1 with the transpose taken on sites[0] of a two-qubit state.
double log_negativity(const DensityMatrix& rho);

// Tr[rho sigma^z (x) sigma^z] with Pauli matrices, in [-1, 1].
double classical_correlator_zz(const DensityMatrix& rho);

// Base-2 entropy; eigenvalues below 1e-14 contribute nothing.
double von_neumann_entropy(const DensityMatrix& rho);

double max_eigenvalue(const Eigen::MatrixXcd& hermitian);

// Largest squared Schmidt coefficient across part : rest.
double schmidt_max(const StateVector& psi, std::span<const int> part);

enum class GgmMode { Restricted, Full };

inline constexpr int kFullGgmMaxSites = 10;

struct GgmResult {
  double value = 0.0;
  std::vector<int> argmax_partition;
  GgmMode mode = GgmMode::Restricted;
};

// Restricted mode searches every 1-site and 2-site block; full mode every
// bipartition (n <= kFullGgmMaxSites).
class GgmEvaluator {
 public:
  GgmEvaluator(BasisPtr basis, GgmMode mode);
  GgmResult evaluate(const StateVector& psi) const;
  GgmResult evaluate(const cplx* amps) const;
  GgmMode mode() const noexcept { return mode_; }

 private:
  BasisPtr basis_;
  GgmMode mode_;
  std::vector<PartialTracePlan> plans_;
};

GgmResult ggm(const StateVector& psi, GgmMode mode = GgmMode::Restricted);

inline constexpr int kThermalMaxSites = 12;
inline constexpr double kZeroTemperatureBeta = 1e4;

// Gibbs state kept in spectral form: normalized weights over the sector
// eigenvectors of a ZeroFieldSpectra, energies shifted by the field.
class GibbsState {
 public:
  GibbsState(std::shared_ptr<const ZeroFieldSpectra> spectra, double b, double beta);

  int n() const noexcept { return spectra_->n; }
  double beta() const noexcept { return beta_; }
  double b() const noexcept { return b_; }
  double ground_energy() const noexcept { return e0_; }
  // ln Z, with Z = Tr exp(-beta H).
  double log_partition() const noexcept { return log_z_; }

  DensityMatrix reduced(std::span<const int> keep) const;
  DensityMatrix to_dense() const;  // full 2^n matrix; n <= 10

  const ZeroFieldSpectra& spectra() const noexcept { return *spectra_; }
  // weight(mz, level); the weights sum to one.
  double weight(int mz, std::size_t level) const;

 private:
  std::shared_ptr<const ZeroFieldSpectra> spectra_;
  double b_;
  double beta_;
  double e0_ = 0.0;
  double log_z_ = 0.0;
  std::vector<std::vector<double>> weights_;
};

// Complete per-sector spectra; n <= kThermalMaxSites.
GibbsState thermal_state(const HamiltonianParams& p, double beta);
GibbsState thermal_state(std::shared_ptr<const ZeroFieldSpectra> full_spectra, double b, double beta);

// Low-lying Lanczos levels, grown per sector until the discarded Boltzmann
// weight is provably below `cutoff`. Used for large beta beyond kThermalMaxSites.
GibbsState low_temperature_state(const HamiltonianParams& p, double beta, double cutoff = 1e-14,
                                 const SpectraOptions& opt = {});

// Per-eigenstate reduced matrices on `keep`, so rho_keep(b, beta) is a cheap
// weighted sum for temperature scans.
class ThermalReducedTable {
 public:
  ThermalReducedTable(std::shared_ptr<const ZeroFieldSpectra> spectra, std::vector<int> keep);
  DensityMatrix at(double b, double beta) const;

 private:
  std::shared_ptr<const ZeroFieldSpectra> spectra_;
  std::vector<int> keep_;
  std::vector<int> mz_;
  std::vector<double> energy_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

}  // namespace altspin
