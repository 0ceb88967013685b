#pragma once

#include <optional>

#include "altspin/state_vector.hpp"

namespace altspin {

enum class Symmetry { Translation, Parity, SpinInversion };

// Applies the basis permutation of the given symmetry. Spin inversion moves a
// sector-m^z vector into the -m^z sector.
StateVector apply_symmetry(const StateVector& v, Symmetry op);

// Ground-state quantum numbers. mz_display is m^z + N/2, or -1 for a two-fold
// manifold with different m^z, or -2 for higher degeneracy. k is folded into
// [0, N/4]; z is 0 where spin inversion is not a good quantum number.
struct SymmetryLabels {
  int mz_display = 0;
  std::optional<int> k;
  std::optional<int> p;
  int z = 0;
};

struct SymmetryMeasurement {
  cplx expectation;
  double residual;  // || O v - <O> v ||
};

SymmetryMeasurement measure_symmetry(const StateVector& v, Symmetry op);

// Labels a single normalized eigenvector. The state must be supported in one
// magnetization sector (a sector basis, or a full-space vector whose weight
// sits in one popcount class).
SymmetryLabels label_eigenstate(const StateVector& v, double tol = 1e-8);

}  // namespace altspin
