#pragma once

#include <complex>

#include <Eigen/Core>

#include "altspin/basis.hpp"

namespace altspin {

using cplx = std::complex<double>;

// Amplitudes over one magnetization sector (or the full space). The basis is
// shared and immutable; only the amplitudes are owned.
class StateVector {
 public:
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  static StateVector product(BasisPtr basis, Bits config);

  const SectorBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  int n() const noexcept { return basis_->n(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }

  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Eigen::VectorXcd& amplitudes() noexcept { return amps_; }

  cplx amplitude_of(Bits config) const;
  double norm() const { return amps_.norm(); }
  StateVector& normalize();

  cplx inner(const StateVector& other) const;  // <this|other>

  // Same state written on the full 2^n space.
  StateVector to_full() const;

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amps_;
};

// Throws a parameter error when | ||v|| - 1 | exceeds tol.
void require_normalized(const StateVector& v, double tol = 1e-10);

// |up down up down ...>, site 1 up.
StateVector neel_state(int n);

}  // namespace altspin
