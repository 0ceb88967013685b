#include "altspin/state_vector.hpp"

#include <cmath>

#include "altspin/error.hpp"

namespace altspin {

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (!basis_) throw_parameter("state vector needs a basis");
  if (static_cast<std::size_t>(amps_.size()) != basis_->size()) {
    throw_dimension("amplitude count " + std::to_string(amps_.size()) + " does not match basis size " +
                    std::to_string(basis_->size()));
  }
}

StateVector StateVector::product(BasisPtr basis, Bits config) {
  const auto idx = basis->index_of(config);
  if (!idx) throw_parameter("configuration is not part of basis " + basis->tag());
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  a(static_cast<Eigen::Index>(*idx)) = 1.0;
  return StateVector(std::move(basis), std::move(a));
}

cplx StateVector::amplitude_of(Bits config) const {
  const auto idx = basis_->index_of(config);
  return idx ? amps_(static_cast<Eigen::Index>(*idx)) : cplx{};
}

StateVector& StateVector::normalize() {
  const double nrm = amps_.norm();
  if (nrm == 0.0) throw_parameter("cannot normalize the zero vector");
  amps_ /= nrm;
  return *this;
}

cplx StateVector::inner(const StateVector& other) const {
  if (!basis_->same_space(other.basis())) throw_dimension("inner product across different spaces");
  return amps_.dot(other.amps_);
}

StateVector StateVector::to_full() const {
  if (basis_->is_full()) return *this;
  auto full = SectorBasis::full(n());
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(full->size()));
  for (std::size_t i = 0; i < basis_->size(); ++i) a(basis_->state(i)) = amps_(static_cast<Eigen::Index>(i));
  return StateVector(std::move(full), std::move(a));
}

void require_normalized(const StateVector& v, double tol) {
  const double nrm = v.norm();
  if (std::abs(nrm - 1.0) > tol) throw_parameter("state is not normalized (norm " + std::to_string(nrm) + ")");
}

StateVector neel_state(int n) {
  check_chain_length(n);
  Bits b = 0;
  for (int site = 1; site <= n; site += 2) b |= Bits{1} << (site - 1);
  return StateVector::product(SectorBasis::sector(n, 0), b);
}

}  // namespace altspin
