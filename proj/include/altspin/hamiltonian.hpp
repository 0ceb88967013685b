#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "altspin/state_vector.hpp"

namespace altspin {

// Couplings of the alternating XXZ ring in units of the odd-bond strength J.
// Odd bonds (1,2),(3,4),... carry J = 1, even bonds (2,3),...,(N,1) carry
// lambda; delta scales the S^z S^z parts; the field enters as -b * sum S^z.
struct HamiltonianParams {
  int n = 12;
  double lambda = 0.0;
  double delta = 1.0;
  double b = 0.0;
  static constexpr double j = 1.0;

  void validate() const;
  HamiltonianParams with_b(double field) const {
    HamiltonianParams p = *this;
    p.b = field;
    return p;
  }
};

// Row-compressed sparse matrix on a sector (or the full space). Assembled
// from coordinate entries: duplicates are summed and zeros dropped.
class SparseOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  SparseOperator(BasisPtr basis, std::vector<Entry> entries);

  std::size_t dim() const noexcept { return basis_->size(); }
  std::size_t nnz() const noexcept { return cols_.size(); }
  const SectorBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }

  bool is_real() const noexcept { return is_real_; }
  bool is_hermitian(double tol = 1e-12) const;

  // y = A x. The real overload needs is_real().
  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply(std::span<const cplx> x, std::span<cplx> y) const;

  Eigen::MatrixXcd to_dense() const;
  Eigen::MatrixXd to_dense_real() const;
  std::vector<Entry> entries() const;

  // Interval [lo, hi] containing the spectrum (Gershgorin discs).
  std::pair<double, double> spectral_bounds() const;

 private:
  BasisPtr basis_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<cplx> values_;
  std::vector<double> real_values_;
  bool is_real_ = true;
};

StateVector matvec(const SparseOperator& op, const StateVector& v);

SparseOperator build_hamiltonian(const HamiltonianParams& p, BasisPtr space);
SparseOperator build_hamiltonian(const HamiltonianParams& p);  // full 2^N space

SparseOperator build_sz_total(int n, BasisPtr space = nullptr);

// The operator equal to [H(lambda), H(lambda0)] at delta = 1 for any fields:
// -i (lambda - lambda0) sum_j (-1)^j eps_pqr S^p_j S^q_{j+1} S^r_{j+2}.
SparseOperator build_commutator_rhs(double lambda0, double lambda, int n, BasisPtr space = nullptr);

// Bonds of the ring as (site_a, site_b, coupling), 1-based sites.
struct Bond {
  int a;
  int b;
  double coupling;
};
std::vector<Bond> ring_bonds(int n, double lambda);

}  // namespace altspin
