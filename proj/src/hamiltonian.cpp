#include "altspin/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "altspin/error.hpp"

namespace altspin {

namespace {

constexpr double kDropTolerance = 1e-14;

void require_space(int n, const BasisPtr& space) {
  if (space->n() != n) {
    throw_parameter("basis has " + std::to_string(space->n()) + " sites but parameters have " + std::to_string(n));
  }
}

}  // namespace

void HamiltonianParams::validate() const {
  check_chain_length(n);
  if (!std::isfinite(lambda) || !std::isfinite(delta) || !std::isfinite(b)) {
    throw_parameter("Hamiltonian couplings must be finite");
  }
}

SparseOperator::SparseOperator(BasisPtr basis, std::vector<Entry> entries) : basis_(std::move(basis)) {
  const std::size_t n = basis_->size();
  for (const auto& e : entries) {
    if (e.row >= n || e.col >= n) throw_dimension("operator entry outside " + std::to_string(n) + "x" + std::to_string(n));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    cplx sum{};
    while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col) {
      sum += entries[j].value;
      ++j;
    }
    if (std::abs(sum) > kDropTolerance) {
      cols_.push_back(entries[i].col);
      values_.push_back(sum);
      ++row_ptr_[entries[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) row_ptr_[r + 1] += row_ptr_[r];
  is_real_ = std::all_of(values_.begin(), values_.end(), [](cplx v) { return v.imag() == 0.0; });
  if (is_real_) {
    real_values_.reserve(values_.size());
    for (auto v : values_) real_values_.push_back(v.real());
  }
}

bool SparseOperator::is_hermitian(double tol) const {
  // Columns are sorted within each row, so the mirror entry is a binary search away.
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t c = cols_[k];
      const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[c]);
      const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[c + 1]);
      const auto it = std::lower_bound(first, last, r);
      const cplx mirror = (it != last && *it == r) ? values_[static_cast<std::size_t>(it - cols_.begin())] : cplx{};
      if (std::abs(values_[k] - std::conj(mirror)) > tol) return false;
    }
  }
  return true;
}

void SparseOperator::multiply(std::span<const double> x, std::span<double> y) const {
  if (!is_real_) throw_parameter("real matvec on a complex operator");
  if (x.size() != dim() || y.size() != dim()) throw_dimension("matvec dimension mismatch");
  for (std::size_t r = 0; r < dim(); ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += real_values_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

void SparseOperator::multiply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dim() || y.size() != dim()) throw_dimension("matvec dimension mismatch");
  if (is_real_) {
    for (std::size_t r = 0; r < dim(); ++r) {
      cplx acc{};
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += real_values_[k] * x[cols_[k]];
      y[r] = acc;
    }
    return;
  }
  for (std::size_t r = 0; r < dim(); ++r) {
    cplx acc{};
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) = values_[k];
    }
  }
  return m;
}

Eigen::MatrixXd SparseOperator::to_dense_real() const {
  if (!is_real_) throw_parameter("operator has complex entries");
  return to_dense().real();
}

std::vector<SparseOperator::Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, cols_[k], values_[k]});
  }
  return out;
}

std::pair<double, double> SparseOperator::spectral_bounds() const {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (std::size_t r = 0; r < dim(); ++r) {
    double centre = 0.0;
    double radius = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (cols_[k] == r) centre = values_[k].real();
      else radius += std::abs(values_[k]);
    }
    lo = first ? centre - radius : std::min(lo, centre - radius);
    hi = first ? centre + radius : std::max(hi, centre + radius);
    first = false;
  }
  return {lo, hi};
}

StateVector matvec(const SparseOperator& op, const StateVector& v) {
  if (!op.basis().same_space(v.basis())) {
    throw_dimension("operator on " + op.basis().tag() + " applied to a state on " + v.basis().tag());
  }
  Eigen::VectorXcd out(v.amplitudes().size());
  op.multiply(std::span<const cplx>(v.amplitudes().data(), v.dim()), std::span<cplx>(out.data(), v.dim()));
  return StateVector(v.basis_ptr(), std::move(out));
}

std::vector<Bond> ring_bonds(int n, double lambda) {
  std::vector<Bond> bonds;
  for (int i = 1; i <= n / 2; ++i) {
    bonds.push_back({2 * i - 1, 2 * i, HamiltonianParams::j});
    bonds.push_back({2 * i, (2 * i) % n + 1, lambda});
  }
  return bonds;
}

SparseOperator build_hamiltonian(const HamiltonianParams& p, BasisPtr space) {
  p.validate();
  require_space(p.n, space);
  const auto bonds = ring_bonds(p.n, p.lambda);
  std::vector<SparseOperator::Entry> entries;
  entries.reserve(space->size() * (bonds.size() + 1));
  for (std::size_t i = 0; i < space->size(); ++i) {
    const Bits s = space->state(i);
    double diag = -p.b * (std::popcount(s) - 0.5 * p.n);
    for (const auto& bond : bonds) {
      if (bond.coupling == 0.0) continue;
      const Bits ma = Bits{1} << (bond.a - 1);
      const Bits mb = Bits{1} << (bond.b - 1);
      const bool aligned = ((s & ma) != 0) == ((s & mb) != 0);
      diag += bond.coupling * p.delta * (aligned ? 0.25 : -0.25);
      if (!aligned) {
        // (S+S- + S-S+)/2 flips an antiparallel pair with amplitude 1/2.
        const Bits flipped = s ^ ma ^ mb;
        entries.push_back({i, *space->index_of(flipped), cplx(0.5 * bond.coupling, 0.0)});
      }
    }
    entries.push_back({i, i, cplx(diag, 0.0)});
  }
  return SparseOperator(std::move(space), std::move(entries));
}

SparseOperator build_hamiltonian(const HamiltonianParams& p) {
  p.validate();
  return build_hamiltonian(p, SectorBasis::full(p.n));
}

SparseOperator build_sz_total(int n, BasisPtr space) {
  if (!space) space = SectorBasis::full(n);
  require_space(n, space);
  std::vector<SparseOperator::Entry> entries;
  for (std::size_t i = 0; i < space->size(); ++i) {
    entries.push_back({i, i, cplx(std::popcount(space->state(i)) - 0.5 * n, 0.0)});
  }
  return SparseOperator(std::move(space), std::move(entries));
}

namespace {

// Spin-1/2 single-site action in the S^z basis: returns (new bit, amplitude)
// for component 0=x, 1=y, 2=z acting on bit `up`.
std::pair<bool, cplx> spin_action(int component, bool up) {
  switch (component) {
    case 0: return {!up, cplx(0.5, 0.0)};
    case 1: return {!up, up ? cplx(0.0, 0.5) : cplx(0.0, -0.5)};  // S^y|up> = (i/2)|down>
    default: return {up, cplx(up ? 0.5 : -0.5, 0.0)};
  }
}

}  // namespace

SparseOperator build_commutator_rhs(double lambda0, double lambda, int n, BasisPtr space) {
  check_chain_length(n);
  if (!space) space = SectorBasis::full(n);
  require_space(n, space);
  if (n < 3) throw_parameter("three-site commutator needs at least four sites");
  static constexpr int kLevi[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1},
                                      {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1}};
  const cplx prefactor = cplx(0.0, -(lambda - lambda0));
  std::vector<SparseOperator::Entry> entries;
  if (lambda != lambda0) {
    for (std::size_t i = 0; i < space->size(); ++i) {
      const Bits s = space->state(i);
      for (int j = 1; j <= n; ++j) {
        const int sites[3] = {j, j % n + 1, (j + 1) % n + 1};
        const double stagger = (j % 2 == 0) ? 1.0 : -1.0;
        for (const auto& perm : kLevi) {
          Bits out = s;
          cplx amp = prefactor * stagger * static_cast<double>(perm[3]);
          // Rightmost factor acts first; the sites are distinct so order is immaterial.
          for (int f = 0; f < 3; ++f) {
            const Bits mask = Bits{1} << (sites[f] - 1);
            const auto [up, a] = spin_action(perm[f], (out & mask) != 0);
            out = up ? (out | mask) : (out & ~mask);
            amp *= a;
          }
          // Triple products conserve S^z only in combination; skip components
          // that leave the space (they cancel across the Levi-Civita sum).
          const auto col = space->index_of(out);
          if (col) entries.push_back({*col, i, amp});
          else if (space->is_full()) throw_dimension("internal: full-space index missing");
        }
      }
    }
  }
  return SparseOperator(std::move(space), std::move(entries));
}

}  // namespace altspin
