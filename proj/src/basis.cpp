#include "altspin/basis.hpp"

#include <bit>
#include <map>
#include <mutex>

#include "altspin/error.hpp"

namespace altspin {

int BasisState::popcount() const noexcept { return std::popcount(bits); }

void check_chain_length(int n) {
  if (n < 2 || n > kMaxSites || n % 2 != 0) {
    throw_parameter("chain length must be even and within [2, " + std::to_string(kMaxSites) +
                    "], got " + std::to_string(n));
  }
}

Bits site_mask(int n) noexcept { return n >= 32 ? ~Bits{0} : ((Bits{1} << n) - 1u); }

BasisState apply_translation(BasisState s) noexcept {
  if (s.n <= 2) return s;
  const Bits low = s.bits & 0b11u;
  const Bits shifted = (s.bits >> 2) | (low << (s.n - 2));
  return {shifted & site_mask(s.n), s.n};
}

BasisState apply_parity(BasisState s) noexcept {
  Bits out = 0;
  for (int i = 0; i < s.n; ++i) {
    if ((s.bits >> i) & 1u) out |= Bits{1} << (s.n - 1 - i);
  }
  return {out, s.n};
}

BasisState apply_spin_inversion(BasisState s) noexcept { return {~s.bits & site_mask(s.n), s.n}; }

std::uint64_t binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

SectorBasis::SectorBasis(int n, std::optional<int> mz) : n_(n), mz_(mz) {
  const Bits limit = Bits{1} << n;
  if (!mz) {
    states_.resize(limit);
    for (Bits b = 0; b < limit; ++b) states_[b] = b;
    return;
  }
  const int ups = *mz + n / 2;
  states_.reserve(binomial(n, ups));
  if (ups == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks fixed-popcount words in ascending order.
  Bits b = (Bits{1} << ups) - 1u;
  while (b < limit) {
    states_.push_back(b);
    const Bits c = b & (~b + 1u);
    const Bits r = b + c;
    b = (((r ^ b) >> 2) / c) | r;
  }
}

bool SectorBasis::contains(Bits b) const noexcept {
  if (b & ~site_mask(n_)) return false;
  if (!mz_) return true;
  return std::popcount(b) == *mz_ + n_ / 2;
}

std::optional<std::size_t> SectorBasis::index_of(Bits b) const noexcept {
  if (!contains(b)) return std::nullopt;
  if (!mz_) return static_cast<std::size_t>(b);
  // Colex rank of the set-bit positions equals the ascending-order position.
  std::size_t rank = 0;
  int k = 0;
  for (int pos = 0; pos < n_; ++pos) {
    if ((b >> pos) & 1u) {
      ++k;
      rank += binomial(pos, k);
    }
  }
  return rank;
}

std::string SectorBasis::tag() const {
  return mz_ ? "mz=" + std::to_string(*mz_) : std::string("full");
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::pair<int, int>, BasisPtr> entries;
};

Registry& registry() {
  static Registry r;
  return r;
}

constexpr int kFullKey = 1 << 20;

}  // namespace

BasisPtr SectorBasis::sector(int n, int mz) {
  check_chain_length(n);
  if (mz < -n / 2 || mz > n / 2) {
    throw_parameter("magnetization " + std::to_string(mz) + " outside [-" + std::to_string(n / 2) +
                    ", " + std::to_string(n / 2) + "]");
  }
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  auto& slot = reg.entries[{n, mz}];
  if (!slot) slot = BasisPtr(new SectorBasis(n, mz));
  return slot;
}

BasisPtr SectorBasis::full(int n) {
  check_chain_length(n);
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  auto& slot = reg.entries[{n, kFullKey}];
  if (!slot) slot = BasisPtr(new SectorBasis(n, std::nullopt));
  return slot;
}

BasisPtr build_sector(int n, int mz) { return SectorBasis::sector(n, mz); }

std::vector<int> magnetizations(int n) {
  std::vector<int> out;
  for (int m = -n / 2; m <= n / 2; ++m) out.push_back(m);
  return out;
}

}  // namespace altspin
