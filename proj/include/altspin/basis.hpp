#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace altspin {

// Chains are bounded so that a configuration fits a 32-bit word and the
// largest magnetization block (N=16, m^z=0) stays at 12870 states.
inline constexpr int kMaxSites = 16;

using Bits = std::uint32_t;

// A computational-basis configuration. Site i (1-based) is bit i-1, so site 1
// is the least significant bit; a set bit is spin up.
struct BasisState {
  Bits bits = 0;
  int n = 0;

  int popcount() const noexcept;
  bool up(int site) const noexcept { return (bits >> (site - 1)) & 1u; }
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

// Throws a parameter error unless n is even and 2 <= n <= kMaxSites.
void check_chain_length(int n);

Bits site_mask(int n) noexcept;

// T: cyclic shift by two sites, site i takes the spin of site i+2.
BasisState apply_translation(BasisState s) noexcept;
// P: site i <-> site N+1-i.
BasisState apply_parity(BasisState s) noexcept;
// Z: flips every spin.
BasisState apply_spin_inversion(BasisState s) noexcept;

std::uint64_t binomial(int n, int k) noexcept;

// All configurations of n sites with fixed total S^z = mz, in ascending bit
// order, or the whole 2^n space when mz is absent. Immutable once built.
class SectorBasis {
 public:
  static std::shared_ptr<const SectorBasis> sector(int n, int mz);
  static std::shared_ptr<const SectorBasis> full(int n);

  int n() const noexcept { return n_; }
  std::optional<int> mz() const noexcept { return mz_; }
  bool is_full() const noexcept { return !mz_.has_value(); }
  std::size_t size() const noexcept { return states_.size(); }
  Bits state(std::size_t i) const { return states_[i]; }
  std::span<const Bits> states() const noexcept { return states_; }

  bool contains(Bits b) const noexcept;
  // Dense position of b, or nullopt when b lies outside this space.
  std::optional<std::size_t> index_of(Bits b) const noexcept;

  std::string tag() const;
  bool same_space(const SectorBasis& other) const noexcept { return n_ == other.n_ && mz_ == other.mz_; }

 private:
  SectorBasis(int n, std::optional<int> mz);

  int n_;
  std::optional<int> mz_;
  std::vector<Bits> states_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

BasisPtr build_sector(int n, int mz);

// Magnetization quantum numbers admissible for n sites: -n/2 .. n/2.
std::vector<int> magnetizations(int n);

}  // namespace altspin
