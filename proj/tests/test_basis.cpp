#include <doctest.h>

#include <bit>
#include <random>

#include "altspin/basis.hpp"
#include "altspin/error.hpp"

using namespace altspin;

TEST_CASE("sector sizes are binomial and partition the space") {
  for (int n : {2, 4, 6, 8, 10, 12}) {
    std::size_t total = 0;
    for (int mz : magnetizations(n)) {
      const auto b = SectorBasis::sector(n, mz);
      CHECK(b->size() == binomial(n, mz + n / 2));
      total += b->size();
    }
    CHECK(total == (std::size_t{1} << n));
  }
  CHECK(SectorBasis::sector(12, 0)->size() == 924);
  CHECK(SectorBasis::sector(16, 0)->size() == 12870);
}

TEST_CASE("fully polarized sector holds one state") {
  const auto b = SectorBasis::sector(4, 2);
  REQUIRE(b->size() == 1);
  CHECK(b->state(0) == 0b1111u);
}

TEST_CASE("sector states ascend and index_of inverts state") {
  const auto b = SectorBasis::sector(10, 1);
  for (std::size_t i = 0; i < b->size(); ++i) {
    if (i) CHECK(b->state(i - 1) < b->state(i));
    CHECK(std::popcount(b->state(i)) == 6);
    CHECK(b->index_of(b->state(i)) == i);
  }
  CHECK_FALSE(b->index_of(0b1u).has_value());
  CHECK_FALSE(b->contains(0b11111111111u));
}

TEST_CASE("full space is the identity enumeration") {
  const auto b = SectorBasis::full(6);
  REQUIRE(b->size() == 64);
  for (Bits x = 0; x < 64; ++x) CHECK(b->index_of(x) == x);
  CHECK(b->is_full());
}

TEST_CASE("symmetry maps move sites as documented") {
  const int n = 8;
  // Translation: site i takes the spin of site i+2.
  CHECK(apply_translation({0b1u, n}).bits == (Bits{1} << (n - 2)));
  CHECK(apply_translation({0b100u, n}).bits == 0b1u);
  CHECK(apply_parity({0b1u, n}).bits == (Bits{1} << (n - 1)));
  CHECK(apply_spin_inversion({0b1u, n}).bits == 0b11111110u);
}

TEST_CASE("symmetry orders") {
  std::mt19937_64 rng(3);
  for (int n : {4, 6, 10, 16}) {
    for (int trial = 0; trial < 50; ++trial) {
      const BasisState s{static_cast<Bits>(rng()) & site_mask(n), n};
      BasisState t = s;
      for (int k = 0; k < n / 2; ++k) t = apply_translation(t);
      CHECK(t == s);
      CHECK(apply_parity(apply_parity(s)) == s);
      CHECK(apply_spin_inversion(apply_spin_inversion(s)) == s);
      CHECK(apply_translation(s).popcount() == s.popcount());
      CHECK(apply_parity(s).popcount() == s.popcount());
    }
  }
}

TEST_CASE("chain length guard") {
  CHECK_THROWS_AS(check_chain_length(3), Error);
  CHECK_THROWS_AS(check_chain_length(0), Error);
  CHECK_THROWS_AS(check_chain_length(18), Error);
  CHECK_NOTHROW(check_chain_length(2));
  CHECK_NOTHROW(check_chain_length(16));
  CHECK_THROWS_AS(SectorBasis::sector(6, 4), Error);
}
