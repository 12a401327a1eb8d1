#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnls/grid.hpp"

namespace rnls {

// All ordered tuples (k_1..k_{q*+1}; k_{q*+2}..k_{2q*+1}) -> k inside the
// cutoff satisfying both conservation laws
//   sum creators - sum annihilators - k = 0            (momentum)
//   sum lam(creators) - sum lam(annihilators) - lam(k) = 0   (frequency)
// Permutations are stored as distinct tuples: they are distinct summands of
// the resonant sum. Storage is flat: per output mode, count(k) tuples of
// tuple_len() = 2q*+1 flat indices (creators first), in lexicographic order.
class ResonanceTable {
 public:
  ResonanceTable(const SpectralGrid& g, int q_star, std::vector<std::size_t> offsets,
                 std::vector<std::uint32_t> flat)
      : grid_(&g), q_star_(q_star), offset_(std::move(offsets)), flat_(std::move(flat)) {}

  const SpectralGrid& grid() const { return *grid_; }
  int q_star() const { return q_star_; }
  int tuple_len() const { return 2 * q_star_ + 1; }
  int n_creators() const { return q_star_ + 1; }

  std::size_t count(int k) const { return offset_[static_cast<size_t>(k) + 1] - offset_[static_cast<size_t>(k)]; }
  std::size_t total() const { return offset_.back(); }

  // Members of the i-th tuple feeding mode k.
  std::span<const std::uint32_t> tuple(int k, std::size_t i) const {
    std::size_t base = (offset_[static_cast<size_t>(k)] + i) * static_cast<size_t>(tuple_len());
    return {flat_.data() + base, static_cast<size_t>(tuple_len())};
  }
  std::span<const std::uint32_t> tuples_of(int k) const {
    std::size_t b = offset_[static_cast<size_t>(k)] * static_cast<size_t>(tuple_len());
    std::size_t e = offset_[static_cast<size_t>(k) + 1] * static_cast<size_t>(tuple_len());
    return {flat_.data() + b, e - b};
  }

  nlohmann::ordered_json summary_json() const;

  // Test hook: drops one tuple so consistency checks must fail.
  void corrupt_for_test();

 private:
  const SpectralGrid* grid_;
  int q_star_;
  std::vector<std::size_t> offset_;  // size n+1
  std::vector<std::uint32_t> flat_;
};

// Exhaustive deterministic enumeration. q* = 1 joins creator pairs against
// (annihilator, output) pairs on (momentum sum, eigenvalue sum); q* >= 2
// falls back to nested loops. budget_ops guards the loop count.
ResonanceTable enumerate_resonant_tuples(const SpectralGrid& grid, int q_star,
                                         std::size_t budget_ops = 4'000'000'000ULL);

// Integer vectors s != 0 over the grid modes with |s|_1 <= m and
// Lambda . s = 0, ordered by max support index, then lexicographically.
std::vector<std::vector<int>> enumerate_resonance_module(const SpectralGrid& grid, int m,
                                                         std::size_t budget_count = 50'000'000ULL);

// l1 norm and frequency pairing of a dense integer vector.
int l1_norm(std::span<const int> s);
long long lambda_dot(const SpectralGrid& grid, std::span<const int> s);

}  // namespace rnls
