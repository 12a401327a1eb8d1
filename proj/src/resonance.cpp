#include "rnls/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rnls {

nlohmann::ordered_json ResonanceTable::summary_json() const {
  nlohmann::ordered_json j;
  j["q_star"] = q_star_;
  j["modes"] = grid_->size();
  j["tuples_total"] = total();
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (int k = 0; k < grid_->size(); ++k) counts.push_back(count(k));
  j["counts_per_mode"] = counts;
  return j;
}

void ResonanceTable::corrupt_for_test() {
  if (total() == 0) return;
  // Drop the last tuple of the first nonempty mode.
  int k = 0;
  while (count(k) == 0) ++k;
  std::size_t len = static_cast<size_t>(tuple_len());
  std::size_t cut = offset_[static_cast<size_t>(k) + 1] * len;
  flat_.erase(flat_.begin() + static_cast<long>(cut - len), flat_.begin() + static_cast<long>(cut));
  for (size_t j = static_cast<size_t>(k) + 1; j < offset_.size(); ++j) offset_[j] -= 1;
}

namespace {

// Packs a partial momentum/frequency sum into one 64-bit key. Components of
// any partial sum are bounded by (q*+1)*N, eigenvalue sums by (q*+1)*d*N^2.
std::uint64_t pack_key(const WaveIndex& m, long long lam, int span) {
  std::uint64_t key = 0;
  for (int i = 0; i < 3; ++i) {
    key = (key << 14) | static_cast<std::uint64_t>(m[i] + span);
  }
  key = (key << 22) | static_cast<std::uint64_t>(lam);
  return key;
}

ResonanceTable finish_table(const SpectralGrid& grid,
                            std::vector<std::vector<std::uint32_t>>& buckets, int q_star) {
  int len = 2 * q_star + 1;
  std::vector<std::size_t> offsets(static_cast<size_t>(grid.size()) + 1, 0);
  std::size_t total = 0;
  for (int k = 0; k < grid.size(); ++k) {
    offsets[static_cast<size_t>(k)] = total;
    total += buckets[static_cast<size_t>(k)].size() / static_cast<size_t>(len);
  }
  offsets[static_cast<size_t>(grid.size())] = total;
  std::vector<std::uint32_t> flat;
  flat.reserve(total * static_cast<size_t>(len));
  for (auto& b : buckets) {
    flat.insert(flat.end(), b.begin(), b.end());
    b.clear();
    b.shrink_to_fit();
  }
  return ResonanceTable(grid, q_star, std::move(offsets), std::move(flat));
}

void enumerate_pairs_q1(const SpectralGrid& grid,
                        std::vector<std::vector<std::uint32_t>>& buckets) {
  const int n = grid.size();
  // creator pairs keyed by (k1 + k2, lam1 + lam2)
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> join;
  join.reserve(static_cast<size_t>(n) * static_cast<size_t>(n) / 2);
  const int span = 2 * grid.cutoff() + 1;
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = 0; c2 < n; ++c2) {
      WaveIndex m = grid.index(c1) + grid.index(c2);
      long long lam = grid.lambda_int(c1) + grid.lambda_int(c2);
      auto& lst = join[pack_key(m, lam, span)];
      lst.push_back(static_cast<std::uint32_t>(c1));
      lst.push_back(static_cast<std::uint32_t>(c2));
    }

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    auto& bucket = buckets[static_cast<size_t>(k)];
    for (int a = 0; a < n; ++a) {
      WaveIndex m = grid.index(a) + grid.index(k);
      long long lam = grid.lambda_int(a) + grid.lambda_int(k);
      auto it = join.find(pack_key(m, lam, span));
      if (it == join.end()) continue;
      const auto& lst = it->second;
      for (size_t j = 0; j < lst.size(); j += 2) {
        bucket.push_back(lst[j]);
        bucket.push_back(lst[j + 1]);
        bucket.push_back(static_cast<std::uint32_t>(a));
      }
    }
    // lexicographic order on (c1, c2, a)
    std::vector<std::array<std::uint32_t, 3>> trips(bucket.size() / 3);
    for (size_t j = 0; j < trips.size(); ++j)
      trips[j] = {bucket[3 * j], bucket[3 * j + 1], bucket[3 * j + 2]};
    std::sort(trips.begin(), trips.end());
    for (size_t j = 0; j < trips.size(); ++j) {
      bucket[3 * j] = trips[j][0];
      bucket[3 * j + 1] = trips[j][1];
      bucket[3 * j + 2] = trips[j][2];
    }
  }
}

void enumerate_loops(const SpectralGrid& grid, int q_star,
                     std::vector<std::vector<std::uint32_t>>& buckets) {
  const int n = grid.size();
  const int n_c = q_star + 1;
  const int n_a = q_star;
  const int len = 2 * q_star + 1;
  std::vector<int> pick(static_cast<size_t>(len), 0);
  // Odometer over (creators, annihilators); output mode follows from momentum.
  // The iteration order is lexicographic in the concatenated tuple, so the
  // per-mode buckets come out sorted.
  while (true) {
    WaveIndex m{};
    long long lam = 0;
    for (int i = 0; i < n_c; ++i) {
      m = m + grid.index(pick[static_cast<size_t>(i)]);
      lam += grid.lambda_int(pick[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < n_a; ++i) {
      m = m - grid.index(pick[static_cast<size_t>(n_c + i)]);
      lam -= grid.lambda_int(pick[static_cast<size_t>(n_c + i)]);
    }
    int k = grid.flat_of(m);
    if (k >= 0 && lam == grid.lambda_int(k)) {
      auto& bucket = buckets[static_cast<size_t>(k)];
      for (int i = 0; i < len; ++i) bucket.push_back(static_cast<std::uint32_t>(pick[static_cast<size_t>(i)]));
    }
    int pos = len - 1;
    while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == n) {
      pick[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace

ResonanceTable enumerate_resonant_tuples(const SpectralGrid& grid, int q_star,
                                         std::size_t budget_ops) {
  if (q_star < 1) throw ConfigError("resonances: q* must be >= 1");
  const double n = static_cast<double>(grid.size());
  const double ops = q_star == 1 ? 2.0 * n * n : std::pow(n, 2 * q_star + 1);
  if (ops > static_cast<double>(budget_ops))
    throw BudgetError("resonances: enumeration needs ~" + std::to_string(ops) +
                      " operations, above the budget of " + std::to_string(budget_ops));

  std::vector<std::vector<std::uint32_t>> buckets(static_cast<size_t>(grid.size()));
  if (q_star == 1)
    enumerate_pairs_q1(grid, buckets);
  else
    enumerate_loops(grid, q_star, buckets);
  return finish_table(grid, buckets, q_star);
}

int l1_norm(std::span<const int> s) {
  int acc = 0;
  for (int x : s) acc += std::abs(x);
  return acc;
}

long long lambda_dot(const SpectralGrid& grid, std::span<const int> s) {
  long long acc = 0;
  for (size_t k = 0; k < s.size(); ++k) acc += static_cast<long long>(s[k]) * grid.lambda_int(static_cast<int>(k));
  return acc;
}

namespace {

// Number of integer vectors with |s|_1 <= m in dimension n.
double l1_ball_count(int n, int m) {
  // sum_{t<=m} sum_k 2^k C(n,k) C(t-1,k-1)
  double total = 1.0;
  for (int t = 1; t <= m; ++t) {
    double sum_t = 0.0;
    for (int k = 1; k <= std::min(n, t); ++k) {
      double term = std::pow(2.0, k);
      for (int i = 0; i < k; ++i) term *= static_cast<double>(n - i) / static_cast<double>(k - i);
      // C(t-1, k-1)
      double c = 1.0;
      for (int i = 1; i < k; ++i) c *= static_cast<double>(t - i) / static_cast<double>(i);
      sum_t += term * c;
    }
    total += sum_t;
  }
  return total;
}

void dfs_module(const SpectralGrid& grid, int pos, int rem, long long lam_acc, bool nonzero,
                std::vector<int>& s, std::vector<std::vector<int>>& out) {
  const int n = grid.size();
  if (pos == n) {
    if (nonzero && lam_acc == 0) out.push_back(s);
    return;
  }
  for (int val = -rem; val <= rem; ++val) {
    s[static_cast<size_t>(pos)] = val;
    dfs_module(grid, pos + 1, rem - std::abs(val),
               lam_acc + static_cast<long long>(val) * grid.lambda_int(pos), nonzero || val != 0, s,
               out);
  }
  s[static_cast<size_t>(pos)] = 0;
}

}  // namespace

std::vector<std::vector<int>> enumerate_resonance_module(const SpectralGrid& grid, int m,
                                                         std::size_t budget_count) {
  if (m < 2) throw ConfigError("resonance module: order m must be >= 2");
  double est = l1_ball_count(grid.size(), m);
  if (est > static_cast<double>(budget_count))
    throw BudgetError("resonance module: ~" + std::to_string(est) +
                      " candidate vectors, above the budget of " + std::to_string(budget_count));

  std::vector<std::vector<int>> out;
  std::vector<int> s(static_cast<size_t>(grid.size()), 0);
  dfs_module(grid, 0, m, 0, false, s, out);
  // order by max support index, then lexicographic (DFS already emits
  // lexicographic order, stable_sort keeps it within ties)
  std::stable_sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    auto top = [](const std::vector<int>& v) {
      for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
        if (v[static_cast<size_t>(i)] != 0) return i;
      return -1;
    };
    return top(a) < top(b);
  });
  return out;
}

}  // namespace rnls
