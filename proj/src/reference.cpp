#include "rnls/reference.hpp"

#include <cmath>

namespace rnls::reference {

namespace {

void check_budget(double ops, std::size_t budget, const char* what) {
  if (ops > static_cast<double>(budget))
    throw BudgetError(std::string(what) + ": ~" + std::to_string(ops) +
                      " operations, above the budget of " + std::to_string(budget));
}

// Odometer over `len` indices in 0..n-1; returns false when exhausted.
bool advance(std::vector<int>& pick, int n) {
  int pos = static_cast<int>(pick.size()) - 1;
  while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == n) {
    pick[static_cast<size_t>(pos)] = 0;
    --pos;
  }
  return pos >= 0;
}

}  // namespace

SpectralField nonlinearity_direct(const SpectralField& f, int q_star, double rho,
                                  std::size_t budget_ops) {
  const SpectralGrid& grid = *f.grid;
  const int n = grid.size();
  const int n_c = q_star + 1, n_a = q_star;
  check_budget(std::pow(n, 2 * q_star + 1), budget_ops, "direct convolution");

  SpectralField out(grid);
  std::vector<int> pick(static_cast<size_t>(n_c + n_a), 0);
  while (true) {
    WaveIndex m{};
    cd term{1.0, 0.0};
    for (int i = 0; i < n_c; ++i) {
      int c = pick[static_cast<size_t>(i)];
      m = m + grid.index(c);
      term *= f.v[static_cast<size_t>(c)];
    }
    for (int i = 0; i < n_a; ++i) {
      int a = pick[static_cast<size_t>(n_c + i)];
      m = m - grid.index(a);
      term *= std::conj(f.v[static_cast<size_t>(a)]);
    }
    int k = grid.flat_of(m);
    if (k >= 0) out.v[static_cast<size_t>(k)] += term;
    if (!advance(pick, n)) break;
  }
  const cd mi_rho{0.0, -rho};
  for (auto& z : out.v) z *= mi_rho;
  return out;
}

SpectralField resonant_field(const ResonanceTable& table, const SpectralField& f, double rho) {
  const SpectralGrid& grid = table.grid();
  if (f.grid == nullptr || !(*f.grid == grid))
    throw std::invalid_argument("resonant field: table/grid mismatch");
  const int n_c = table.n_creators();
  const int len = table.tuple_len();
  SpectralField out(grid);
  const cd mi_rho{0.0, -rho};
  for (int k = 0; k < grid.size(); ++k) {
    cd acc{0.0, 0.0};
    auto all = table.tuples_of(k);
    for (size_t base = 0; base < all.size(); base += static_cast<size_t>(len)) {
      cd term{1.0, 0.0};
      for (int i = 0; i < n_c; ++i) term *= f.v[all[base + static_cast<size_t>(i)]];
      for (int i = n_c; i < len; ++i) term *= std::conj(f.v[all[base + static_cast<size_t>(i)]]);
      acc += term;
    }
    out.v[static_cast<size_t>(k)] = mi_rho * acc;
  }
  return out;
}

double hamiltonian_full_tuples(const SpectralField& f, int q_star, std::size_t budget_ops) {
  const SpectralGrid& grid = *f.grid;
  const int n = grid.size();
  const int n_c = q_star + 1, n_a = q_star;
  check_budget(std::pow(n, 2 * q_star + 1), budget_ops, "hamiltonian tuple sum");

  // last annihilator is fixed by momentum conservation
  cd acc{0.0, 0.0};
  std::vector<int> pick(static_cast<size_t>(n_c + n_a), 0);
  while (true) {
    WaveIndex m{};
    cd term{1.0, 0.0};
    for (int i = 0; i < n_c; ++i) {
      int c = pick[static_cast<size_t>(i)];
      m = m + grid.index(c);
      term *= f.v[static_cast<size_t>(c)];
    }
    for (int i = 0; i < n_a; ++i) {
      int a = pick[static_cast<size_t>(n_c + i)];
      m = m - grid.index(a);
      term *= std::conj(f.v[static_cast<size_t>(a)]);
    }
    int last = grid.flat_of(m);
    if (last >= 0) acc += term * std::conj(f.v[static_cast<size_t>(last)]);
    if (!advance(pick, n)) break;
  }
  return -acc.real() / (2.0 * q_star + 2.0);
}

ResonanceTable brute_force_table(const SpectralGrid& grid, int q_star, std::size_t budget_ops) {
  const int n = grid.size();
  const int n_c = q_star + 1, n_a = q_star;
  const int len = 2 * q_star + 1;
  check_budget(std::pow(n, 2 * q_star + 2), budget_ops, "brute-force table");

  std::vector<std::vector<std::uint32_t>> buckets(static_cast<size_t>(n));
  std::vector<int> pick(static_cast<size_t>(len), 0);
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
    for (int k = 0; k < n; ++k) {
      if (!(m == grid.index(k))) continue;
      if (lam != grid.lambda_int(k)) continue;
      for (int i = 0; i < len; ++i)
        buckets[static_cast<size_t>(k)].push_back(static_cast<std::uint32_t>(pick[static_cast<size_t>(i)]));
    }
    if (!advance(pick, n)) break;
  }

  std::vector<std::size_t> offsets(static_cast<size_t>(n) + 1, 0);
  std::size_t total = 0;
  for (int k = 0; k < n; ++k) {
    offsets[static_cast<size_t>(k)] = total;
    total += buckets[static_cast<size_t>(k)].size() / static_cast<size_t>(len);
  }
  offsets[static_cast<size_t>(n)] = total;
  std::vector<std::uint32_t> flat;
  flat.reserve(total * static_cast<size_t>(len));
  for (auto& b : buckets) flat.insert(flat.end(), b.begin(), b.end());
  return ResonanceTable(grid, q_star, std::move(offsets), std::move(flat));
}

}  // namespace rnls::reference
