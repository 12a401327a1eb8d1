#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rnls/checks.hpp"

using namespace rnls;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

ModelParams desk_params(const SpectralGrid& g, int q = 1, double rho = 1.0) {
  return ModelParams(g, q, rho, DampingSpec{}, NoiseSpec{NoiseSpec::Kind::gaussian, 0.25, 0.5});
}
}  // namespace

TEST_CASE("nonlinearity: degenerate and single-mode cases") {
  SpectralGrid g(1, 2);
  NonlinearityEngine engine(g, 1);
  SpectralField zero(g);
  CHECK(norm0(engine.apply(zero, 1.3)) == 0.0);

  // single mode: only the tuple (k, k; k) -> k survives, -i rho |c|^2 c
  SpectralField v(g);
  int k = g.flat(WaveIndex{{1, 0, 0}});
  cd c{0.7, -0.4};
  v.v[static_cast<size_t>(k)] = c;
  SpectralField p = engine.apply(v, 2.0);
  cd expect = cd{0.0, -2.0} * std::norm(c) * c;
  CHECK(std::abs(p.v[static_cast<size_t>(k)] - expect) < 1e-14);
  for (int j = 0; j < g.size(); ++j)
    if (j != k) CHECK(std::abs(p.v[static_cast<size_t>(j)]) < 1e-14);
}

TEST_CASE("nonlinearity: FFT path equals direct convolution") {
  struct Cfg {
    int d, N, q;
  };
  for (Cfg c : {Cfg{1, 2, 1}, Cfg{1, 4, 1}, Cfg{2, 2, 1}, Cfg{1, 2, 2}, Cfg{2, 1, 2}}) {
    SpectralGrid g(c.d, c.N);
    NonlinearityEngine engine(g, c.q);
    for (int rep = 0; rep < 3; ++rep) {
      SpectralField v = random_field(g, stream_seed(99, static_cast<std::uint64_t>(rep)), 0.8);
      SpectralField a = engine.apply(v, 1.0);
      SpectralField b = reference::nonlinearity_direct(v, c.q, 1.0);
      CHECK(rel_err(a, b) < 1e-12);
    }
  }
}

TEST_CASE("resonant field: closed form in one dimension") {
  SpectralGrid g(1, 4);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  SpectralField zero(g);
  CHECK(norm0(resonant_field_direct(table, zero, 1.0)) == 0.0);

  for (int rep = 0; rep < 5; ++rep) {
    SpectralField v = random_field(g, stream_seed(17, static_cast<std::uint64_t>(rep)), 1.0);
    double total = 0.0;
    for (const auto& z : v.v) total += std::norm(z);
    SpectralField expect(g);
    for (int k = 0; k < g.size(); ++k)
      expect.v[static_cast<size_t>(k)] =
          cd{0.0, -1.0} * (2.0 * total - std::norm(v.v[static_cast<size_t>(k)])) * v.v[static_cast<size_t>(k)];
    CHECK(rel_err(expect, resonant_field_direct(table, v, 1.0)) < 1e-12);
  }
}

TEST_CASE("resonant field: gauge homogeneity and rho-linearity") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  SpectralField v = random_field(g, 55);
  double theta = 1.234;
  std::vector<double> scalar(static_cast<size_t>(g.size()), theta);
  CHECK(rel_err(rotate(resonant_field_direct(table, v, 1.0), scalar),
                resonant_field_direct(table, rotate(v, scalar), 1.0)) < 1e-13);

  SpectralField r1 = resonant_field_direct(table, v, 0.7);
  SpectralField r2 = resonant_field_direct(table, v, 1.4);
  for (size_t k = 0; k < r1.v.size(); ++k) CHECK(std::abs(2.0 * r1.v[k] - r2.v[k]) < 1e-14);
}

TEST_CASE("exact averaging: direct and quadrature forms are mutual oracles") {
  struct Cfg {
    int d, N, q;
  };
  for (Cfg c : {Cfg{1, 3, 1}, Cfg{2, 2, 1}, Cfg{1, 2, 2}, Cfg{2, 1, 2}, Cfg{3, 1, 1}}) {
    SpectralGrid g(c.d, c.N);
    ResonanceTable table = enumerate_resonant_tuples(g, c.q);
    NonlinearityEngine engine(g, c.q);
    for (int rep = 0; rep < 3; ++rep) {
      SpectralField v = random_field(g, stream_seed(31, static_cast<std::uint64_t>(rep)));
      SpectralField a = resonant_field_direct(table, v, 1.0);
      SpectralField b = resonant_field_quadrature(engine, v, 1.0);
      CHECK(rel_err(a, b) < 1e-12);
    }
  }
}

TEST_CASE("the K-node average kills exactly the nonresonant monomials") {
  // single monomial v1 conj(v2): average over t_j of e^{i t (lam1 - lam2)}
  SpectralGrid g(1, 2);  // lambdas 4,1,0,1,4
  const int K = quadrature_nodes(g, 1);
  auto avg = [&](int l1, int l2) {
    cd acc{0.0, 0.0};
    for (int j = 0; j < K; ++j) {
      double t = two_pi * j / K;
      acc += std::polar(1.0, t * (g.lambda_int(l1) - g.lambda_int(l2)));
    }
    return acc / static_cast<double>(K);
  };
  CHECK(std::abs(avg(0, 1)) < 1e-14);            // lambda 4 vs 1
  CHECK(std::abs(avg(1, 2)) < 1e-14);            // lambda 1 vs 0
  CHECK(std::abs(avg(1, 3) - cd{1.0, 0.0}) < 1e-14);  // lambda 1 = 1
  CHECK(std::abs(avg(0, 4) - cd{1.0, 0.0}) < 1e-14);  // lambda 4 = 4
}

TEST_CASE("hamiltonians: pinned values and oracle pair") {
  SpectralGrid g(1, 2);
  NonlinearityEngine engine(g, 1);
  SpectralField zero(g);
  CHECK(engine.hamiltonian_full(zero.v) == 0.0);

  SpectralField v(g);
  cd c{1.1, 0.3};
  v.v[static_cast<size_t>(g.flat(WaveIndex{{1, 0, 0}}))] = c;
  double h = engine.hamiltonian_full(v.v);
  CHECK(h == doctest::Approx(-0.25 * std::norm(c) * std::norm(c)));

  for (int rep = 0; rep < 5; ++rep) {
    SpectralField w = random_field(g, stream_seed(77, static_cast<std::uint64_t>(rep)), 0.9);
    double a = engine.hamiltonian_full(w.v);
    double b = reference::hamiltonian_full_tuples(w, 1);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    // global gauge invariance
    std::vector<double> ones(static_cast<size_t>(g.size()), 0.77);
    CHECK(engine.hamiltonian_full(rotate(w, ones).v) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("resonant hamiltonian: sign, rotation invariance, gradient") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  SpectralField zero(g);
  CHECK(hamiltonian_res(table, zero) == 0.0);

  for (int rep = 0; rep < 10; ++rep) {
    SpectralField v = random_field(g, stream_seed(88, static_cast<std::uint64_t>(rep)), 1.0);
    double h = hamiltonian_res(table, v);
    CHECK(h <= 0.0);
    CHECK(hamiltonian_res(table, rotate_lambda(v, 0.37 + rep)) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("invariant suite passes on desk-scale configurations") {
  for (int q : {1, 2}) {
    SpectralGrid g(2, 1);
    ModelParams params = desk_params(g, q);
    ResonanceTable table = enumerate_resonant_tuples(g, q);
    CheckReport rep = run_invariant_suite(params, table, 123);
    for (const auto& item : rep.items) {
      INFO(item.name, " err=", item.err);
      CHECK((item.pass || item.skipped));
    }
  }
  SpectralGrid g1(1, 3);
  ModelParams params = desk_params(g1);
  ResonanceTable table = enumerate_resonant_tuples(g1, 1);
  CHECK(run_invariant_suite(params, table, 45).all_pass());
}

TEST_CASE("invariant suite flags a corrupted table") {
  SpectralGrid g(2, 1);
  ModelParams params = desk_params(g);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  table.corrupt_for_test();
  CheckReport rep = run_invariant_suite(params, table, 123);
  CHECK(!rep.all_pass());
}

TEST_CASE("nonresonant remainder") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  NonlinearityEngine engine(g, 1);
  SpectralField v = random_field(g, 3030);

  // rho = 0: everything vanishes
  CHECK(norm0(nonresonant_field(engine, table, v, 0.0, 0.33)) == 0.0);

  // theta = 0: P0 - R0
  SpectralField r = nonresonant_field(engine, table, v, 1.0, 0.0);
  SpectralField p0 = engine.apply(v, 1.0);
  SpectralField r0 = resonant_field_direct(table, v, 1.0);
  SpectralField expect(g);
  for (size_t k = 0; k < expect.v.size(); ++k) expect.v[k] = p0.v[k] - r0.v[k];
  CHECK(rel_err(r, expect) < 1e-12);

  // averaging over the K nodes leaves nothing
  const int K = quadrature_nodes(g, 1);
  SpectralField acc(g);
  for (int j = 0; j < K; ++j) {
    SpectralField rj = nonresonant_field(engine, table, v, 1.0, two_pi * j / K);
    for (size_t k = 0; k < acc.v.size(); ++k) acc.v[k] += rj.v[k] / static_cast<double>(K);
  }
  CHECK(norm0(acc) < 1e-13 * norm0(p0));
}

TEST_CASE("averaged action drift") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  NonlinearityEngine engine(g, 1);
  ModelParams params = desk_params(g);

  SpectralField zero(g);
  for (double x : averaged_action_drift(table, params.gamma, zero, 1.0)) CHECK(x == 0.0);

  SpectralField v = random_field(g, 4040);
  auto lin = averaged_action_drift(table, params.gamma, v, 0.0);
  for (int k = 0; k < g.size(); ++k)
    CHECK(lin[static_cast<size_t>(k)] ==
          doctest::Approx(-params.gamma[static_cast<size_t>(k)] * std::norm(v.v[static_cast<size_t>(k)])));
}

TEST_CASE("empirical Lipschitz ratio of the resonant field stays bounded") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  auto ratio_max = [&](int pairs, std::uint64_t seed) {
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
      SpectralField v = random_field(g, stream_seed(seed, 2 * static_cast<std::uint64_t>(i)), 0.4);
      SpectralField w = random_field(g, stream_seed(seed, 2 * static_cast<std::uint64_t>(i) + 1), 0.4);
      double nv = sobolev_norm(v, 2.0), nw = sobolev_norm(w, 2.0);
      if (nv > 1.0)
        for (auto& z : v.v) z /= nv;
      if (nw > 1.0)
        for (auto& z : w.v) z /= nw;
      SpectralField rv = resonant_field_direct(table, v, 1.0);
      SpectralField rw = resonant_field_direct(table, w, 1.0);
      double dn = 0.0, dr = 0.0;
      for (size_t k = 0; k < v.v.size(); ++k) {
        dn += std::norm(v.v[k] - w.v[k]);
        dr += std::norm(rv.v[k] - rw.v[k]);
      }
      if (dn == 0.0) continue;
      double denom = std::pow(norm0(v) + norm0(w), 2.0) * std::sqrt(dn);
      worst = std::max(worst, std::sqrt(dr) / denom);
    }
    return worst;
  };
  double m100 = ratio_max(100, 900);
  double m1000 = ratio_max(1000, 900);  // first 100 pairs coincide
  CHECK(std::isfinite(m1000));
  CHECK(m1000 <= 3.0 * m100 + 1e-9);
}
