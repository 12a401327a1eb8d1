#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rnls/checks.hpp"
#include "rnls/field.hpp"

using namespace rnls;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("actions") {
  SpectralGrid g(1, 1);
  SpectralField f(g);
  for (double I : actions(f)) CHECK(I == 0.0);
  f.v[0] = cd{1.0, 1.0};
  CHECK(actions(f)[0] == doctest::Approx(1.0));

  SpectralField r = random_field(g, 5);
  std::vector<double> theta{0.3, 1.1, 4.2};
  auto Ia = actions(r), Ib = actions(rotate(r, theta));
  for (size_t k = 0; k < Ia.size(); ++k) CHECK(Ia[k] == doctest::Approx(Ib[k]));
}

TEST_CASE("phases use [0, 2pi) with phi(0) = 0") {
  SpectralGrid g(1, 1);
  SpectralField f(g);
  f.v[0] = cd{0.0, 1.0};
  f.v[1] = cd{0.0, 0.0};
  f.v[2] = cd{-1.0, 0.0};
  auto phi = phases(f);
  CHECK(phi[0] == doctest::Approx(pi / 2));
  CHECK(phi[1] == 0.0);
  CHECK(phi[2] == doctest::Approx(pi));
  CHECK(phase_of(cd{1.0, -1e-8}) > 6.0);  // just below 2pi, not negative
}

TEST_CASE("rotation is a periodic additive isometry") {
  SpectralGrid g(2, 1);
  SpectralField v = random_field(g, 11);
  std::vector<double> zero(static_cast<size_t>(g.size()), 0.0);
  CHECK(rel_err(rotate(v, zero), v) == 0.0);

  std::vector<double> full(static_cast<size_t>(g.size()), 2 * pi);
  CHECK(rel_err(rotate(v, full), v) < 1e-15);

  GaussianRng rng(12);
  std::vector<double> t1(static_cast<size_t>(g.size())), t2(t1);
  for (auto& x : t1) x = rng.uniform() * 2 * pi;
  for (auto& x : t2) x = rng.uniform() * 2 * pi;
  for (double p : {0.0, 1.0, 2.0})
    CHECK(sobolev_norm(rotate(v, t1), p) == doctest::Approx(sobolev_norm(v, p)));

  std::vector<double> sum(t1);
  for (size_t k = 0; k < sum.size(); ++k) sum[k] += t2[k];
  CHECK(rel_err(rotate(rotate(v, t1), t2), rotate(v, sum)) < 1e-14);

  CHECK_THROWS_AS(rotate(v, std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("resonant monomials") {
  SpectralGrid g(1, 1);
  SpectralField v = random_field(g, 21);
  std::vector<int> s0(3, 0);
  CHECK(resonant_monomial(v, s0) == cd{1.0, 0.0});

  std::vector<int> e1{0, 1, 0};
  CHECK(resonant_monomial(v, e1) == v.v[1]);
  std::vector<int> me1{0, -1, 0};
  CHECK(resonant_monomial(v, me1) == std::conj(v.v[1]));

  std::vector<int> s{2, -1, 1};
  auto I = actions(v);
  double expect = std::pow(2 * I[0], 1.0) * std::pow(2 * I[1], 0.5) * std::pow(2 * I[2], 0.5);
  CHECK(std::abs(resonant_monomial(v, s)) == doctest::Approx(expect));

  // V^s(rotate(v, theta)) = e^{i s.theta} V^s(v)
  std::vector<double> theta{0.4, 2.2, 5.0};
  cd lhs = resonant_monomial(rotate(v, theta), s);
  double st = 2 * theta[0] - theta[1] + theta[2];
  cd rhs = std::polar(1.0, st) * resonant_monomial(v, s);
  CHECK(std::abs(lhs - rhs) < 1e-12);

  // invariance under Psi_{t Lambda} for resonant s (lambda = (1,0,1))
  std::vector<int> res{1, 3, -1};
  CHECK(lambda_dot(g, res) == 0);
  cd a = resonant_monomial(rotate_lambda(v, 0.817), res);
  cd b = resonant_monomial(v, res);
  CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("phase combinations") {
  SpectralGrid g(1, 1);
  SpectralField v = random_field(g, 31);
  std::vector<int> s0(3, 0);
  CHECK(phase_combination(v, s0) == 0.0);

  std::vector<int> s{1, -2, 1};
  double phi = phase_combination(v, s);
  cd mono = resonant_monomial(v, s);
  CHECK(std::abs(std::remainder(phi - phase_of(mono), 2 * pi)) < 1e-12);

  // additivity under rotation on the support
  std::vector<double> theta{0.2, 0.9, 1.7};
  double shifted = phase_combination(rotate(v, theta), s);
  double expect = phi + theta[0] - 2 * theta[1] + theta[2];
  CHECK(std::abs(std::remainder(shifted - expect, 2 * pi)) < 1e-12);
}

TEST_CASE("sobolev norms") {
  SpectralGrid g(2, 1);
  SpectralField f(g);
  CHECK(sobolev_norm(f, 2.0) == 0.0);

  f.v[static_cast<size_t>(g.flat(WaveIndex{{0, 0, 0}}))] = cd{1.0, 0.0};
  CHECK(sobolev_norm_sq(f, 3.0) == doctest::Approx(1.0));  // lambda v 1 = 1

  SpectralField h(g);
  h.v[static_cast<size_t>(g.flat(WaveIndex{{1, 1, 0}}))] = cd{1.0, 0.0};
  CHECK(sobolev_norm_sq(h, 2.0) == doctest::Approx(4.0));

  // scaled variant: (2 pi L)^d (|k| v 1/L)^{2p} |v|^2
  SpectralGrid gl(2, 1, 2.0);
  SpectralField u(gl);
  u.v[static_cast<size_t>(gl.flat(WaveIndex{{1, 1, 0}}))] = cd{1.0, 0.0};
  double expect = std::pow(4 * pi, 2) * std::pow(0.5, 2.0);  // lambda = 2/4
  CHECK(sobolev_norm_scaled_sq(u, 2.0) == doctest::Approx(expect));
}

TEST_CASE("action-angle reconstruction") {
  SpectralGrid g(2, 1);
  SpectralField v = random_field(g, 41);
  bool all_nonzero = true;
  for (const auto& z : v.v) all_nonzero = all_nonzero && std::abs(z) > 0;
  REQUIRE(all_nonzero);
  SpectralField back = from_actions_angles(g, actions(v), phases(v));
  CHECK(rel_err(back, v) < 1e-14);

  CHECK_THROWS_AS(from_actions_angles(g, std::vector<double>{1.0}, std::vector<double>{0.0}),
                  std::invalid_argument);
}
