#include <doctest.h>

#include <cmath>

#include "rnls/grid.hpp"

using namespace rnls;

TEST_CASE("grid mode counts and eigenvalues") {
  SpectralGrid g1(1, 1, 1.0);
  CHECK(g1.size() == 3);
  SpectralGrid g2(2, 2, 1.0);
  CHECK(g2.size() == 25);

  SpectralGrid gl(2, 1, 2.0);
  WaveIndex l{{1, 1, 0}};
  CHECK(gl.lambda(gl.flat(l)) == doctest::Approx(0.5));
  CHECK(gl.lambda_int(gl.flat(l)) == 2);

  SpectralGrid g4(2, 4, 1.0);
  CHECK(g4.lambda(g4.flat(WaveIndex{{0, 0, 0}})) == 0.0);
  CHECK(g4.lambda(g4.flat(WaveIndex{{3, 4, 0}})) == doctest::Approx(25.0));
}

TEST_CASE("grid rejects bad arguments") {
  CHECK_THROWS_AS(SpectralGrid(0, 1), ConfigError);
  CHECK_THROWS_AS(SpectralGrid(4, 1), ConfigError);
  CHECK_THROWS_AS(SpectralGrid(2, 0), ConfigError);
  CHECK_THROWS_AS(SpectralGrid(2, 1, 0.0), ConfigError);
  CHECK_THROWS_AS(SpectralGrid(2, 1, -1.0), ConfigError);
}

TEST_CASE("flat ordering round-trips and eigenvalues stay in range") {
  for (int d = 1; d <= 3; ++d) {
    int N = d == 3 ? 2 : 3;
    SpectralGrid g(d, N, 1.0);
    CHECK(g.size() == static_cast<int>(std::pow(2 * N + 1, d)));
    for (int i = 0; i < g.size(); ++i) {
      CHECK(g.flat(g.index(i)) == i);
      CHECK(g.lambda_int(i) >= 0);
      CHECK(g.lambda_int(i) <= g.max_lambda_int());
    }
  }
  SpectralGrid g(2, 2);
  CHECK(g.flat_of(WaveIndex{{3, 0, 0}}) == -1);
  CHECK_THROWS_AS(g.flat(WaveIndex{{3, 0, 0}}), std::out_of_range);
  CHECK(!g.contains(WaveIndex{{0, 0, 1}}));
}

TEST_CASE("damping values and validation") {
  DampingSpec def;  // f(t) = t + 1
  CHECK(damping_value(0.0, def) == doctest::Approx(1.0));
  CHECK(damping_value(2.0, def) == doctest::Approx(3.0));

  DampingSpec pow;
  pow.kind = DampingSpec::Kind::power;
  pow.c0 = 1.0;
  pow.c1 = 2.0;
  CHECK(damping_value(4.0, pow) == doctest::Approx(17.0));

  DampingSpec bad;
  bad.c0 = 0.0;
  CHECK_THROWS_AS(damping_value(1.0, bad), ConfigError);
  bad = DampingSpec{};
  bad.c1 = -1.0;
  CHECK_THROWS_AS(damping_value(1.0, bad), ConfigError);

  SpectralGrid g(2, 2);
  auto gamma = damping_spectrum(g, def);
  for (int k = 0; k < g.size(); ++k) CHECK(gamma[static_cast<size_t>(k)] > 0.0);
  // monotone in lambda
  for (int k = 0; k < g.size(); ++k)
    for (int j = 0; j < g.size(); ++j)
      if (g.lambda_int(k) <= g.lambda_int(j))
        CHECK(gamma[static_cast<size_t>(k)] <= gamma[static_cast<size_t>(j)]);
}

TEST_CASE("noise spectra") {
  SpectralGrid g(2, 1);
  NoiseSpec flat{NoiseSpec::Kind::gaussian, 1.0, 0.0};
  for (double b : noise_spectrum(g, flat)) CHECK(b == doctest::Approx(1.0));

  NoiseSpec gauss{NoiseSpec::Kind::gaussian, 1.0, 1.0};
  auto b = noise_spectrum(g, gauss);
  CHECK(b[static_cast<size_t>(g.flat(WaveIndex{{1, 0, 0}}))] == doctest::Approx(std::exp(-1.0)));

  NoiseSpec poly{NoiseSpec::Kind::polynomial, 2.0, 1.0};
  auto bp = noise_spectrum(g, poly);
  CHECK(bp[static_cast<size_t>(g.flat(WaveIndex{{1, 1, 0}}))] == doctest::Approx(2.0 / 3.0));

  NoiseSpec bad{NoiseSpec::Kind::gaussian, 0.0, 1.0};
  CHECK_THROWS_AS(noise_spectrum(g, bad), ConfigError);
  for (double x : bp) CHECK(x > 0.0);
}

TEST_CASE("grid serializes flat-index arrays") {
  SpectralGrid g(2, 1);
  auto j = g.to_json();
  CHECK(j["modes"] == 9);
  CHECK(j["l"].size() == 9);
  CHECK(j["lambda_int"][0] == 2);  // l = (-1,-1)
}
