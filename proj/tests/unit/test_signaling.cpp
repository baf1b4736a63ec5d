#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "vlc/error.hpp"
#include "vlc/scene_config.hpp"
#include "vlc/signaling.hpp"

using namespace vlc;

TEST_CASE("truncated moments agree with quadrature") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const double a = 0.1 + 2.0 * u(rng);
    const double nu = a * (0.05 + u(rng));
    const double mu = a * (-0.5 + 2.0 * u(rng));
    const TGParams tg = tg_moments(mu, nu, a);
    const auto q = oracle::truncated_moments(mu, nu, a);
    CHECK(tg.rho == doctest::Approx(1.0 / q.mass).epsilon(1e-10));
    CHECK(tg.mean == doctest::Approx(q.mean).epsilon(1e-9));
    CHECK(tg.variance == doctest::Approx(q.variance).epsilon(1e-9));
    // h(X) = 0.5 ln(2 pi e nu^2) - phi
    const double h = 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * nu * nu) - tg.phi_nats;
    CHECK(h == doctest::Approx(q.entropy).epsilon(1e-8));
  }
}

TEST_CASE("wide truncation approaches the untruncated Gaussian") {
  const TGParams tg = tg_moments(5.0, 0.5, 10.0);
  CHECK(tg.mean == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(tg.variance == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(tg.phi_nats) < 1e-12);
}

TEST_CASE("density integrates the truncated shape") {
  const TGParams tg = tg_moments(0.2, 0.3, 1.0);
  CHECK(tg_density(tg, -0.1) == 0.0);
  CHECK(tg_density(tg, 1.1) == 0.0);
  CHECK(tg_density(tg, 0.2) == doctest::Approx(tg.rho * oracle::gauss_pdf(0.2, 0.2, 0.3)));
}

TEST_CASE("invalid truncated parameters") {
  CHECK_THROWS_AS(tg_moments(0.0, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(tg_moments(0.0, 0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(tg_moments(1e4, 1e-3, 1.0), InvalidParameter);
}

TEST_CASE("layer calibration meets the mean cap with mu = 3 nu") {
  for (auto [a, eps, l] : {std::tuple{1.0, 0.5, std::size_t{2}}, {1.0, 0.2, 2}, {2.0, 0.3, 3},
                          {1.0, 0.1, 1}, {1.0, 0.9, 4}}) {
    const TGParams tg = calibrate_layer(a, eps, l);
    CHECK(tg.peak == doctest::Approx(a / l));
    CHECK(tg.mu == doctest::Approx(3 * tg.nu).epsilon(1e-15));
    const double cap = std::min(eps / l, a / (2.0 * l));
    CHECK(layer_mean_cap(a, eps, l) == cap);
    CHECK(tg.mean == doctest::Approx(cap).epsilon(1e-9));
    CHECK(tg.mean <= cap + 1e-9);
  }
  CHECK_THROWS_AS(calibrate_layer(1.0, 0.5, 0), InvalidParameter);
  CHECK_THROWS_AS(calibrate_layer(-1.0, 0.5, 1), InvalidParameter);
}

TEST_CASE("layer set indexing") {
  const Scene s = build_scene(SceneSpec::baseline());
  std::vector<std::size_t> per(64, 2);
  per[5] = 3;
  const LayerSet ls = build_layer_set(s, per);
  CHECK(ls.size() == 129);
  CHECK(ls.transmitter_count() == 64);
  CHECK(ls.layers_of(5) == 3);
  CHECK(ls.lin(5, 2) == 12);
  CHECK(ls.lin(6, 0) == 13);
  CHECK(ls.tx_of(12) == 5);
  CHECK(ls.locate(13).tx == 6);
  CHECK(ls.locate(13).k == 0);
  CHECK(ls[12].tg.peak == doctest::Approx(1.0 / 3));

  const LayerSet g = gaussian_surrogate(ls);
  for (std::size_t l = 0; l < g.size(); ++l) {
    CHECK(g[l].tg.phi_nats == 0.0);
    CHECK(g[l].tg.nu * g[l].tg.nu == doctest::Approx(ls.variance(l)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(LayerSet({{{0, 1, 0}, {}, 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(build_layer_set(s, std::vector<std::size_t>(3, 1)), InvalidArgument);
}
