#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "vlc/error.hpp"
#include "vlc/rates.hpp"
#include "vlc/signaling.hpp"

using namespace vlc;

namespace {

struct Instance {
  LayerSet layers;
  std::vector<double> gains;
  std::vector<std::size_t> signal, noise;
  double noise_var = 0.0;
};

Instance random_instance(std::mt19937_64& rng, std::size_t max_signal) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance in;
  const std::size_t tx = 1 + rng() % 4;
  in.layers = oracle::random_layers(rng, tx, 3);
  for (std::size_t i = 0; i < tx; ++i) in.gains.push_back(std::pow(10.0, -3.0 * u(rng)));
  in.noise_var = std::pow(10.0, -4.0 * u(rng) - 1.0);
  std::vector<std::size_t> all(in.layers.size());
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  const std::size_t p = 1 + rng() % std::min(max_signal, all.size());
  in.signal.assign(all.begin(), all.begin() + static_cast<long>(p));
  for (std::size_t k = p; k < all.size(); ++k) {
    if (rng() % 2) in.noise.push_back(all[k]);
  }
  return in;
}

}  // namespace

TEST_CASE("closed-form rate equals the covariance evaluation") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const auto in = random_instance(rng, 3);
    const double ref = oracle::schur_rate(in.signal, in.noise, in.gains, in.layers, in.noise_var);
    const double r = achievable_rate_unclamped(in.signal, in.noise, in.gains, in.layers, in.noise_var);
    CHECK(r == doctest::Approx(ref).epsilon(1e-9));
    CHECK(achievable_rate(in.signal, in.noise, in.gains, in.layers, in.noise_var) == std::max(0.0, r));
  }
}

TEST_CASE("rate is independent of the order sets are passed in") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto in = random_instance(rng, 3);
    const double a = achievable_rate_unclamped(in.signal, in.noise, in.gains, in.layers, in.noise_var);
    std::reverse(in.signal.begin(), in.signal.end());
    std::reverse(in.noise.begin(), in.noise.end());
    CHECK(achievable_rate_unclamped(in.signal, in.noise, in.gains, in.layers, in.noise_var) == a);
  }
}

TEST_CASE("chain rule") {
  // R(U, G) + R(V, G u U) = R(U u V, G)
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    auto in = random_instance(rng, 4);
    if (in.signal.size() < 2) continue;
    const std::size_t cut = 1 + rng() % (in.signal.size() - 1);
    std::vector<std::size_t> u(in.signal.begin(), in.signal.begin() + static_cast<long>(cut));
    std::vector<std::size_t> v(in.signal.begin() + static_cast<long>(cut), in.signal.end());
    std::vector<std::size_t> gu = in.noise;
    gu.insert(gu.end(), u.begin(), u.end());
    const double lhs = achievable_rate_unclamped(u, in.noise, in.gains, in.layers, in.noise_var) +
                       achievable_rate_unclamped(v, gu, in.gains, in.layers, in.noise_var);
    const double rhs = achievable_rate_unclamped(in.signal, in.noise, in.gains, in.layers, in.noise_var);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("Gaussian inputs give the log-det rate") {
  std::mt19937_64 rng(3);
  const LayerSet g = gaussian_surrogate(oracle::random_layers(rng, 2, 1));
  const std::vector<double> h{0.4, 0.7};
  const double n = 0.01;
  const double p0 = h[0] * h[0] * g.variance(0), p1 = h[1] * h[1] * g.variance(1);
  const std::vector<std::size_t> v0{0}, v1{1}, both{0, 1}, none{};
  CHECK(achievable_rate(v0, v1, h, g, n) == doctest::Approx(0.5 * std::log2(1 + p0 / (p1 + n))));
  CHECK(achievable_rate(both, none, h, g, n) == doctest::Approx(0.5 * std::log2(1 + (p0 + p1) / n)));
  CHECK(stage_noise_variance(h, g, v1, n) == doctest::Approx(p1 + n).epsilon(1e-15));
}

TEST_CASE("rate margin") {
  std::mt19937_64 rng(8);
  const LayerSet g = gaussian_surrogate(oracle::random_layers(rng, 3, 1));
  const std::vector<double> h{0.2, 0.5, 0.9};
  const double n = 1e-3;
  const std::vector<std::size_t> v{0, 1}, later{2};
  const std::vector<double> zero(3, 0.0);

  SUBCASE("zero committed rates") {
    const double expect = oracle::margin({0, 1}, {2}, h, g, n);
    CHECK(rate_margin(v, later, zero, h, g, n) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rate_margin(v, later, {}, h, g, n) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("committed rates are subtracted") {
    std::vector<double> r{0.05, 0.1, 0.0};
    const std::vector<std::size_t> d0{0}, d1{1};
    const double a = achievable_rate(d0, later, h, g, n) - 0.05;
    const double b = achievable_rate(d1, later, h, g, n) - 0.1;
    const double c = (achievable_rate(v, later, h, g, n) - 0.15) / 2;
    CHECK(rate_margin(v, later, r, h, g, n) == doctest::Approx(std::min({a, b, c})).epsilon(1e-12));
  }
  SUBCASE("an unconstrained rate makes the margin minus infinity") {
    std::vector<double> r{kUnconstrained, 0.0, 0.0};
    CHECK(rate_margin(v, later, r, h, g, n) == -kUnconstrained);
  }
}

TEST_CASE("rate argument checks") {
  std::mt19937_64 rng(1);
  const LayerSet g = oracle::random_layers(rng, 2, 1);
  const std::vector<double> h{0.1, 0.1};
  const std::vector<std::size_t> empty{}, a{0}, ab{0, 1}, bad{7};
  CHECK_THROWS_AS(achievable_rate(empty, a, h, g, 1.0), InvalidArgument);
  CHECK_THROWS_AS(achievable_rate(a, ab, h, g, 1.0), InvalidArgument);
  CHECK_THROWS_AS(achievable_rate(bad, empty, h, g, 1.0), InvalidArgument);
}
