#include "vlc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vlc/error.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

namespace {

std::vector<std::size_t> sorted_copy(std::span<const std::size_t> s) {
  std::vector<std::size_t> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

void check_sets(std::span<const std::size_t> signal, std::span<const std::size_t> noise,
                const LayerSet& layers) {
  if (signal.empty()) throw InvalidArgument("achievable_rate: signal set must be non-empty");
  for (auto v : signal) {
    if (v >= layers.size()) throw InvalidArgument("achievable_rate: layer index out of range");
    if (std::find(noise.begin(), noise.end(), v) != noise.end()) {
      throw InvalidArgument("achievable_rate: signal and noise sets overlap");
    }
  }
}

}  // namespace

double stage_noise_variance(std::span<const double> gains, const LayerSet& layers,
                            std::span<const std::size_t> remaining, double noise_var) {
  const auto order = sorted_copy(remaining);
  double total = noise_var;
  for (auto l : order) {
    const double h = gains[layers.tx_of(l)];
    total += h * h * layers.variance(l);
  }
  return total;
}

double rate_against_noise(std::span<const std::size_t> signal, double interference,
                          std::span<const double> gains, const LayerSet& layers) {
  // D_m = sum_{l >= m} h_l^2 var_l + interference, built from the back.
  const std::size_t p = signal.size();
  double acc = interference;
  double log_terms = 0.0;
  double phi = 0.0;
  for (std::size_t m = p; m-- > 0;) {
    const auto& layer = layers[signal[m]];
    const double h = gains[layer.index.tx];
    const double var = layer.tg.variance;
    const double hv = h * h * var;
    acc += hv;
    // log(var - h^2 var^2 / D) = log(var) + log1p(-h^2 var / D)
    const double conditional = std::log(var) + std::log1p(-hv / acc);
    log_terms += std::log(layer.tg.nu * layer.tg.nu) - conditional;
    phi += layer.tg.phi_nats;
  }
  return (0.5 * log_terms - phi) / std::numbers::ln2;
}

double achievable_rate_unclamped(std::span<const std::size_t> signal,
                                 std::span<const std::size_t> noise,
                                 std::span<const double> gains, const LayerSet& layers,
                                 double noise_var) {
  check_sets(signal, noise, layers);
  const auto v = sorted_copy(signal);
  return rate_against_noise(v, stage_noise_variance(gains, layers, noise, noise_var), gains,
                            layers);
}

double achievable_rate(std::span<const std::size_t> signal, std::span<const std::size_t> noise,
                       std::span<const double> gains, const LayerSet& layers, double noise_var) {
  return std::max(0.0, achievable_rate_unclamped(signal, noise, gains, layers, noise_var));
}

double rate_margin_against_noise(std::span<const std::size_t> signal, double interference,
                                 std::span<const double> rates, std::span<const double> gains,
                                 const LayerSet& layers) {
  const std::size_t p = signal.size();
  if (p == 0) throw InvalidArgument("rate_margin: signal set must be non-empty");
  if (p > 20) throw InvalidArgument("rate_margin: signal set too large for subset enumeration");
  const auto v = sorted_copy(signal);
  double best = kUnconstrained;
  std::vector<std::size_t> subset;
  subset.reserve(p);
  for (unsigned mask = 1; mask < (1u << p); ++mask) {
    subset.clear();
    double allocated = 0.0;
    bool unbounded = false;
    for (std::size_t b = 0; b < p; ++b) {
      if (mask & (1u << b)) {
        subset.push_back(v[b]);
        const double r = rates.empty() ? 0.0 : rates[v[b]];
        if (is_unconstrained(r)) unbounded = true;
        allocated += r;
      }
    }
    double value;
    if (unbounded) {
      value = -kUnconstrained;
    } else {
      const double r = std::max(0.0, rate_against_noise(subset, interference, gains, layers));
      value = (r - allocated) / static_cast<double>(subset.size());
    }
    if (value < best) best = value;
  }
  return best;
}

double rate_margin(std::span<const std::size_t> signal, std::span<const std::size_t> noise,
                   std::span<const double> rates, std::span<const double> gains,
                   const LayerSet& layers, double noise_var) {
  check_sets(signal, noise, layers);
  return rate_margin_against_noise(signal, stage_noise_variance(gains, layers, noise, noise_var),
                                   rates, gains, layers);
}

}  // namespace vlc
