#include "vlc/cpgd.hpp"

#include <algorithm>

#include "vlc/error.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

double DecodingOrder::min_rate() const {
  double m = kUnconstrained;
  for (auto l : detectable) m = std::min(m, rates[l]);
  return is_unconstrained(m) ? 0.0 : m;
}

double DecodingOrder::sum_rate() const {
  double s = 0.0;
  for (auto l : detectable) {
    if (!is_unconstrained(rates[l])) s += rates[l];
  }
  return s;
}

std::vector<std::size_t> detectable_layers(std::span<const double> gains, const LayerSet& layers) {
  std::vector<std::size_t> k;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (gains[layers.tx_of(l)] != 0.0) k.push_back(l);
  }
  return k;
}

bool mask_less(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  // Compare from the most significant bit down.
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  return ia == a.rend() && ib != b.rend();
}

DecodingOrder greedy_order(std::span<const double> gains, const LayerSet& layers,
                           double noise_var, std::size_t tau) {
  if (tau < 1) throw InvalidArgument("greedy_order: tau must be >= 1");
  DecodingOrder out;
  out.rates.assign(layers.size(), kUnconstrained);
  out.detectable = detectable_layers(gains, layers);
  if (out.detectable.empty()) {
    out.outage = true;
    return out;
  }

  std::vector<std::size_t> remaining = out.detectable;  // D, ascending
  std::vector<std::size_t> extracted;                   // G
  std::vector<LayerGroup> extractions;
  std::vector<std::size_t> best;

  while (!remaining.empty()) {
    const double interference = stage_noise_variance(gains, layers, extracted, noise_var);
    double best_value = kUnconstrained;
    best.clear();
    for_each_bounded_subset(remaining, tau, [&](std::span<const std::size_t> v) {
      const double r = std::max(0.0, rate_against_noise(v, interference, gains, layers));
      const double value = r / static_cast<double>(v.size());
      if (best.empty() || value < best_value || (value == best_value && mask_less(v, best))) {
        best_value = value;
        best.assign(v.begin(), v.end());
      }
    });
    for (auto l : best) {
      out.rates[l] = best_value;
      remaining.erase(std::find(remaining.begin(), remaining.end(), l));
      extracted.push_back(l);
    }
    extractions.push_back(best);
  }
  out.groups.assign(extractions.rbegin(), extractions.rend());
  return out;
}

bool is_valid_partition(std::span<const LayerGroup> groups,
                        std::span<const std::size_t> detectable, std::size_t tau) {
  std::vector<std::size_t> all;
  for (const auto& g : groups) {
    if (g.empty() || g.size() > tau) return false;
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
  return std::equal(all.begin(), all.end(), detectable.begin(), detectable.end());
}

RateVector rates_under_fixed_order(std::span<const LayerGroup> groups,
                                   std::span<const double> gains, const LayerSet& layers,
                                   double noise_var) {
  RateVector rates(layers.size(), kUnconstrained);
  std::vector<char> seen(layers.size(), 0);
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidArgument("rates_under_fixed_order: empty group");
    for (auto l : g) {
      if (l >= layers.size() || seen[l]) {
        throw InvalidArgument("rates_under_fixed_order: groups do not form a partition");
      }
      seen[l] = 1;
    }
  }
  // Later groups are the interference for Q_m; sum them in ascending index
  // order so the noise matches the greedy evaluation bit for bit.
  std::vector<std::size_t> later;
  for (std::size_t m = groups.size(); m-- > 0;) {
    const double interference = stage_noise_variance(gains, layers, later, noise_var);
    std::vector<std::size_t> v = groups[m];
    std::sort(v.begin(), v.end());
    const double delta = rate_margin_against_noise(v, interference, {}, gains, layers);
    for (auto l : v) rates[l] = delta;
    later.insert(later.end(), v.begin(), v.end());
  }
  return rates;
}

}  // namespace vlc
