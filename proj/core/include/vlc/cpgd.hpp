#pragma once

// Constrained partial group decoding: greedy max-min decoding order and the
// local rate allocation at one receiver position.

#include <cstddef>
#include <span>
#include <vector>

#include "vlc/rates.hpp"

namespace vlc {

class LayerSet;

using LayerGroup = std::vector<std::size_t>;

/// Ordered partition Q_1..Q_p of the detectable layers (Q_1 decoded first)
/// together with the local rate of every layer.
struct DecodingOrder {
  std::vector<LayerGroup> groups;
  RateVector rates;                  ///< length L; kUnconstrained off the detectable set
  std::vector<std::size_t> detectable;  ///< K_x, ascending
  bool outage = false;               ///< K_x is empty

  std::size_t group_count() const { return groups.size(); }
  /// Smallest finite rate among detectable layers (0 for an outage).
  double min_rate() const;
  double sum_rate() const;
  friend bool operator==(const DecodingOrder&, const DecodingOrder&) = default;
};

/// K_x: layers of every transmitter with a non-zero gain.
std::vector<std::size_t> detectable_layers(std::span<const double> gains, const LayerSet& layers);

/// True when mask(a) < mask(b), where mask(S) = sum over S of 2^index; both
/// sets sorted ascending. This is the argmin tie-break everywhere.
bool mask_less(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Visits every non-empty subset of `pool` (sorted) with at most `max_size`
/// elements. Order is unspecified; callers tie-break with mask_less.
template <class Fn>
void for_each_bounded_subset(std::span<const std::size_t> pool, std::size_t max_size, Fn&& fn);

/// Greedy max-min order: repeatedly extract the set V (|V| <= tau) with the
/// lowest per-layer rate R(V, G)/|V| against the already-extracted layers G,
/// then decode the extractions in reverse. Returns an outage marker when no
/// layer is detectable.
DecodingOrder greedy_order(std::span<const double> gains, const LayerSet& layers,
                           double noise_var, std::size_t tau = 1);

/// Local rates for a given order: every layer of Q_m receives
/// Delta(Q_m, union of later groups, 0). Throws InvalidArgument when the
/// groups overlap or touch layers outside the layer set.
RateVector rates_under_fixed_order(std::span<const LayerGroup> groups,
                                   std::span<const double> gains, const LayerSet& layers,
                                   double noise_var);

/// Checks the partition invariants (disjoint, covers `detectable`, sizes <= tau).
bool is_valid_partition(std::span<const LayerGroup> groups,
                        std::span<const std::size_t> detectable, std::size_t tau);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_bounded_subset(std::span<const std::size_t> pool, std::size_t max_size, Fn&& fn) {
  const std::size_t n = pool.size();
  std::vector<std::size_t> pick;  // positions into pool, ascending
  std::vector<std::size_t> subset;
  for (std::size_t size = 1; size <= max_size && size <= n; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      subset.resize(size);
      for (std::size_t i = 0; i < size; ++i) subset[i] = pool[pick[i]];
      fn(std::span<const std::size_t>(subset));
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
}

}  // namespace vlc
