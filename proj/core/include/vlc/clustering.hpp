#pragma once

// Size reduction of a decoding map by grouping positions whose decoding
// orders are interchangeable.

#include <cstddef>
#include <vector>

#include "vlc/decmap.hpp"

namespace vlc {

class LayerSet;

/// Relative rate loss at `b` when it uses the order of `a`:
/// |r_b - psi(h_b, Q^a)| / |r_b| over the detectable layers. Throws
/// IncompatiblePositions when the detectable sets differ or either cell is
/// an outage.
double normalized_distance(const MapCell& a, const MapCell& b, const LayerSet& layers,
                           double noise_var);

struct Cluster {
  std::vector<std::size_t> members;  ///< cell indices, ascending
  std::size_t representative = 0;    ///< first member
  double max_average_distance = 0.0;
};

struct ClusterResult {
  std::vector<Cluster> clusters;
  std::size_t points = 0;  ///< N_s, non-outage cells
  std::size_t passes = 0;
  double max_average_loss = 0.0;

  std::size_t count() const { return clusters.size(); }
  double compression_ratio() const {
    return points == 0 ? 0.0
                       : static_cast<double>(points - clusters.size()) / static_cast<double>(points);
  }
};

/// Partitions the non-outage cells. Cells with different detectable sets
/// start in different categories; each category is then split as long as
/// its largest average internal distance exceeds `tau_loss`, peeling off the
/// members whose average distance is within `tau_diff` of the first
/// remaining member's, until the category count stops changing. Writes the
/// cluster labels and thresholds into `map`.
ClusterResult reduce_map(DecodingMap& map, const LayerSet& layers, double tau_diff,
                         double tau_loss, std::size_t threads = 0);

}  // namespace vlc
