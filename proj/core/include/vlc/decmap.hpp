#pragma once

// Position-indexed decoding maps over the sampled receiver plane.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "vlc/channel.hpp"
#include "vlc/cpgd.hpp"
#include "vlc/symmetry.hpp"

namespace vlc {

class LayerSet;

enum class Provenance { Computed, Derived };

struct MapCell {
  std::size_t ix = 0;
  std::size_t iy = 0;
  Vec3 local;
  std::vector<double> gains;  ///< h_x, by transmitter
  DecodingOrder order;
  long cluster = -1;  ///< -1 for outage cells or before clustering
  Provenance provenance = Provenance::Computed;
  std::size_t source = 0;  ///< cell the entry was derived from (itself if computed)
  PlaneSymmetry transform;  ///< maps this cell onto `source`

  bool outage() const { return order.outage; }
  friend bool operator==(const MapCell&, const MapCell&) = default;
};

struct MapOptions {
  std::size_t tau = 1;
  /// Solve only the fundamental region and derive the rest by reflection.
  bool use_symmetry = false;
  /// Run the greedy decoder in the canonical (fundamental-region) frame of
  /// each position so that ties break the same way at mirrored positions.
  bool canonical_frame = true;
  std::size_t threads = 0;  ///< 0: hardware concurrency
};

struct DecodingMap {
  SampleGrid grid;
  Vec3 world_offset;
  std::size_t filter = 0;
  std::size_t tau = 1;
  double noise_var = 0.0;
  std::uint64_t scene_hash = 0;
  double tau_diff = 0.0;  ///< thresholds of the last reduction (0 if none)
  double tau_loss = 0.0;
  std::vector<MapCell> cells;  ///< row-major, index = iy * nx + ix

  const MapCell& at(std::size_t ix, std::size_t iy) const { return cells[grid.index(ix, iy)]; }
  std::size_t non_outage_count() const;
  std::size_t computed_count() const;
  /// Cell whose world position lies within half a sampling gap of `world`
  /// on the receiver plane, if any.
  std::optional<std::size_t> cell_at_world(Vec3 world) const;
  Vec3 world(const MapCell& c) const { return c.local + world_offset; }

  friend bool operator==(const DecodingMap&, const DecodingMap&) = default;
};

/// Order at a single position. With `canonical` set, gains are first moved
/// into the frame of the position's fundamental-region image.
DecodingOrder order_at(const Scene& scene, const LayerSet& layers, std::size_t filter,
                       std::size_t ix, std::size_t iy, std::size_t tau, bool canonical);

DecodingMap build_map(const Scene& scene, const LayerSet& layers, std::size_t filter,
                      const MapOptions& options);

/// Runs fn(i) for i in [0, n) over a small thread pool.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn);

}  // namespace vlc

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace vlc {

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace vlc
