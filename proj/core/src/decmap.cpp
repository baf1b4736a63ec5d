#include "vlc/decmap.hpp"

#include <cmath>

#include "vlc/error.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

std::size_t DecodingMap::non_outage_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const MapCell& c) { return !c.outage(); }));
}

std::size_t DecodingMap::computed_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const MapCell& c) {
    return c.provenance == Provenance::Computed;
  }));
}

std::optional<std::size_t> DecodingMap::cell_at_world(Vec3 world) const {
  const Vec3 local = world - world_offset;
  if (std::abs(local.z - grid.height) > 1e-9) return std::nullopt;
  const double fx = local.x / grid.spacing + 0.5 * static_cast<double>(grid.nx - 1);
  const double fy = local.y / grid.spacing + 0.5 * static_cast<double>(grid.ny - 1);
  const double rx = std::round(fx);
  const double ry = std::round(fy);
  if (std::abs(fx - rx) > 1e-6 || std::abs(fy - ry) > 1e-6) return std::nullopt;
  if (rx < 0 || ry < 0 || rx >= static_cast<double>(grid.nx) || ry >= static_cast<double>(grid.ny)) {
    return std::nullopt;
  }
  return grid.index(static_cast<std::size_t>(rx), static_cast<std::size_t>(ry));
}

namespace {

std::vector<std::size_t> invert(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

}  // namespace

DecodingOrder order_at(const Scene& scene, const LayerSet& layers, std::size_t filter,
                       std::size_t ix, std::size_t iy, std::size_t tau, bool canonical) {
  const double noise_var = scene.noise_sigma * scene.noise_sigma;
  const auto h = gain_vector(scene, scene.grid.local(ix, iy), filter);
  const PlaneSymmetry g = canonical ? canonical_symmetry(scene, ix, iy) : PlaneSymmetry{};
  if (g.is_identity()) return greedy_order(h, layers, noise_var, tau);

  // Transmitter i seen from p is transmitter perm[i] seen from g(p).
  const auto perm = geometric_relabeling(scene, g);
  std::vector<double> hq(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) hq[perm[i]] = h[i];
  return relabel(greedy_order(hq, layers, noise_var, tau), invert(perm), layers);
}

DecodingMap build_map(const Scene& scene, const LayerSet& layers, std::size_t filter,
                      const MapOptions& options) {
  if (filter >= scene.filters.size()) throw InvalidArgument("build_map: filter out of range");
  if (layers.transmitter_count() != scene.transmitter_count()) {
    throw InvalidArgument("build_map: layer set does not match the scene");
  }
  DecodingMap map;
  map.grid = scene.grid;
  map.world_offset = scene.world_offset;
  map.filter = filter;
  map.tau = options.tau;
  map.noise_var = scene.noise_sigma * scene.noise_sigma;
  map.cells.resize(scene.grid.size());

  std::vector<PlaneSymmetry> canon(map.cells.size());
  for (std::size_t iy = 0; iy < scene.grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < scene.grid.nx; ++ix) {
      const std::size_t idx = scene.grid.index(ix, iy);
      auto& c = map.cells[idx];
      c.ix = ix;
      c.iy = iy;
      c.local = scene.grid.local(ix, iy);
      c.source = idx;
      if (options.use_symmetry) canon[idx] = canonical_symmetry(scene, ix, iy);
    }
  }

  std::vector<std::size_t> direct;
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    if (canon[i].is_identity()) direct.push_back(i);
  }
  parallel_for(direct.size(), options.threads, [&](std::size_t n) {
    auto& c = map.cells[direct[n]];
    c.gains = gain_vector(scene, c.local, filter);
    c.order = order_at(scene, layers, filter, c.ix, c.iy, options.tau, options.canonical_frame);
  });

  if (options.use_symmetry) {
    // Derived cells only read computed cells, so each worker writes its own cell.
    std::vector<std::size_t> derived;
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
      if (!canon[i].is_identity()) derived.push_back(i);
    }
    parallel_for(derived.size(), options.threads, [&](std::size_t n) {
      const std::size_t idx = derived[n];
      auto& c = map.cells[idx];
      const PlaneSymmetry g = canon[idx];
      const auto [u, v] =
          g.apply(scene.grid.twice_offset_x(c.ix), scene.grid.twice_offset_y(c.iy));
      const auto sx = static_cast<std::size_t>((u + static_cast<long>(scene.grid.nx) - 1) / 2);
      const auto sy = static_cast<std::size_t>((v + static_cast<long>(scene.grid.ny) - 1) / 2);
      const std::size_t src = scene.grid.index(sx, sy);
      const MapCell& s = map.cells[src];
      const auto perm = geometric_relabeling(scene, g);
      c.gains.resize(s.gains.size());
      for (std::size_t i = 0; i < perm.size(); ++i) c.gains[i] = s.gains[perm[i]];
      c.order = relabel(s.order, invert(perm), layers);
      c.provenance = Provenance::Derived;
      c.source = src;
      c.transform = g;
    });
  }
  return map;
}

}  // namespace vlc
