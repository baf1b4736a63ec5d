#include "vlc/symmetry.hpp"

#include <algorithm>
#include <numeric>

#include "vlc/channel.hpp"
#include "vlc/error.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

const char* to_string(Reflection r) {
  switch (r) {
    case Reflection::Diagonal: return "diagonal";
    case Reflection::Horizontal: return "horizontal";
    case Reflection::Vertical: return "vertical";
  }
  return "?";
}

IndexMatrix::IndexMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) throw InvalidArgument("IndexMatrix: wrong entry count");
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("IndexMatrix: entries must be distinct");
  }
}

IndexMatrix IndexMatrix::for_color_slot(const Scene& scene, std::size_t slot) {
  if (!scene.is_grid() || slot >= scene.colors_per_position) {
    throw InvalidArgument("IndexMatrix: scene is not a regular array or slot out of range");
  }
  const std::size_t rows = scene.array_rows;
  const std::size_t cols = scene.array_cols;
  std::vector<std::size_t> e(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      e[i * cols + j] = scene.transmitter_at(j, rows - 1 - i, slot);
    }
  }
  return IndexMatrix(rows, cols, std::move(e));
}

bool IndexMatrix::contains(std::size_t tx) const {
  return std::find(entries_.begin(), entries_.end(), tx) != entries_.end();
}

std::pair<std::size_t, std::size_t> IndexMatrix::locate(std::size_t tx) const {
  const auto it = std::find(entries_.begin(), entries_.end(), tx);
  if (it == entries_.end()) throw InvalidArgument("IndexMatrix: transmitter not in matrix");
  const auto pos = static_cast<std::size_t>(it - entries_.begin());
  return {pos / cols_, pos % cols_};
}

IndexMatrix reflect(const IndexMatrix& a, Reflection r) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> e(rows * cols);
  switch (r) {
    case Reflection::Diagonal:
      if (rows != cols) throw InvalidArgument("diagonal reflection needs a square array");
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) e[i * cols + j] = a(rows - 1 - j, cols - 1 - i);
      break;
    case Reflection::Horizontal:
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) e[(rows - 1 - i) * cols + j] = a(i, j);
      break;
    case Reflection::Vertical:
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) e[i * cols + (cols - 1 - j)] = a(i, j);
      break;
  }
  return IndexMatrix(rows, cols, std::move(e));
}

std::vector<std::size_t> reflection_relabeling(std::span<const IndexMatrix> matrices,
                                               Reflection r, std::size_t transmitter_count) {
  std::vector<std::size_t> perm(transmitter_count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (const auto& a : matrices) {
    const IndexMatrix ap = reflect(a, r);
    for (auto tx : a.entries()) {
      if (tx >= transmitter_count) throw InvalidArgument("IndexMatrix entry out of range");
      const auto [i, j] = a.locate(tx);
      perm[tx] = ap(i, j);
    }
  }
  return perm;
}

DecodingOrder relabel(const DecodingOrder& order, std::span<const std::size_t> tx_perm,
                      const LayerSet& layers) {
  auto map_layer = [&](std::size_t lin) {
    const auto idx = layers.locate(lin);
    const std::size_t tx = tx_perm[idx.tx];
    if (layers.layers_of(tx) != layers.layers_of(idx.tx)) {
      throw InvalidArgument("relabel: transmitters with different layer counts");
    }
    return layers.lin(tx, idx.k);
  };
  DecodingOrder out;
  out.outage = order.outage;
  out.groups.reserve(order.groups.size());
  for (const auto& g : order.groups) {
    LayerGroup mapped;
    for (auto l : g) mapped.push_back(map_layer(l));
    std::sort(mapped.begin(), mapped.end());
    out.groups.push_back(std::move(mapped));
  }
  for (auto l : order.detectable) out.detectable.push_back(map_layer(l));
  std::sort(out.detectable.begin(), out.detectable.end());
  out.rates.assign(order.rates.size(), kUnconstrained);
  for (std::size_t l = 0; l < order.rates.size(); ++l) out.rates[map_layer(l)] = order.rates[l];
  return out;
}

DecodingOrder symmetry_transform(const DecodingOrder& order,
                                 std::span<const IndexMatrix> matrices, Reflection r,
                                 const LayerSet& layers) {
  return relabel(order, reflection_relabeling(matrices, r, layers.transmitter_count()), layers);
}

std::pair<long, long> PlaneSymmetry::apply(long x2, long y2) const {
  long u = swap ? y2 : x2;
  long v = swap ? x2 : y2;
  return {flip_x ? -u : u, flip_y ? -v : v};
}

PlaneSymmetry PlaneSymmetry::inverse() const {
  // (F o S)^-1 = S o F = F' o S with the flips exchanged.
  if (!swap) return *this;
  return {true, flip_y, flip_x};
}

std::vector<Reflection> PlaneSymmetry::as_reflections() const {
  std::vector<Reflection> seq;
  if (swap) seq.push_back(Reflection::Diagonal);
  if (flip_x) seq.push_back(Reflection::Vertical);
  if (flip_y) seq.push_back(Reflection::Horizontal);
  return seq;
}

std::vector<PlaneSymmetry> scene_symmetries(const Scene& scene) {
  std::vector<PlaneSymmetry> out;
  for (int s = 0; s < 2; ++s)
    for (int fx = 0; fx < 2; ++fx)
      for (int fy = 0; fy < 2; ++fy) {
        if (s && !scene.mirror_diagonal) continue;
        if (fx && !scene.mirror_x) continue;
        if (fy && !scene.mirror_y) continue;
        out.push_back({s == 1, fx == 1, fy == 1});
      }
  return out;
}

bool in_fundamental_region(const Scene& scene, long x2, long y2) {
  if (scene.mirror_x && x2 < 0) return false;
  if (scene.mirror_y && y2 < 0) return false;
  if (scene.mirror_diagonal && x2 > y2) return false;
  return true;
}

PlaneSymmetry canonical_symmetry(const Scene& scene, std::size_t ix, std::size_t iy) {
  const long x2 = scene.grid.twice_offset_x(ix);
  const long y2 = scene.grid.twice_offset_y(iy);
  for (const auto& g : scene_symmetries(scene)) {
    const auto [u, v] = g.apply(x2, y2);
    if (in_fundamental_region(scene, u, v)) return g;
  }
  throw InvalidArgument("canonical_symmetry: no group element reaches the fundamental region");
}

std::vector<std::size_t> geometric_relabeling(const Scene& scene, PlaneSymmetry g) {
  std::vector<std::size_t> perm(scene.transmitter_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (g.is_identity()) return perm;
  if (!scene.is_grid()) throw InvalidArgument("geometric_relabeling: scene is not a regular array");
  if (g.swap && scene.array_cols != scene.array_rows) {
    throw InvalidArgument("geometric_relabeling: swap needs a square array");
  }
  const long cols = static_cast<long>(scene.array_cols);
  const long rows = static_cast<long>(scene.array_rows);
  for (long c = 0; c < cols; ++c) {
    for (long r = 0; r < rows; ++r) {
      const auto [u, v] = g.apply(2 * c - (cols - 1), 2 * r - (rows - 1));
      const auto c2 = static_cast<std::size_t>((u + cols - 1) / 2);
      const auto r2 = static_cast<std::size_t>((v + rows - 1) / 2);
      for (std::size_t s = 0; s < scene.colors_per_position; ++s) {
        perm[scene.transmitter_at(static_cast<std::size_t>(c), static_cast<std::size_t>(r), s)] =
            scene.transmitter_at(c2, r2, s);
      }
    }
  }
  return perm;
}

std::vector<IndexMatrix> scene_index_matrices(const Scene& scene) {
  std::vector<IndexMatrix> out;
  for (std::size_t s = 0; s < scene.colors_per_position; ++s) {
    out.push_back(IndexMatrix::for_color_slot(scene, s));
  }
  return out;
}

}  // namespace vlc
