#pragma once

// Reflection symmetries of a regular LED array and how they relabel layers.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vlc/cpgd.hpp"

namespace vlc {

struct Scene;
class LayerSet;

enum class Reflection {
  Diagonal,    ///< about the array diagonal through its lowest-left and top-right cells
  Horizontal,  ///< about the horizontal centre line (rows flip)
  Vertical,    ///< about the vertical centre line (columns flip)
};

const char* to_string(Reflection r);

/// N_h x N_v matrix of transmitter indices laid out as the array is seen from
/// above: row 0 is the top (largest y), column 0 the left (smallest x).
class IndexMatrix {
 public:
  IndexMatrix() = default;
  /// `entries` row-major, 0-based transmitter indices; must be distinct.
  IndexMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> entries);

  /// The matrix of one colour slot of a grid scene.
  static IndexMatrix for_color_slot(const Scene& scene, std::size_t slot);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  bool contains(std::size_t tx) const;
  /// pi_A^{-1}: (row, col) of a transmitter. Throws InvalidArgument if absent.
  std::pair<std::size_t, std::size_t> locate(std::size_t tx) const;
  std::span<const std::size_t> entries() const { return entries_; }

  friend bool operator==(const IndexMatrix&, const IndexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> entries_;
};

/// A_p for a reflection. Diagonal requires a square matrix.
IndexMatrix reflect(const IndexMatrix& a, Reflection r);

/// tx -> A_p(pi_A^{-1}(tx)) over all matrices; transmitters in none map to
/// themselves.
std::vector<std::size_t> reflection_relabeling(std::span<const IndexMatrix> matrices,
                                               Reflection r, std::size_t transmitter_count);

/// Applies a transmitter permutation to an order: layer (i, k) becomes
/// (perm[i], k), group structure and rates carried along.
DecodingOrder relabel(const DecodingOrder& order, std::span<const std::size_t> tx_perm,
                      const LayerSet& layers);

/// The order at the mirror image of the position `order` was computed at.
DecodingOrder symmetry_transform(const DecodingOrder& order,
                                 std::span<const IndexMatrix> matrices, Reflection r,
                                 const LayerSet& layers);

/// Element of the reflection group of a rectangle/square about the local
/// origin: optional x <-> y swap followed by optional sign flips.
struct PlaneSymmetry {
  bool swap = false;
  bool flip_x = false;
  bool flip_y = false;

  bool is_identity() const { return !swap && !flip_x && !flip_y; }
  /// Acts on doubled grid offsets (exact integers).
  std::pair<long, long> apply(long x2, long y2) const;
  PlaneSymmetry inverse() const;
  /// Reflections whose successive application realises this element.
  std::vector<Reflection> as_reflections() const;
  friend bool operator==(PlaneSymmetry, PlaneSymmetry) = default;
};

/// Elements supported by the scene (identity first).
std::vector<PlaneSymmetry> scene_symmetries(const Scene& scene);

/// Whether a doubled offset lies in the fundamental region of the scene's
/// symmetry group: x >= 0 when mirror_x, y >= 0 when mirror_y and x <= y
/// when the diagonal symmetry holds.
bool in_fundamental_region(const Scene& scene, long x2, long y2);

/// First supported element g (identity first) with g(p) in the fundamental region.
PlaneSymmetry canonical_symmetry(const Scene& scene, std::size_t ix, std::size_t iy);

/// Geometric transmitter permutation of g: tx at cell c -> tx at cell g(c),
/// same colour slot.
std::vector<std::size_t> geometric_relabeling(const Scene& scene, PlaneSymmetry g);

/// Per-slot index matrices of a grid scene.
std::vector<IndexMatrix> scene_index_matrices(const Scene& scene);

}  // namespace vlc
