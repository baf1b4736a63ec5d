#include <doctest.h>

#include <random>

#include "vlc/decmap.hpp"
#include "vlc/error.hpp"
#include "vlc/experiment.hpp"
#include "vlc/symmetry.hpp"

using namespace vlc;

namespace {

LayerSet single_layers(std::size_t n) {
  std::vector<LayerSignal> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({{i, 0, i}, tg_moments(0.25, 0.1, 0.5), 0.25});
  return LayerSet(std::move(v));
}

DecodingOrder chain(std::initializer_list<std::size_t> one_based) {
  DecodingOrder o;
  o.rates.assign(4, 0.0);
  double r = 1.0;
  for (auto i : one_based) {
    o.groups.push_back({i - 1});
    o.rates[i - 1] = r;
    r += 1.0;
    o.detectable.push_back(i - 1);
  }
  std::sort(o.detectable.begin(), o.detectable.end());
  return o;
}

std::vector<std::size_t> sequence(const DecodingOrder& o) {
  std::vector<std::size_t> s;
  for (const auto& g : o.groups) s.push_back(g.front() + 1);
  return s;
}

}  // namespace

TEST_CASE("index matrix reflections") {
  // [2 4; 1 3], 0-based entries
  const IndexMatrix a(2, 2, {1, 3, 0, 2});
  CHECK(reflect(a, Reflection::Diagonal) == IndexMatrix(2, 2, {2, 3, 0, 1}));
  CHECK(reflect(a, Reflection::Vertical) == IndexMatrix(2, 2, {3, 1, 2, 0}));
  CHECK(reflect(a, Reflection::Horizontal) == IndexMatrix(2, 2, {0, 2, 1, 3}));
  for (auto r : {Reflection::Diagonal, Reflection::Vertical, Reflection::Horizontal}) {
    CHECK(reflect(reflect(a, r), r) == a);
  }
  CHECK(a.locate(3) == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK_THROWS_AS(a.locate(9), InvalidArgument);
  CHECK_THROWS_AS(reflect(IndexMatrix(1, 2, {0, 1}), Reflection::Diagonal), InvalidArgument);
  CHECK_THROWS_AS(IndexMatrix(1, 2, {0, 0}), InvalidArgument);
}

TEST_CASE("worked relabelling examples on a 2x2 array") {
  const LayerSet ls = single_layers(4);
  const std::vector<IndexMatrix> a{IndexMatrix(2, 2, {1, 3, 0, 2})};
  const auto q1 = chain({4, 2, 3, 1});
  const auto q2 = symmetry_transform(q1, a, Reflection::Diagonal, ls);
  CHECK(sequence(q2) == std::vector<std::size_t>{4, 3, 2, 1});
  CHECK(sequence(symmetry_transform(q1, a, Reflection::Vertical, ls)) ==
        std::vector<std::size_t>{2, 4, 1, 3});
  CHECK(sequence(symmetry_transform(q2, a, Reflection::Horizontal, ls)) ==
        std::vector<std::size_t>{3, 4, 1, 2});
  // Rates travel with their layers.
  CHECK(q2.rates[2] == q1.rates[1]);
}

TEST_CASE("plane symmetry group") {
  for (int s = 0; s < 8; ++s) {
    const PlaneSymmetry g{bool(s & 4), bool(s & 2), bool(s & 1)};
    const auto [x, y] = g.apply(3, -5);
    CHECK(g.inverse().apply(x, y) == std::pair<long, long>{3, -5});
  }
  const PlaneSymmetry swap{true, false, false};
  CHECK(swap.apply(1, 2) == std::pair<long, long>{2, 1});
  const PlaneSymmetry fx{false, true, false};
  CHECK(fx.apply(1, 2) == std::pair<long, long>{-1, 2});
  CHECK(fx.as_reflections() == std::vector<Reflection>{Reflection::Vertical});
}

TEST_CASE("scene symmetry flags") {
  Workspace ws = make_workspace(SceneSpec::baseline());
  CHECK(ws.scene.mirror_x);
  CHECK(ws.scene.mirror_y);
  CHECK(ws.scene.mirror_diagonal);
  CHECK(scene_symmetries(ws.scene).size() == 8);
  CHECK(scene_symmetries(ws.scene).front().is_identity());

  SceneSpec lop = SceneSpec::baseline();
  lop.margin_x_hi = 1.2;
  const Scene s = build_scene(lop);
  CHECK_FALSE(s.mirror_x);
  CHECK(s.mirror_y);
  CHECK_FALSE(s.mirror_diagonal);
  CHECK(scene_symmetries(s).size() == 2);

  SceneSpec pair = SceneSpec::baseline();
  pair.cols = 1;
  pair.rows = 2;
  pair.spacing_h = pair.spacing_v = 0.6;
  pair.margin_x_hi = 1.6;
  const Scene p = build_scene(pair);
  CHECK(p.mirror_y);
  CHECK_FALSE(p.mirror_diagonal);
}

TEST_CASE("canonical element maps into the wedge") {
  const Scene s = build_scene(SceneSpec::baseline());
  std::size_t inside = 0;
  for (std::size_t iy = 0; iy < s.grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < s.grid.nx; ++ix) {
      const auto g = canonical_symmetry(s, ix, iy);
      const auto [x, y] = g.apply(s.grid.twice_offset_x(ix), s.grid.twice_offset_y(iy));
      CHECK(in_fundamental_region(s, x, y));
      inside += in_fundamental_region(s, s.grid.twice_offset_x(ix), s.grid.twice_offset_y(iy));
    }
  }
  // 14 * 15 / 2 samples with 0 <= x <= y on a 27 x 27 grid
  CHECK(inside == 105);
}

TEST_CASE("geometric relabelling is a colour-preserving permutation") {
  const Scene s = build_scene(SceneSpec::baseline());
  for (const auto& g : scene_symmetries(s)) {
    const auto perm = geometric_relabeling(s, g);
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      CHECK(s.transmitters[perm[i]].color == s.transmitters[i].color);
    }
  }
}

TEST_CASE("mirrored positions see permuted gains") {
  const Scene s = build_scene(SceneSpec::baseline());
  const auto mats = scene_index_matrices(s);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t ix = rng() % s.grid.nx, iy = rng() % s.grid.ny;
    const Reflection r = static_cast<Reflection>(rng() % 3);
    std::size_t jx = ix, jy = iy;
    if (r == Reflection::Diagonal) std::swap(jx, jy);
    if (r == Reflection::Vertical) jx = s.grid.nx - 1 - ix;
    if (r == Reflection::Horizontal) jy = s.grid.ny - 1 - iy;
    const auto perm = reflection_relabeling(mats, r, s.transmitter_count());
    const auto h = gain_vector(s, s.grid.local(ix, iy), 0);
    const auto hm = gain_vector(s, s.grid.local(jx, jy), 0);
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(hm[perm[i]] == h[i]);
  }
}
