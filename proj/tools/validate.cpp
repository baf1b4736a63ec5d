#include "validate.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include "vlc/decmap.hpp"
#include "vlc/error.hpp"
#include "vlc/experiment.hpp"
#include "vlc/map_io.hpp"

using namespace vlc;

namespace {

// Composite Simpson on [0, A] of x^k times the density.
double tg_moment(const TGParams& tg, int k) {
  const int n = 20000;
  const double h = tg.peak / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::pow(x, k) * tg_density(tg, x);
  }
  return s * h / 3.0;
}

}  // namespace

bool run_validation(const SceneSpec& spec, std::ostream& out) {
  bool all = true;
  auto check = [&](const std::string& name, const std::function<std::string()>& fn) {
    std::string detail;
    bool ok = false;
    try {
      detail = fn();
      ok = detail.empty();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "PASS " : "FAIL ") << name << (ok ? "" : ": " + detail) << "\n";
    all = all && ok;
  };

  const Workspace ws = make_workspace(spec);
  const Scene& scene = ws.scene;

  check("filter matrix rows sum to at most 1", [&]() -> std::string {
    for (std::size_t p = 0; p < scene.filter_gains.colors(); ++p) {
      double s = 0.0;
      for (std::size_t q = 0; q < scene.filter_gains.filters(); ++q) s += scene.filter_gains(p, q);
      if (s > 1.0 + 1e-12) return "row " + std::to_string(p + 1) + " sums to " + std::to_string(s);
    }
    return {};
  });

  check("layer means respect the average-power cap", [&]() -> std::string {
    for (const auto& l : ws.layers.all()) {
      if (l.tg.mean > l.mean_cap + 1e-9) return "layer " + std::to_string(l.index.lin + 1);
    }
    return {};
  });

  check("truncated moments agree with quadrature", [&]() -> std::string {
    const TGParams& tg = ws.layers[0].tg;
    const double m1 = tg_moment(tg, 1);
    const double var = tg_moment(tg, 2) - m1 * m1;
    if (std::abs(m1 - tg.mean) > 1e-8 * tg.mean) return "mean";
    if (std::abs(var - tg.variance) > 1e-6 * tg.variance) return "variance";
    return {};
  });

  const std::size_t filter = spec.snr_ref_filter;
  check("fixed-order rates reproduce the greedy allocation", [&]() -> std::string {
    const double nv = scene.noise_sigma * scene.noise_sigma;
    for (std::size_t iy = 0; iy < scene.grid.ny; iy += std::max<std::size_t>(1, scene.grid.ny / 4)) {
      for (std::size_t ix = 0; ix < scene.grid.nx; ix += std::max<std::size_t>(1, scene.grid.nx / 4)) {
        const auto h = gain_vector(scene, scene.grid.local(ix, iy), filter);
        const auto o = greedy_order(h, ws.layers, nv, 1);
        if (o.outage) continue;
        const auto r = rates_under_fixed_order(o.groups, h, ws.layers, nv);
        if (r != o.rates) return "cell " + std::to_string(ix) + "," + std::to_string(iy);
      }
    }
    return {};
  });

  check("symmetric construction matches direct construction", [&]() -> std::string {
    MapOptions direct, sym;
    sym.use_symmetry = true;
    const auto a = build_map(scene, ws.layers, filter, direct);
    const auto b = build_map(scene, ws.layers, filter, sym);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      if (!(a.cells[i].order == b.cells[i].order) || a.cells[i].gains != b.cells[i].gains) {
        return "cell " + std::to_string(i);
      }
    }
    return {};
  });

  check("map file round trip", [&]() -> std::string {
    MapOptions mo;
    mo.use_symmetry = true;
    const auto m = build_map(scene, ws.layers, filter, mo);
    std::stringstream s;
    write_map(s, m);
    if (!(read_map(s) == m)) return "maps differ";
    return {};
  });
  return all;
}
