#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "vlc/clustering.hpp"
#include "vlc/error.hpp"
#include "vlc/experiment.hpp"

using namespace vlc;

namespace {

struct Built {
  Workspace ws;
  DecodingMap map;
};

const Built& corner() {
  static const Built b = [] {
    Built x{make_workspace(load_scene_spec(std::string(VLC_CONFIG_DIR) + "/corner_2x2.cfg")), {}};
    MapOptions mo;
    mo.use_symmetry = true;
    x.map = build_map(x.ws.scene, x.ws.layers, 0, mo);
    return x;
  }();
  return b;
}

double reference_distance(const MapCell& a, const MapCell& b, const LayerSet& layers, double nv) {
  const RateVector psi = rates_under_fixed_order(a.order.groups, b.gains, layers, nv);
  double num = 0.0, den = 0.0;
  for (auto l : b.order.detectable) {
    num += std::pow(b.order.rates[l] - psi[l], 2);
    den += std::pow(b.order.rates[l], 2);
  }
  return std::sqrt(num) / std::sqrt(den);
}

// Straightforward transcription of the splitting procedure, recomputing every
// distance on demand.
std::vector<std::vector<std::size_t>> reference_partition(const DecodingMap& m, const LayerSet& layers,
                                                          double tau_diff, double tau_loss) {
  std::vector<std::vector<std::size_t>> parts;
  std::map<std::vector<std::size_t>, std::size_t> by_set;
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    if (m.cells[i].outage()) continue;
    auto [it, fresh] = by_set.emplace(m.cells[i].order.detectable, parts.size());
    if (fresh) parts.emplace_back();
    parts[it->second].push_back(i);
  }
  while (true) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& part : parts) {
      std::vector<double> d;
      for (auto i : part) {
        double s = 0.0;
        for (auto j : part) {
          if (i != j) s += normalized_distance(m.cells[i], m.cells[j], layers, m.noise_var);
        }
        d.push_back(s / static_cast<double>(part.size()));
      }
      if (*std::max_element(d.begin(), d.end()) <= tau_loss) {
        next.push_back(part);
        continue;
      }
      std::vector<std::size_t> rest = part;
      while (!rest.empty()) {
        const double xi = d.front();
        std::vector<std::size_t> take, keep;
        std::vector<double> keep_d;
        for (std::size_t k = 0; k < rest.size(); ++k) {
          if (std::abs(xi - d[k]) < tau_diff || k == 0) {
            take.push_back(rest[k]);
          } else {
            keep.push_back(rest[k]);
            keep_d.push_back(d[k]);
          }
        }
        next.push_back(take);
        rest = keep;
        d = keep_d;
      }
    }
    const bool same = next.size() == parts.size();
    parts = next;
    if (same) break;
  }
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());
  return parts;
}

}  // namespace

TEST_CASE("normalized distance") {
  const auto& b = corner();
  const auto& cells = b.map.cells;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < cells.size() && checked < 200; i += 7) {
    for (std::size_t j = 3; j < cells.size() && checked < 200; j += 37) {
      const auto& x = cells[i];
      const auto& y = cells[j];
      if (x.outage() || y.outage()) {
        CHECK_THROWS_AS(normalized_distance(x, y, b.ws.layers, b.map.noise_var), IncompatiblePositions);
        continue;
      }
      if (x.order.detectable != y.order.detectable) {
        CHECK_THROWS_AS(normalized_distance(x, y, b.ws.layers, b.map.noise_var), IncompatiblePositions);
        continue;
      }
      ++checked;
      const double d = normalized_distance(x, y, b.ws.layers, b.map.noise_var);
      CHECK(d >= 0.0);
      CHECK(d == doctest::Approx(reference_distance(x, y, b.ws.layers, b.map.noise_var)).epsilon(1e-12));
      CHECK(normalized_distance(y, y, b.ws.layers, b.map.noise_var) == 0.0);
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("reduction matches a direct transcription") {
  const auto& b = corner();
  DecodingMap m = b.map;
  const auto res = reduce_map(m, b.ws.layers, 1e-5, 0.1);
  std::vector<std::vector<std::size_t>> got;
  for (const auto& c : res.clusters) got.push_back(c.members);
  std::sort(got.begin(), got.end());
  CHECK(got == reference_partition(b.map, b.ws.layers, 1e-5, 0.1));
}

TEST_CASE("reduction invariants") {
  const auto& b = corner();
  for (double loss : {0.0, 0.05, 0.1, 1e9}) {
    CAPTURE(loss);
    DecodingMap m = b.map;
    const auto res = reduce_map(m, b.ws.layers, 1e-5, loss);
    CHECK(res.points == m.non_outage_count());
    CHECK(res.max_average_loss <= loss + 1e-12);  // identical orders can differ by rounding
    std::vector<int> seen(m.cells.size(), 0);
    for (std::size_t k = 0; k < res.clusters.size(); ++k) {
      const auto& cl = res.clusters[k];
      CHECK(cl.representative == cl.members.front());
      for (auto i : cl.members) {
        ++seen[i];
        CHECK(m.cells[i].cluster == static_cast<long>(k));
        CHECK(m.cells[i].order.detectable == m.cells[cl.representative].order.detectable);
      }
    }
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
      CHECK(seen[i] == (m.cells[i].outage() ? 0 : 1));
      if (m.cells[i].outage()) CHECK(m.cells[i].cluster == -1);
    }
    CHECK(res.compression_ratio() ==
          doctest::Approx(double(res.points - res.count()) / double(res.points)));
    if (loss > 1e6) {
      std::map<std::vector<std::size_t>, int> sets;
      for (const auto& c : m.cells) {
        if (!c.outage()) sets[c.order.detectable] = 1;
      }
      CHECK(res.count() == sets.size());
    }
  }
}

TEST_CASE("reduction is thread independent") {
  const auto& b = corner();
  DecodingMap a = b.map, c = b.map;
  reduce_map(a, b.ws.layers, 1e-5, 0.1, 1);
  reduce_map(c, b.ws.layers, 1e-5, 0.1, 4);
  CHECK(a == c);
}
