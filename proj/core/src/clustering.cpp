#include "vlc/clustering.hpp"

#include <cmath>
#include <map>

#include "vlc/error.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

namespace {

// psi(h_b, Q^a) restricted to K, in K's order. Interference is summed over K
// in ascending index order, exactly as stage_noise_variance does.
std::vector<double> fixed_order_rates(const MapCell& a, const MapCell& b, const LayerSet& layers,
                                      double noise_var, std::vector<char>& later) {
  const auto& k = b.order.detectable;
  later.assign(layers.size(), 0);
  std::vector<double> hv(layers.size(), 0.0);
  for (auto l : k) {
    const double h = b.gains[layers.tx_of(l)];
    hv[l] = h * h * layers.variance(l);
  }
  std::vector<double> rates(layers.size(), 0.0);
  const auto& groups = a.order.groups;
  for (std::size_t m = groups.size(); m-- > 0;) {
    double interference = noise_var;
    for (auto l : k) {
      if (later[l]) interference += hv[l];
    }
    const double delta = rate_margin_against_noise(groups[m], interference, {}, b.gains, layers);
    for (auto l : groups[m]) {
      rates[l] = delta;
      later[l] = 1;
    }
  }
  return rates;
}

double distance_impl(const MapCell& a, const MapCell& b, const LayerSet& layers, double noise_var,
                     std::vector<char>& scratch) {
  const auto psi = fixed_order_rates(a, b, layers, noise_var, scratch);
  double num = 0.0;
  double den = 0.0;
  for (auto l : b.order.detectable) {
    const double r = b.order.rates[l];
    num += (r - psi[l]) * (r - psi[l]);
    den += r * r;
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : kUnconstrained;
  return std::sqrt(num) / std::sqrt(den);
}

void check_compatible(const MapCell& a, const MapCell& b) {
  if (a.outage() || b.outage()) throw IncompatiblePositions("distance to an outage position");
  if (a.order.detectable != b.order.detectable) {
    throw IncompatiblePositions("positions detect different layer sets");
  }
}

}  // namespace

double normalized_distance(const MapCell& a, const MapCell& b, const LayerSet& layers,
                           double noise_var) {
  check_compatible(a, b);
  std::vector<char> scratch;
  return distance_impl(a, b, layers, noise_var, scratch);
}

ClusterResult reduce_map(DecodingMap& map, const LayerSet& layers, double tau_diff,
                         double tau_loss, std::size_t threads) {
  ClusterResult result;

  // Initial categories: one per detectable set, in order of first appearance.
  std::vector<std::vector<std::size_t>> classes;
  {
    std::map<std::vector<std::size_t>, std::size_t> by_set;
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
      const auto& c = map.cells[i];
      if (c.outage()) continue;
      ++result.points;
      auto [it, fresh] = by_set.emplace(c.order.detectable, classes.size());
      if (fresh) classes.emplace_back();
      classes[it->second].push_back(i);
    }
  }

  // Pairwise distances inside each class, d(x_i, x_j) at row i, column j.
  std::vector<std::size_t> class_of(map.cells.size(), 0);
  std::vector<std::size_t> slot(map.cells.size(), 0);
  std::vector<std::vector<double>> dist(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& mem = classes[c];
    const std::size_t n = mem.size();
    for (std::size_t s = 0; s < n; ++s) {
      class_of[mem[s]] = c;
      slot[mem[s]] = s;
    }
    dist[c].assign(n * n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
      std::vector<char> scratch;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        dist[c][i * n + j] = distance_impl(map.cells[mem[i]], map.cells[mem[j]], layers,
                                           map.noise_var, scratch);
      }
    });
  }
  auto d = [&](std::size_t i, std::size_t j) {
    const std::size_t c = class_of[i];
    return dist[c][slot[i] * classes[c].size() + slot[j]];
  };
  auto average_distances = [&](const std::vector<std::size_t>& part) {
    std::vector<double> avg(part.size());
    for (std::size_t a = 0; a < part.size(); ++a) {
      double s = 0.0;
      for (auto j : part) s += d(part[a], j);
      avg[a] = s / static_cast<double>(part.size());
    }
    return avg;
  };

  std::vector<std::vector<std::size_t>> parts = classes;
  while (true) {
    ++result.passes;
    std::vector<std::vector<std::size_t>> next;
    for (const auto& part : parts) {
      auto avg = average_distances(part);
      const double worst = *std::max_element(avg.begin(), avg.end());
      if (!(worst > tau_loss)) {
        next.push_back(part);
        continue;
      }
      std::vector<std::size_t> rest = part;
      while (!rest.empty()) {
        const double xi = avg.front();
        std::vector<std::size_t> peeled, keep;
        std::vector<double> keep_avg;
        for (std::size_t a = 0; a < rest.size(); ++a) {
          if (std::abs(xi - avg[a]) < tau_diff) {
            peeled.push_back(rest[a]);
          } else {
            keep.push_back(rest[a]);
            keep_avg.push_back(avg[a]);
          }
        }
        // The head itself always qualifies unless its average is infinite.
        if (peeled.empty()) {
          peeled.push_back(rest.front());
          keep.erase(keep.begin());
          keep_avg.erase(keep_avg.begin());
        }
        next.push_back(std::move(peeled));
        rest = std::move(keep);
        avg = std::move(keep_avg);
      }
    }
    const bool unchanged = next.size() == parts.size();
    parts = std::move(next);
    if (unchanged) break;
  }

  for (std::size_t k = 0; k < parts.size(); ++k) {
    Cluster cl;
    cl.members = parts[k];
    std::sort(cl.members.begin(), cl.members.end());
    cl.representative = cl.members.front();
    const auto avg = average_distances(cl.members);
    cl.max_average_distance = *std::max_element(avg.begin(), avg.end());
    result.max_average_loss = std::max(result.max_average_loss, cl.max_average_distance);
    for (auto i : cl.members) map.cells[i].cluster = static_cast<long>(k);
    result.clusters.push_back(std::move(cl));
  }
  map.tau_diff = tau_diff;
  map.tau_loss = tau_loss;
  return result;
}

}  // namespace vlc
