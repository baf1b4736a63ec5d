#include "vlc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "vlc/error.hpp"
#include "vlc/map_io.hpp"

namespace vlc {

namespace {

std::string fmt(double d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

Workspace make_workspace(const SceneSpec& spec) {
  Workspace ws;
  ws.spec = spec;
  ws.scene = build_scene(spec);
  const std::vector<std::size_t> per_tx(ws.scene.transmitter_count(), spec.layers_per_tx);
  ws.layers = build_layer_set(ws.scene, per_tx);
  return ws;
}

MapExperimentResult run_map_experiment(const Workspace& ws, const MapExperimentConfig& config) {
  MapExperimentResult res;
  auto t0 = std::chrono::steady_clock::now();
  res.map = build_map(ws.scene, ws.layers, config.filter, config.map);
  res.map.scene_hash = scene_hash(ws.spec);
  res.build_seconds = seconds_since(t0);
  if (config.reduce) {
    t0 = std::chrono::steady_clock::now();
    res.clusters = reduce_map(res.map, ws.layers, config.tau_diff, config.tau_loss, config.map.threads);
    res.reduce_seconds = seconds_since(t0);
  }
  if (config.out_dir.empty()) return res;

  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  save_map((dir / "map.vlcmap").string(), res.map);
  {
    auto out = open_out(dir / "cells.csv");
    write_map_csv(out, res.map);
  }
  {
    auto out = open_out(dir / "rates.csv");
    write_rate_csv(out, res.map);
  }
  nlohmann::ordered_json m;
  m["kind"] = "map";
  m["version"] = "0.1.0";
  m["scene"] = to_text(ws.spec);
  m["scene_hash"] = res.map.scene_hash;
  m["filter"] = config.filter + 1;
  m["tau"] = config.map.tau;
  m["use_symmetry"] = config.map.use_symmetry;
  m["noise_sigma"] = ws.scene.noise_sigma;
  m["samples"] = res.map.cells.size();
  m["computed_cells"] = res.map.computed_count();
  m["non_outage_points"] = res.map.non_outage_count();
  if (config.reduce) {
    m["tau_diff"] = config.tau_diff;
    m["tau_loss"] = config.tau_loss;
    m["clusters"] = res.clusters.count();
    m["compression_ratio"] = res.clusters.compression_ratio();
    m["max_average_loss"] = res.clusters.max_average_loss;
    m["passes"] = res.clusters.passes;
  }
  m["build_seconds"] = res.build_seconds;
  m["reduce_seconds"] = res.reduce_seconds;
  auto out = open_out(dir / "manifest.json");
  out << m.dump(2) << "\n";
  return res;
}

std::vector<double> stepped_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ConfigError("sweep step must be > 0");
  if (hi < lo) throw ConfigError("sweep range must be ordered");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> v;
  for (std::size_t i = 0; i <= n; ++i) {
    v.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return v;
}

std::vector<Vec3> user_positions(const SweepConfig& config, double u, double v) {
  std::vector<Vec3> out;
  for (std::size_t b = 0; b < config.grid_v; ++b) {
    for (std::size_t a = 0; a < config.grid_u; ++a) {
      const double pu = std::round((u + static_cast<double>(a) * config.user_spacing) * 1e9) / 1e9;
      const double pv = std::round((v + static_cast<double>(b) * config.user_spacing) * 1e9) / 1e9;
      if (config.plane == SweepPlane::XY) {
        out.push_back({pu, pv, config.fixed});
      } else {
        out.push_back({config.fixed, pu, pv});
      }
    }
  }
  return out;
}

std::vector<UserView> make_users(const Workspace& ws, std::size_t filter,
                                 std::span<const Vec3> world, const DecodingMap* map,
                                 std::size_t tau) {
  const double noise_var = ws.scene.noise_sigma * ws.scene.noise_sigma;
  std::vector<UserView> users;
  for (const Vec3& w : world) {
    UserView u;
    u.world = w;
    std::optional<std::size_t> cell;
    if (map && map->filter == filter && map->tau == tau) cell = map->cell_at_world(w);
    if (cell) {
      u.gains = map->cells[*cell].gains;
      u.order = map->cells[*cell].order;
    } else {
      const Vec3 local = ws.scene.to_local(w);
      u.gains = gain_vector(ws.scene, local, filter);
      u.order = greedy_order(u.gains, ws.layers, noise_var, tau);
    }
    users.push_back(std::move(u));
  }
  return users;
}

SweepPoint evaluate_anchor(const Workspace& ws, const SweepConfig& config, double u, double v,
                           const DecodingMap* map) {
  SweepPoint p;
  p.u = u;
  p.v = v;
  const auto world = user_positions(config, u, v);
  const auto users = make_users(ws, config.filter, world, map, config.update.tau);
  for (const auto& us : users) p.outage_users += us.order.outage ? 1 : 0;
  if (p.outage_users == users.size()) {
    p.converged = true;
    return p;
  }
  const Association a = solve_association(users, ws.layers, config.ga);
  const double noise_var = ws.scene.noise_sigma * ws.scene.noise_sigma;
  const RateUpdateResult r = iterative_rate_update(a, users, ws.layers, noise_var, config.update);
  p.phase_one_sum = r.assigned_sum.front();
  p.sum_rate = r.assigned_sum.back();
  const auto per_user = user_rates(r.rates, a.tx, ws.layers);
  p.min_rate = *std::min_element(per_user.begin(), per_user.end());
  p.rounds = r.rounds;
  p.converged = r.converged;
  p.min_increment = r.min_increment.empty()
                        ? 0.0
                        : *std::min_element(r.min_increment.begin(), r.min_increment.end());
  return p;
}

SweepResult run_sweep_experiment(const Workspace& ws, const SweepConfig& config,
                                 const DecodingMap* map) {
  SweepResult res;
  res.config = config;
  res.u_values = stepped_range(config.u_lo, config.u_hi, config.step);
  res.v_values = stepped_range(config.v_lo, config.v_hi, config.step);
  const std::size_t nu = res.u_values.size();
  res.points.resize(nu * res.v_values.size());
  parallel_for(res.points.size(), config.threads, [&](std::size_t k) {
    res.points[k] = evaluate_anchor(ws, config, res.u_values[k % nu], res.v_values[k / nu], map);
  });
  return res;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const bool xy = result.config.plane == SweepPlane::XY;
  out << "plane,x,y,z,phase_one_sum,sum_rate,min_rate,outage_users,rounds,converged,min_increment\n";
  for (const auto& p : result.points) {
    const double x = xy ? p.u : result.config.fixed;
    const double y = xy ? p.v : p.u;
    const double z = xy ? result.config.fixed : p.v;
    out << (xy ? "xy" : "yz") << ',' << fmt(x) << ',' << fmt(y) << ',' << fmt(z) << ','
        << fmt(p.phase_one_sum) << ',' << fmt(p.sum_rate) << ',' << fmt(p.min_rate) << ','
        << p.outage_users << ',' << p.rounds << ',' << (p.converged ? 1 : 0) << ','
        << fmt(p.min_increment) << '\n';
  }
}

}  // namespace vlc
