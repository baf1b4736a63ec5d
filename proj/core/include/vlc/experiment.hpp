#pragma once

// Experiment drivers: decoding map construction and reduction, and user-grid
// sweeps with association and iterative rate update.

#include <cstddef>
#include <string>
#include <vector>

#include "vlc/assoc.hpp"
#include "vlc/clustering.hpp"
#include "vlc/decmap.hpp"
#include "vlc/scene_config.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

/// Scene, layer set and spec bundled together.
struct Workspace {
  SceneSpec spec;
  Scene scene;
  LayerSet layers;
};

Workspace make_workspace(const SceneSpec& spec);

struct MapExperimentConfig {
  std::size_t filter = 0;
  MapOptions map;
  bool reduce = true;
  double tau_diff = 1e-5;
  double tau_loss = 0.1;
  std::string out_dir;  ///< empty: nothing written
};

struct MapExperimentResult {
  DecodingMap map;
  ClusterResult clusters;
  double build_seconds = 0.0;
  double reduce_seconds = 0.0;
};

/// Writes map.vlcmap, cells.csv, rates.csv and manifest.json into out_dir.
MapExperimentResult run_map_experiment(const Workspace& ws, const MapExperimentConfig& config);

enum class SweepPlane { XY, YZ };

struct SweepConfig {
  SweepPlane plane = SweepPlane::XY;
  std::size_t filter = 0;
  std::size_t grid_u = 4;  ///< users along the first in-plane axis
  std::size_t grid_v = 4;
  double user_spacing = 0.2;
  /// Anchor (bottom-left user) ranges on the two in-plane axes: (x, y) for
  /// XY, (y, z) for YZ. Inclusive, stepped by `step`.
  double u_lo = -1.0, u_hi = 1.0;
  double v_lo = -1.0, v_hi = 1.0;
  double step = 0.1;
  double fixed = 2.0;  ///< z of the XY plane or x of the YZ plane (world)
  GAConfig ga;
  RateUpdateOptions update;
  std::size_t threads = 0;
};

struct SweepPoint {
  double u = 0.0;
  double v = 0.0;
  double phase_one_sum = 0.0;
  double sum_rate = 0.0;
  double min_rate = 0.0;
  std::size_t outage_users = 0;
  std::size_t rounds = 0;
  bool converged = false;
  double min_increment = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<double> u_values;
  std::vector<double> v_values;
  std::vector<SweepPoint> points;  ///< v-major: index = iv * u_values.size() + iu

  const SweepPoint& at(std::size_t iu, std::size_t iv) const {
    return points[iv * u_values.size() + iu];
  }
};

/// Inclusive arithmetic range lo, lo+step, ..., hi (rounded to step multiples).
std::vector<double> stepped_range(double lo, double hi, double step);

/// World positions of the user grid for one anchor.
std::vector<Vec3> user_positions(const SweepConfig& config, double u, double v);

/// Users at the given world positions. Positions on the map's sample grid take
/// their order from `map`; any other position is solved directly.
std::vector<UserView> make_users(const Workspace& ws, std::size_t filter,
                                 std::span<const Vec3> world, const DecodingMap* map,
                                 std::size_t tau);

SweepPoint evaluate_anchor(const Workspace& ws, const SweepConfig& config, double u, double v,
                           const DecodingMap* map);

SweepResult run_sweep_experiment(const Workspace& ws, const SweepConfig& config,
                                 const DecodingMap* map);

void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace vlc
