// vlcsim: decoding maps, association and sweeps from the command line.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible scenario,
// 4 non-convergence.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "validate.hpp"
#include "vlc/assoc.hpp"
#include "vlc/clustering.hpp"
#include "vlc/error.hpp"
#include "vlc/experiment.hpp"
#include "vlc/map_io.hpp"

namespace fs = std::filesystem;
using namespace vlc;

namespace {

constexpr int kConfigError = 2;
constexpr int kInfeasible = 3;
constexpr int kNotConverged = 4;

struct SceneArgs {
  std::string path;
  std::vector<std::string> overrides;

  void add_to(CLI::App* app) {
    app->add_option("--scene", path, "scene configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", overrides, "override a scene key, key=value (repeatable)");
  }

  SceneSpec load() const {
    SceneSpec spec = path.empty() ? SceneSpec::baseline() : load_scene_spec(path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_scene_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return spec;
  }
};

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("range must be lo:hi, got '" + s + "'");
  return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
}

std::vector<Vec3> parse_points(const std::string& s) {
  std::vector<Vec3> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ';')) {
    double x, y, z;
    char c1, c2;
    std::istringstream ps(item);
    if (!(ps >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',') {
      throw ConfigError("user positions are written x,y,z;x,y,z;...");
    }
    out.push_back({x, y, z});
  }
  return out;
}

void add_ga_options(CLI::App* app, GAConfig& ga) {
  app->add_option("--seed", ga.seed, "GA random seed");
  app->add_option("--population", ga.population, "GA population size");
  app->add_option("--generations", ga.generations, "GA generations");
  app->add_option("--crossover", ga.crossover, "GA crossover rate");
  app->add_option("--mutation", ga.mutation, "GA per-gene mutation rate");
  app->add_option("--elitism", ga.elitism, "GA elite count");
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  return out;
}

std::string fmt(double d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", d);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-colour VLC decoding map and association simulator"};
  app.require_subcommand(1);

  // map
  auto* map_cmd = app.add_subcommand("map", "decoding maps");
  map_cmd->require_subcommand(1);

  SceneArgs build_scene_args;
  MapExperimentConfig build_cfg;
  std::size_t build_filter = 1;
  auto* map_build = map_cmd->add_subcommand("build", "build (and optionally reduce) a decoding map");
  build_scene_args.add_to(map_build);
  map_build->add_option("--filter", build_filter, "receiver filter, 1-based")->check(CLI::PositiveNumber);
  map_build->add_option("--tau", build_cfg.map.tau, "CPGD group size")->check(CLI::Range(1, 3));
  map_build->add_flag("--symmetry", build_cfg.map.use_symmetry, "solve 1/8 of the plane, derive the rest");
  map_build->add_flag("!--no-reduce", build_cfg.reduce, "skip the size reduction");
  map_build->add_option("--tau-diff", build_cfg.tau_diff, "category threshold");
  map_build->add_option("--tau-loss", build_cfg.tau_loss, "maximal tolerable loss");
  map_build->add_option("--threads", build_cfg.map.threads, "worker threads (0: all cores)");
  map_build->add_option("--out", build_cfg.out_dir, "output directory")->required();

  SceneArgs reduce_scene_args;
  std::string reduce_map_path, reduce_out;
  double reduce_diff = 1e-5, reduce_loss = 0.1;
  auto* map_reduce = map_cmd->add_subcommand("reduce", "cluster an existing map");
  reduce_scene_args.add_to(map_reduce);
  map_reduce->add_option("--map", reduce_map_path, "map file")->required()->check(CLI::ExistingFile);
  map_reduce->add_option("--tau-diff", reduce_diff, "category threshold");
  map_reduce->add_option("--tau-loss", reduce_loss, "maximal tolerable loss");
  map_reduce->add_option("--out", reduce_out, "output directory")->required();

  std::string inspect_path;
  std::vector<std::size_t> inspect_cell;
  auto* map_inspect = map_cmd->add_subcommand("inspect", "summarise a map or print one cell");
  map_inspect->add_option("--map", inspect_path, "map file")->required()->check(CLI::ExistingFile);
  map_inspect->add_option("--cell", inspect_cell, "cell ix iy (0-based)")->expected(2);

  // assoc
  auto* assoc_cmd = app.add_subcommand("assoc", "transmitter-user association");
  assoc_cmd->require_subcommand(1);
  SceneArgs assoc_scene_args;
  std::string assoc_users, assoc_out;
  std::size_t assoc_filter = 1;
  GAConfig assoc_ga;
  RateUpdateOptions assoc_update;
  auto* assoc_solve = assoc_cmd->add_subcommand("solve", "associate users and refine rates");
  assoc_scene_args.add_to(assoc_solve);
  assoc_solve->add_option("--users", assoc_users, "world positions x,y,z;x,y,z;...")->required();
  assoc_solve->add_option("--filter", assoc_filter, "receiver filter, 1-based")->check(CLI::PositiveNumber);
  assoc_solve->add_option("--tau", assoc_update.tau, "CPGD group size")->check(CLI::Range(1, 3));
  assoc_solve->add_option("--max-rounds", assoc_update.max_rounds, "rate update rounds");
  add_ga_options(assoc_solve, assoc_ga);
  assoc_solve->add_option("--out", assoc_out, "output directory")->required();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "user-grid sweeps");
  sweep_cmd->require_subcommand(1);
  SceneArgs sweep_scene_args;
  SweepConfig sweep_cfg;
  std::string sweep_plane = "xy", sweep_u = "-1:1", sweep_v = "-1:1", sweep_out, sweep_map;
  std::size_t sweep_filter = 1;
  bool sweep_symmetry = true;
  auto* sweep_run = sweep_cmd->add_subcommand("run", "move a user grid over a plane");
  sweep_scene_args.add_to(sweep_run);
  sweep_run->add_option("--plane", sweep_plane, "xy or yz")->check(CLI::IsMember({"xy", "yz"}));
  sweep_run->add_option("--u-range", sweep_u, "anchor range on the first axis (x for xy, y for yz)");
  sweep_run->add_option("--v-range", sweep_v, "anchor range on the second axis (y for xy, z for yz)");
  sweep_run->add_option("--step", sweep_cfg.step, "anchor step");
  sweep_run->add_option("--fixed", sweep_cfg.fixed, "z of the xy plane or x of the yz plane");
  sweep_run->add_option("--users", sweep_cfg.grid_u, "users per axis")->check(CLI::PositiveNumber);
  sweep_run->add_option("--spacing", sweep_cfg.user_spacing, "user spacing");
  sweep_run->add_option("--filter", sweep_filter, "receiver filter, 1-based")->check(CLI::PositiveNumber);
  sweep_run->add_option("--tau", sweep_cfg.update.tau, "CPGD group size")->check(CLI::Range(1, 3));
  sweep_run->add_option("--map", sweep_map, "reuse a stored map for on-grid users");
  sweep_run->add_flag("!--no-symmetry", sweep_symmetry, "build the lookup map without symmetry");
  sweep_run->add_option("--threads", sweep_cfg.threads, "worker threads (0: all cores)");
  add_ga_options(sweep_run, sweep_cfg.ga);
  sweep_run->add_option("--out", sweep_out, "output directory")->required();

  // validate
  SceneArgs validate_scene_args;
  auto* validate_cmd = app.add_subcommand("validate", "run the built-in consistency checks");
  validate_scene_args.add_to(validate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (map_build->parsed()) {
      const Workspace ws = make_workspace(build_scene_args.load());
      build_cfg.filter = build_filter - 1;
      const auto res = run_map_experiment(ws, build_cfg);
      std::cout << "samples " << res.map.cells.size() << ", non-outage "
                << res.map.non_outage_count() << ", computed " << res.map.computed_count() << "\n";
      if (build_cfg.reduce) {
        std::cout << "clusters " << res.clusters.count() << ", compression "
                  << fmt(100.0 * res.clusters.compression_ratio()) << "%, max average loss "
                  << fmt(res.clusters.max_average_loss) << "\n";
      }
      return 0;
    }
    if (map_reduce->parsed()) {
      const SceneSpec spec = reduce_scene_args.load();
      const Workspace ws = make_workspace(spec);
      DecodingMap map = load_map(reduce_map_path);
      if (map.scene_hash != scene_hash(spec)) {
        throw ConfigError("map was built from a different scene");
      }
      const auto clusters = reduce_map(map, ws.layers, reduce_diff, reduce_loss);
      fs::create_directories(reduce_out);
      save_map((fs::path(reduce_out) / "map.vlcmap").string(), map);
      auto out = open_out(fs::path(reduce_out) / "cells.csv");
      write_map_csv(out, map);
      std::cout << "clusters " << clusters.count() << ", compression "
                << fmt(100.0 * clusters.compression_ratio()) << "%, max average loss "
                << fmt(clusters.max_average_loss) << "\n";
      return 0;
    }
    if (map_inspect->parsed()) {
      const DecodingMap map = load_map(inspect_path);
      if (inspect_cell.empty()) {
        long clusters = -1;
        for (const auto& c : map.cells) clusters = std::max(clusters, c.cluster);
        std::cout << "grid " << map.grid.nx << "x" << map.grid.ny << " spacing "
                  << fmt(map.grid.spacing) << "\nfilter " << map.filter + 1 << "\ntau " << map.tau
                  << "\nnon-outage " << map.non_outage_count() << "\ncomputed "
                  << map.computed_count() << "\nclusters " << clusters + 1 << "\n";
        return 0;
      }
      if (inspect_cell[0] >= map.grid.nx || inspect_cell[1] >= map.grid.ny) {
        throw ConfigError("cell outside the grid");
      }
      const auto& c = map.at(inspect_cell[0], inspect_cell[1]);
      const Vec3 w = map.world(c);
      std::cout << "position " << fmt(w.x) << ' ' << fmt(w.y) << ' ' << fmt(w.z) << "\n";
      if (c.outage()) {
        std::cout << "outage\n";
        return 0;
      }
      std::cout << "cluster " << c.cluster << "\n";
      for (std::size_t m = 0; m < c.order.groups.size(); ++m) {
        std::cout << "Q" << m + 1 << ":";
        for (auto l : c.order.groups[m]) std::cout << ' ' << l + 1;
        std::cout << "  rate " << fmt(c.order.rates[c.order.groups[m].front()]) << "\n";
      }
      return 0;
    }
    if (assoc_solve->parsed()) {
      const Workspace ws = make_workspace(assoc_scene_args.load());
      const auto world = parse_points(assoc_users);
      const auto users = make_users(ws, assoc_filter - 1, world, nullptr, assoc_update.tau);
      assoc_ga.exhaustive_limit = 1e5;
      const Association a = solve_association(users, ws.layers, assoc_ga);
      const double noise_var = ws.scene.noise_sigma * ws.scene.noise_sigma;
      const auto upd = iterative_rate_update(a, users, ws.layers, noise_var, assoc_update);
      fs::create_directories(assoc_out);
      {
        auto out = open_out(fs::path(assoc_out) / "association.csv");
        out << "user,x,y,z,tx,depth,phase_one_rate,rate\n";
        const auto before = user_rates(a.global, a.tx, ws.layers);
        const auto after = user_rates(upd.rates, a.tx, ws.layers);
        for (std::size_t j = 0; j < users.size(); ++j) {
          out << j + 1 << ',' << fmt(world[j].x) << ',' << fmt(world[j].y) << ',' << fmt(world[j].z)
              << ',' << (a.tx[j] == kUnassigned ? 0 : a.tx[j] + 1) << ',' << a.depth[j] << ','
              << fmt(before[j]) << ',' << fmt(after[j]) << '\n';
        }
      }
      {
        auto out = open_out(fs::path(assoc_out) / "layer_rates.csv");
        out << "layer,tx,k,phase_one_rate,rate\n";
        for (std::size_t l = 0; l < ws.layers.size(); ++l) {
          const auto idx = ws.layers.locate(l);
          out << l + 1 << ',' << idx.tx + 1 << ',' << idx.k + 1 << ',' << fmt(a.global[l]) << ','
              << fmt(upd.rates[l]) << '\n';
        }
      }
      nlohmann::ordered_json m;
      m["kind"] = "assoc";
      m["seed"] = assoc_ga.seed;
      m["objective"] = a.objective;
      m["exhaustive"] = a.exhaustive;
      m["sum_rate"] = upd.assigned_sum.back();
      const auto after = user_rates(upd.rates, a.tx, ws.layers);
      m["min_rate"] = *std::min_element(after.begin(), after.end());
      m["rounds"] = upd.rounds;
      m["converged"] = upd.converged;
      auto out = open_out(fs::path(assoc_out) / "summary.json");
      out << m.dump(2) << "\n";
      std::cout << "sum rate " << fmt(upd.assigned_sum.back()) << " after " << upd.rounds
                << " rounds\n";
      return upd.converged ? 0 : kNotConverged;
    }
    if (sweep_run->parsed()) {
      const auto t0 = std::chrono::steady_clock::now();
      const Workspace ws = make_workspace(sweep_scene_args.load());
      sweep_cfg.plane = sweep_plane == "xy" ? SweepPlane::XY : SweepPlane::YZ;
      sweep_cfg.filter = sweep_filter - 1;
      sweep_cfg.grid_v = sweep_cfg.grid_u;
      std::tie(sweep_cfg.u_lo, sweep_cfg.u_hi) = parse_range(sweep_u);
      std::tie(sweep_cfg.v_lo, sweep_cfg.v_hi) = parse_range(sweep_v);
      if (sweep_cfg.plane == SweepPlane::YZ) {
        // Height range and x offset of the vertical plane unless given.
        if (sweep_run->count("--v-range") == 0) std::tie(sweep_cfg.v_lo, sweep_cfg.v_hi) = parse_range("1:2.4");
        if (sweep_run->count("--fixed") == 0) sweep_cfg.fixed = 0.3;
      }
      std::optional<DecodingMap> map;
      if (!sweep_map.empty()) {
        map = load_map(sweep_map);
      } else if (sweep_cfg.plane == SweepPlane::XY) {
        MapOptions mo;
        mo.tau = sweep_cfg.update.tau;
        mo.use_symmetry = sweep_symmetry;
        mo.threads = sweep_cfg.threads;
        map = build_map(ws.scene, ws.layers, sweep_cfg.filter, mo);
      }
      const auto res = run_sweep_experiment(ws, sweep_cfg, map ? &*map : nullptr);
      fs::create_directories(sweep_out);
      {
        auto out = open_out(fs::path(sweep_out) / "sweep.csv");
        write_sweep_csv(out, res);
      }
      std::size_t unconverged = 0;
      for (const auto& p : res.points) unconverged += p.converged ? 0 : 1;
      nlohmann::ordered_json m;
      m["kind"] = "sweep";
      m["version"] = "0.1.0";
      m["scene"] = to_text(ws.spec);
      m["plane"] = sweep_plane;
      m["fixed"] = sweep_cfg.fixed;
      m["u_range"] = {sweep_cfg.u_lo, sweep_cfg.u_hi};
      m["v_range"] = {sweep_cfg.v_lo, sweep_cfg.v_hi};
      m["step"] = sweep_cfg.step;
      m["seed"] = sweep_cfg.ga.seed;
      m["ga"] = {{"population", sweep_cfg.ga.population},
                 {"generations", sweep_cfg.ga.generations},
                 {"crossover", sweep_cfg.ga.crossover},
                 {"mutation", sweep_cfg.ga.mutation},
                 {"elitism", sweep_cfg.ga.elitism}};
      m["anchors"] = res.points.size();
      m["unconverged"] = unconverged;
      m["wall_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      auto out = open_out(fs::path(sweep_out) / "manifest.json");
      out << m.dump(2) << "\n";
      std::cout << res.points.size() << " anchors, " << unconverged << " not converged\n";
      return unconverged == 0 ? 0 : kNotConverged;
    }
    if (validate_cmd->parsed()) {
      return run_validation(validate_scene_args.load(), std::cout) ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
