#include "vlc/scene_config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vlc/error.hpp"

namespace vlc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(d)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return d;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || n < 0) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(n);
}

std::size_t to_index(const std::string& key, const std::string& v) {
  const std::size_t n = to_count(key, v);
  if (n == 0) throw ConfigError(key + ": indices are 1-based");
  return n - 1;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v, std::size_t want) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  if (want != 0 && out.size() != want) {
    throw ConfigError(key + ": expected " + std::to_string(want) + " values");
  }
  return out;
}

std::vector<Passband> to_bands(const std::string& key, const std::string& v) {
  std::vector<Passband> out;
  for (const auto& item : split(v, ',')) {
    const auto ends = split(item, ':');
    if (ends.size() != 2) throw ConfigError(key + ": bands are written lo:hi");
    out.push_back({to_double(key, ends[0]), to_double(key, ends[1])});
  }
  return out;
}

std::string num(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace

SceneSpec SceneSpec::baseline() {
  SceneSpec s;
  s.bands = {{380, 480, 0.1}, {500, 550, 0.2}, {560, 600, 0.2}, {600, 680, 0.1}};
  for (const auto& b : s.bands) s.filters.push_back({b.lo_nm, b.hi_nm});
  return s;
}

void apply_scene_setting(SceneSpec& s, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "tx.cols") {
    s.cols = to_count(key, v);
  } else if (key == "tx.rows") {
    s.rows = to_count(key, v);
  } else if (key == "tx.spacing") {
    const auto d = to_doubles(key, v, 2);
    s.spacing_h = d[0];
    s.spacing_v = d[1];
  } else if (key == "tx.margin_x") {
    const auto d = to_doubles(key, v, 2);
    s.margin_x_lo = d[0];
    s.margin_x_hi = d[1];
  } else if (key == "tx.margin_y") {
    const auto d = to_doubles(key, v, 2);
    s.margin_y_lo = d[0];
    s.margin_y_hi = d[1];
  } else if (key == "tx.origin") {
    const auto d = to_doubles(key, v, 3);
    s.origin = {d[0], d[1], d[2]};
  } else if (key == "tx.colors") {
    s.position_colors.clear();
    for (const auto& item : split(v, ',')) s.position_colors.push_back(to_index(key, item));
  } else if (key == "color.bands") {
    const auto bands = to_bands(key, v);
    std::vector<ColorBand> out;
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const double leak = i < s.bands.size() ? s.bands[i].leakage : 0.1;
      out.push_back({bands[i].lo_nm, bands[i].hi_nm, leak});
    }
    s.bands = std::move(out);
  } else if (key == "color.leakage") {
    const auto d = to_doubles(key, v, s.bands.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.bands[i].leakage = d[i];
  } else if (key == "filter.bands") {
    s.filters = to_bands(key, v);
  } else if (key == "rx.height") {
    s.rx_height = to_double(key, v);
  } else if (key == "rx.sampling") {
    s.sampling = to_double(key, v);
  } else if (key == "optics.lambertian_order") {
    s.optics.lambertian_order = to_double(key, v);
  } else if (key == "optics.half_power_angle_deg") {
    s.optics.lambertian_order = lambertian_order_from_half_angle(deg_to_rad(to_double(key, v)));
  } else if (key == "optics.pd_area") {
    s.optics.pd_area = to_double(key, v);
  } else if (key == "optics.refractive_index") {
    s.optics.refractive_index = to_double(key, v);
  } else if (key == "optics.fov_deg") {
    s.optics.fov = deg_to_rad(to_double(key, v));
  } else if (key == "optics.fov_rad") {
    s.optics.fov = to_double(key, v);
  } else if (key == "power.peak") {
    s.peak_power = to_double(key, v);
  } else if (key == "power.average") {
    s.average_power = to_double(key, v);
  } else if (key == "layers.per_tx") {
    s.layers_per_tx = to_count(key, v);
  } else if (key == "snr.db") {
    s.snr_db = to_double(key, v);
  } else if (key == "snr.ref_tx") {
    s.snr_ref_tx = to_index(key, v);
  } else if (key == "snr.ref_filter") {
    s.snr_ref_filter = to_index(key, v);
  } else if (key == "noise.sigma") {
    s.noise_sigma = to_double(key, v);
  } else if (key == "gain.negligible_ratio") {
    s.negligible_gain_ratio = to_double(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

SceneSpec parse_scene_spec(std::istream& in) {
  SceneSpec s = SceneSpec::baseline();
  bool filters_given = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      apply_scene_setting(s, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (key == "filter.bands") filters_given = true;
    if (key == "color.bands" && !filters_given) {
      s.filters.clear();
      for (const auto& b : s.bands) s.filters.push_back({b.lo_nm, b.hi_nm});
    }
  }
  return s;
}

SceneSpec load_scene_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file '" + path + "'");
  try {
    return parse_scene_spec(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string to_text(const SceneSpec& s) {
  std::ostringstream o;
  auto bands = [](auto const& list) {
    std::string r;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) r += ", ";
      r += num(list[i].lo_nm) + ":" + num(list[i].hi_nm);
    }
    return r;
  };
  o << "tx.cols = " << s.cols << "\n";
  o << "tx.rows = " << s.rows << "\n";
  o << "tx.spacing = " << num(s.spacing_h) << ", " << num(s.spacing_v) << "\n";
  o << "tx.margin_x = " << num(s.margin_x_lo) << ", " << num(s.margin_x_hi) << "\n";
  o << "tx.margin_y = " << num(s.margin_y_lo) << ", " << num(s.margin_y_hi) << "\n";
  o << "tx.origin = " << num(s.origin.x) << ", " << num(s.origin.y) << ", " << num(s.origin.z)
    << "\n";
  o << "tx.colors = ";
  for (std::size_t i = 0; i < s.position_colors.size(); ++i) {
    o << (i ? ", " : "") << s.position_colors[i] + 1;
  }
  o << "\n";
  o << "color.bands = " << bands(s.bands) << "\n";
  o << "color.leakage = ";
  for (std::size_t i = 0; i < s.bands.size(); ++i) o << (i ? ", " : "") << num(s.bands[i].leakage);
  o << "\n";
  o << "filter.bands = " << bands(s.filters) << "\n";
  o << "rx.height = " << num(s.rx_height) << "\n";
  o << "rx.sampling = " << num(s.sampling) << "\n";
  o << "optics.lambertian_order = " << num(s.optics.lambertian_order) << "\n";
  o << "optics.pd_area = " << num(s.optics.pd_area) << "\n";
  o << "optics.refractive_index = " << num(s.optics.refractive_index) << "\n";
  o << "optics.fov_rad = " << num(s.optics.fov) << "\n";
  o << "power.peak = " << num(s.peak_power) << "\n";
  o << "power.average = " << num(s.average_power) << "\n";
  o << "layers.per_tx = " << s.layers_per_tx << "\n";
  o << "snr.db = " << num(s.snr_db) << "\n";
  o << "snr.ref_tx = " << s.snr_ref_tx + 1 << "\n";
  o << "snr.ref_filter = " << s.snr_ref_filter + 1 << "\n";
  o << "noise.sigma = " << num(s.noise_sigma) << "\n";
  o << "gain.negligible_ratio = " << num(s.negligible_gain_ratio) << "\n";
  return o.str();
}

std::uint64_t scene_hash(const SceneSpec& spec) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_text(spec)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double calibrate_noise(double peak_power, double reference_gain, double snr_db) {
  if (!(reference_gain > 0.0)) throw InvalidParameter("reference link has zero gain");
  return peak_power * reference_gain / std::pow(10.0, snr_db / 20.0);
}

namespace {

std::size_t sample_count(double extent, double step, const char* axis) {
  if (!(step > 0.0)) throw ConfigError("rx.sampling must be > 0");
  const double n = extent / step;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-6 || r < 0) {
    throw ConfigError(std::string("receiver plane ") + axis +
                      " extent is not a multiple of the sampling gap");
  }
  return static_cast<std::size_t>(r) + 1;
}

}  // namespace

Scene build_scene(const SceneSpec& spec) {
  if (spec.cols == 0 || spec.rows == 0) throw ConfigError("tx.cols and tx.rows must be >= 1");
  if (spec.position_colors.empty()) throw ConfigError("tx.colors must not be empty");
  if (spec.layers_per_tx == 0) throw ConfigError("layers.per_tx must be >= 1");
  if (spec.filters.empty()) throw ConfigError("at least one filter is required");

  Scene scene;
  for (const auto& b : spec.bands) {
    if (!(b.lo_nm < b.hi_nm)) throw InvalidParameter("colour band must satisfy lo < hi");
    scene.bands.push_back(derive_spectrum(b));
  }
  scene.filters = spec.filters;
  scene.filter_gains = filter_gain_matrix(scene.bands, scene.filters);
  scene.optics = spec.optics;
  scene.array_cols = spec.cols;
  scene.array_rows = spec.rows;
  scene.colors_per_position = spec.position_colors.size();
  scene.negligible_gain_ratio = spec.negligible_gain_ratio;

  const double width = spec.margin_x_lo + spec.margin_x_hi +
                       static_cast<double>(spec.cols - 1) * spec.spacing_h;
  const double length = spec.margin_y_lo + spec.margin_y_hi +
                        static_cast<double>(spec.rows - 1) * spec.spacing_v;
  scene.grid.nx = sample_count(width, spec.sampling, "x");
  scene.grid.ny = sample_count(length, spec.sampling, "y");
  scene.grid.spacing = spec.sampling;
  scene.grid.height = spec.rx_height;

  // Local x of array column c, measured from the plane centre.
  const double shift_x = 0.5 * (spec.margin_x_lo - spec.margin_x_hi);
  const double shift_y = 0.5 * (spec.margin_y_lo - spec.margin_y_hi);
  const double half_cols = 0.5 * static_cast<double>(spec.cols - 1);
  const double half_rows = 0.5 * static_cast<double>(spec.rows - 1);
  for (std::size_t c = 0; c < spec.cols; ++c) {
    for (std::size_t r = 0; r < spec.rows; ++r) {
      for (std::size_t color : spec.position_colors) {
        if (color >= scene.bands.size()) throw ConfigError("tx.colors refers to a missing band");
        Transmitter t;
        t.position = {shift_x + (static_cast<double>(c) - half_cols) * spec.spacing_h,
                      shift_y + (static_cast<double>(r) - half_rows) * spec.spacing_v, 0.0};
        t.color = color;
        t.array_col = c;
        t.array_row = r;
        t.peak_power = spec.peak_power;
        t.average_power = spec.average_power;
        scene.transmitters.push_back(t);
      }
    }
  }
  scene.world_offset = {
      spec.origin.x + 0.5 * (static_cast<double>(spec.cols - 1) * spec.spacing_h +
                             spec.margin_x_hi - spec.margin_x_lo),
      spec.origin.y + 0.5 * (static_cast<double>(spec.rows - 1) * spec.spacing_v +
                             spec.margin_y_hi - spec.margin_y_lo),
      spec.origin.z};

  scene.mirror_x = spec.margin_x_lo == spec.margin_x_hi;
  scene.mirror_y = spec.margin_y_lo == spec.margin_y_hi;
  scene.mirror_diagonal = scene.mirror_x && scene.mirror_y && spec.cols == spec.rows &&
                          spec.spacing_h == spec.spacing_v &&
                          spec.margin_x_lo == spec.margin_y_lo && scene.grid.nx == scene.grid.ny;

  if (spec.noise_sigma > 0.0) {
    scene.noise_sigma = spec.noise_sigma;
  } else {
    scene.noise_sigma = 1.0;  // placeholder so the reference gain can be evaluated
    scene.noise_sigma = calibrate_noise(spec.peak_power, reference_gain(scene, spec), spec.snr_db);
  }
  scene.validate();
  return scene;
}

double reference_gain(const Scene& scene, const SceneSpec& spec) {
  if (spec.snr_ref_tx >= scene.transmitter_count()) {
    throw ConfigError("snr.ref_tx out of range");
  }
  if (spec.snr_ref_filter >= scene.filters.size()) throw ConfigError("snr.ref_filter out of range");
  const Vec3 tx = scene.transmitters[spec.snr_ref_tx].position;
  return link_gain(scene, spec.snr_ref_tx, tx + Vec3{0.0, 0.0, spec.rx_height},
                   spec.snr_ref_filter);
}

}  // namespace vlc
