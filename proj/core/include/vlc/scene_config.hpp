#pragma once

// Plain-text scene description (key = value, '#' comments) and the scene it
// builds. Unknown keys are rejected.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vlc/channel.hpp"

namespace vlc {

struct SceneSpec {
  // LED array: cols along x, rows along y; cell (0,0) sits at `origin`.
  std::size_t cols = 4;
  std::size_t rows = 4;
  double spacing_h = 0.2;  ///< d_h, x pitch
  double spacing_v = 0.2;  ///< d_v, y pitch
  double margin_x_lo = 1.0;
  double margin_x_hi = 1.0;
  double margin_y_lo = 1.0;
  double margin_y_hi = 1.0;
  Vec3 origin;
  /// Colour indices present at every array cell (0-based), ascending wavelength.
  std::vector<std::size_t> position_colors{0, 1, 2, 3};

  std::vector<ColorBand> bands;
  std::vector<Passband> filters;  ///< defaults to the colour bands

  double rx_height = 2.0;  ///< d_c
  double sampling = 0.1;   ///< d_s

  Optics optics;
  double peak_power = 1.0;
  double average_power = 0.5;
  std::size_t layers_per_tx = 2;

  double snr_db = 15.0;
  std::size_t snr_ref_tx = 0;      ///< transmitter whose on-axis link defines the SNR
  std::size_t snr_ref_filter = 0;
  /// Used instead of the SNR calibration when > 0.
  double noise_sigma = 0.0;

  double negligible_gain_ratio = 1e-6;

  static SceneSpec baseline();
};

/// Parses a configuration stream. Throws ConfigError with the line number.
SceneSpec parse_scene_spec(std::istream& in);
SceneSpec load_scene_spec(const std::string& path);

/// Applies one `key = value` assignment (same keys as the file format).
void apply_scene_setting(SceneSpec& spec, const std::string& key, const std::string& value);

/// Canonical text form; parse_scene_spec(to_text(s)) reproduces s exactly.
std::string to_text(const SceneSpec& spec);

/// FNV-1a over the canonical text.
std::uint64_t scene_hash(const SceneSpec& spec);

/// sigma = A * h_ref / 10^(snr_db / 20).
double calibrate_noise(double peak_power, double reference_gain, double snr_db);

/// Geometry, spectra, filter matrix, noise and symmetry flags. The local
/// frame is centred on the receiver plane.
Scene build_scene(const SceneSpec& spec);

/// Gain of the SNR reference link (reference transmitter straight down to the
/// receiver plane, through the reference filter).
double reference_gain(const Scene& scene, const SceneSpec& spec);

}  // namespace vlc
