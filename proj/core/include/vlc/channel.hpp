#pragma once

// Optical channel: Gaussian colour spectra, the cross-colour filtering gain
// matrix, Lambertian line-of-sight link gains and the scene they live in.

#include <cstddef>
#include <span>
#include <vector>

#include "vlc/geometry.hpp"

namespace vlc {

double normal_cdf(double x);
double normal_ccdf(double x);
double normal_pdf(double x);
/// Standard normal quantile; p must lie strictly inside (0, 1).
double normal_quantile(double p);

/// Probability mass of N(mean, sd^2) on [lo, hi]; computed from whichever
/// tail keeps the difference well conditioned.
double gaussian_interval_mass(double mean, double sd, double lo, double hi);

struct ColorBand {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
  double leakage = 0.0;  ///< out-of-band probability l_p
  double mean_nm = 0.0;  ///< filled by derive_spectrum
  double sigma_nm = 0.0;  ///< filled by derive_spectrum
};

/// Fits N(mu_p, sigma_p^2) to a band so that l_p/2 of the mass lies above the
/// upper edge (and, by symmetry, below the lower edge).
ColorBand derive_spectrum(ColorBand band);

struct Passband {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
};

class FilterGainMatrix {
 public:
  FilterGainMatrix() = default;
  FilterGainMatrix(std::size_t colors, std::size_t filters);

  double operator()(std::size_t color, std::size_t filter) const {
    return data_[color * filters_ + filter];
  }
  double& operator()(std::size_t color, std::size_t filter) {
    return data_[color * filters_ + filter];
  }

  std::size_t colors() const { return colors_; }
  std::size_t filters() const { return filters_; }

 private:
  std::size_t colors_ = 0;
  std::size_t filters_ = 0;
  std::vector<double> data_;
};

/// F_pq = mass of colour p's spectrum inside filter q's passband. Bands must
/// already carry their derived spectra.
FilterGainMatrix filter_gain_matrix(std::span<const ColorBand> bands,
                                    std::span<const Passband> filters);

struct Optics {
  double lambertian_order = 1.0;  ///< m1
  double pd_area = 1e-4;          ///< A_r [m^2]
  double refractive_index = 1.5;  ///< n
  double fov = kPi / 6.0;         ///< psi_c, semi-angle [rad]
};

/// m1 = -ln 2 / ln cos(Phi_1/2).
double lambertian_order_from_half_angle(double half_power_semi_angle);

/// Gain of a single downward-facing emitter seen by an upward-facing
/// photodiode at displacement d = rx - tx (d.z > 0 is the vertical gap).
double lambertian_gain(const Optics& optics, double filter_gain, Vec3 displacement);

struct Transmitter {
  Vec3 position;  ///< scene-local coordinates
  std::size_t color = 0;
  std::size_t array_col = 0;  ///< column in the LED array (x direction)
  std::size_t array_row = 0;  ///< row in the LED array, 0 = lowest y
  double peak_power = 1.0;    ///< A_i
  double average_power = 0.5;  ///< epsilon_i
};

/// Uniform sampling of the receiver plane. Sample offsets are symmetric about
/// the plane centre (local origin) so mirrored samples are exact negations.
struct SampleGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double spacing = 0.1;  ///< d_s
  double height = 2.0;   ///< vertical gap to the transmitter plane, d_c

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  /// Twice the sample offset from the centre, in grid units (always integral).
  long twice_offset_x(std::size_t ix) const { return 2 * static_cast<long>(ix) - static_cast<long>(nx - 1); }
  long twice_offset_y(std::size_t iy) const { return 2 * static_cast<long>(iy) - static_cast<long>(ny - 1); }
  Vec3 local(std::size_t ix, std::size_t iy) const;
  friend bool operator==(const SampleGrid&, const SampleGrid&) = default;
};

struct Scene {
  std::vector<ColorBand> bands;
  std::vector<Passband> filters;
  FilterGainMatrix filter_gains;
  Optics optics;

  /// Ordered position-major (x outer, y inner), then by ascending wavelength.
  std::vector<Transmitter> transmitters;
  std::size_t array_cols = 0;
  std::size_t array_rows = 0;
  std::size_t colors_per_position = 0;

  SampleGrid grid;
  Vec3 world_offset;  ///< world = local + world_offset

  double noise_sigma = 1.0;
  /// Gains below this fraction of the strongest gain at a position count as 0.
  double negligible_gain_ratio = 1e-6;

  /// Reflection symmetries of the whole scene about the local origin.
  bool mirror_x = false;
  bool mirror_y = false;
  bool mirror_diagonal = false;

  std::size_t transmitter_count() const { return transmitters.size(); }
  bool is_grid() const { return array_cols * array_rows * colors_per_position == transmitters.size() && !transmitters.empty(); }
  /// Index of the transmitter at array cell (col, row) carrying colour slot `slot`.
  std::size_t transmitter_at(std::size_t col, std::size_t row, std::size_t slot) const {
    return (col * array_rows + row) * colors_per_position + slot;
  }
  Vec3 to_world(Vec3 local) const { return local + world_offset; }
  Vec3 to_local(Vec3 world) const { return world - world_offset; }

  /// Throws InvalidParameter when an invariant is broken.
  void validate() const;
};

/// Gain from transmitter `tx` to a receiver at `rx` (scene-local) behind
/// optical filter `filter`. Throws InvalidGeometry for coincident points.
double link_gain(const Scene& scene, std::size_t tx, Vec3 rx, std::size_t filter);

/// Gains to every transmitter; entries below the negligible-gain threshold
/// are set to exactly zero.
std::vector<double> gain_vector(const Scene& scene, Vec3 rx, std::size_t filter);

}  // namespace vlc
