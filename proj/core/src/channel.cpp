#include "vlc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "vlc/error.hpp"

namespace vlc {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_ccdf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidParameter("normal_quantile: probability must lie in (0, 1), got " +
                           std::to_string(p));
  }
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double gaussian_interval_mass(double mean, double sd, double lo, double hi) {
  if (!(sd > 0.0)) throw InvalidParameter("gaussian_interval_mass: sd must be positive");
  if (hi <= lo) return 0.0;
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  // Both limits in the upper tail: subtract survival functions instead.
  if (a > 0.0) return normal_ccdf(a) - normal_ccdf(b);
  return normal_cdf(b) - normal_cdf(a);
}

ColorBand derive_spectrum(ColorBand band) {
  if (!(band.lo_nm < band.hi_nm)) {
    throw InvalidParameter("colour band must satisfy lo < hi");
  }
  if (!(band.leakage > 0.0 && band.leakage < 1.0)) {
    throw InvalidParameter("colour leakage must lie in (0, 1)");
  }
  band.mean_nm = 0.5 * (band.lo_nm + band.hi_nm);
  const double z = normal_quantile(1.0 - 0.5 * band.leakage);
  if (!std::isfinite(z) || z <= 0.0) {
    throw InvalidParameter("colour leakage yields a non-finite spectrum width");
  }
  band.sigma_nm = (band.hi_nm - band.mean_nm) / z;
  return band;
}

FilterGainMatrix::FilterGainMatrix(std::size_t colors, std::size_t filters)
    : colors_(colors), filters_(filters), data_(colors * filters, 0.0) {}

FilterGainMatrix filter_gain_matrix(std::span<const ColorBand> bands,
                                    std::span<const Passband> filters) {
  FilterGainMatrix f(bands.size(), filters.size());
  for (std::size_t p = 0; p < bands.size(); ++p) {
    const auto& band = bands[p];
    if (!(band.sigma_nm > 0.0)) {
      throw InvalidParameter("filter_gain_matrix: band spectrum not derived");
    }
    for (std::size_t q = 0; q < filters.size(); ++q) {
      f(p, q) = gaussian_interval_mass(band.mean_nm, band.sigma_nm, filters[q].lo_nm,
                                       filters[q].hi_nm);
    }
  }
  return f;
}

double lambertian_order_from_half_angle(double half_power_semi_angle) {
  const double c = std::cos(half_power_semi_angle);
  if (!(half_power_semi_angle > 0.0 && c > 0.0 && c < 1.0)) {
    throw InvalidParameter("half-power semi-angle must lie in (0, pi/2)");
  }
  return -std::log(2.0) / std::log(c);
}

double lambertian_gain(const Optics& optics, double filter_gain, Vec3 displacement) {
  const double d2 = squared_norm(displacement);
  if (!(d2 > 0.0)) throw InvalidGeometry("link_gain: receiver coincides with transmitter");
  if (displacement.z <= 0.0) return 0.0;  // receiver not below the emitter plane
  const double d = std::sqrt(d2);
  // Both normals are vertical, so radiance and incidence angles coincide.
  const double cos_angle = displacement.z / d;
  if (cos_angle < std::cos(optics.fov)) return 0.0;
  const double sin_fov = std::sin(optics.fov);
  const double concentrator =
      optics.refractive_index * optics.refractive_index / (sin_fov * sin_fov);
  const double m = optics.lambertian_order;
  return optics.pd_area * (m + 1.0) / (2.0 * kPi * d2) * std::pow(cos_angle, m) * filter_gain *
         concentrator * cos_angle;
}

Vec3 SampleGrid::local(std::size_t ix, std::size_t iy) const {
  return {0.5 * (static_cast<double>(twice_offset_x(ix)) * spacing),
          0.5 * (static_cast<double>(twice_offset_y(iy)) * spacing), height};
}

void Scene::validate() const {
  if (!(optics.lambertian_order > 0.0)) throw InvalidParameter("Lambertian order must be > 0");
  if (!(optics.pd_area > 0.0)) throw InvalidParameter("photodiode area must be > 0");
  if (!(optics.fov > 0.0 && optics.fov <= kPi / 2.0 + 1e-15)) {
    throw InvalidParameter("field of view must lie in (0, pi/2]");
  }
  if (!(optics.refractive_index > 0.0)) throw InvalidParameter("refractive index must be > 0");
  if (!(noise_sigma > 0.0)) throw InvalidParameter("noise sigma must be > 0");
  if (filter_gains.colors() != bands.size() || filter_gains.filters() != filters.size()) {
    throw InvalidParameter("filter gain matrix does not match bands/filters");
  }
  for (const auto& t : transmitters) {
    if (t.color >= bands.size()) throw InvalidParameter("transmitter colour index out of range");
    if (!(t.average_power > 0.0 && t.average_power <= t.peak_power)) {
      throw InvalidParameter("transmitter powers must satisfy 0 < average <= peak");
    }
  }
}

double link_gain(const Scene& scene, std::size_t tx, Vec3 rx, std::size_t filter) {
  if (tx >= scene.transmitters.size()) throw InvalidArgument("link_gain: transmitter out of range");
  if (filter >= scene.filters.size()) throw InvalidArgument("link_gain: filter out of range");
  const auto& t = scene.transmitters[tx];
  return lambertian_gain(scene.optics, scene.filter_gains(t.color, filter), rx - t.position);
}

std::vector<double> gain_vector(const Scene& scene, Vec3 rx, std::size_t filter) {
  std::vector<double> h(scene.transmitters.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = link_gain(scene, i, rx, filter);
  const double peak = h.empty() ? 0.0 : *std::max_element(h.begin(), h.end());
  const double floor = peak * scene.negligible_gain_ratio;
  for (auto& g : h) {
    if (g < floor) g = 0.0;
  }
  return h;
}

}  // namespace vlc
