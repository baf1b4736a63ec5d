#include "vlc/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "vlc/channel.hpp"
#include "vlc/error.hpp"

namespace vlc {

TGParams tg_moments(double mu, double nu, double peak) {
  if (!(peak > 0.0)) throw InvalidParameter("tg_moments: peak must be > 0");
  if (!(nu > 0.0)) throw InvalidParameter("tg_moments: nu must be > 0");
  const double alpha = (0.0 - mu) / nu;
  const double beta = (peak - mu) / nu;
  const double mass = alpha > 0.0 ? normal_ccdf(alpha) - normal_ccdf(beta)
                                  : normal_cdf(beta) - normal_cdf(alpha);
  if (!(mass >= 1e-300)) {
    throw InvalidParameter("tg_moments: truncation interval carries no probability mass");
  }
  TGParams tg;
  tg.mu = mu;
  tg.nu = nu;
  tg.peak = peak;
  tg.rho = 1.0 / mass;
  const double theta0 = tg.rho * normal_pdf(alpha) / nu;
  const double theta_a = tg.rho * normal_pdf(beta) / nu;
  tg.mean = nu * nu * (theta0 - theta_a) + mu;
  tg.variance = nu * nu * (1.0 - peak * theta_a - tg.mean * (theta0 - theta_a));
  tg.phi_nats = std::log(tg.rho) + 0.5 * ((peak - mu) * theta_a + mu * theta0);
  return tg;
}

double tg_density(const TGParams& tg, double x) {
  if (x < 0.0 || x > tg.peak) return 0.0;
  return tg.rho * normal_pdf((x - tg.mu) / tg.nu) / tg.nu;
}

double layer_mean_cap(double peak_power, double average_power, std::size_t layers) {
  const double l = static_cast<double>(layers);
  return std::min(average_power / l, peak_power / (2.0 * l));
}

TGParams calibrate_layer(double peak_power, double average_power, std::size_t layers) {
  if (layers < 1) throw InvalidParameter("calibrate_layer: need at least one layer");
  if (!(peak_power > 0.0 && average_power > 0.0)) {
    throw InvalidParameter("calibrate_layer: powers must be positive");
  }
  const double peak = peak_power / static_cast<double>(layers);
  const double cap = layer_mean_cap(peak_power, average_power, layers);
  auto excess = [&](double nu) { return tg_moments(3.0 * nu, nu, peak).mean - cap; };

  double lo = 0.0;
  double hi = peak / 3.0;  // largest nu with mu = 3 nu <= A
  const double f_hi = excess(hi);
  if (f_hi <= 0.0) {
    // Cap never binds on the admissible range.
    return tg_moments(3.0 * hi, hi, peak);
  }
  // mean(nu) -> 0 as nu -> 0, so the bracket (0, hi] holds a sign change.
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double nu = 0.5 * (lo + hi);
  TGParams tg = tg_moments(3.0 * nu, nu, peak);
  if (!(std::abs(tg.mean - cap) < 1e-9)) {
    std::ostringstream msg;
    msg << "calibrate_layer: no root (A=" << peak << ", cap=" << cap << ", mean=" << tg.mean
        << ")";
    throw CalibrationFailed(msg.str());
  }
  return tg;
}

LayerSet::LayerSet(std::vector<LayerSignal> layers) : layers_(std::move(layers)) {
  offsets_.clear();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& idx = layers_[l].index;
    if (idx.lin != l) throw InvalidArgument("LayerSet: linear indices must be 0..L-1 in order");
    if (idx.tx == offsets_.size()) {
      if (idx.k != 0) throw InvalidArgument("LayerSet: layer numbering must restart at 0");
      offsets_.push_back(l);
    } else if (idx.tx + 1 != offsets_.size() || idx.k != l - offsets_.back()) {
      throw InvalidArgument("LayerSet: layers must be grouped by ascending transmitter");
    }
  }
  offsets_.push_back(layers_.size());
}

LayerSet build_layer_set(const Scene& scene, std::span<const std::size_t> layers_per_tx) {
  if (layers_per_tx.size() != scene.transmitters.size()) {
    throw InvalidArgument("build_layer_set: need one layer count per transmitter");
  }
  std::vector<LayerSignal> out;
  for (std::size_t i = 0; i < layers_per_tx.size(); ++i) {
    const auto& t = scene.transmitters[i];
    const std::size_t n = layers_per_tx[i];
    if (n < 1) throw InvalidParameter("build_layer_set: every transmitter needs >= 1 layer");
    const TGParams tg = calibrate_layer(t.peak_power, t.average_power, n);
    const double cap = layer_mean_cap(t.peak_power, t.average_power, n);
    for (std::size_t k = 0; k < n; ++k) {
      out.push_back({{i, k, out.size()}, tg, cap});
    }
  }
  return LayerSet(std::move(out));
}

LayerSet gaussian_surrogate(const LayerSet& layers) {
  std::vector<LayerSignal> out(layers.all().begin(), layers.all().end());
  for (auto& l : out) {
    l.tg.nu = std::sqrt(l.tg.variance);
    l.tg.phi_nats = 0.0;
  }
  return LayerSet(std::move(out));
}

void write_layer_csv(std::ostream& out, const LayerSet& layers) {
  out << "lin,tx,k,mu,nu,A,mean,variance,phi\n";
  auto old = out.precision(17);
  for (const auto& l : layers.all()) {
    out << l.index.lin + 1 << ',' << l.index.tx + 1 << ',' << l.index.k + 1 << ',' << l.tg.mu
        << ',' << l.tg.nu << ',' << l.tg.peak << ',' << l.tg.mean << ',' << l.tg.variance << ','
        << l.tg.phi_nats << '\n';
  }
  out.precision(old);
}

}  // namespace vlc
