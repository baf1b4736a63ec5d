#pragma once

// Layered encoding bookkeeping and truncated-Gaussian layer inputs.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace vlc {

struct Scene;

/// A (mu, nu, A) truncated Gaussian on [0, A] with its derived moments.
/// `phi_nats` is the entropy gap term: h(X) = 0.5 ln(2 pi e nu^2) - phi.
struct TGParams {
  double mu = 0.0;
  double nu = 0.0;
  double peak = 0.0;
  double rho = 1.0;
  double mean = 0.0;      ///< truncated mean
  double variance = 0.0;  ///< truncated variance
  double phi_nats = 0.0;
};

/// Throws InvalidParameter for A <= 0, nu <= 0 or a vanishing normaliser.
TGParams tg_moments(double mu, double nu, double peak);

/// Density of the truncated Gaussian; zero outside [0, A].
double tg_density(const TGParams& tg, double x);

/// Chooses nu (with mu = 3 nu) so that the truncated mean meets the per-layer
/// average-power cap min(eps/L, A/(2L)) on a per-layer peak of A/L.
TGParams calibrate_layer(double peak_power, double average_power, std::size_t layers);

/// Per-layer average cap of a transmitter split into `layers` layers.
double layer_mean_cap(double peak_power, double average_power, std::size_t layers);

struct LayerIndex {
  std::size_t tx = 0;   ///< transmitter (0-based)
  std::size_t k = 0;    ///< layer within the transmitter (0-based)
  std::size_t lin = 0;  ///< global linear index (0-based)
};

struct LayerSignal {
  LayerIndex index;
  TGParams tg;
  double mean_cap = 0.0;
};

/// All layers of a scene in linear order: transmitter-major, then layer.
class LayerSet {
 public:
  LayerSet() = default;
  explicit LayerSet(std::vector<LayerSignal> layers);

  std::size_t size() const { return layers_.size(); }
  std::size_t transmitter_count() const { return offsets_.size() - 1; }
  std::size_t layers_of(std::size_t tx) const { return offsets_[tx + 1] - offsets_[tx]; }
  std::size_t lin(std::size_t tx, std::size_t k) const { return offsets_[tx] + k; }
  LayerIndex locate(std::size_t lin) const { return layers_[lin].index; }
  std::size_t tx_of(std::size_t lin) const { return layers_[lin].index.tx; }

  const LayerSignal& operator[](std::size_t lin) const { return layers_[lin]; }
  std::span<const LayerSignal> all() const { return layers_; }

  double variance(std::size_t lin) const { return layers_[lin].tg.variance; }

 private:
  std::vector<LayerSignal> layers_;
  std::vector<std::size_t> offsets_{0};
};

/// Splits each transmitter into layers_per_tx[i] equal-power layers.
LayerSet build_layer_set(const Scene& scene, std::span<const std::size_t> layers_per_tx);

/// Same layers with Gaussian inputs of matching variance (nu := nu_hat,
/// phi := 0); used where the greedy decoder's optimality theory applies.
LayerSet gaussian_surrogate(const LayerSet& layers);

/// CSV: lin,tx,k,mu,nu,A,mean,variance,phi (indices 1-based).
void write_layer_csv(std::ostream& out, const LayerSet& layers);

}  // namespace vlc
