#pragma once

// Achievable rate of the multi-layer optical MAC under truncated-Gaussian
// inputs, stage noise, and the rate increment margin.
//
// All rates are in bits per channel use. Layer sets are spans of 0-based
// linear layer indices; they are evaluated in ascending index order whatever
// order the caller passes. `gains` is indexed by transmitter.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace vlc {

class LayerSet;

/// Marks a layer whose rate places no constraint (discarded or not decoded).
inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

inline bool is_unconstrained(double rate) { return rate == kUnconstrained; }

/// Per-layer rate vector of length L; entries are >= 0 or kUnconstrained.
using RateVector = std::vector<double>;

/// sigma^2 + sum over `remaining` of h^2 * var.
double stage_noise_variance(std::span<const double> gains, const LayerSet& layers,
                            std::span<const std::size_t> remaining, double noise_var);

/// Rate of signal set V against a fixed aggregate interference-plus-noise
/// power. `signal` must be sorted ascending. Unclamped.
double rate_against_noise(std::span<const std::size_t> signal, double interference,
                          std::span<const double> gains, const LayerSet& layers);

/// R(V, G): V decoded jointly, G treated as Gaussian noise, everything else
/// already cancelled. Negative values clamp to 0. Throws InvalidArgument for
/// an empty V or overlapping sets.
double achievable_rate(std::span<const std::size_t> signal, std::span<const std::size_t> noise,
                       std::span<const double> gains, const LayerSet& layers, double noise_var);

/// Same as achievable_rate without the clamp at zero.
double achievable_rate_unclamped(std::span<const std::size_t> signal,
                                 std::span<const std::size_t> noise,
                                 std::span<const double> gains, const LayerSet& layers,
                                 double noise_var);

/// Delta(V, G, R) = min over non-empty D in V of (R(D, G) - |R_D|_1) / |D|.
/// A layer of D with an unconstrained rate makes that term -infinity.
double rate_margin(std::span<const std::size_t> signal, std::span<const std::size_t> noise,
                   std::span<const double> rates, std::span<const double> gains,
                   const LayerSet& layers, double noise_var);

/// rate_margin with the interference power already accumulated.
double rate_margin_against_noise(std::span<const std::size_t> signal, double interference,
                                 std::span<const double> rates, std::span<const double> gains,
                                 const LayerSet& layers);

}  // namespace vlc
