#pragma once

// Transmitter-user association (sum-rate 0-1 assignment) and the iterative
// global rate update that follows it.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vlc/cpgd.hpp"
#include "vlc/geometry.hpp"

namespace vlc {

class LayerSet;

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

/// What the association needs to know about one user.
struct UserView {
  Vec3 world;
  std::vector<double> gains;  ///< by transmitter
  DecodingOrder order;        ///< local order and rates (from the map or computed)
};

struct GAConfig {
  std::size_t population = 64;
  std::size_t generations = 200;
  double crossover = 0.8;
  double mutation = 0.05;
  std::size_t elitism = 2;
  std::uint64_t seed = 1;
  /// Also search exhaustively when the assignment space has at most this many
  /// points (0 disables).
  double exhaustive_limit = 0.0;

  void validate() const;
};

struct Association {
  std::vector<std::size_t> tx;     ///< per user; kUnassigned for outage users
  std::vector<std::size_t> depth;  ///< m_j, 1-based; 0 when unassigned
  RateVector global;               ///< r-bar, length L; kUnconstrained where no user decodes
  double objective = 0.0;
  double ga_objective = 0.0;       ///< best value the GA itself found
  bool exhaustive = false;         ///< objective is the exhaustive optimum
  std::size_t evaluations = 0;

  /// eta_ji
  bool eta(std::size_t user, std::size_t transmitter) const { return tx[user] == transmitter; }
};

/// m_j: the 1-based stage at which the last layer of `tx` is decoded. Throws
/// Infeasible when none of its layers is detectable in `order`.
std::size_t truncate_depth(const DecodingOrder& order, std::size_t tx, const LayerSet& layers);

/// r^j with every layer decoded after stage `depth` set to kUnconstrained.
RateVector discard_after(const DecodingOrder& order, std::size_t depth);

/// Element-wise minimum of the local vectors.
RateVector global_rates(std::span<const RateVector> local, std::size_t layer_count);

/// Sum over users and transmitters of rbar[eta_ji * (lin(i, l) + 1)] with
/// rbar[0] = 0; layers no user constrains count 0. Throws InvalidArgument when
/// a transmitter is assigned twice or an index is out of range.
double objective(std::span<const std::size_t> assignment, std::span<const RateVector> local,
                 const LayerSet& layers);

/// Transmitters detectable at the user (non-zero gain), ascending.
std::vector<std::size_t> candidate_transmitters(const UserView& user);

/// Depths, global rates and objective of a fixed assignment.
Association evaluate_assignment(std::span<const std::size_t> assignment,
                                std::span<const UserView> users, const LayerSet& layers);

/// Best assignment by exhaustive search over injective candidate choices.
Association exhaustive_association(std::span<const UserView> users, const LayerSet& layers);

/// Genetic search; seed-reproducible. Throws Infeasible when every user is in
/// outage.
Association solve_association(std::span<const UserView> users, const LayerSet& layers,
                              const GAConfig& config);

struct RateUpdateOptions {
  std::size_t tau = 1;
  double tolerance = 1e-6;  ///< on the largest finite per-round increment
  std::size_t max_rounds = 50;
};

struct RateUpdateResult {
  RateVector rates;  ///< r-hat
  /// Per user: decoded groups Q_1..Q_p followed, when non-empty, by the
  /// residual group of layers never decoded.
  std::vector<DecodingOrder> orders;
  std::vector<std::size_t> decoded_groups;  ///< p_j
  std::size_t rounds = 0;
  bool converged = false;
  std::vector<double> assigned_sum;      ///< after each round; [0] is the starting value
  std::vector<double> min_increment;     ///< smallest finite increment of each round
  std::vector<double> max_increment;     ///< largest finite increment of each round
};

RateUpdateResult iterative_rate_update(const Association& association,
                                       std::span<const UserView> users, const LayerSet& layers,
                                       double noise_var, const RateUpdateOptions& options);

/// Sum of `rates` over the layers of assigned transmitters.
double assigned_sum(const RateVector& rates, std::span<const std::size_t> assignment,
                    const LayerSet& layers);

/// Per user: sum of `rates` over the assigned transmitter's layers (0 if unassigned).
std::vector<double> user_rates(const RateVector& rates, std::span<const std::size_t> assignment,
                               const LayerSet& layers);

}  // namespace vlc
