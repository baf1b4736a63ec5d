#include "vlc/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>

#include "vlc/error.hpp"
#include "vlc/rates.hpp"
#include "vlc/signaling.hpp"

namespace vlc {

void GAConfig::validate() const {
  if (population < 2) throw InvalidParameter("GA population must be >= 2");
  if (generations < 1) throw InvalidParameter("GA generations must be >= 1");
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw InvalidParameter("crossover rate must lie in [0,1]");
  if (!(mutation >= 0.0 && mutation <= 1.0)) throw InvalidParameter("mutation rate must lie in [0,1]");
  if (elitism >= population) throw InvalidParameter("elitism must be below the population size");
}

std::size_t truncate_depth(const DecodingOrder& order, std::size_t tx, const LayerSet& layers) {
  std::size_t depth = 0;
  for (std::size_t m = 0; m < order.groups.size(); ++m) {
    for (auto l : order.groups[m]) {
      if (layers.tx_of(l) == tx) depth = m + 1;
    }
  }
  if (depth == 0) throw Infeasible("assigned transmitter is not detectable at the user");
  return depth;
}

RateVector discard_after(const DecodingOrder& order, std::size_t depth) {
  RateVector r = order.rates;
  for (std::size_t m = depth; m < order.groups.size(); ++m) {
    for (auto l : order.groups[m]) r[l] = kUnconstrained;
  }
  return r;
}

RateVector global_rates(std::span<const RateVector> local, std::size_t layer_count) {
  RateVector out(layer_count, kUnconstrained);
  for (const auto& r : local) {
    if (r.size() != layer_count) throw InvalidArgument("global_rates: rate vector length mismatch");
    for (std::size_t k = 0; k < layer_count; ++k) out[k] = std::min(out[k], r[k]);
  }
  return out;
}

double objective(std::span<const std::size_t> assignment, std::span<const RateVector> local,
                 const LayerSet& layers) {
  if (assignment.size() != local.size()) throw InvalidArgument("objective: one rate vector per user");
  const std::size_t n_tx = layers.transmitter_count();
  std::vector<char> used(n_tx, 0);
  for (auto i : assignment) {
    if (i == kUnassigned) continue;
    if (i >= n_tx) throw InvalidArgument("objective: transmitter index out of range");
    if (used[i]) throw InvalidArgument("objective: a transmitter serves at most one user");
    used[i] = 1;
  }
  const RateVector rbar = global_rates(local, layers.size());
  // Shifted by one so that index 0 is the r-bar[0] = 0 sentinel.
  std::vector<double> shifted(layers.size() + 1, 0.0);
  for (std::size_t k = 0; k < rbar.size(); ++k) {
    shifted[k + 1] = is_unconstrained(rbar[k]) ? 0.0 : rbar[k];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n_tx; ++i) {
    for (std::size_t j = 0; j < assignment.size(); ++j) {
      const std::size_t eta = assignment[j] == i ? 1 : 0;
      for (std::size_t l = 0; l < layers.layers_of(i); ++l) {
        total += shifted[eta * (layers.lin(i, l) + 1)];
      }
    }
  }
  return total;
}

std::vector<std::size_t> candidate_transmitters(const UserView& user) {
  std::vector<std::size_t> out;
  if (user.order.outage) return out;
  for (std::size_t i = 0; i < user.gains.size(); ++i) {
    if (user.gains[i] != 0.0) out.push_back(i);
  }
  return out;
}

Association evaluate_assignment(std::span<const std::size_t> assignment,
                                std::span<const UserView> users, const LayerSet& layers) {
  if (assignment.size() != users.size()) throw InvalidArgument("one transmitter choice per user");
  Association a;
  a.tx.assign(assignment.begin(), assignment.end());
  a.depth.assign(users.size(), 0);
  std::vector<RateVector> local;
  for (std::size_t j = 0; j < users.size(); ++j) {
    if (assignment[j] == kUnassigned) {
      local.emplace_back(layers.size(), kUnconstrained);
      continue;
    }
    a.depth[j] = truncate_depth(users[j].order, assignment[j], layers);
    local.push_back(discard_after(users[j].order, a.depth[j]));
  }
  a.global = global_rates(local, layers.size());
  a.objective = objective(assignment, local, layers);
  a.ga_objective = a.objective;
  a.evaluations = 1;
  return a;
}

namespace {

// Objective of many assignments without building full rate vectors.
class Evaluator {
 public:
  Evaluator(std::span<const UserView> users, const LayerSet& layers)
      : users_(users), layers_(layers) {
    const std::size_t n_tx = layers.transmitter_count();
    stage_.resize(users.size());
    depth_.resize(users.size());
    candidates_.resize(users.size());
    for (std::size_t j = 0; j < users.size(); ++j) {
      const auto& order = users[j].order;
      stage_[j].assign(layers.size(), 0);
      for (std::size_t m = 0; m < order.groups.size(); ++m) {
        for (auto l : order.groups[m]) stage_[j][l] = m + 1;
      }
      depth_[j].assign(n_tx, 0);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        auto& d = depth_[j][layers.tx_of(l)];
        d = std::max(d, stage_[j][l]);
      }
      candidates_[j] = candidate_transmitters(users[j]);
      // A detectable transmitter must appear in the order.
      std::erase_if(candidates_[j], [&](std::size_t i) { return depth_[j][i] == 0; });
    }
  }

  const std::vector<std::size_t>& candidates(std::size_t j) const { return candidates_[j]; }
  std::size_t users() const { return users_.size(); }

  double operator()(std::span<const std::size_t> assign) const {
    double total = 0.0;
    for (std::size_t j = 0; j < assign.size(); ++j) {
      const std::size_t i = assign[j];
      if (i == kUnassigned) continue;
      for (std::size_t b = 0; b < layers_.layers_of(i); ++b) {
        const std::size_t l = layers_.lin(i, b);
        double r = kUnconstrained;
        for (std::size_t u = 0; u < assign.size(); ++u) {
          if (assign[u] == kUnassigned) continue;
          const std::size_t s = stage_[u][l];
          if (s != 0 && s <= depth_[u][assign[u]]) r = std::min(r, users_[u].order.rates[l]);
        }
        if (!is_unconstrained(r)) total += r;
      }
    }
    return total;
  }

  /// Value of serving user j alone with transmitter i.
  double standalone(std::size_t j, std::size_t i) const {
    double s = 0.0;
    for (std::size_t b = 0; b < layers_.layers_of(i); ++b) {
      const double r = users_[j].order.rates[layers_.lin(i, b)];
      if (!is_unconstrained(r)) s += r;
    }
    return s;
  }

 private:
  std::span<const UserView> users_;
  const LayerSet& layers_;
  std::vector<std::vector<std::size_t>> stage_;
  std::vector<std::vector<std::size_t>> depth_;
  std::vector<std::vector<std::size_t>> candidates_;
};

double search_space(const Evaluator& ev) {
  double size = 1.0;
  for (std::size_t j = 0; j < ev.users(); ++j) {
    size *= static_cast<double>(std::max<std::size_t>(1, ev.candidates(j).size()));
  }
  return size;
}

void exhaustive_search(const Evaluator& ev, std::vector<std::size_t>& current,
                       std::vector<char>& used, std::size_t j, double& best,
                       std::vector<std::size_t>& best_assign, std::size_t& evaluations) {
  if (j == ev.users()) {
    ++evaluations;
    const double v = ev(current);
    if (best_assign.empty() || v > best) {
      best = v;
      best_assign = current;
    }
    return;
  }
  const auto& cand = ev.candidates(j);
  if (cand.empty()) {
    current[j] = kUnassigned;
    exhaustive_search(ev, current, used, j + 1, best, best_assign, evaluations);
    return;
  }
  for (auto i : cand) {
    if (used[i]) continue;
    used[i] = 1;
    current[j] = i;
    exhaustive_search(ev, current, used, j + 1, best, best_assign, evaluations);
    used[i] = 0;
  }
  current[j] = kUnassigned;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

Association exhaustive_association(std::span<const UserView> users, const LayerSet& layers) {
  const Evaluator ev(users, layers);
  bool any = false;
  for (std::size_t j = 0; j < users.size(); ++j) any = any || !ev.candidates(j).empty();
  if (!any) throw Infeasible("every user is in outage");
  std::vector<std::size_t> current(users.size(), kUnassigned), best_assign;
  std::vector<char> used(layers.transmitter_count(), 0);
  double best = 0.0;
  std::size_t evaluations = 0;
  exhaustive_search(ev, current, used, 0, best, best_assign, evaluations);
  if (best_assign.empty()) throw Infeasible("no injective assignment of transmitters to users");
  Association a = evaluate_assignment(best_assign, users, layers);
  a.exhaustive = true;
  a.evaluations = evaluations;
  return a;
}

Association solve_association(std::span<const UserView> users, const LayerSet& layers,
                              const GAConfig& config) {
  config.validate();
  const Evaluator ev(users, layers);
  const std::size_t n = users.size();
  bool any = false;
  for (std::size_t j = 0; j < n; ++j) any = any || !ev.candidates(j).empty();
  if (!any) throw Infeasible("every user is in outage");

  Rng rng(config.seed);
  const std::size_t n_tx = layers.transmitter_count();
  std::vector<char> taken(n_tx);

  auto repair = [&](std::vector<std::size_t>& c) {
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cand = ev.candidates(j);
      if (cand.empty()) {
        c[j] = kUnassigned;
        continue;
      }
      if (c[j] != kUnassigned && !taken[c[j]]) {
        taken[c[j]] = 1;
        continue;
      }
      std::vector<std::size_t> free;
      for (auto i : cand) {
        if (!taken[i]) free.push_back(i);
      }
      c[j] = free.empty() ? kUnassigned : free[rng.below(free.size())];
      if (c[j] != kUnassigned) taken[c[j]] = 1;
    }
  };
  auto random_gene = [&](std::size_t j) {
    const auto& cand = ev.candidates(j);
    return cand.empty() ? kUnassigned : cand[rng.below(cand.size())];
  };

  // Greedy seed: users in turn take their best free transmitter.
  std::vector<std::vector<std::size_t>> pop;
  {
    std::vector<std::size_t> seed(n, kUnassigned);
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      double best = -1.0;
      for (auto i : ev.candidates(j)) {
        if (taken[i]) continue;
        const double v = ev.standalone(j, i);
        if (v > best) {
          best = v;
          seed[j] = i;
        }
      }
      if (seed[j] != kUnassigned) taken[seed[j]] = 1;
    }
    pop.push_back(seed);
  }
  while (pop.size() < config.population) {
    std::vector<std::size_t> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = random_gene(j);
    repair(c);
    pop.push_back(std::move(c));
  }

  std::vector<double> fit(pop.size());
  std::vector<std::size_t> best = pop.front();
  double best_fit = -1.0;
  std::size_t evaluations = 0;
  std::vector<std::size_t> rank(pop.size());

  for (std::size_t gen = 0;; ++gen) {
    for (std::size_t p = 0; p < pop.size(); ++p) {
      fit[p] = ev(pop[p]);
      ++evaluations;
      if (fit[p] > best_fit) {
        best_fit = fit[p];
        best = pop[p];
      }
    }
    if (gen + 1 == config.generations) break;
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
    auto tournament = [&]() -> const std::vector<std::size_t>& {
      const std::size_t a = rng.below(pop.size());
      const std::size_t b = rng.below(pop.size());
      return fit[b] > fit[a] ? pop[b] : pop[a];
    };
    std::vector<std::vector<std::size_t>> next;
    for (std::size_t e = 0; e < config.elitism; ++e) next.push_back(pop[rank[e]]);
    while (next.size() < pop.size()) {
      std::vector<std::size_t> child = tournament();
      const auto& other = tournament();
      if (rng.uniform() < config.crossover) {
        for (std::size_t j = 0; j < n; ++j) {
          if (rng.uniform() < 0.5) child[j] = other[j];
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.uniform() < config.mutation) child[j] = random_gene(j);
      }
      repair(child);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }

  Association result = evaluate_assignment(best, users, layers);
  result.ga_objective = result.objective;
  result.evaluations = evaluations;
  if (config.exhaustive_limit > 0.0 && search_space(ev) <= config.exhaustive_limit) {
    Association ex = exhaustive_association(users, layers);
    if (ex.objective > result.objective) {
      ex.ga_objective = result.ga_objective;
      ex.evaluations += evaluations;
      return ex;
    }
    result.exhaustive = true;
  }
  return result;
}

double assigned_sum(const RateVector& rates, std::span<const std::size_t> assignment,
                    const LayerSet& layers) {
  double s = 0.0;
  for (double r : user_rates(rates, assignment, layers)) s += r;
  return s;
}

std::vector<double> user_rates(const RateVector& rates, std::span<const std::size_t> assignment,
                               const LayerSet& layers) {
  std::vector<double> out(assignment.size(), 0.0);
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    const std::size_t i = assignment[j];
    if (i == kUnassigned) continue;
    for (std::size_t b = 0; b < layers.layers_of(i); ++b) {
      const double r = rates[layers.lin(i, b)];
      if (!is_unconstrained(r)) out[j] += r;
    }
  }
  return out;
}

namespace {

struct UserRound {
  RateVector local;
  DecodingOrder order;
  std::size_t decoded = 0;

  double worst() const {
    double w = kUnconstrained;
    for (const auto& g : std::span(order.groups).first(decoded)) {
      for (auto l : g) w = std::min(w, local[l]);
    }
    return w;
  }
};

// Margins of an existing order: the first `decoded` groups are decoded, the
// rest stays noise.
UserRound replay(const UserView& user, std::size_t tx, const std::vector<LayerGroup>& groups,
                 std::size_t decoded, const RateVector& rhat, const LayerSet& layers,
                 double noise_var) {
  UserRound out;
  out.local.assign(layers.size(), kUnconstrained);
  for (std::size_t b = 0; b < layers.layers_of(tx); ++b) out.local[layers.lin(tx, b)] = 0.0;
  out.decoded = decoded;
  std::vector<std::size_t> later;
  for (std::size_t m = groups.size(); m-- > 0;) {
    if (m < decoded) {
      const double noise = stage_noise_variance(user.gains, layers, later, noise_var);
      const double value = rate_margin_against_noise(groups[m], noise, rhat, user.gains, layers);
      for (auto l : groups[m]) out.local[l] = value;
    }
    later.insert(later.end(), groups[m].begin(), groups[m].end());
  }
  out.order.detectable = user.order.detectable;
  out.order.rates = out.local;
  for (std::size_t m = 0; m < decoded; ++m) out.order.groups.push_back(groups[m]);
  LayerGroup residual;
  for (std::size_t m = decoded; m < groups.size(); ++m) {
    residual.insert(residual.end(), groups[m].begin(), groups[m].end());
  }
  std::sort(residual.begin(), residual.end());
  if (!residual.empty()) out.order.groups.push_back(std::move(residual));
  return out;
}

UserRound margin_greedy(const UserView& user, std::size_t tx, const RateVector& rhat,
                        const LayerSet& layers, double noise_var, std::size_t tau) {
  UserRound out;
  out.local.assign(layers.size(), kUnconstrained);
  for (std::size_t b = 0; b < layers.layers_of(tx); ++b) out.local[layers.lin(tx, b)] = 0.0;

  std::vector<std::size_t> remaining = user.order.detectable;
  std::vector<std::size_t> extracted;
  std::vector<LayerGroup> extractions;
  std::vector<char> recorded;
  bool signal_seen = false;
  std::vector<std::size_t> best;
  while (!remaining.empty()) {
    const double interference = stage_noise_variance(user.gains, layers, extracted, noise_var);
    double best_value = kUnconstrained;
    best.clear();
    for_each_bounded_subset(remaining, tau, [&](std::span<const std::size_t> v) {
      const double value = rate_margin_against_noise(v, interference, rhat, user.gains, layers);
      if (best.empty() || value < best_value || (value == best_value && mask_less(v, best))) {
        best_value = value;
        best.assign(v.begin(), v.end());
      }
    });
    for (auto l : best) {
      remaining.erase(std::find(remaining.begin(), remaining.end(), l));
      extracted.push_back(l);
      if (layers.tx_of(l) == tx) signal_seen = true;
    }
    if (signal_seen) {
      for (auto l : best) out.local[l] = best_value;
      ++out.decoded;
    }
    extractions.push_back(best);
  }

  // Recorded extractions are the last `decoded` ones; decode them in reverse.
  out.order.detectable = user.order.detectable;
  out.order.rates = out.local;
  const std::size_t p = extractions.size();
  for (std::size_t m = 0; m < out.decoded; ++m) out.order.groups.push_back(extractions[p - 1 - m]);
  LayerGroup residual;
  for (std::size_t e = 0; e + out.decoded < p; ++e) {
    residual.insert(residual.end(), extractions[e].begin(), extractions[e].end());
  }
  std::sort(residual.begin(), residual.end());
  if (!residual.empty()) out.order.groups.push_back(std::move(residual));
  return out;
}

}  // namespace

RateUpdateResult iterative_rate_update(const Association& association,
                                       std::span<const UserView> users, const LayerSet& layers,
                                       double noise_var, const RateUpdateOptions& options) {
  if (association.tx.size() != users.size()) {
    throw InvalidArgument("iterative_rate_update: association does not match the users");
  }
  if (association.global.size() != layers.size()) {
    throw InvalidArgument("iterative_rate_update: global rate vector has the wrong length");
  }
  RateUpdateResult res;
  res.rates = association.global;
  res.orders.resize(users.size());
  res.decoded_groups.assign(users.size(), 0);
  res.assigned_sum.push_back(assigned_sum(res.rates, association.tx, layers));

  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    RateVector increment(layers.size(), kUnconstrained);
    for (std::size_t j = 0; j < users.size(); ++j) {
      const std::size_t tx = association.tx[j];
      if (tx == kUnassigned) continue;
      UserRound ur = margin_greedy(users[j], tx, res.rates, layers, noise_var, options.tau);
      // The greedy order is not always the best one once rates are committed.
      // The order used in the previous round still fits the current rates, so
      // fall back to it when the greedy pick leaves a smaller worst margin.
      UserRound prev = round == 0 ? replay(users[j], tx, users[j].order.groups,
                                           association.depth[j], res.rates, layers, noise_var)
                                  : replay(users[j], tx, res.orders[j].groups,
                                           res.decoded_groups[j], res.rates, layers, noise_var);
      if (prev.worst() > ur.worst()) ur = std::move(prev);
      for (std::size_t k = 0; k < layers.size(); ++k) {
        increment[k] = std::min(increment[k], ur.local[k]);
      }
      res.orders[j] = std::move(ur.order);
      res.decoded_groups[j] = ur.decoded;
    }
    double lo = kUnconstrained;
    double hi = 0.0;
    for (std::size_t k = 0; k < layers.size(); ++k) {
      if (is_unconstrained(increment[k])) {
        res.rates[k] = kUnconstrained;
        continue;
      }
      lo = std::min(lo, increment[k]);
      hi = std::max(hi, std::abs(increment[k]));
      res.rates[k] += increment[k];
    }
    ++res.rounds;
    res.min_increment.push_back(is_unconstrained(lo) ? 0.0 : lo);
    res.max_increment.push_back(hi);
    res.assigned_sum.push_back(assigned_sum(res.rates, association.tx, layers));
    if (hi < options.tolerance) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace vlc
