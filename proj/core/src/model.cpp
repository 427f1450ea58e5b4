#include "facmech/model.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace facmech {

namespace {

constexpr int kMaxFacilities = 30;

std::string agent_label(int agent) { return "agent " + std::to_string(agent); }

void check_unit_interval(const Rat& value, const std::string& what) {
  if (value < 0 || value > 1) {
    throw std::invalid_argument(what + " must lie in [0, 1]");
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = saturating_mul(result, static_cast<std::uint64_t>(n - k + i));
    result /= static_cast<std::uint64_t>(i);
  }
  return result;
}

bool next_combination(std::vector<int>& ids, int m) {
  int k = static_cast<int>(ids.size());
  for (int i = k - 1; i >= 0; --i) {
    if (ids[i] < m - (k - 1 - i)) {
      ++ids[i];
      for (int j = i + 1; j < k; ++j) ids[j] = ids[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Preference Preference::from_ids(const std::vector<int>& facility_ids) {
  if (facility_ids.empty()) {
    throw std::invalid_argument("preference: approval set must be non-empty");
  }
  std::uint32_t mask = 0;
  for (int id : facility_ids) {
    if (id < 1 || id > kMaxFacilities) {
      throw std::invalid_argument("preference: facility id " + std::to_string(id) +
                                  " out of range [1, " + std::to_string(kMaxFacilities) + "]");
    }
    mask |= 1u << (id - 1);
  }
  return Preference(mask);
}

Preference Preference::from_mask(std::uint32_t mask) {
  if (mask == 0) {
    throw std::invalid_argument("preference: approval set must be non-empty");
  }
  if (mask >= (1u << kMaxFacilities)) {
    throw std::invalid_argument("preference: mask exceeds facility limit");
  }
  return Preference(mask);
}

int Preference::count() const { return std::popcount(mask_); }

std::vector<int> Preference::ids() const {
  std::vector<int> result;
  for (int id = 1; id <= kMaxFacilities; ++id) {
    if (approves(id)) result.push_back(id);
  }
  return result;
}

int Preference::max_id() const { return 32 - std::countl_zero(mask_); }

Instance Instance::create(std::vector<Agent> agents, int m, int k, UtilityClass utility_class) {
  if (m < 2 || m > kMaxFacilities) {
    throw std::invalid_argument("instance: m must be in [2, " + std::to_string(kMaxFacilities) + "]");
  }
  if (k < 1 || k > m) {
    throw std::invalid_argument("instance: k must be in [1, m]");
  }
  if (agents.empty()) {
    throw std::invalid_argument("instance: needs at least one agent");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    check_unit_interval(agents[i].x, agent_label(static_cast<int>(i)) + ": position");
    if (agents[i].approve.max_id() > m) {
      throw std::invalid_argument(agent_label(static_cast<int>(i)) +
                                  ": approves a facility beyond m=" + std::to_string(m));
    }
  }
  Instance instance;
  instance.agents = std::move(agents);
  instance.m = m;
  instance.k = k;
  instance.utility_class = utility_class;
  return instance;
}

int Instance::approver_count(int facility) const {
  int count = 0;
  for (const Agent& a : agents) {
    if (a.approve.approves(facility)) ++count;
  }
  return count;
}

std::vector<Rat> Instance::approver_positions(int facility) const {
  std::vector<Rat> positions;
  for (const Agent& a : agents) {
    if (a.approve.approves(facility)) positions.push_back(a.x);
  }
  return positions;
}

Instance Instance::with_agent(int agent, Agent replacement) const {
  if (agent < 0 || agent >= n()) {
    throw std::out_of_range("instance: agent id out of range");
  }
  Instance copy = *this;
  check_unit_interval(replacement.x, agent_label(agent) + ": position");
  if (replacement.approve.max_id() > m) {
    throw std::invalid_argument(agent_label(agent) + ": approves a facility beyond m");
  }
  copy.agents[static_cast<std::size_t>(agent)] = std::move(replacement);
  return copy;
}

bool operator==(const Placement& a, const Placement& b) {
  return a.facility == b.facility && a.location == b.location;
}

bool placement_less(const Placement& a, const Placement& b) {
  if (a.facility != b.facility) return a.facility < b.facility;
  return a.location < b.location;
}

Outcome Outcome::of(List placements) {
  if (placements.empty()) {
    throw std::invalid_argument("outcome: needs at least one placement");
  }
  std::sort(placements.begin(), placements.end(),
            [](const Placement& a, const Placement& b) { return a.facility < b.facility; });
  for (std::size_t i = 0; i < placements.size(); ++i) {
    if (placements[i].facility < 1) {
      throw std::invalid_argument("outcome: facility ids are 1-based");
    }
    if (i > 0 && placements[i].facility == placements[i - 1].facility) {
      throw std::invalid_argument("outcome: facilities must be distinct");
    }
    check_unit_interval(placements[i].location, "outcome: location");
  }
  Outcome outcome;
  outcome.placements_ = std::move(placements);
  return outcome;
}

bool operator==(const Outcome& a, const Outcome& b) {
  return a.placements_ == b.placements_;
}

bool outcome_less(const Outcome& a, const Outcome& b) {
  return std::lexicographical_compare(a.placements().begin(), a.placements().end(),
                                      b.placements().begin(), b.placements().end(),
                                      placement_less);
}

void Lottery::add(const Rat& probability, Outcome outcome) {
  if (probability < 0) {
    throw std::invalid_argument("lottery: probabilities must be non-negative");
  }
  if (probability == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), outcome,
                             [](const Entry& e, const Outcome& o) { return outcome_less(e.outcome, o); });
  if (it != entries_.end() && it->outcome == outcome) {
    it->probability += probability;
  } else {
    entries_.insert(it, Entry{probability, std::move(outcome)});
  }
}

Rat Lottery::total_probability() const {
  Rat total = 0;
  for (const Entry& e : entries_) total += e.probability;
  return total;
}

Lottery Lottery::point_mass(Outcome outcome) {
  Lottery lottery;
  lottery.add(1, std::move(outcome));
  return lottery;
}

Rat agent_utility(const Instance& instance, int agent, const Outcome& outcome) {
  if (agent < 0 || agent >= instance.n()) {
    throw std::out_of_range("agent_utility: agent id out of range");
  }
  if (outcome.size() != instance.k) {
    throw std::invalid_argument("agent_utility: outcome places " + std::to_string(outcome.size()) +
                                " facilities, instance expects k=" + std::to_string(instance.k));
  }
  const Agent& a = instance.agents[static_cast<std::size_t>(agent)];
  const Rat one(1);
  switch (instance.utility_class) {
    case UtilityClass::Sum: {
      Rat total = 0;
      for (const Placement& p : outcome.placements()) {
        if (p.facility > instance.m) {
          throw std::invalid_argument("agent_utility: facility beyond m");
        }
        if (a.approve.approves(p.facility)) total += one - abs_diff(a.x, p.location);
      }
      return total;
    }
    case UtilityClass::MinDist: {
      Rat best = 0;
      for (const Placement& p : outcome.placements()) {
        if (p.facility > instance.m) {
          throw std::invalid_argument("agent_utility: facility beyond m");
        }
        if (a.approve.approves(p.facility)) {
          Rat term = one - abs_diff(a.x, p.location);
          if (term > best) best = std::move(term);
        }
      }
      return best;
    }
    case UtilityClass::MaxDist: {
      bool first = true;
      Rat worst = 0;
      for (const Placement& p : outcome.placements()) {
        if (p.facility > instance.m) {
          throw std::invalid_argument("agent_utility: facility beyond m");
        }
        Rat term = a.approve.approves(p.facility) ? one - abs_diff(a.x, p.location) : Rat(0);
        if (first || term < worst) {
          worst = std::move(term);
          first = false;
        }
      }
      return worst;
    }
  }
  throw std::logic_error("agent_utility: unknown utility class");
}

Rat social_welfare(const Instance& instance, const Outcome& outcome) {
  Rat total = 0;
  for (int i = 0; i < instance.n(); ++i) total += agent_utility(instance, i, outcome);
  return total;
}

Rat expected_welfare(const Instance& instance, const Lottery& lottery) {
  if (!lottery.sums_to_one()) {
    throw std::invalid_argument("expected_welfare: lottery probabilities must sum to 1");
  }
  Rat total = 0;
  for (const Lottery::Entry& e : lottery.entries()) {
    total += e.probability * social_welfare(instance, e.outcome);
  }
  return total;
}

Rat expected_agent_utility(const Instance& instance, int agent, const Lottery& lottery) {
  if (!lottery.sums_to_one()) {
    throw std::invalid_argument("expected_agent_utility: lottery probabilities must sum to 1");
  }
  Rat total = 0;
  for (const Lottery::Entry& e : lottery.entries()) {
    total += e.probability * agent_utility(instance, agent, e.outcome);
  }
  return total;
}

Rat lower_median(std::vector<Rat> positions) {
  if (positions.empty()) {
    throw std::invalid_argument("lower_median: empty position list");
  }
  std::sort(positions.begin(), positions.end());
  return positions[(positions.size() - 1) / 2];
}

std::optional<Rat> median_of_approvers(const Instance& instance, int facility) {
  if (facility < 1 || facility > instance.m) {
    throw std::invalid_argument("median_of_approvers: facility out of range");
  }
  std::vector<Rat> positions = instance.approver_positions(facility);
  if (positions.empty()) return std::nullopt;
  return lower_median(std::move(positions));
}

namespace {

// Welfare of one facility placed at the approvers' lower median; the median
// minimizes total distance, so this is the facility's best single location.
struct FacilityOptimum {
  Rat location;
  Rat score;
};

FacilityOptimum facility_optimum(const Instance& instance, int facility) {
  std::vector<Rat> positions = instance.approver_positions(facility);
  if (positions.empty()) return {Rat(1, 2), Rat(0)};
  Rat median = lower_median(positions);
  Rat score = 0;
  const Rat one(1);
  for (const Rat& x : positions) score += one - abs_diff(x, median);
  return {std::move(median), std::move(score)};
}

OptimalResult optimal_k1(const Instance& instance) {
  std::optional<OptimalResult> best;
  for (int j = 1; j <= instance.m; ++j) {
    FacilityOptimum opt = facility_optimum(instance, j);
    if (!best || opt.score > best->welfare) {
      best = OptimalResult{Outcome::of({Placement{j, opt.location}}), std::move(opt.score)};
    }
  }
  return std::move(*best);
}

OptimalResult optimal_sum(const Instance& instance) {
  struct Scored {
    int facility;
    Rat location;
    Rat score;
  };
  std::vector<Scored> scored;
  scored.reserve(static_cast<std::size_t>(instance.m));
  for (int j = 1; j <= instance.m; ++j) {
    FacilityOptimum opt = facility_optimum(instance, j);
    scored.push_back({j, std::move(opt.location), std::move(opt.score)});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.facility < b.facility;
  });
  Outcome::List placements;
  Rat welfare = 0;
  for (int i = 0; i < instance.k; ++i) {
    placements.push_back(Placement{scored[static_cast<std::size_t>(i)].facility,
                                   scored[static_cast<std::size_t>(i)].location});
    welfare += scored[static_cast<std::size_t>(i)].score;
  }
  return {Outcome::of(std::move(placements)), std::move(welfare)};
}

OptimalResult optimal_max(const Instance& instance) {
  // Spreading a MaxDist subset only hurts: every agent scores off its worst
  // placed facility, so one shared location dominates and the lower median of
  // the all-approving agents is optimal for it.
  bool have = false;
  Rat best_welfare;
  std::vector<int> best_subset;
  Rat best_location;

  std::vector<int> subset(static_cast<std::size_t>(instance.k));
  for (int i = 0; i < instance.k; ++i) subset[static_cast<std::size_t>(i)] = i + 1;
  const Rat one(1);
  do {
    std::uint32_t mask = 0;
    for (int j : subset) mask |= 1u << (j - 1);
    std::vector<Rat> positions;
    for (const Agent& a : instance.agents) {
      if ((a.approve.mask() & mask) == mask) positions.push_back(a.x);
    }
    Rat location(1, 2);
    Rat welfare(0);
    if (!positions.empty()) {
      location = lower_median(positions);
      for (const Rat& x : positions) welfare += one - abs_diff(x, location);
    }
    if (!have || welfare > best_welfare) {
      best_welfare = std::move(welfare);
      best_subset = subset;
      best_location = std::move(location);
      have = true;
    }
  } while (next_combination(subset, instance.m));

  Outcome::List placements;
  for (int j : best_subset) placements.push_back(Placement{j, best_location});
  return {Outcome::of(std::move(placements)), std::move(best_welfare)};
}

std::vector<Rat> distinct_sorted_positions(const Instance& instance) {
  std::vector<Rat> candidates;
  for (const Agent& a : instance.agents) candidates.push_back(a.x);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates;
}

void check_eval_cap(std::uint64_t evals, long long cap, const char* what) {
  if (evals > static_cast<std::uint64_t>(cap)) {
    throw std::length_error(std::string(what) + ": " + std::to_string(evals) +
                            " evaluations exceed cap " + std::to_string(cap));
  }
}

// MinDist k >= 2: an optimal solution exists with every chosen facility at an
// agent position (re-homing a facility to the lower median of the agents it
// serves never loses welfare), so tuples over the distinct positions are an
// exact search space. Values scale to a common denominator for speed when the
// denominators stay small.
OptimalResult optimal_min(const Instance& instance, long long eval_cap) {
  const std::vector<Rat> candidates = distinct_sorted_positions(instance);
  const int n_cands = static_cast<int>(candidates.size());
  const int n = instance.n();
  const int k = instance.k;

  std::uint64_t tuples = 1;
  for (int i = 0; i < k; ++i) tuples = saturating_mul(tuples, static_cast<std::uint64_t>(n_cands));
  check_eval_cap(saturating_mul(binomial(instance.m, k), tuples), eval_cap, "optimal_choice");

  BigInt common_den = 1;
  bool int_path = true;
  for (const Rat& c : candidates) {
    common_den = lcm(common_den, denominator(c));
    if (common_den > (1 << 24)) {
      int_path = false;
      break;
    }
  }

  bool have = false;
  Rat best_welfare;
  std::vector<int> best_subset;
  std::vector<int> best_tuple;

  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i + 1;

  if (int_path) {
    const long long den = common_den.convert_to<long long>();
    std::vector<long long> pos_num(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Rat& x = instance.agents[static_cast<std::size_t>(i)].x;
      pos_num[static_cast<std::size_t>(i)] =
          (numerator(x) * (common_den / denominator(x))).convert_to<long long>();
    }
    std::vector<long long> cand_num(static_cast<std::size_t>(n_cands));
    for (int c = 0; c < n_cands; ++c) {
      const Rat& y = candidates[static_cast<std::size_t>(c)];
      cand_num[static_cast<std::size_t>(c)] =
          (numerator(y) * (common_den / denominator(y))).convert_to<long long>();
    }
    // proximity[i][c] = den - |x_i - y_c| scaled by den
    std::vector<long long> proximity(static_cast<std::size_t>(n * n_cands));
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n_cands; ++c) {
        long long d = pos_num[static_cast<std::size_t>(i)] - cand_num[static_cast<std::size_t>(c)];
        proximity[static_cast<std::size_t>(i * n_cands + c)] = den - (d < 0 ? -d : d);
      }
    }

    long long best_scaled = -1;
    do {
      std::vector<std::uint32_t> slot_masks(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i) {
        for (int s = 0; s < k; ++s) {
          if (instance.agents[static_cast<std::size_t>(i)].approve.approves(
                  subset[static_cast<std::size_t>(s)])) {
            slot_masks[static_cast<std::size_t>(i)] |= 1u << s;
          }
        }
      }
      std::vector<int> tuple(static_cast<std::size_t>(k), 0);
      while (true) {
        long long welfare = 0;
        for (int i = 0; i < n; ++i) {
          std::uint32_t slots = slot_masks[static_cast<std::size_t>(i)];
          long long agent_best = 0;
          while (slots) {
            int s = std::countr_zero(slots);
            slots &= slots - 1;
            long long v = proximity[static_cast<std::size_t>(
                i * n_cands + tuple[static_cast<std::size_t>(s)])];
            if (v > agent_best) agent_best = v;
          }
          welfare += agent_best;
        }
        if (welfare > best_scaled) {
          best_scaled = welfare;
          best_subset = subset;
          best_tuple = tuple;
        }
        int slot = k - 1;
        while (slot >= 0 && tuple[static_cast<std::size_t>(slot)] == n_cands - 1) {
          tuple[static_cast<std::size_t>(slot)] = 0;
          --slot;
        }
        if (slot < 0) break;
        ++tuple[static_cast<std::size_t>(slot)];
      }
    } while (next_combination(subset, instance.m));
    best_welfare = Rat(best_scaled, den);
    have = best_scaled >= 0;
  } else {
    const Rat one(1);
    do {
      std::vector<int> tuple(static_cast<std::size_t>(k), 0);
      while (true) {
        Rat welfare = 0;
        for (int i = 0; i < n; ++i) {
          const Agent& a = instance.agents[static_cast<std::size_t>(i)];
          Rat agent_best = 0;
          for (int s = 0; s < k; ++s) {
            if (!a.approve.approves(subset[static_cast<std::size_t>(s)])) continue;
            Rat v = one - abs_diff(a.x, candidates[static_cast<std::size_t>(
                                             tuple[static_cast<std::size_t>(s)])]);
            if (v > agent_best) agent_best = std::move(v);
          }
          welfare += agent_best;
        }
        if (!have || welfare > best_welfare) {
          best_welfare = std::move(welfare);
          best_subset = subset;
          best_tuple = tuple;
          have = true;
        }
        int slot = k - 1;
        while (slot >= 0 && tuple[static_cast<std::size_t>(slot)] == n_cands - 1) {
          tuple[static_cast<std::size_t>(slot)] = 0;
          --slot;
        }
        if (slot < 0) break;
        ++tuple[static_cast<std::size_t>(slot)];
      }
    } while (next_combination(subset, instance.m));
  }

  Outcome::List placements;
  for (int s = 0; s < k; ++s) {
    placements.push_back(Placement{best_subset[static_cast<std::size_t>(s)],
                                   candidates[static_cast<std::size_t>(
                                       best_tuple[static_cast<std::size_t>(s)])]});
  }
  return {Outcome::of(std::move(placements)), std::move(best_welfare)};
}

}  // namespace

OptimalResult optimal_choice(const Instance& instance, long long eval_cap) {
  if (instance.k == 1) return optimal_k1(instance);
  switch (instance.utility_class) {
    case UtilityClass::Sum:
      return optimal_sum(instance);
    case UtilityClass::MaxDist:
      return optimal_max(instance);
    case UtilityClass::MinDist:
      return optimal_min(instance, eval_cap);
  }
  throw std::logic_error("optimal_choice: unknown utility class");
}

OptimalResult optimal_welfare_bruteforce(const Instance& instance, int grid_den,
                                         long long eval_cap) {
  if (grid_den < 1) {
    throw std::invalid_argument("optimal_welfare_bruteforce: grid denominator must be >= 1");
  }
  std::vector<Rat> candidates;
  for (int i = 0; i <= grid_den; ++i) candidates.emplace_back(i, grid_den);
  for (const Agent& a : instance.agents) candidates.push_back(a.x);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const int n_cands = static_cast<int>(candidates.size());
  const int k = instance.k;
  std::uint64_t tuples = 1;
  for (int i = 0; i < k; ++i) tuples = saturating_mul(tuples, static_cast<std::uint64_t>(n_cands));
  check_eval_cap(saturating_mul(binomial(instance.m, k), tuples), eval_cap,
                 "optimal_welfare_bruteforce");

  std::optional<OptimalResult> best;
  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i + 1;
  do {
    std::vector<int> tuple(static_cast<std::size_t>(k), 0);
    while (true) {
      Outcome::List placements;
      for (int s = 0; s < k; ++s) {
        placements.push_back(Placement{subset[static_cast<std::size_t>(s)],
                                       candidates[static_cast<std::size_t>(
                                           tuple[static_cast<std::size_t>(s)])]});
      }
      Outcome outcome = Outcome::of(std::move(placements));
      Rat welfare = social_welfare(instance, outcome);
      if (!best || welfare > best->welfare) {
        best = OptimalResult{std::move(outcome), std::move(welfare)};
      }
      int slot = k - 1;
      while (slot >= 0 && tuple[static_cast<std::size_t>(slot)] == n_cands - 1) {
        tuple[static_cast<std::size_t>(slot)] = 0;
        --slot;
      }
      if (slot < 0) break;
      ++tuple[static_cast<std::size_t>(slot)];
    }
  } while (next_combination(subset, instance.m));
  return std::move(*best);
}

}  // namespace facmech
