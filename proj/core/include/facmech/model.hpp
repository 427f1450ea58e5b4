#pragma once

#include "facmech/rational.hpp"

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace facmech {

// Agents live on the segment [0, 1] and approve a non-empty subset of the
// m available facilities. Facility ids are 1-based everywhere; agent ids are
// 0-based indices into Instance::agents (reports render them 1-based).

class Preference {
 public:
  static Preference from_ids(const std::vector<int>& facility_ids);
  static Preference from_mask(std::uint32_t mask);

  bool approves(int facility) const {
    return facility >= 1 && facility <= 32 && (mask_ >> (facility - 1)) & 1u;
  }
  int count() const;
  std::uint32_t mask() const { return mask_; }
  std::vector<int> ids() const;
  int max_id() const;

  friend bool operator==(const Preference& a, const Preference& b) = default;
  friend auto operator<=>(const Preference& a, const Preference& b) = default;

 private:
  explicit Preference(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_;
};

struct Agent {
  Rat x;
  Preference approve;
};

enum class UtilityClass { Sum, MinDist, MaxDist };

struct Instance {
  std::vector<Agent> agents;
  int m = 2;
  int k = 1;
  UtilityClass utility_class = UtilityClass::Sum;

  // Validates every invariant: m in [2, 30], 1 <= k <= m, n >= 1,
  // positions in [0, 1], approvals within 1..m.
  static Instance create(std::vector<Agent> agents, int m, int k,
                         UtilityClass utility_class = UtilityClass::Sum);

  int n() const { return static_cast<int>(agents.size()); }
  int approver_count(int facility) const;
  std::vector<Rat> approver_positions(int facility) const;
  Instance with_agent(int agent, Agent replacement) const;
};

struct Placement {
  int facility = 0;
  Rat location;
};

bool operator==(const Placement& a, const Placement& b);
bool placement_less(const Placement& a, const Placement& b);

// A chosen set of facility placements: distinct facilities, kept sorted by
// facility id, locations in [0, 1]. Size-vs-k is validated at evaluation.
class Outcome {
 public:
  using List = boost::container::small_vector<Placement, 2>;

  static Outcome of(List placements);
  const List& placements() const { return placements_; }
  int size() const { return static_cast<int>(placements_.size()); }

  friend bool operator==(const Outcome& a, const Outcome& b);

 private:
  Outcome() = default;
  List placements_;
};

bool outcome_less(const Outcome& a, const Outcome& b);

// Finite-support distribution over outcomes. Entries stay sorted with
// pairwise-distinct outcomes; adding an existing outcome merges probability
// and zero-probability entries are dropped.
class Lottery {
 public:
  struct Entry {
    Rat probability;
    Outcome outcome;
  };
  using Entries = boost::container::small_vector<Entry, 4>;

  void add(const Rat& probability, Outcome outcome);
  void clear() { entries_.clear(); }
  const Entries& entries() const { return entries_; }
  Rat total_probability() const;
  bool sums_to_one() const { return total_probability() == 1; }

  static Lottery point_mass(Outcome outcome);

 private:
  Entries entries_;
};

enum class InformationSetting { General, KnownPreferences, KnownPositions };

// t_ij * (1 - |x_i - y_j|) terms combined per the instance utility class:
//   Sum      adds the terms of all placed facilities,
//   MinDist  takes the best placed facility the agent approves,
//   MaxDist  takes the worst term over every placed facility, so a placed
//            facility the agent does not approve pins the value at 0.
Rat agent_utility(const Instance& instance, int agent, const Outcome& outcome);

Rat social_welfare(const Instance& instance, const Outcome& outcome);

Rat expected_welfare(const Instance& instance, const Lottery& lottery);

// Utility of the agent's true position and preference under the lottery.
Rat expected_agent_utility(const Instance& instance, int agent, const Lottery& lottery);

// Lower median: with r approvers sorted ascending this is element ceil(r/2)
// (1-based). Empty approver sets yield nullopt.
std::optional<Rat> median_of_approvers(const Instance& instance, int facility);

Rat lower_median(std::vector<Rat> positions);

struct OptimalResult {
  Outcome outcome;
  Rat welfare;
};

// Welfare-maximizing placement of k of the m facilities.
//   k = 1:            per-facility optimum at the approvers' lower median.
//   k >= 2, Sum:      exact per-facility decomposition.
//   k >= 2, MaxDist:  exact; some optimum puts the whole subset at one point,
//                     the lower median of the agents approving all of it.
//   k >= 2, MinDist:  exact; locations can be restricted to agent positions,
//                     searched per facility subset.
// Ties resolve to the lowest facility ids, then the smallest locations.
OptimalResult optimal_choice(const Instance& instance, long long eval_cap = 50'000'000);

// Independent grid oracle: every size-k facility subset crossed with every
// tuple of candidate locations {0, 1/q, ..., 1} plus the agent positions.
OptimalResult optimal_welfare_bruteforce(const Instance& instance, int grid_den,
                                         long long eval_cap = 20'000'000);

}  // namespace facmech
