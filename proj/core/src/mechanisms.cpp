#include "facmech/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace facmech {

namespace {

void require_two_one(const Instance& instance, const char* name) {
  if (instance.m != 2 || instance.k != 1) {
    throw std::invalid_argument(std::string(name) + ": requires m=2, k=1, got m=" +
                                std::to_string(instance.m) + ", k=" + std::to_string(instance.k));
  }
}

void require_probability(const Rat& value, const char* what) {
  if (value < 0 || value > 1) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

Rat median_or_half(const Instance& instance, int facility) {
  std::optional<Rat> median = median_of_approvers(instance, facility);
  return median ? *median : Rat(1, 2);
}

Outcome single(int facility, Rat location) {
  return Outcome::of({Placement{facility, std::move(location)}});
}

}  // namespace

Lottery middle_rule(const Instance& instance) {
  require_two_one(instance, "middle");
  int best = 1;
  for (int j = 2; j <= instance.m; ++j) {
    if (instance.approver_count(j) > instance.approver_count(best)) best = j;
  }
  return Lottery::point_mass(single(best, Rat(1, 2)));
}

Lottery km_middle_rule(const Instance& instance) {
  std::vector<int> facilities(static_cast<std::size_t>(instance.m));
  std::iota(facilities.begin(), facilities.end(), 1);
  std::vector<int> counts(static_cast<std::size_t>(instance.m + 1), 0);
  for (int j = 1; j <= instance.m; ++j) {
    counts[static_cast<std::size_t>(j)] = instance.approver_count(j);
  }
  std::stable_sort(facilities.begin(), facilities.end(), [&](int a, int b) {
    if (counts[static_cast<std::size_t>(a)] != counts[static_cast<std::size_t>(b)]) {
      return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  Outcome::List placements;
  for (int i = 0; i < instance.k; ++i) {
    placements.push_back(Placement{facilities[static_cast<std::size_t>(i)], Rat(1, 2)});
  }
  return Lottery::point_mass(Outcome::of(std::move(placements)));
}

Lottery random_median_rule(const Instance& instance, const Rat& q1) {
  require_two_one(instance, "random-median");
  require_probability(q1, "random-median: q1");
  Lottery lottery;
  lottery.add(q1, single(1, median_or_half(instance, 1)));
  lottery.add(1 - q1, single(2, median_or_half(instance, 2)));
  return lottery;
}

Lottery proportional_rule(const Instance& instance) {
  require_two_one(instance, "proportional");
  long long n1 = instance.approver_count(1);
  long long n2 = instance.approver_count(2);
  return random_median_rule(instance, Rat(n1, n1 + n2));
}

Lottery mirror_rule(const Instance& instance) {
  require_two_one(instance, "mirror");
  long long n1 = instance.approver_count(1);
  long long n2 = instance.approver_count(2);
  long long large = std::max(n1, n2);
  long long small = std::min(n1, n2);
  Rat alpha(3 * large - 2 * small, 4 * large - 2 * small);
  return random_median_rule(instance, n1 >= n2 ? alpha : 1 - alpha);
}

Lottery random_dictatorship_rule(const Instance& instance, DictatorTieRule tie_rule,
                                 const Rat& fixed_p) {
  require_two_one(instance, "rd");
  require_probability(fixed_p, "rd:fixed: p");
  const Rat unit(1, instance.n());
  std::optional<int> optimal_facility;
  std::optional<Rat> proportional_q1;
  Lottery lottery;
  for (const Agent& agent : instance.agents) {
    bool first = agent.approve.approves(1);
    bool second = agent.approve.approves(2);
    if (first && second) {
      switch (tie_rule) {
        case DictatorTieRule::Optimal: {
          if (!optimal_facility) {
            optimal_facility = optimal_choice(instance).outcome.placements()[0].facility;
          }
          lottery.add(unit, single(*optimal_facility, agent.x));
          break;
        }
        case DictatorTieRule::Fixed: {
          lottery.add(unit * fixed_p, single(1, agent.x));
          lottery.add(unit * (1 - fixed_p), single(2, agent.x));
          break;
        }
        case DictatorTieRule::Proportional: {
          if (!proportional_q1) {
            long long n1 = instance.approver_count(1);
            long long n2 = instance.approver_count(2);
            proportional_q1 = Rat(n1, n1 + n2);
          }
          lottery.add(unit * *proportional_q1, single(1, agent.x));
          lottery.add(unit * (1 - *proportional_q1), single(2, agent.x));
          break;
        }
      }
    } else {
      lottery.add(unit, single(first ? 1 : 2, agent.x));
    }
  }
  return lottery;
}

Lottery apply_mechanism(const MechanismSpec& spec, const Instance& instance) {
  switch (spec.kind) {
    case MechanismKind::Middle:
      return middle_rule(instance);
    case MechanismKind::KmMiddle:
      return km_middle_rule(instance);
    case MechanismKind::RandomMedian:
      return random_median_rule(instance, spec.q1);
    case MechanismKind::Proportional:
      return proportional_rule(instance);
    case MechanismKind::Mirror:
      return mirror_rule(instance);
    case MechanismKind::RandomDictatorship:
      return random_dictatorship_rule(instance, spec.tie_rule, spec.fixed_p);
  }
  throw std::logic_error("apply_mechanism: unknown mechanism kind");
}

std::optional<MechanismSpec> parse_mechanism(const std::string& name) {
  MechanismSpec spec;
  if (name == "middle") {
    spec.kind = MechanismKind::Middle;
    return spec;
  }
  if (name == "km-middle") {
    spec.kind = MechanismKind::KmMiddle;
    return spec;
  }
  if (name == "proportional") {
    spec.kind = MechanismKind::Proportional;
    return spec;
  }
  if (name == "mirror") {
    spec.kind = MechanismKind::Mirror;
    return spec;
  }
  if (name == "rd:optimal") {
    spec.kind = MechanismKind::RandomDictatorship;
    spec.tie_rule = DictatorTieRule::Optimal;
    return spec;
  }
  if (name == "rd:proportional") {
    spec.kind = MechanismKind::RandomDictatorship;
    spec.tie_rule = DictatorTieRule::Proportional;
    return spec;
  }
  const std::string fixed_prefix = "rd:fixed:";
  if (name.rfind(fixed_prefix, 0) == 0) {
    std::optional<Rat> p = parse_rational(name.substr(fixed_prefix.size()));
    if (!p || *p < 0 || *p > 1) return std::nullopt;
    spec.kind = MechanismKind::RandomDictatorship;
    spec.tie_rule = DictatorTieRule::Fixed;
    spec.fixed_p = std::move(*p);
    return spec;
  }
  const std::string median_prefix = "random-median:";
  if (name.rfind(median_prefix, 0) == 0) {
    std::string rest = name.substr(median_prefix.size());
    std::size_t comma = rest.find(',');
    std::optional<Rat> q1;
    if (comma == std::string::npos) {
      q1 = parse_rational(rest);
    } else {
      q1 = parse_rational(rest.substr(0, comma));
      std::optional<Rat> q2 = parse_rational(rest.substr(comma + 1));
      if (!q1 || !q2 || *q1 + *q2 != 1) return std::nullopt;
    }
    if (!q1 || *q1 < 0 || *q1 > 1) return std::nullopt;
    spec.kind = MechanismKind::RandomMedian;
    spec.q1 = std::move(*q1);
    return spec;
  }
  return std::nullopt;
}

std::string to_string(const MechanismSpec& spec) {
  switch (spec.kind) {
    case MechanismKind::Middle:
      return "middle";
    case MechanismKind::KmMiddle:
      return "km-middle";
    case MechanismKind::RandomMedian:
      return "random-median:" + to_fraction_string(spec.q1);
    case MechanismKind::Proportional:
      return "proportional";
    case MechanismKind::Mirror:
      return "mirror";
    case MechanismKind::RandomDictatorship:
      switch (spec.tie_rule) {
        case DictatorTieRule::Optimal:
          return "rd:optimal";
        case DictatorTieRule::Fixed:
          return "rd:fixed:" + to_fraction_string(spec.fixed_p);
        case DictatorTieRule::Proportional:
          return "rd:proportional";
      }
  }
  throw std::logic_error("to_string: unknown mechanism spec");
}

DocumentedBound documented_bound(const MechanismSpec& spec) {
  switch (spec.kind) {
    case MechanismKind::Middle:
    case MechanismKind::KmMiddle:
      return {BoundKind::RationalValue, Rat(2)};
    case MechanismKind::Mirror:
      return {BoundKind::RationalValue, Rat(4, 3)};
    case MechanismKind::Proportional:
      return {BoundKind::ProportionalIrrational, Rat(0)};
    case MechanismKind::RandomDictatorship:
      if (spec.tie_rule == DictatorTieRule::Optimal) {
        return {BoundKind::RationalValue, Rat(3, 2)};
      }
      return {BoundKind::None, Rat(0)};
    case MechanismKind::RandomMedian:
      return {BoundKind::None, Rat(0)};
  }
  throw std::logic_error("documented_bound: unknown mechanism kind");
}

bool within_proportional_bound(const Rat& ratio) {
  Rat l = 2 * ratio * ratio - 2;
  if (l <= 0) return true;
  return l * l <= 3;
}

bool within_documented_bound(const MechanismSpec& spec, const Rat& ratio, bool infinite) {
  DocumentedBound bound = documented_bound(spec);
  if (infinite) return false;
  if (bound.kind == BoundKind::None) return true;
  if (bound.kind == BoundKind::RationalValue) return ratio <= bound.value;
  return within_proportional_bound(ratio);
}

}  // namespace facmech
