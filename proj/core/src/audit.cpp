#include "facmech/audit.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "facmech/io.hpp"

namespace facmech {

namespace {

using Json = nlohmann::ordered_json;

constexpr long long kSaturated = std::numeric_limits<long long>::max();

long long saturating_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

long long saturating_add(long long a, long long b) {
  if (a > kSaturated - b) return kSaturated;
  return a + b;
}

std::vector<Rat> misreport_positions(const Instance& instance, const DeviationSpace& space) {
  std::vector<Rat> positions;
  for (int i = 0; i <= space.grid_den; ++i) {
    positions.emplace_back(i, space.grid_den);
  }
  if (space.include_positions) {
    for (const Agent& agent : instance.agents) positions.push_back(agent.x);
    positions.emplace_back(0);
    positions.emplace_back(1, 2);
    positions.emplace_back(1);
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  return positions;
}

// All admissible reports for one agent, excluding her true report, in
// position-major, preference-mask-minor order.
std::vector<Agent> deviation_options(const Instance& instance, const DeviationSpace& space,
                                     const std::vector<Rat>& grid_positions, int agent) {
  const Agent& truth = instance.agents[static_cast<std::size_t>(agent)];
  std::vector<Rat> positions;
  if (space.setting == InformationSetting::KnownPositions) {
    positions.push_back(truth.x);
  } else {
    positions = grid_positions;
  }
  std::vector<Preference> preferences;
  if (space.setting == InformationSetting::KnownPreferences) {
    preferences.push_back(truth.approve);
  } else {
    for (unsigned mask = 1; mask < (1u << instance.m); ++mask) {
      preferences.push_back(Preference::from_mask(mask));
    }
  }
  std::vector<Agent> options;
  for (const Rat& x : positions) {
    for (const Preference& preference : preferences) {
      if (x == truth.x && preference == truth.approve) continue;
      options.push_back(Agent{x, preference});
    }
  }
  return options;
}

bool next_combination(std::vector<int>& members, int n) {
  int c = static_cast<int>(members.size());
  for (int i = c - 1; i >= 0; --i) {
    if (members[static_cast<std::size_t>(i)] < n - (c - i)) {
      ++members[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < c; ++j) {
        members[static_cast<std::size_t>(j)] = members[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

std::string verdict_string(bool passed) { return passed ? "PASS" : "FAIL"; }

Json violation_to_json(const Violation& violation) {
  Json coalition = Json::array();
  Json misreports = Json::array();
  Json before = Json::array();
  Json after = Json::array();
  for (const Misreport& member : violation.members) {
    coalition.push_back(member.agent + 1);
    Json report;
    report["agent"] = member.agent + 1;
    report["x"] = to_fraction_string(member.report.x);
    report["approve"] = member.report.approve.ids();
    misreports.push_back(std::move(report));
    before.push_back(to_fraction_string(member.utility_before));
    after.push_back(to_fraction_string(member.utility_after));
  }
  Json out;
  out["coalition"] = std::move(coalition);
  out["misreports"] = std::move(misreports);
  out["utilities_before"] = std::move(before);
  out["utilities_after"] = std::move(after);
  return out;
}

}  // namespace

AuditReport audit_group_strategyproof(const MechanismSpec& mechanism, const Instance& instance,
                                      const DeviationSpace& space, int max_coalition) {
  if (space.grid_den < 1) {
    throw std::invalid_argument("audit: position grid denominator must be positive");
  }
  AuditReport report;
  report.mechanism = to_string(mechanism);
  report.instance_id = instance_digest(instance);
  report.setting = space.setting;
  report.max_coalition = max_coalition;
  if (max_coalition <= 0) return report;

  const int n = instance.n();
  max_coalition = std::min(max_coalition, n);
  report.max_coalition = max_coalition;

  std::vector<Rat> grid_positions = misreport_positions(instance, space);
  std::vector<std::vector<Agent>> options;
  options.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    options.push_back(deviation_options(instance, space, grid_positions, i));
  }

  long long total = 0;
  for (int size = 1; size <= max_coalition; ++size) {
    std::vector<int> members(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) members[static_cast<std::size_t>(i)] = i;
    do {
      long long product = 1;
      for (int member : members) {
        product = saturating_mul(
            product, static_cast<long long>(options[static_cast<std::size_t>(member)].size()));
      }
      total = saturating_add(total, product);
    } while (next_combination(members, n));
  }
  if (total > space.eval_cap) {
    throw std::length_error("audit: deviation space needs " +
                            (total == kSaturated ? std::string("over ") + std::to_string(total)
                                                 : std::to_string(total)) +
                            " evaluations, above the eval cap (" +
                            std::to_string(space.eval_cap) + ")");
  }

  Lottery truthful = apply_mechanism(mechanism, instance);
  std::vector<Rat> before;
  before.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) before.push_back(expected_agent_utility(instance, i, truthful));

  for (int size = 1; size <= max_coalition; ++size) {
    std::vector<int> members(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) members[static_cast<std::size_t>(i)] = i;
    do {
      bool feasible = true;
      for (int member : members) {
        if (options[static_cast<std::size_t>(member)].empty()) feasible = false;
      }
      if (!feasible) continue;
      std::vector<std::size_t> pick(static_cast<std::size_t>(size), 0);
      while (true) {
        Instance deviated = instance;
        for (int i = 0; i < size; ++i) {
          int member = members[static_cast<std::size_t>(i)];
          deviated.agents[static_cast<std::size_t>(member)] =
              options[static_cast<std::size_t>(member)][pick[static_cast<std::size_t>(i)]];
        }
        Lottery lottery = apply_mechanism(mechanism, deviated);
        ++report.deviations_checked;
        bool all_gain = true;
        std::vector<Rat> after(static_cast<std::size_t>(size));
        for (int i = 0; i < size && all_gain; ++i) {
          int member = members[static_cast<std::size_t>(i)];
          after[static_cast<std::size_t>(i)] = expected_agent_utility(instance, member, lottery);
          if (!(after[static_cast<std::size_t>(i)] >
                before[static_cast<std::size_t>(member)])) {
            all_gain = false;
          }
        }
        if (all_gain) {
          Violation violation;
          for (int i = 0; i < size; ++i) {
            int member = members[static_cast<std::size_t>(i)];
            violation.members.push_back(Misreport{
                member,
                options[static_cast<std::size_t>(member)][pick[static_cast<std::size_t>(i)]],
                before[static_cast<std::size_t>(member)], after[static_cast<std::size_t>(i)]});
          }
          report.violations.push_back(std::move(violation));
        }
        int slot = size - 1;
        while (slot >= 0) {
          std::size_t limit =
              options[static_cast<std::size_t>(members[static_cast<std::size_t>(slot)])].size();
          if (++pick[static_cast<std::size_t>(slot)] < limit) break;
          pick[static_cast<std::size_t>(slot)] = 0;
          --slot;
        }
        if (slot < 0) break;
      }
    } while (next_combination(members, n));
  }

  report.passed = report.violations.empty();
  return report;
}

AuditReport audit_strategyproof(const MechanismSpec& mechanism, const Instance& instance,
                                const DeviationSpace& space) {
  return audit_group_strategyproof(mechanism, instance, space, 1);
}

RatioReport approximation_ratio(const MechanismSpec& mechanism, const Instance& instance) {
  RatioReport report;
  report.mechanism = to_string(mechanism);
  report.instance_id = instance_digest(instance);
  report.mechanism_welfare = expected_welfare(instance, apply_mechanism(mechanism, instance));
  report.optimal_welfare = optimal_choice(instance).welfare;
  if (report.mechanism_welfare == 0) {
    report.infinite = report.optimal_welfare > 0;
    report.ratio = report.infinite ? Rat(0) : Rat(1);
  } else {
    report.ratio = report.optimal_welfare / report.mechanism_welfare;
  }
  report.has_bound = documented_bound(mechanism).kind != BoundKind::None;
  report.within_bound = within_documented_bound(mechanism, report.ratio, report.infinite);
  return report;
}

std::string audit_report_to_json(const AuditReport& report) {
  Json out;
  out["schema_version"] = 1;
  out["kind"] = "audit";
  out["mechanism"] = report.mechanism;
  out["instance_id"] = report.instance_id;
  out["setting"] = to_string(report.setting);
  out["max_coalition"] = report.max_coalition;
  out["verdict"] = verdict_string(report.passed);
  out["deviations_checked"] = report.deviations_checked;
  Json violations = Json::array();
  for (const Violation& violation : report.violations) {
    violations.push_back(violation_to_json(violation));
  }
  out["violations"] = std::move(violations);
  return out.dump(2) + "\n";
}

std::string audit_report_to_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "mechanism,instance_id,setting,verdict,n_deviations,first_violation_agent,"
         "utility_before,utility_after\n";
  out << report.mechanism << ',' << report.instance_id << ',' << to_string(report.setting) << ','
      << verdict_string(report.passed) << ',' << report.deviations_checked << ',';
  if (!report.violations.empty()) {
    const Misreport& first = report.violations.front().members.front();
    out << (first.agent + 1) << ',' << to_fraction_string(first.utility_before) << ','
        << to_fraction_string(first.utility_after);
  } else {
    out << ",,";
  }
  out << '\n';
  return out.str();
}

std::string ratio_report_to_json(const RatioReport& report) {
  Json out;
  out["schema_version"] = 1;
  out["kind"] = "ratio";
  out["mechanism"] = report.mechanism;
  out["instance_id"] = report.instance_id;
  out["mechanism_welfare"] = to_fraction_string(report.mechanism_welfare);
  out["optimal_welfare"] = to_fraction_string(report.optimal_welfare);
  out["ratio"] = report.infinite ? std::string("inf") : to_fraction_string(report.ratio);
  out["has_bound"] = report.has_bound;
  out["within_bound"] = report.within_bound;
  return out.dump(2) + "\n";
}

}  // namespace facmech
