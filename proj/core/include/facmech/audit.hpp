#pragma once

#include <string>
#include <vector>

#include "facmech/mechanisms.hpp"
#include "facmech/model.hpp"

namespace facmech {

// Which misreports an audit explores. Position misreports range over the grid
// {0, 1/q, ..., 1} (optionally extended by the true positions, 0, 1/2, 1);
// preference misreports range over all non-empty approval sets.
struct DeviationSpace {
  InformationSetting setting = InformationSetting::General;
  int grid_den = 4;
  bool include_positions = true;
  long long eval_cap = 20'000'000;
};

struct Misreport {
  int agent = 0;  // index into Instance::agents
  Agent report;
  Rat utility_before;
  Rat utility_after;
};

// A joint misreport under which every listed member strictly gains.
struct Violation {
  std::vector<Misreport> members;  // ascending agent index
};

struct AuditReport {
  std::string mechanism;
  std::string instance_id;
  InformationSetting setting = InformationSetting::General;
  int max_coalition = 1;
  bool passed = true;  // no violation within the searched space; not a proof
  long long deviations_checked = 0;
  std::vector<Violation> violations;
};

// Enumerates every admissible unilateral misreport of every agent; fails iff
// some deviation strictly raises the deviator's expected utility, measured
// with her true position and preference.
AuditReport audit_strategyproof(const MechanismSpec& mechanism, const Instance& instance,
                                const DeviationSpace& space);

// Same, over joint misreports of every coalition of size 1..max_coalition;
// fails iff some joint misreport strictly improves every coalition member.
AuditReport audit_group_strategyproof(const MechanismSpec& mechanism, const Instance& instance,
                                      const DeviationSpace& space, int max_coalition);

struct RatioReport {
  std::string mechanism;
  std::string instance_id;
  Rat mechanism_welfare;
  Rat optimal_welfare;
  bool infinite = false;  // mechanism welfare 0 while the optimum is positive
  Rat ratio;              // optimal / mechanism welfare; 1 when both are zero
  bool has_bound = false;
  bool within_bound = true;
};

RatioReport approximation_ratio(const MechanismSpec& mechanism, const Instance& instance);

std::string audit_report_to_json(const AuditReport& report);
std::string audit_report_to_csv(const AuditReport& report);
std::string ratio_report_to_json(const RatioReport& report);

}  // namespace facmech
