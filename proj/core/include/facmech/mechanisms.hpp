#pragma once

#include "facmech/model.hpp"

#include <optional>
#include <string>

namespace facmech {

// Randomized mechanisms return their full lottery; deterministic ones return
// a point mass. Nothing here samples.

enum class MechanismKind {
  Middle,
  KmMiddle,
  RandomMedian,
  Proportional,
  Mirror,
  RandomDictatorship,
};

// Rule applied when a dictator approves both facilities.
enum class DictatorTieRule { Optimal, Fixed, Proportional };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::Middle;
  Rat q1 = Rat(1, 2);                                   // RandomMedian: probability of facility 1
  DictatorTieRule tie_rule = DictatorTieRule::Optimal;  // RandomDictatorship only
  Rat fixed_p = Rat(1, 2);                              // tie rule Fixed: probability of facility 1
};

// Accepted strings: "middle", "km-middle", "random-median:<q1>" (also
// "random-median:<q1>,<q2>" with q1+q2=1), "proportional", "mirror",
// "rd:optimal", "rd:fixed:<p>", "rd:proportional".
std::optional<MechanismSpec> parse_mechanism(const std::string& name);
std::string to_string(const MechanismSpec& spec);

// Everything except km-middle requires m=2, k=1; km-middle takes any (m, k).
Lottery apply_mechanism(const MechanismSpec& spec, const Instance& instance);

Lottery middle_rule(const Instance& instance);
Lottery km_middle_rule(const Instance& instance);
Lottery random_median_rule(const Instance& instance, const Rat& q1);
Lottery proportional_rule(const Instance& instance);
Lottery mirror_rule(const Instance& instance);
Lottery random_dictatorship_rule(const Instance& instance, DictatorTieRule tie_rule,
                                 const Rat& fixed_p);

// Worst-case guarantee the ratio command checks a result against. The
// proportional rule's bound (1+sqrt(3))/2 is irrational, so it is compared
// through a squared rational inequality instead of a Rat value.
enum class BoundKind { None, RationalValue, ProportionalIrrational };

struct DocumentedBound {
  BoundKind kind = BoundKind::None;
  Rat value;
};

DocumentedBound documented_bound(const MechanismSpec& spec);

// ratio <= (1+sqrt(3))/2, decided exactly: with L = 2*ratio^2 - 2, the bound
// holds iff L <= 0 or L^2 <= 3.
bool within_proportional_bound(const Rat& ratio);

bool within_documented_bound(const MechanismSpec& spec, const Rat& ratio, bool infinite = false);

}  // namespace facmech
