#pragma once

#include <optional>
#include <string>
#include <vector>

#include "facmech/model.hpp"

namespace facmech {

// A named instance plus the single-attribute variant used by the
// lower-bound and manipulation arguments.
struct InstancePair {
  Instance base;
  Instance variant;
};

// Four agents, two per facility, one pair at eps and one at 1; the variant
// moves the facility-1 approver at eps to 1.
InstancePair fig1_pair(const Rat& eps = Rat(1, 100));

// Agents at 0, 1/6, 5/6, 1; the variant flips the 1/6 agent's preference
// from both facilities to facility 2 only.
InstancePair fig2_pair();

// Two agents per facility at eps and 1-eps; the variant moves the
// facility-1 approver at 1-eps to eps.
InstancePair random_median_lb_pair(const Rat& eps = Rat(1, 100));

// One facility-1 approver at 0, n-2 dual approvers at 1/2-eps, one
// facility-2 approver at 1; the variant moves the facility-2 approver to
// 1/2-eps.
InstancePair fig3_pair(int n = 4, const Rat& eps = Rat(1, 100));

// 15 dual approvers and 15 facility-1 approvers at 0, 10 facility-1 and 10
// facility-2 approvers at 1.
Instance prd_instance();

// m agents at 1/2, agent i approving exactly facility i; choose k.
Instance km_nongsp_instance(int m = 4, int k = 2);

// Two approvers per facility, at eps and at 1. Step j moves the eps
// approver of facility k+j to 1; the sequence has m-k+1 instances.
std::vector<Instance> km_lb_sequence(int m, int k, const Rat& eps = Rat(1, 100));

// Three facility-1 approvers at 0, one at 1, one facility-2 approver at
// each endpoint: the dictatorship rule's worst case.
Instance rd_worst_case_instance();

// Resolves names like "fig1", "fig1:1/100:prime", "fig3:6:1/10",
// "km-lb:4:2:1/100:2". Unknown grammar gives nullopt; parameter values the
// constructors reject propagate as invalid_argument.
std::optional<Instance> lookup_instance(const std::string& name);

std::vector<std::string> corpus_names();

}  // namespace facmech
