#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facmech/mechanisms.hpp"
#include "facmech/model.hpp"

namespace facmech {

// The five-count family the dictatorship rule's worst cases reduce to:
// a0/ax/a1 agents approve facility 1 at positions 0/x/1, b0/b1 agents
// approve facility 2 at 0/1.
struct WorstCaseParams {
  long long a0 = 0;
  long long ax = 0;
  long long a1 = 0;
  long long b0 = 0;
  long long b1 = 0;
  Rat x;
};

// Pins x to the heavier endpoint when ax = 0, folds ax agents sitting at an
// endpoint into that endpoint's count, and reflects the line when the
// mirrored form is valid and has the larger count at 0.
WorstCaseParams canonical_params(WorstCaseParams params);

bool params_valid(const WorstCaseParams& params);

// Exact ratio of the optimal-tie-break dictatorship rule on
// materialize(params):
//   n * (a0 + ax + (a1-a0)x) / ((a0+ax)^2 + a1^2 + b0^2 + b1^2 + 2ax(a1-a0)x)
// Throws invalid_argument when the params are not a worst-case form (x must
// be a location where facility 1 attains the instance optimum, b0 >= b1).
Rat rd_closedform_ratio(const WorstCaseParams& params);

Instance materialize(const WorstCaseParams& params);

struct MaximizeResult {
  WorstCaseParams argmax;
  Rat value;
};

// Exhaustive maximum of rd_closedform_ratio over all valid parameter tuples
// with at most max_total agents and x on the 1/x_grid_den grid. Ties prefer
// the canonical form with fewest agents, then fewest interior agents, then
// the lexicographically smallest remaining fields.
MaximizeResult maximize_rd_closedform(long long max_total, int x_grid_den,
                                      long long eval_cap = 50'000'000);

struct SearchConfig {
  MechanismSpec mechanism;
  int n = 4;
  int m = 2;
  int k = 1;
  UtilityClass utility_class = UtilityClass::Sum;
  int grid_den = 8;  // position grid: steps of 1/grid_den
  std::uint64_t seed = 0;
  int restarts = 16;
  long long iterations = 10'000;  // total evaluation budget over all restarts
};

struct SearchResult {
  std::string mechanism;
  std::uint64_t seed = 0;
  long long iterations = 0;  // evaluations actually spent
  Rat max_ratio;
  bool infinite = false;
  Instance witness;
};

// Seeded random restarts plus first-improvement hill climbing over one-agent
// moves: position +-1/grid_den and single-approval flips. Deterministic for
// a fixed config; FM_THREADS only partitions the restarts.
SearchResult worst_case_search(const SearchConfig& config);

std::uint64_t splitmix_next(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// One instance with uniform grid positions and uniform non-empty approval
// sets, advancing the passed RNG state.
Instance random_instance(std::uint64_t& state, int n, int m, int k, UtilityClass utility_class,
                         int grid_den);

struct ConjectureEvidence {
  std::string name;
  Rat ratio;
  bool infinite = false;
  bool exceeds = false;  // strictly above 3/2
};

struct ConjectureReport {
  std::uint64_t seed = 0;
  long long budget = 0;
  long long iterations = 0;
  Rat max_ratio;
  bool infinite = false;
  Instance witness;
  bool any_exceeds = false;
  std::vector<ConjectureEvidence> evidence;
};

// Probes the proportional-tie-break dictatorship rule: its canonical
// worst case, the 50-agent two-sided instance, and a hill-climbing search
// with the given budget. Records, without failing, whether anything
// exceeds 3/2.
ConjectureReport conjecture_scan(std::uint64_t seed, long long budget);

std::string search_result_to_json(const SearchResult& result);
std::string conjecture_report_to_json(const ConjectureReport& report);

}  // namespace facmech
