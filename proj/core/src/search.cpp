#include "facmech/search.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "facmech/corpus.hpp"
#include "facmech/io.hpp"
#include "facmech/parallel.hpp"

namespace facmech {

namespace {

using Json = nlohmann::ordered_json;

// With no agents at x the position is immaterial; pin it to the endpoint
// where facility 1's welfare peaks so the closed form matches the instance.
WorstCaseParams pinned(WorstCaseParams params) {
  if (params.ax == 0) params.x = params.a0 >= params.a1 ? Rat(0) : Rat(1);
  return params;
}

// Welfare of facility 1 at location y, restricted to the breakpoints.
Rat facility1_at_x(const WorstCaseParams& p) { return p.a0 + p.ax + (p.a1 - p.a0) * p.x; }
Rat facility1_at_0(const WorstCaseParams& p) { return p.a0 + p.ax * (1 - p.x); }
Rat facility1_at_1(const WorstCaseParams& p) { return p.ax * p.x + p.a1; }

void validate_params(const WorstCaseParams& p) {
  if (p.a0 < 0 || p.ax < 0 || p.a1 < 0 || p.b0 < 0 || p.b1 < 0) {
    throw std::invalid_argument("worst-case params: counts must be non-negative");
  }
  if (p.a0 + p.ax + p.a1 + p.b0 + p.b1 < 1) {
    throw std::invalid_argument("worst-case params: needs at least one agent");
  }
  if (p.x < 0 || p.x > 1) {
    throw std::invalid_argument("worst-case params: x must lie in [0, 1]");
  }
  if (p.b0 < p.b1) {
    throw std::invalid_argument("worst-case params: needs b0 >= b1");
  }
  Rat at_x = facility1_at_x(p);
  if (at_x < facility1_at_0(p) || at_x < facility1_at_1(p)) {
    throw std::invalid_argument("worst-case params: facility 1 must attain its optimum at x");
  }
  if (at_x < p.b0) {
    throw std::invalid_argument("worst-case params: facility 1 at x must beat facility 2");
  }
}

std::tuple<long long, long long, long long, long long, long long, long long, Rat> params_key(
    const WorstCaseParams& p) {
  return {p.a0 + p.ax + p.a1 + p.b0 + p.b1, p.ax, p.a0, p.a1, p.b0, p.b1, p.x};
}

long long count_tuples_with_sum_at_most(long long total) {
  // C(total + 3, 3) triples (a1, b0, b1): always tiny for desk-scale totals.
  return (total + 1) * (total + 2) * (total + 3) / 6;
}

struct Evaluation {
  bool infinite = false;
  Rat ratio;
};

Evaluation evaluate_ratio(const MechanismSpec& mechanism, const Instance& instance) {
  Rat welfare = expected_welfare(instance, apply_mechanism(mechanism, instance));
  Rat optimal = optimal_choice(instance).welfare;
  Evaluation eval;
  if (welfare == 0) {
    eval.infinite = optimal > 0;
    eval.ratio = eval.infinite ? Rat(0) : Rat(1);
  } else {
    eval.ratio = optimal / welfare;
  }
  return eval;
}

bool improves(const Evaluation& a, const Evaluation& b) {
  if (a.infinite) return !b.infinite;
  if (b.infinite) return false;
  return a.ratio > b.ratio;
}

struct RestartOutcome {
  Evaluation best;
  Instance witness;
  long long evals = 0;
  bool used = false;
};

RestartOutcome run_restart(const SearchConfig& config, std::uint64_t index, long long budget) {
  RestartOutcome out;
  if (budget <= 0) return out;
  std::uint64_t state = mix_seed(config.seed, index);
  Instance current = random_instance(state, config.n, config.m, config.k, config.utility_class,
                                     config.grid_den);
  Evaluation current_eval = evaluate_ratio(config.mechanism, current);
  out.evals = 1;

  const Rat step(1, config.grid_den);
  bool budget_left = out.evals < budget;
  while (budget_left) {
    bool moved = false;
    for (int i = 0; i < config.n && !moved && budget_left; ++i) {
      const Agent agent = current.agents[static_cast<std::size_t>(i)];
      boost::container::small_vector<Agent, 8> neighbors;
      if (agent.x >= step) neighbors.push_back(Agent{agent.x - step, agent.approve});
      if (agent.x + step <= 1) neighbors.push_back(Agent{agent.x + step, agent.approve});
      for (int j = 1; j <= config.m; ++j) {
        std::uint32_t mask = agent.approve.mask() ^ (1u << (j - 1));
        if (mask == 0) continue;
        neighbors.push_back(Agent{agent.x, Preference::from_mask(mask)});
      }
      for (const Agent& candidate : neighbors) {
        Instance next = current.with_agent(i, candidate);
        Evaluation next_eval = evaluate_ratio(config.mechanism, next);
        ++out.evals;
        if (improves(next_eval, current_eval)) {
          current = std::move(next);
          current_eval = std::move(next_eval);
          moved = true;
          break;
        }
        if (out.evals >= budget) {
          budget_left = false;
          break;
        }
      }
    }
    if (!moved) break;  // full sweep without strict improvement: plateau
    budget_left = budget_left && out.evals < budget;
  }

  out.best = std::move(current_eval);
  out.witness = std::move(current);
  out.used = true;
  return out;
}

Json instance_json(const Instance& instance) { return Json::parse(instance_to_json(instance)); }

std::string ratio_string(bool infinite, const Rat& ratio) {
  return infinite ? std::string("inf") : to_fraction_string(ratio);
}

}  // namespace

WorstCaseParams canonical_params(WorstCaseParams params) {
  params = pinned(params);
  if (params.ax > 0 && params.x == 0) {
    params.a0 += params.ax;
    params.ax = 0;
  } else if (params.ax > 0 && params.x == 1) {
    params.a1 += params.ax;
    params.ax = 0;
  }
  params = pinned(params);
  // Reflect the line about 1/2 when the mirror image is also a valid form
  // (b0 == b1) and orders the counts better.
  bool reflect = params.b0 == params.b1 &&
                 (params.a1 > params.a0 ||
                  (params.a1 == params.a0 && params.x > 1 - params.x));
  if (reflect) {
    std::swap(params.a0, params.a1);
    std::swap(params.b0, params.b1);
    params.x = 1 - params.x;
    params = pinned(params);
  }
  return params;
}

bool params_valid(const WorstCaseParams& params) {
  try {
    validate_params(pinned(params));
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Rat rd_closedform_ratio(const WorstCaseParams& params) {
  WorstCaseParams p = pinned(params);
  validate_params(p);
  Rat count = Rat(p.a0 + p.ax + p.a1 + p.b0 + p.b1);
  Rat numerator = count * facility1_at_x(p);
  Rat denominator = Rat((p.a0 + p.ax) * (p.a0 + p.ax) + p.a1 * p.a1 + p.b0 * p.b0 +
                        p.b1 * p.b1) +
                    2 * Rat(p.ax) * (p.a1 - p.a0) * p.x;
  return numerator / denominator;
}

Instance materialize(const WorstCaseParams& params) {
  WorstCaseParams p = pinned(params);
  validate_params(p);
  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(p.a0 + p.ax + p.a1 + p.b0 + p.b1));
  Preference first = Preference::from_ids({1});
  Preference second = Preference::from_ids({2});
  for (long long i = 0; i < p.a0; ++i) agents.push_back(Agent{Rat(0), first});
  for (long long i = 0; i < p.ax; ++i) agents.push_back(Agent{p.x, first});
  for (long long i = 0; i < p.a1; ++i) agents.push_back(Agent{Rat(1), first});
  for (long long i = 0; i < p.b0; ++i) agents.push_back(Agent{Rat(0), second});
  for (long long i = 0; i < p.b1; ++i) agents.push_back(Agent{Rat(1), second});
  return Instance::create(std::move(agents), 2, 1, UtilityClass::Sum);
}

MaximizeResult maximize_rd_closedform(long long max_total, int x_grid_den, long long eval_cap) {
  if (max_total < 1) throw std::invalid_argument("maximize: needs max_total >= 1");
  if (x_grid_den < 1) throw std::invalid_argument("maximize: needs x_grid_den >= 1");

  long long evals = 0;
  for (long long a0 = 0; a0 <= max_total; ++a0) {
    for (long long ax = 0; a0 + ax <= max_total; ++ax) {
      evals += count_tuples_with_sum_at_most(max_total - a0 - ax) *
               (ax == 0 ? 1 : x_grid_den + 1);
      if (evals > eval_cap) {
        throw std::length_error("maximize: needs over " + std::to_string(evals) +
                                " evaluations, above the eval cap (" +
                                std::to_string(eval_cap) + ")");
      }
    }
  }

  std::optional<MaximizeResult> best;
  std::optional<std::tuple<long long, long long, long long, long long, long long, long long, Rat>>
      best_key;
  for (long long a0 = 0; a0 <= max_total; ++a0) {
    for (long long ax = 0; a0 + ax <= max_total; ++ax) {
      for (long long a1 = 0; a0 + ax + a1 <= max_total; ++a1) {
        for (long long b0 = 0; a0 + ax + a1 + b0 <= max_total; ++b0) {
          for (long long b1 = 0; a0 + ax + a1 + b0 + b1 <= max_total; ++b1) {
            int x_steps = ax == 0 ? 0 : x_grid_den;
            for (int xn = 0; xn <= x_steps; ++xn) {
              WorstCaseParams params{a0, ax, a1, b0, b1, Rat(xn, x_grid_den)};
              params = pinned(params);
              if (!params_valid(params)) continue;
              Rat value = rd_closedform_ratio(params);
              if (best && value < best->value) continue;
              WorstCaseParams canonical = canonical_params(params);
              auto key = params_key(canonical);
              if (!best || value > best->value || key < *best_key) {
                best = MaximizeResult{canonical, value};
                best_key = key;
              }
            }
          }
        }
      }
    }
  }
  // max_total >= 1 guarantees at least the single-agent form is valid.
  return *best;
}

std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ ((stream + 1) * 0x9e3779b97f4a7c15ull);
  return splitmix_next(state);
}

Instance random_instance(std::uint64_t& state, int n, int m, int k, UtilityClass utility_class,
                         int grid_den) {
  if (n < 1) throw std::invalid_argument("random instance: needs n >= 1");
  if (grid_den < 1) throw std::invalid_argument("random instance: needs grid_den >= 1");
  if (m < 2 || m > 30) throw std::invalid_argument("random instance: needs m in [2, 30]");
  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  const std::uint64_t masks = (1ull << m) - 1;
  for (int i = 0; i < n; ++i) {
    long long numerator = static_cast<long long>(splitmix_next(state) %
                                                 static_cast<std::uint64_t>(grid_den + 1));
    std::uint32_t mask = static_cast<std::uint32_t>(1 + splitmix_next(state) % masks);
    agents.push_back(Agent{Rat(numerator, grid_den), Preference::from_mask(mask)});
  }
  return Instance::create(std::move(agents), m, k, utility_class);
}

SearchResult worst_case_search(const SearchConfig& config) {
  if (config.n < 1) throw std::invalid_argument("search: needs n >= 1");
  if (config.grid_den < 1) throw std::invalid_argument("search: needs grid_den >= 1");
  if (config.restarts < 1) throw std::invalid_argument("search: needs restarts >= 1");
  if (config.iterations < 1) throw std::invalid_argument("search: needs iterations >= 1");
  if (config.mechanism.kind != MechanismKind::KmMiddle && (config.m != 2 || config.k != 1)) {
    throw std::invalid_argument("search: " + to_string(config.mechanism) +
                                " requires m=2, k=1");
  }
  if (config.k < 1 || config.k > config.m) {
    throw std::invalid_argument("search: needs 1 <= k <= m");
  }

  const int restarts = config.restarts;
  auto budget_for = [&](int r) {
    return config.iterations / restarts + (r < config.iterations % restarts ? 1 : 0);
  };

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  unsigned threads = std::min<unsigned>(thread_budget(), static_cast<unsigned>(restarts));
  auto worker = [&](unsigned offset) {
    for (int r = static_cast<int>(offset); r < restarts; r += static_cast<int>(threads)) {
      outcomes[static_cast<std::size_t>(r)] =
          run_restart(config, static_cast<std::uint64_t>(r), budget_for(r));
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
    worker(0);
    for (std::thread& thread : pool) thread.join();
  }

  SearchResult result;
  result.mechanism = to_string(config.mechanism);
  result.seed = config.seed;
  std::optional<Evaluation> best;
  std::string best_json;
  for (const RestartOutcome& outcome : outcomes) {
    if (!outcome.used) continue;
    result.iterations += outcome.evals;
    std::string json = instance_to_json(outcome.witness);
    bool take = !best || improves(outcome.best, *best) ||
                (!improves(*best, outcome.best) && json < best_json);
    if (take) {
      best = outcome.best;
      best_json = std::move(json);
      result.witness = outcome.witness;
    }
  }
  result.max_ratio = best->ratio;
  result.infinite = best->infinite;
  return result;
}

ConjectureReport conjecture_scan(std::uint64_t seed, long long budget) {
  if (budget < 1) throw std::invalid_argument("conjecture: needs a positive budget");
  MechanismSpec mechanism;
  mechanism.kind = MechanismKind::RandomDictatorship;
  mechanism.tie_rule = DictatorTieRule::Proportional;
  const Rat threshold(3, 2);

  ConjectureReport report;
  report.seed = seed;
  report.budget = budget;

  std::optional<Evaluation> best;
  auto record = [&](std::string name, const Evaluation& eval, const Instance& witness) {
    bool exceeds = eval.infinite || eval.ratio > threshold;
    report.evidence.push_back(ConjectureEvidence{std::move(name), eval.ratio, eval.infinite,
                                                 exceeds});
    report.any_exceeds = report.any_exceeds || exceeds;
    if (!best || improves(eval, *best)) {
      best = eval;
      report.max_ratio = eval.ratio;
      report.infinite = eval.infinite;
      report.witness = witness;
    }
  };

  Instance canonical = rd_worst_case_instance();
  record("rd-worst-case", evaluate_ratio(mechanism, canonical), canonical);
  Instance prd = prd_instance();
  record("prd", evaluate_ratio(mechanism, prd), prd);

  SearchConfig config;
  config.mechanism = mechanism;
  config.n = 6;
  config.grid_den = 10;
  config.seed = seed;
  config.restarts = 20;
  config.iterations = budget;
  SearchResult search = worst_case_search(config);
  record("search", Evaluation{search.infinite, search.max_ratio}, search.witness);

  report.iterations = 2 + search.iterations;
  return report;
}

std::string search_result_to_json(const SearchResult& result) {
  Json out;
  out["schema_version"] = 1;
  out["kind"] = "search";
  out["mechanism"] = result.mechanism;
  out["seed"] = result.seed;
  out["iterations"] = result.iterations;
  out["max_ratio"] = ratio_string(result.infinite, result.max_ratio);
  out["witness_instance"] = instance_json(result.witness);
  return out.dump(2) + "\n";
}

std::string conjecture_report_to_json(const ConjectureReport& report) {
  Json out;
  out["schema_version"] = 1;
  out["kind"] = "conjecture";
  out["mechanism"] = "rd:proportional";
  out["seed"] = report.seed;
  out["budget"] = report.budget;
  out["iterations"] = report.iterations;
  out["threshold"] = "3/2";
  out["max_ratio"] = ratio_string(report.infinite, report.max_ratio);
  out["exceeds_threshold"] = report.any_exceeds;
  out["witness_instance"] = instance_json(report.witness);
  Json evidence = Json::array();
  for (const ConjectureEvidence& entry : report.evidence) {
    Json row;
    row["name"] = entry.name;
    row["ratio"] = ratio_string(entry.infinite, entry.ratio);
    row["exceeds"] = entry.exceeds;
    evidence.push_back(std::move(row));
  }
  out["evidence"] = std::move(evidence);
  return out.dump(2) + "\n";
}

}  // namespace facmech
