#include <benchmark/benchmark.h>

#include <vector>

#include "facmech/audit.hpp"
#include "facmech/corpus.hpp"
#include "facmech/mechanisms.hpp"
#include "facmech/model.hpp"
#include "facmech/search.hpp"

namespace fm = facmech;

namespace {

fm::Instance spread_instance(int n, int m, int k, fm::UtilityClass klass) {
  std::uint64_t state = fm::mix_seed(42, 7);
  std::vector<fm::Agent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    fm::Instance one = fm::random_instance(state, 1, m, k, klass, 64);
    agents.push_back(one.agents.front());
  }
  return fm::Instance::create(std::move(agents), m, k, klass);
}

void bm_optimal_choice_two_facilities(benchmark::State& state) {
  fm::Instance instance = spread_instance(50, 2, 1, fm::UtilityClass::Sum);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fm::optimal_choice(instance));
  }
}
BENCHMARK(bm_optimal_choice_two_facilities);

void bm_optimal_choice_min_class(benchmark::State& state) {
  fm::Instance instance = spread_instance(12, 5, 2, fm::UtilityClass::MinDist);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fm::optimal_choice(instance));
  }
}
BENCHMARK(bm_optimal_choice_min_class);

void bm_dictatorship_lottery(benchmark::State& state) {
  fm::Instance instance = fm::prd_instance();
  fm::MechanismSpec rd;
  rd.kind = fm::MechanismKind::RandomDictatorship;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fm::apply_mechanism(rd, instance));
  }
}
BENCHMARK(bm_dictatorship_lottery);

void bm_unilateral_audit(benchmark::State& state) {
  fm::Instance instance = fm::fig2_pair().base;
  fm::MechanismSpec middle;
  fm::DeviationSpace space;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fm::audit_strategyproof(middle, instance, space));
  }
}
BENCHMARK(bm_unilateral_audit);

}  // namespace

BENCHMARK_MAIN();
