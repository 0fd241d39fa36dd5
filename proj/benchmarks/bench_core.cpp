#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "nestline/geometry.hpp"
#include "nestline/instance.hpp"
#include "nestline/model.hpp"
#include "nestline/seeding.hpp"

using namespace nestline;

namespace {

const NestingInstance& instance(const std::string& name) {
  static std::map<std::string, NestingInstance> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, parse_instance(std::string(NESTLINE_DATA_DIR) + "/" + name + ".json")).first;
  }
  return it->second;
}

const char* const kInstances[] = {"poly1a", "jakobs1", "poly2a"};

std::vector<double> seed_point(const NlpProblem& problem, const NestingInstance& inst) {
  const auto seed = generate_start(inst.strip_width, problem.pieces(), {10, 1.0, 0});
  return problem.encode(seed.length, seed.placements, seed.lines);
}

void BM_Constraints(benchmark::State& state) {
  const auto& inst = instance(kInstances[state.range(0)]);
  const auto problem = build_problem(inst.strip_width, expand_pieces(inst));
  const auto v = seed_point(problem, inst);
  std::vector<double> g(problem.constraint_count());
  for (auto _ : state) {
    problem.constraints(v, g);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetLabel(inst.name);
  state.counters["rows"] = static_cast<double>(problem.constraint_count());
}
BENCHMARK(BM_Constraints)->DenseRange(0, 2);

void BM_WeightedGradient(benchmark::State& state) {
  const auto& inst = instance(kInstances[state.range(0)]);
  const auto problem = build_problem(inst.strip_width, expand_pieces(inst));
  const auto v = seed_point(problem, inst);
  std::vector<double> w(problem.constraint_count(), 1.0), grad(problem.dimension());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0);
    problem.add_weighted_constraint_gradients(v, w, grad);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetLabel(inst.name);
}
BENCHMARK(BM_WeightedGradient)->DenseRange(0, 2);

void BM_BottomLeftIteration(benchmark::State& state) {
  const auto& inst = instance(kInstances[state.range(0)]);
  const auto pieces = expand_pieces(inst);
  const auto masks = build_masks(pieces, inst.strip_width, 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto layout = generate_start(inst.strip_width, pieces, {1, 1.0, seed++}, &masks);
    benchmark::DoNotOptimize(layout.length);
  }
  state.SetLabel(inst.name);
}
BENCHMARK(BM_BottomLeftIteration)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_Decompose(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  std::uniform_real_distribution<double> radius(0.4, 1.0);
  Polygon star;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * 3.14159265358979323846 * k / n;
    const double r = k % 2 ? radius(rng) : 1.0;
    star.push_back({r * std::cos(a), r * std::sin(a)});
  }
  for (auto _ : state) {
    auto parts = decompose(star);
    benchmark::DoNotOptimize(parts.data());
  }
}
BENCHMARK(BM_Decompose)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_OverlapArea(benchmark::State& state) {
  const Polygon a{{0, 0}, {2, 0}, {3, 1}, {2, 2}, {0, 2}, {-1, 1}};
  const Polygon b{{1, 1}, {3, 1}, {4, 2}, {3, 3}, {1, 3}, {0, 2}};
  for (auto _ : state) benchmark::DoNotOptimize(overlap_area(a, b));
}
BENCHMARK(BM_OverlapArea);

}  // namespace

BENCHMARK_MAIN();
