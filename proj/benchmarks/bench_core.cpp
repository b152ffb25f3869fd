#include <benchmark/benchmark.h>

#include <random>

#include "exospin/cech.hpp"
#include "exospin/dirac.hpp"
#include "exospin/hausdorff.hpp"
#include "exospin/sigma.hpp"

namespace {

void BM_DispersionExact(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const exospin::Vec3 p(u(rng), u(rng), u(rng));
  const exospin::Vec4 k(0.001, -0.002, 0.0, 0.004);
  for (auto _ : state) benchmark::DoNotOptimize(exospin::dispersion_exact(p, k, 1.0));
}
BENCHMARK(BM_DispersionExact);

void BM_Christoffel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Eigen::VectorXd phi = Eigen::VectorXd::Constant(n - 1, 0.3 / n);
  for (auto _ : state) benchmark::DoNotOptimize(exospin::christoffel(phi));
}
BENCHMARK(BM_Christoffel)->Arg(2)->Arg(4)->Arg(8);

void BM_SigmaStep(benchmark::State& state) {
  exospin::SigmaLattice lat;
  lat.sites = static_cast<int>(state.range(0));
  const auto init = exospin::sigma_preset(exospin::SigmaPreset::standing_wave, 2, lat);
  exospin::SigmaEvolveOptions opt;
  opt.dt = 0.5 * lat.h();
  opt.steps = 10;
  opt.keep_history = false;
  for (auto _ : state) benchmark::DoNotOptimize(exospin::sigma_evolve(init, opt));
}
BENCHMARK(BM_SigmaStep)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_H1Torus(benchmark::State& state) {
  exospin::Nerve n;
  for (int i = 0; i < 7; ++i) n.add_vertex("U" + std::to_string(i));
  auto id = [](int i) { return "U" + std::to_string(i % 7); };
  for (int i = 0; i < 7; ++i) {
    for (auto t : {std::array<int, 3>{i, i + 1, i + 3}, std::array<int, 3>{i, i + 2, i + 3}}) {
      for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[0], t[2]}}) {
        if (n.edge_index(a % 7, b % 7) < 0) n.add_edge(id(a), id(b));
      }
      n.add_triangle(id(t[0]), id(t[1]), id(t[2]));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(exospin::h1_dimension(n));
}
BENCHMARK(BM_H1Torus);

void BM_BoxCount(benchmark::State& state) {
  const exospin::Box b = exospin::Box::unit(2);
  const double delta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exospin::occupied_cells({b}, delta));
}
BENCHMARK(BM_BoxCount)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
