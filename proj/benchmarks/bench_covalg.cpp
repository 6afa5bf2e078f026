#include <benchmark/benchmark.h>

#include "covalg/ktheory.hpp"
#include "covalg/system_io.hpp"

using namespace covalg;

namespace {

System shift(int m) {
  return description_to_system(load_description("gallery:shift-c" + std::to_string(m)));
}

void BM_LevelProduct(benchmark::State& state) {
  System sys = shift(4);
  Rng rng(1);
  LElement a = random_l(sys, rng, 4);
  LElement b = random_l(sys, rng, 4);
  for (auto _ : state) benchmark::DoNotOptimize(l_mul(a, b));
}
BENCHMARK(BM_LevelProduct);

void BM_RealizeCovariance(benchmark::State& state) {
  System sys = shift(4);
  for (auto _ : state) benchmark::DoNotOptimize(realize_covariance(sys));
}
BENCHMARK(BM_RealizeCovariance);

void BM_Wedderburn(benchmark::State& state) {
  // M_3 + M_2 inside M_5, scrambled by a fixed unitary
  Rng rng(5);
  Matrix u = rng.unitary(5);
  std::vector<Matrix> gens;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      if ((r < 3) != (c < 3)) continue;
      Matrix e = Matrix::Zero(5, 5);
      e(r, c) = 1.0;
      gens.push_back(u * e * u.adjoint());
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(wedderburn(gens));
}
BENCHMARK(BM_Wedderburn);

void BM_SmithNormalForm(benchmark::State& state) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> d(-20, 20);
  IntMatrix m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m(i, j) = d(gen);
  for (auto _ : state) benchmark::DoNotOptimize(snf(m));
}
BENCHMARK(BM_SmithNormalForm);

void BM_ToeplitzProduct(benchmark::State& state) {
  ToeplitzModel model(shift(4));
  Rng rng(3);
  Vector vx(model.dim()), vy(model.dim());
  for (int k = 0; k < model.dim(); ++k) {
    vx(k) = rng.cgauss();
    vy(k) = rng.cgauss();
  }
  ToeplitzElement x = model.from_coords(vx);
  ToeplitzElement y = model.from_coords(vy);
  for (auto _ : state) benchmark::DoNotOptimize(t_mul(x, y));
}
BENCHMARK(BM_ToeplitzProduct);

void BM_RealizeToeplitz(benchmark::State& state) {
  auto model = std::make_shared<const ToeplitzModel>(shift(2));
  for (auto _ : state) benchmark::DoNotOptimize(realize_toeplitz(model));
}
BENCHMARK(BM_RealizeToeplitz);

}  // namespace

BENCHMARK_MAIN();
