#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "dtvar/distance.hpp"
#include "dtvar/encoding.hpp"
#include "dtvar/loss.hpp"
#include "dtvar/reproject.hpp"

using namespace dtvar;

namespace {

BinaryMask sparse_mask(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution on(density);
  BinaryMask m(n, n, 0);
  for (auto& v : m.values()) v = on(rng) ? 1 : 0;
  m(n / 2, n / 2) = 1;
  return m;
}

MultiChannelImage texture(int h, int w, int ch, double phase) {
  MultiChannelImage img(h, w, ch);
  for (int k = 0; k < ch; ++k)
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) img(k, r, c) = 0.5 + 0.25 * std::sin(0.2 * c + k + phase) * std::cos(0.15 * r);
  return img;
}

}  // namespace

static void BM_ChamferD8(benchmark::State& st) {
  const BinaryMask m = sparse_mask(static_cast<int>(st.range(0)), 0.02, 1);
  for (auto _ : st) benchmark::DoNotOptimize(chamfer_d8(m));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_ChamferD8)->Arg(64)->Arg(256)->Arg(1024);

static void BM_ExactEdt(benchmark::State& st) {
  const BinaryMask m = sparse_mask(static_cast<int>(st.range(0)), 0.02, 2);
  for (auto _ : st) benchmark::DoNotOptimize(exact_edt(m));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_ExactEdt)->Arg(64)->Arg(256)->Arg(1024);

static void BM_BruteForce(benchmark::State& st) {
  const BinaryMask m = sparse_mask(static_cast<int>(st.range(0)), 0.02, 3);
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_dt(m, Metric::euclidean));
}
BENCHMARK(BM_BruteForce)->Arg(32)->Arg(64);

static void BM_RwEncode(benchmark::State& st) {
  const ScalarGrid dt = chamfer_d8(sparse_mask(256, 0.01, 4));
  const RandomWalkPath path = make_rw_path(static_cast<int>(st.range(0)), 512);
  for (auto _ : st) benchmark::DoNotOptimize(rw_encode(dt, path));
}
BENCHMARK(BM_RwEncode)->Arg(1)->Arg(3);

static void BM_Ssim(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const MultiChannelImage a = texture(n, n, 3, 0.0);
  const MultiChannelImage b = texture(n, n, 3, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

static void BM_Reconstruct(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const MultiChannelImage src = texture(n, n, 6, 0.0);
  const ScalarGrid depth(n, n, 2.0);
  const Intrinsics k{0.8 * n, 0.8 * n, n / 2.0, n / 2.0};
  const RigidPose pose{0.01, -0.02, 0.005, 0.05, 0.0, 0.02};
  for (auto _ : st) benchmark::DoNotOptimize(reconstruct(src, depth, pose, k));
}
BENCHMARK(BM_Reconstruct)->Arg(64)->Arg(256);
BENCHMARK_MAIN();
