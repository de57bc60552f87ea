#include <benchmark/benchmark.h>

#include "mfh/associate.hpp"
#include "mfh/descent.hpp"
#include "mfv/fixture.hpp"
#include "mfv/random.hpp"

using namespace mfh;

namespace {

mfv::Model model(const char* name) {
  return mfv::Model(mfv::load_fixture(std::string(MFV_FIXTURE_DIR) + "/" + name));
}

const char* fixture_name(int i) { return i == 0 ? "kummer_p5.json" : "sym2_p5.json"; }

}  // namespace

static void BM_Transport(benchmark::State& state) {
  mfv::Model m = model(fixture_name(static_cast<int>(state.range(0))));
  const DeRhamChart& c = m.primary_derham();
  mfv::Rng rng(0);
  FrobeniusLifting F2 = mfv::random_lifting(c.ring(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(transport_frobenius(c, F2));
}
BENCHMARK(BM_Transport)->Arg(0)->Arg(1);

static void BM_Associate(benchmark::State& state) {
  mfv::Model m = model(fixture_name(static_cast<int>(state.range(0))));
  const DeRhamChart& c = m.primary_derham();
  Submodule G = m.submodule("Gfull");
  for (auto _ : state) benchmark::DoNotOptimize(associate_subsheaf(c, G));
}
BENCHMARK(BM_Associate)->Arg(0)->Arg(1);

static void BM_ResidualIdentity(benchmark::State& state) {
  mfv::Model m = model("sym2_p5.json");
  const DeRhamChart& c = m.primary_derham();
  mfv::Rng rng(1);
  FrobeniusLifting F2 = mfv::random_lifting(c.ring(), rng);
  Vec e = mfv::random_vec(c.residue_ring(), c.rank(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(change_of_frobenius_residual(c, e, F2));
}
BENCHMARK(BM_ResidualIdentity);

static void BM_PCurvature(benchmark::State& state) {
  mfv::Model m = model(fixture_name(static_cast<int>(state.range(0))));
  std::vector<Matrix> A = m.primary_derham().connection_mod_p();
  for (auto _ : state) benchmark::DoNotOptimize(p_curvature(A));
}
BENCHMARK(BM_PCurvature)->Arg(0)->Arg(1);

static void BM_RoundTrip(benchmark::State& state) {
  mfv::Model m = model(fixture_name(static_cast<int>(state.range(0))));
  const DeRhamChart& c = m.primary_derham();
  Submodule G = m.submodule("G0");
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip_check(c, G));
}
BENCHMARK(BM_RoundTrip)->Arg(0)->Arg(1);

static void BM_SubmoduleNormalForm(benchmark::State& state) {
  auto R = ChartRing::make(5, 1, {"t"}, {false});
  mfv::Rng rng(2);
  std::vector<Vec> gens;
  for (int i = 0; i < state.range(0); ++i) gens.push_back(mfv::random_vec(R, 4, rng, 6));
  for (auto _ : state) benchmark::DoNotOptimize(Submodule(R, 4, gens));
}
BENCHMARK(BM_SubmoduleNormalForm)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK_MAIN();
