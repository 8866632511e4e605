#include <benchmark/benchmark.h>

#include <random>

#include "rovib/config.hpp"
#include "rovib/dynamics.hpp"
#include "rovib/fit.hpp"
#include "rovib/pulses.hpp"

namespace {

const rovib::Pipeline& default_pipeline() {
  static const rovib::Pipeline p = rovib::build_pipeline(rovib::parse_run_config("{}"));
  return p;
}

void BM_BuildPipeline(benchmark::State& state) {
  const auto cfg = rovib::parse_run_config("{}");
  for (auto _ : state) benchmark::DoNotOptimize(rovib::build_pipeline(cfg));
}
BENCHMARK(BM_BuildPipeline)->Unit(benchmark::kMillisecond);

// Trace length is the argument; the default grid has 2201 samples.
void BM_SignalTrace(benchmark::State& state) {
  const auto& p = default_pipeline();
  const rovib::TraceGrid grid{0.0, 0.5 * static_cast<double>(state.range(0) - 1), 0.5, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(rovib::signal_trace(p.lines, p.decay, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<int64_t>(p.lines.lines.size()));
}
BENCHMARK(BM_SignalTrace)->Arg(2201)->Arg(22001)->Unit(benchmark::kMillisecond);

void BM_TwoPhotonSpectrum(benchmark::State& state) {
  rovib::Pulse pump{12500.0, 130.0, static_cast<double>(state.range(0)), 0.0, 1.0};
  rovib::Pulse stokes{10183.0, 130.0, static_cast<double>(state.range(0)), 0.0, 1.0};
  const auto grid = rovib::uniform_grid(1900.0, 2760.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(rovib::two_photon_spectrum(pump, stokes, grid));
}
BENCHMARK(BM_TwoPhotonSpectrum)->Arg(0)->Arg(35000)->Unit(benchmark::kMillisecond);

// One objective evaluation of the fitter: forward model on the default grid.
void BM_ModelSignal(benchmark::State& state) {
  const auto cfg = rovib::parse_run_config("{}");
  const auto& p = default_pipeline();
  const rovib::ForwardModel model{p.constants, cfg.temperature_k, cfg.spin, p.envelope, p.ratio, cfg.v1, std::nullopt};
  std::vector<double> times;
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) times.push_back(cfg.grid.time(i));
  const rovib::ParameterValues values{{rovib::FitParameter::GammaE, -2.6e-5},
                                      {rovib::FitParameter::TauC, 256.0},
                                      {rovib::FitParameter::Scale, 1.0},
                                      {rovib::FitParameter::TimeOffset, 0.1}};
  for (auto _ : state) benchmark::DoNotOptimize(rovib::model_signal(model, values, times));
}
BENCHMARK(BM_ModelSignal)->Unit(benchmark::kMillisecond);

void BM_FitTwoParameters(benchmark::State& state) {
  const auto cfg = rovib::parse_run_config("{}");
  const auto& p = default_pipeline();
  rovib::FitProblem problem;
  problem.model = {p.constants, cfg.temperature_k, cfg.spin, p.envelope, p.ratio, cfg.v1, std::nullopt};
  for (double t = 0.0; t <= 200.0; t += 0.5) problem.times.push_back(t);
  problem.data = rovib::model_signal(problem.model,
                                     {{rovib::FitParameter::GammaE, -2.6e-5}, {rovib::FitParameter::TauC, 256.0}},
                                     problem.times);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (auto& d : problem.data) d += noise(rng);
  problem.parameters.at(rovib::FitParameter::GammaE).free = false;
  problem.parameters.at(rovib::FitParameter::TimeOffset).free = false;
  rovib::FitOptions opts;
  opts.restarts = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rovib::fit(problem, opts));
}
BENCHMARK(BM_FitTwoParameters)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
