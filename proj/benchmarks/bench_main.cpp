#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "spectral_transfer/baselines.hpp"
#include "spectral_transfer/dataio.hpp"
#include "spectral_transfer/gctpls.hpp"
#include "spectral_transfer/graphreg.hpp"
#include "spectral_transfer/sampling.hpp"

using namespace spectral_transfer;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = gauss(rng);
    }
  }
  return m;
}

struct SolveFixture {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  graphreg::RegularizerMatrix reg;

  SolveFixture() {
    x = random_matrix(60, 700, 1);
    x.rowwise() -= x.colwise().mean();
    y = random_matrix(60, 1, 2).col(0);
    y.array() -= y.mean();
    reg = graphreg::regularizer(random_matrix(3, 700, 3), random_matrix(3, 700, 4));
  }
};

const SolveFixture& solve_fixture() {
  static const SolveFixture fixture;
  return fixture;
}

void BM_solve_weights_dense(benchmark::State& state) {
  const SolveFixture& f = solve_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gctpls::solve_weights(f.x, f.y, f.reg, 1e6, gctpls::WeightSolvePath::kDense));
  }
}
BENCHMARK(BM_solve_weights_dense)->Unit(benchmark::kMillisecond);

void BM_solve_weights_woodbury(benchmark::State& state) {
  const SolveFixture& f = solve_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gctpls::solve_weights(f.x, f.y, f.reg, 1e6, gctpls::WeightSolvePath::kWoodbury));
  }
}
BENCHMARK(BM_solve_weights_woodbury)->Unit(benchmark::kMillisecond);

void BM_fit(benchmark::State& state) {
  dataio::ShiftSpec shift;
  shift.offset_amplitude = 0.25;
  shift.standards_intensity_spread = 0.3;
  const dataio::SynthDataset data = dataio::synth_two_instrument(60, 700, 3, shift, 0.005, 7);
  const double gamma = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gctpls::fit(data.primary_calibration, data.calibration_response,
                                         data.standards, {gamma, 2, false}));
  }
}
BENCHMARK(BM_fit)->Arg(0)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_fit_reference_pls(benchmark::State& state) {
  const dataio::SynthDataset data =
      dataio::synth_two_instrument(60, 700, 3, dataio::ShiftSpec{}, 0.005, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        baselines::fit_pls_reference(data.primary_calibration, data.calibration_response, 2));
  }
}
BENCHMARK(BM_fit_reference_pls)->Unit(benchmark::kMillisecond);

void BM_kennard_stone(benchmark::State& state) {
  const SpectraMatrix x(random_matrix(80, 700, 11));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampling::kennard_stone(x, 60));
  }
}
BENCHMARK(BM_kennard_stone)->Unit(benchmark::kMillisecond);

void BM_direct_standardization(benchmark::State& state) {
  StandardsPair std_pair;
  std_pair.primary.values = random_matrix(3, 700, 21);
  std_pair.secondary.values = random_matrix(3, 700, 22);
  for (auto _ : state) {
    benchmark::DoNotOptimize(baselines::direct_standardization(std_pair));
  }
}
BENCHMARK(BM_direct_standardization)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
