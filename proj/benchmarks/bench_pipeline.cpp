#include <benchmark/benchmark.h>

#include "qnmc/classifiers.hpp"
#include "qnmc/dataset.hpp"
#include "qnmc/encoding.hpp"
#include "qnmc/evaluation.hpp"
#include "qnmc/rng.hpp"

namespace {

void BM_EncodeSE(benchmark::State& state) {
    qnmc::Rng rng(3);
    qnmc::FeatureVector x;
    x.values.resize(static_cast<std::size_t>(state.range(0)));
    for (auto& v : x.values) {
        v = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::encode(x, qnmc::EncoderKind::SE));
    }
}
BENCHMARK(BM_EncodeSE)->Arg(2)->Arg(12)->Arg(34);

void BM_EncodeIE(benchmark::State& state) {
    qnmc::Rng rng(4);
    qnmc::FeatureVector x;
    x.values.resize(static_cast<std::size_t>(state.range(0)));
    for (auto& v : x.values) {
        v = rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::encode(x, qnmc::EncoderKind::IE));
    }
}
BENCHMARK(BM_EncodeIE)->Arg(2)->Arg(12)->Arg(34);

void BM_FitQnmc(benchmark::State& state) {
    const qnmc::Dataset data =
        qnmc::gen_moon(static_cast<std::size_t>(state.range(0)), 0.1, 5);
    const auto weights = qnmc::RescaleWeights::identity(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::fit_qnmc(data, qnmc::EncoderKind::SE, weights));
    }
}
BENCHMARK(BM_FitQnmc)->Arg(80)->Arg(800);

void BM_PredictQnmc(benchmark::State& state) {
    const qnmc::Dataset data = qnmc::gen_moon(80, 0.1, 5);
    const auto model =
        qnmc::fit_qnmc(data, qnmc::EncoderKind::SE, qnmc::RescaleWeights::identity(2));
    qnmc::FeatureVector x;
    x.values = {0.4, -0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::predict_qnmc(model, x));
    }
}
BENCHMARK(BM_PredictQnmc);

void BM_MoonExperiment(benchmark::State& state) {
    qnmc::ExperimentConfig cfg;
    cfg.dataset.kind = qnmc::DatasetSpec::Kind::Moon;
    cfg.dataset.n_per_class = 100;
    cfg.dataset.noise_sigma = 0.1;
    cfg.runs = static_cast<std::size_t>(state.range(0));
    cfg.master_seed = 42;
    qnmc::ClassifierSpec nmc;
    nmc.kind = qnmc::ClassifierKind::NMC;
    qnmc::ClassifierSpec q;
    q.kind = qnmc::ClassifierKind::QNMC;
    q.encoder = qnmc::EncoderKind::SE;
    cfg.classifiers = {nmc, q};
    const qnmc::Dataset data = qnmc::materialize(cfg.dataset);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::run_experiment(cfg, data));
    }
}
BENCHMARK(BM_MoonExperiment)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
