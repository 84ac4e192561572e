#include <benchmark/benchmark.h>

#include "qnmc/matrix.hpp"
#include "qnmc/rng.hpp"

namespace {

qnmc::SymMatrix random_symmetric(std::size_t dim, qnmc::Rng& rng) {
    qnmc::SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            m.set(i, j, rng.normal());
        }
    }
    return m;
}

qnmc::DensityMatrix random_density(std::size_t dim, qnmc::Rng& rng) {
    qnmc::SymMatrix sum(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<double> v(dim);
        double norm_sq = 0.0;
        for (auto& x : v) {
            x = rng.normal();
            norm_sq += x * x;
        }
        for (auto& x : v) {
            x /= std::sqrt(norm_sq);
        }
        sum = sum + qnmc::outer_product(v).scaled(1.0 / static_cast<double>(dim));
    }
    return qnmc::DensityMatrix(sum);
}

void BM_SymEigen(benchmark::State& state) {
    qnmc::Rng rng(7);
    const auto m = random_symmetric(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::sym_eigen(m));
    }
}
BENCHMARK(BM_SymEigen)->Arg(2)->Arg(4)->Arg(8)->Arg(13)->Arg(16)->Arg(32);

void BM_TraceDistance(benchmark::State& state) {
    qnmc::Rng rng(11);
    const auto rho = random_density(static_cast<std::size_t>(state.range(0)), rng);
    const auto sigma = random_density(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qnmc::trace_distance(rho, sigma));
    }
}
BENCHMARK(BM_TraceDistance)->Arg(3)->Arg(13)->Arg(35);

}  // namespace

BENCHMARK_MAIN();
