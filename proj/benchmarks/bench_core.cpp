// risee - spectral/energy efficiency tradeoff simulator for RIS-aided MIMO downlinks
// Copyright (C) 2026 the risee authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include <risee/experiments.hpp>
#include <risee/metrics.hpp>
#include <risee/rng.hpp>

using namespace risee;

namespace {

struct Fixture {
    SystemConfig cfg;
    PowerModel pm;
    ChannelSet ch;
    IterateState state;

    explicit Fixture(int n_ris) {
        cfg.n_bs = 4;
        cfg.n_u = 4;
        cfg.k_users = 2;
        cfg.n_ris = n_ris;
        cfg.d_streams = 2;
        ScenarioGeometry geom = generate_scenario(cfg, 1);
        ch = generate_channels(geom, FadingParams{}, cfg, 2);
        state = init_state(ch, cfg, Architecture::GnpBd, 3);
    }
};

void BM_FblRate(benchmark::State &bench) {
    Fixture f(static_cast<int>(bench.range(0)));
    auto h = effective_channels(f.ch, f.state.phi.phi);
    for (auto _ : bench)
        benchmark::DoNotOptimize(fbl_rate(h, f.state.w, f.cfg, 0));
}
BENCHMARK(BM_FblRate)->Arg(12)->Arg(20);

void BM_BuildCoeffs(benchmark::State &bench) {
    Fixture f(static_cast<int>(bench.range(0)));
    for (auto _ : bench)
        benchmark::DoNotOptimize(build_coeffs(f.ch, f.state.phi.phi, f.state.w, f.cfg, 0));
}
BENCHMARK(BM_BuildCoeffs)->Arg(12)->Arg(20);

void BM_SurrogatePhiEval(benchmark::State &bench) {
    Fixture f(static_cast<int>(bench.range(0)));
    SurrogateCoeffs sc = build_coeffs(f.ch, f.state.phi.phi, f.state.w, f.cfg, 0);
    for (auto _ : bench)
        benchmark::DoNotOptimize(eval_surrogate_phi(sc, f.state.phi.phi, f.ch, f.state.w));
}
BENCHMARK(BM_SurrogatePhiEval)->Arg(12)->Arg(20);

void BM_ProjectLnpBd(benchmark::State &bench) {
    const int n = static_cast<int>(bench.range(0));
    Rng rng(7);
    Matrix x(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) x(r, c) = 1.5 * rng.cgauss();
    for (auto _ : bench)
        benchmark::DoNotOptimize(project(Architecture::LnpBd, x, nullptr, 1e-9));
}
BENCHMARK(BM_ProjectLnpBd)->Arg(12)->Arg(20);

void BM_ProjectGnpBd(benchmark::State &bench) {
    const int n = static_cast<int>(bench.range(0));
    Fixture f(4);
    Rng rng(8);
    Matrix g(n, f.cfg.n_bs);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < f.cfg.n_bs; ++c) g(r, c) = rng.cgauss();
    GnpWeight weight = gnp_weight(g, f.state.w);
    Matrix x(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) x(r, c) = 1.5 * rng.cgauss();
    for (auto _ : bench)
        benchmark::DoNotOptimize(project(Architecture::GnpBd, x, &weight, 1e-9));
}
BENCHMARK(BM_ProjectGnpBd)->Arg(12)->Arg(20);

void BM_WStep(benchmark::State &bench) {
    Fixture f(12);
    AlgoParams params;
    params.inner_w = {1.0, 60, 0.0};
    for (auto _ : bench) {
        IterateState st = f.state;
        update_w(st, f.ch, f.cfg, f.pm, params, 1);
        benchmark::DoNotOptimize(st.w.trace_power());
    }
}
BENCHMARK(BM_WStep);

void BM_PhiStep(benchmark::State &bench) {
    Fixture f(12);
    AlgoParams params;
    params.inner_phi = {1.0, 60, 0.0};
    for (auto _ : bench) {
        IterateState st = f.state;
        update_phi(st, f.ch, f.cfg, f.pm, params, 1);
        benchmark::DoNotOptimize(st.phi.phi.norm());
    }
}
BENCHMARK(BM_PhiStep);

void BM_TinyFullRun(benchmark::State &bench) {
    SystemConfig cfg;
    cfg.n_bs = 2;
    cfg.n_u = 2;
    cfg.k_users = 2;
    cfg.n_ris = 6;
    cfg.d_streams = 1;
    PowerModel pm;
    ScenarioGeometry geom = generate_scenario(cfg, 4);
    ChannelSet ch = generate_channels(geom, FadingParams{}, cfg, 5);
    AlgoParams params;
    params.max_outer_iters = 8;
    params.inner_w = {1.0, 60, 0.0};
    params.inner_phi = {1.0, 60, 0.0};
    for (auto _ : bench) {
        IterateState st = run_algorithm_one(ch, cfg, pm, Architecture::GnpBd, params, 6);
        benchmark::DoNotOptimize(st.trace.back().objective);
    }
}
BENCHMARK(BM_TinyFullRun);

} // namespace

BENCHMARK_MAIN();
